"""Exact combinatorics of stable-curve strata.

Stable dual graphs and their calculus, enumeration of pointed rational
strata, the hyperelliptic double-cover pushforward, free Lie superalgebras
with Lyndon bases, and the machine-checkable nonvanishing certificate for
the first-page differential.
"""

from .errors import (
    DisconnectedGraph,
    FailedCertificate,
    FormatError,
    HyperstrataError,
    InvalidGraph,
    LevelZero,
    MixedMultidegree,
    NotATree,
    NotLyndon,
    OddLeafTotal,
    OutOfRange,
    TooLarge,
    TypeMismatch,
    UnknownEdge,
    Unstabilizable,
)
from .graphs import (
    Graph,
    GraphType,
    NumberedGraph,
    automorphism_count,
    betti1,
    canonical_form,
    contract_edges,
    genus,
    graph_type,
    is_connected,
    is_stable,
    leq,
    stabilize,
)
from .trees import (
    AnnotatedTree,
    StratumClass,
    annotate,
    build_T_lg,
    enumerate_trees,
    good_classes,
    is_good,
    orbit_representatives,
    stratum_dimension,
    unnumbered_classes,
)
from .covers import (
    admissible_cover_graph,
    in_filtration,
    node_bound_report,
    pushforward,
    rational_component_count,
    verify_injectivity,
)
from .lie import (
    GradedAlphabet,
    LieVector,
    basis_vector,
    bracket,
    dimension,
    is_lyndon,
    lyndon_words,
    normalize,
    oracle_component,
    standard_bracketing,
)
from .spectral import (
    AB,
    Certificate,
    SpectralTable,
    VSpaceElement,
    betti_m0n,
    certify_nonvanishing,
    d1,
    e1_table,
    f1_table,
    omega,
    stratification_epoly_check,
    v_space_dimension,
    verify_leading_terms,
)

__all__ = [
    "DisconnectedGraph", "FailedCertificate", "FormatError",
    "HyperstrataError", "InvalidGraph", "LevelZero", "MixedMultidegree",
    "NotATree", "NotLyndon", "OddLeafTotal", "OutOfRange", "TooLarge",
    "TypeMismatch", "UnknownEdge", "Unstabilizable",
    "Graph", "GraphType", "NumberedGraph", "automorphism_count", "betti1",
    "canonical_form", "contract_edges", "genus", "graph_type",
    "is_connected", "is_stable", "leq", "stabilize",
    "AnnotatedTree", "StratumClass", "annotate", "build_T_lg",
    "enumerate_trees", "good_classes", "is_good", "orbit_representatives",
    "stratum_dimension", "unnumbered_classes",
    "admissible_cover_graph", "in_filtration", "node_bound_report",
    "pushforward", "rational_component_count", "verify_injectivity",
    "GradedAlphabet", "LieVector", "basis_vector", "bracket", "dimension",
    "is_lyndon", "lyndon_words", "normalize", "oracle_component",
    "standard_bracketing",
    "AB", "Certificate", "SpectralTable", "VSpaceElement", "betti_m0n",
    "certify_nonvanishing", "d1", "e1_table", "f1_table", "omega",
    "stratification_epoly_check", "v_space_dimension",
    "verify_leading_terms",
]

__version__ = "0.1.0"
