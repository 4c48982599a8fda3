"""Free Lie superalgebras on ordered Z/2-graded alphabets.

The bracket satisfies [x, y] = -(-1)^{|x||y|} [y, x] and the Koszul-signed
Jacobi identity; in particular [x, x] = 0 for even x while [x, x] is a
nonzero basis element for odd x.  The Lyndon basis consists of the standard
bracketings B(w) of Lyndon words together with the squares [B(w), B(w)] for
odd-degree Lyndon words w.

Arbitrary bracket expressions are normalized into this basis by the
classical bottom-up rewriting: a product [B(m), B(n)] of basis words with
m < n either is the basis element B(mn) outright (when n is not larger than
the standard right factor of m) or is expanded through the Jacobi identity
on the standard factorization of m.  The engine is validated elsewhere
against an independent oracle that expands everything in the free
associative superalgebra and row-reduces with exact arithmetic.

Words are tuples of alphabet indices internally; the public surface speaks
strings of single-character letters.  Bracket expressions are nested pairs,
e.g. ``(("a", "b"), ("a", "a"))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import MixedMultidegree, NotLyndon, TooLarge

BracketExpr = Union[str, tuple]
_Key = tuple  # ("w", word) or ("sq", word); word = tuple of letter indices


class GradedAlphabet:
    """An ordered alphabet of single-character letters with Z/2 degrees."""

    __slots__ = ("letters", "degrees", "_index")

    def __init__(self, letters: Sequence[str], degree: Mapping[str, int]):
        self.letters = tuple(letters)
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("letters must be distinct")
        for x in self.letters:
            if not (isinstance(x, str) and len(x) == 1):
                raise ValueError("letters must be single characters")
        self.degrees = tuple(int(degree[x]) % 2 for x in self.letters)
        self._index = {x: i for i, x in enumerate(self.letters)}

    def __len__(self) -> int:
        return len(self.letters)

    def index(self, letter: str) -> int:
        return self._index[letter]

    def key(self, word) -> tuple[int, ...]:
        """Convert a word (string or letter sequence) to an index tuple."""
        if isinstance(word, str):
            return tuple(self._index[c] for c in word)
        return tuple(self._index[c] if isinstance(c, str) else int(c)
                     for c in word)

    def text(self, word_key: tuple[int, ...]) -> str:
        return "".join(self.letters[i] for i in word_key)

    def word_degree(self, word_key: tuple[int, ...]) -> int:
        return sum(self.degrees[i] for i in word_key) % 2

    def multidegree(self, word_key: tuple[int, ...]) -> tuple[int, ...]:
        counts = [0] * len(self.letters)
        for i in word_key:
            counts[i] += 1
        return tuple(counts)

    def __repr__(self) -> str:
        spec = ",".join(f"{x}:{'odd' if d else 'even'}"
                        for x, d in zip(self.letters, self.degrees))
        return f"GradedAlphabet({spec})"


def _key_multidegree(nletters: int, key: _Key) -> tuple[int, ...]:
    kind, w = key
    counts = [0] * nletters
    for i in w:
        counts[i] += 1
    if kind == "sq":
        counts = [2 * c for c in counts]
    return tuple(counts)


class LieVector:
    """A sparse exact-rational combination of Lyndon-basis elements.

    All keys share one multidegree; zero coefficients are never stored.
    Keys are ("w", word) for B(word) and ("sq", word) for [B(word), B(word)].
    """

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet: GradedAlphabet, terms: Mapping[_Key, Fraction]):
        self.alphabet = alphabet
        clean = {}
        mdeg = None
        for key, coeff in terms.items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            md = _key_multidegree(len(alphabet), key)
            if mdeg is None:
                mdeg = md
            elif md != mdeg:
                raise MixedMultidegree(f"{md} vs {mdeg}")
            clean[key] = coeff
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def multidegree(self) -> tuple[int, ...] | None:
        for key in self.terms:
            return _key_multidegree(len(self.alphabet), key)
        return None

    def items(self) -> list[tuple[_Key, Fraction]]:
        return sorted(self.terms.items())

    def coefficient(self, word) -> Fraction:
        return self.terms.get(("w", self.alphabet.key(word)), Fraction(0))

    def scale(self, c) -> "LieVector":
        c = Fraction(c)
        return LieVector(self.alphabet,
                         {k: v * c for k, v in self.terms.items()})

    def __add__(self, other: "LieVector") -> "LieVector":
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, Fraction(0)) + v
        return LieVector(self.alphabet, acc)

    def __sub__(self, other: "LieVector") -> "LieVector":
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        return (isinstance(other, LieVector)
                and self.alphabet.letters == other.alphabet.letters
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.alphabet.letters, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        if not self.terms:
            return "LieVector(0)"
        bits = []
        for (kind, w), c in self.items():
            word = self.alphabet.text(w)
            bits.append(f"{c}*{word}" if kind == "w" else f"{c}*({word})^[2]")
        return "LieVector(" + " + ".join(bits) + ")"


# --------------------------------------------------------------------------
# Lyndon words.
# --------------------------------------------------------------------------

def _is_lyndon_key(w: tuple[int, ...]) -> bool:
    n = len(w)
    if n == 0:
        return False
    return all(w < w[i:] + w[:i] for i in range(1, n))


def is_lyndon(word, alphabet: GradedAlphabet) -> bool:
    """True iff the word is strictly smaller than all its proper rotations."""
    return _is_lyndon_key(alphabet.key(word))


def _multiset_permutations(counts: list[int]) -> Iterable[tuple[int, ...]]:
    total = sum(counts)
    word: list[int] = []

    def rec():
        if len(word) == total:
            yield tuple(word)
            return
        for i, c in enumerate(counts):
            if c:
                counts[i] -= 1
                word.append(i)
                yield from rec()
                word.pop()
                counts[i] += 1

    yield from rec()


def _as_counts(alphabet: GradedAlphabet, multidegree) -> list[int]:
    if isinstance(multidegree, Mapping):
        return [int(multidegree.get(x, 0)) for x in alphabet.letters]
    counts = [int(c) for c in multidegree]
    if len(counts) != len(alphabet):
        raise ValueError("multidegree must align with the alphabet")
    return counts


def lyndon_words(alphabet: GradedAlphabet, multidegree) -> list[str]:
    """All Lyndon words with exactly the given letter counts, in lex order."""
    counts = _as_counts(alphabet, multidegree)
    if sum(counts) < 1:
        raise ValueError("multidegree total must be at least 1")
    return [alphabet.text(w) for w in _multiset_permutations(counts)
            if _is_lyndon_key(w)]


def duval_words(n_letters: int, max_length: int) -> list[tuple[int, ...]]:
    """All Lyndon words of length <= max_length over 0..n_letters-1, in lex
    order, generated by Duval's iteration (used as an independent check)."""
    out = []
    w = [0]
    while True:
        out.append(tuple(w))
        period = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - period])
        while w and w[-1] == n_letters - 1:
            w.pop()
        if not w:
            return out
        w[-1] += 1


def dimension(alphabet: GradedAlphabet, multidegree) -> int:
    """Number of Lyndon-basis elements of the multidegree.

    Counts the Lyndon words plus, when every letter count is even and the
    halved word has odd degree, the squares of the half-multidegree words.
    """
    counts = _as_counts(alphabet, multidegree)
    n_words = sum(1 for w in _multiset_permutations(list(counts))
                  if _is_lyndon_key(w))
    n_squares = 0
    if sum(counts) and all(c % 2 == 0 for c in counts):
        half = [c // 2 for c in counts]
        half_degree = sum(c * d for c, d in zip(half, alphabet.degrees)) % 2
        if half_degree == 1:
            n_squares = sum(1 for w in _multiset_permutations(half)
                            if _is_lyndon_key(w))
    return n_words + n_squares


# --------------------------------------------------------------------------
# Standard bracketing and the rewriting engine.
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _std_split(w: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Standard factorization of a Lyndon word of length >= 2: the right
    factor is the lexicographically smallest proper suffix."""
    best = 1
    for i in range(2, len(w)):
        if w[i:] < w[best:]:
            best = i
    return w[:best], w[best:]


def _std_tree(w: tuple[int, ...]):
    if len(w) == 1:
        return w[0]
    u, v = _std_split(w)
    return (_std_tree(u), _std_tree(v))


def standard_bracketing(word, alphabet: GradedAlphabet) -> BracketExpr:
    """The recursive bracketing of a Lyndon word; single letters map to
    themselves."""
    key = alphabet.key(word)
    if not _is_lyndon_key(key):
        raise NotLyndon(f"{alphabet.text(key)} is not a Lyndon word")

    def to_public(node):
        if isinstance(node, int):
            return alphabet.letters[node]
        return (to_public(node[0]), to_public(node[1]))

    return to_public(_std_tree(key))


def _wdeg(degrees: tuple[int, ...], w: tuple[int, ...]) -> int:
    return sum(degrees[i] for i in w) % 2


_active_squares: set = set()


@lru_cache(maxsize=None)
def _bracket_words(degrees: tuple[int, ...], m: tuple[int, ...],
                   n: tuple[int, ...]) -> tuple:
    """[B(m), B(n)] in the Lyndon basis, as a tuple of (key, int) pairs."""
    dm, dn = _wdeg(degrees, m), _wdeg(degrees, n)
    if m == n:
        if dm:
            return ((("sq", m), 1),)
        return ()
    if m > n:
        sign = 1 if (dm and dn) else -1  # -(-1)^{dm dn}
        return tuple((k, sign * c) for k, c in _bracket_words(degrees, n, m))
    # m < n: mn is Lyndon.  (m, n) is its standard factorization exactly
    # when m is a letter or the standard right factor of m is >= n.
    if len(m) == 1:
        return ((("w", m + n), 1),)
    u, v = _std_split(m)
    if v >= n:
        return ((("w", m + n), 1),)
    # [[u,v],n] = [u,[v,n]] - (-1)^{|u||v|} [v,[u,n]]
    du, dv = _wdeg(degrees, u), _wdeg(degrees, v)
    acc: dict[_Key, int] = {}
    for key, c in _bracket_words(degrees, v, n):
        for k2, c2 in _bracket_word_key(degrees, u, key):
            acc[k2] = acc.get(k2, 0) + c * c2
    outer = -1 if (du and dv) else 1
    for key, c in _bracket_words(degrees, u, n):
        for k2, c2 in _bracket_word_key(degrees, v, key):
            acc[k2] = acc.get(k2, 0) - outer * c * c2
    return tuple(sorted((k, c) for k, c in acc.items() if c))


def _bracket_word_key(degrees: tuple[int, ...], w: tuple[int, ...],
                      key: _Key) -> tuple:
    """[B(w), key] for a Lyndon word w and a basis key."""
    kind, u = key
    if kind == "w":
        return _bracket_words(degrees, w, u)
    if u == w:
        return ()  # [x, [x, x]] = 0 for odd x
    # [B(w), <u>] = -[<u>, B(w)] = -2 [B(u), [B(u), B(w)]]
    token = (degrees, w, key)
    if token in _active_squares:
        raise RuntimeError("cyclic square reduction; rewriting order broken")
    _active_squares.add(token)
    try:
        acc: dict[_Key, int] = {}
        for k1, c1 in _bracket_words(degrees, u, w):
            for k2, c2 in _bracket_word_key(degrees, u, k1):
                acc[k2] = acc.get(k2, 0) - 2 * c1 * c2
        return tuple(sorted((k, c) for k, c in acc.items() if c))
    finally:
        _active_squares.discard(token)


def _bracket_keys(degrees: tuple[int, ...], k1: _Key, k2: _Key) -> tuple:
    kind1, w1 = k1
    kind2, w2 = k2
    if kind1 == "w":
        return _bracket_word_key(degrees, w1, k2)
    if kind2 == "w":
        # [<w1>, x] = -[x, <w1>] (squares are even)
        return tuple((k, -c) for k, c in _bracket_word_key(degrees, w2, k1))
    # [<w1>, <w2>] = 2 [B(w1), [B(w1), <w2>]]
    acc: dict[_Key, int] = {}
    for k, c in _bracket_word_key(degrees, w1, k2):
        for k3, c3 in _bracket_word_key(degrees, w1, k):
            acc[k3] = acc.get(k3, 0) + 2 * c * c3
    return tuple(sorted((k, c) for k, c in acc.items() if c))


# --------------------------------------------------------------------------
# Normalization of bracket expressions.
# --------------------------------------------------------------------------

def _to_internal(expr: BracketExpr, alphabet: GradedAlphabet):
    if isinstance(expr, str):
        if len(expr) != 1:
            raise ValueError(f"expression leaves must be single letters: {expr!r}")
        return alphabet.index(expr)
    if isinstance(expr, tuple) and len(expr) == 2:
        return (_to_internal(expr[0], alphabet), _to_internal(expr[1], alphabet))
    if isinstance(expr, int):
        return expr
    raise ValueError(f"not a bracket expression: {expr!r}")


def _expr_multidegree(node, nletters: int) -> tuple[int, ...]:
    counts = [0] * nletters
    stack = [node]
    while stack:
        x = stack.pop()
        if isinstance(x, int):
            counts[x] += 1
        else:
            stack.extend(x)
    return tuple(counts)


def _normalize_node(degrees: tuple[int, ...], node) -> dict[_Key, int]:
    if isinstance(node, int):
        return {("w", (node,)): 1}
    left = _normalize_node(degrees, node[0])
    right = _normalize_node(degrees, node[1])
    acc: dict[_Key, int] = {}
    for k1, c1 in left.items():
        for k2, c2 in right.items():
            for key, c in _bracket_keys(degrees, k1, k2):
                acc[key] = acc.get(key, 0) + c1 * c2 * c
    return {k: c for k, c in acc.items() if c}


def normalize(expr, alphabet: GradedAlphabet) -> LieVector:
    """Expand a bracket expression (or a linear combination of them, given
    as (coefficient, expression) pairs) in the Lyndon basis.

    All terms must share one multidegree; raises MixedMultidegree otherwise.
    A single expression is a string or a pair; a combination is any other
    iterable of (coefficient, expression) pairs.
    """
    if isinstance(expr, (str, tuple)):
        terms = [(Fraction(1), expr)]
    else:
        terms = [(Fraction(c), e) for c, e in expr]
    internal = [(c, _to_internal(e, alphabet)) for c, e in terms]
    mdeg = None
    for _, node in internal:
        md = _expr_multidegree(node, len(alphabet))
        if mdeg is None:
            mdeg = md
        elif md != mdeg:
            raise MixedMultidegree(f"{md} vs {mdeg}")
    acc: dict[_Key, Fraction] = {}
    for coeff, node in internal:
        for key, c in _normalize_node(alphabet.degrees, node).items():
            acc[key] = acc.get(key, Fraction(0)) + coeff * c
    return LieVector(alphabet, acc)


def basis_vector(word, alphabet: GradedAlphabet, square: bool = False
                 ) -> LieVector:
    """The basis element B(word), or its square [B(word), B(word)]."""
    key = alphabet.key(word)
    if not _is_lyndon_key(key):
        raise NotLyndon(f"{alphabet.text(key)} is not a Lyndon word")
    kind = "sq" if square else "w"
    if square and alphabet.word_degree(key) != 1:
        raise ValueError("squares exist only for odd-degree words")
    return LieVector(alphabet, {(kind, key): Fraction(1)})


def bracket(x: LieVector, y: LieVector) -> LieVector:
    """Bilinear extension of the basis bracket."""
    if x.alphabet.letters != y.alphabet.letters:
        raise ValueError("vectors live over different alphabets")
    degrees = x.alphabet.degrees
    acc: dict[_Key, Fraction] = {}
    for k1, c1 in x.terms.items():
        for k2, c2 in y.terms.items():
            for key, c in _bracket_keys(degrees, k1, k2):
                acc[key] = acc.get(key, Fraction(0)) + c1 * c2 * c
    return LieVector(x.alphabet, acc)


# --------------------------------------------------------------------------
# Brute-force oracle: exact rank of the span of all full bracketings inside
# the free associative superalgebra (the universal envelope), which the free
# Lie superalgebra embeds into in characteristic zero.
# --------------------------------------------------------------------------

def _assoc_expand(degrees: tuple[int, ...], node) -> tuple[dict, int]:
    """Expansion of a bracket expression in the free associative
    superalgebra; returns (coefficients by word, Z/2 degree)."""
    if isinstance(node, int):
        return {(node,): 1}, degrees[node]
    left, dl = _assoc_expand(degrees, node[0])
    right, dr = _assoc_expand(degrees, node[1])
    sign = -1 if (dl and dr) else 1
    out: dict[tuple[int, ...], int] = {}
    for wa, ca in left.items():
        for wb, cb in right.items():
            out[wa + wb] = out.get(wa + wb, 0) + ca * cb
            out[wb + wa] = out.get(wb + wa, 0) - sign * cb * ca
    return {w: c for w, c in out.items() if c}, (dl + dr) % 2


def _key_to_node(key: _Key):
    kind, w = key
    tree = _std_tree(w)
    return (tree, tree) if kind == "sq" else tree


def associative_expansion(obj, alphabet: GradedAlphabet) -> dict[str, Fraction]:
    """Image in the free associative superalgebra, keyed by plain words.

    Accepts a bracket expression or a LieVector (whose basis keys expand
    through their standard bracketings)."""
    degrees = alphabet.degrees
    acc: dict[tuple[int, ...], Fraction] = {}
    if isinstance(obj, LieVector):
        pairs = [(c, _key_to_node(k)) for k, c in obj.terms.items()]
    else:
        pairs = [(Fraction(1), _to_internal(obj, alphabet))]
    for coeff, node in pairs:
        expansion, _ = _assoc_expand(degrees, node)
        for w, c in expansion.items():
            acc[w] = acc.get(w, Fraction(0)) + coeff * c
    return {alphabet.text(w): c for w, c in acc.items() if c}


class _IntEchelon:
    """Incremental integer row echelon over sparse rows (exact rank)."""

    def __init__(self):
        self.pivots: dict = {}  # pivot word -> normalized row dict

    @staticmethod
    def _normalize(row: dict) -> dict:
        g = 0
        for c in row.values():
            g = gcd(g, c)
        lead = min(row)
        if row[lead] < 0:
            g = -g
        return {w: c // g for w, c in row.items()}

    def reduce(self, row: dict) -> dict:
        row = dict(row)
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                return row
            a, b = piv[lead], row[lead]
            new = {}
            for w in set(row) | set(piv):
                c = a * row.get(w, 0) - b * piv.get(w, 0)
                if c:
                    new[w] = c
            row = new
        return row

    def insert(self, row: dict) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        self.pivots[min(row)] = self._normalize(row)
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _all_bracketings(word: tuple[int, ...]):
    if len(word) == 1:
        yield word[0]
        return
    for i in range(1, len(word)):
        for left in _all_bracketings(word[:i]):
            for right in _all_bracketings(word[i:]):
                yield (left, right)


@dataclass(frozen=True)
class OracleComponent:
    """Exact dimension of one multidegree component, with a membership test
    for the span of all full bracketings."""

    multidegree: tuple[int, ...]
    dimension: int
    contains: Callable[[object], bool]


def oracle_component(alphabet: GradedAlphabet, multidegree) -> OracleComponent:
    """Row-reduce the span of all full bracketings of all words of the
    multidegree inside the free associative superalgebra."""
    counts = _as_counts(alphabet, multidegree)
    total = sum(counts)
    if not 1 <= total <= 8:
        raise TooLarge(f"oracle supports total degree 1..8, got {total}")
    degrees = alphabet.degrees
    ech = _IntEchelon()
    for word in _multiset_permutations(list(counts)):
        for node in _all_bracketings(word):
            expansion, _ = _assoc_expand(degrees, node)
            if expansion:
                ech.insert(expansion)

    def contains(obj) -> bool:
        exp = associative_expansion(obj, alphabet)
        if not exp:
            return True
        scale = 1
        for c in exp.values():
            scale = scale * c.denominator // gcd(scale, c.denominator)
        row = {alphabet.key(w): int(c * scale) for w, c in exp.items()}
        return not ech.reduce(row)

    return OracleComponent(tuple(counts), ech.rank, contains)
