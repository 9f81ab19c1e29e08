"""Reduced words in the free group on x1, x2, ... and the Magnus order.

A word is stored as a tuple of syllables ``(generator_index, exponent)`` with
adjacent indices distinct and exponents nonzero. The empty tuple is 1.

The order is read off the Magnus embedding ``x_i -> 1 + t_i`` into integer
power series in noncommuting variables: expand both words, walk monomials
degree first and then lexicographically (t1 < t2 < ...), and the word with
the smaller coefficient at the first difference is the smaller word. With
this convention ``x2 < x1`` and ``x1^-1 < 1 < x1``.
"""

from enum import Enum
from functools import lru_cache, total_ordering
from math import comb
from typing import Dict, Iterable, Iterator, Optional, Tuple

from .errors import DeepeningCapExceeded, EmptySupport

Syllable = Tuple[int, int]
Monomial = Tuple[int, ...]

DEFAULT_DEGREE_CAP = 64


class OrderRelation(Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"

    def reversed(self) -> "OrderRelation":
        if self is OrderRelation.LESS:
            return OrderRelation.GREATER
        if self is OrderRelation.GREATER:
            return OrderRelation.LESS
        return self


def _reduce(syllables: Iterable[Syllable]) -> Tuple[Syllable, ...]:
    out = []
    for gen, exp in syllables:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            total = out[-1][1] + exp
            if total:
                out[-1] = (gen, total)
            else:
                out.pop()
        else:
            out.append((gen, exp))
    return tuple(out)


@total_ordering
class Word:
    """Immutable reduced word. Ordering operators use the Magnus order."""

    __slots__ = ("syllables", "_hash")

    def __init__(self, syllables: Iterable[Syllable] = ()):
        syl = []
        for gen, exp in syllables:
            gen, exp = int(gen), int(exp)
            if gen < 1:
                raise ValueError(f"generator index must be positive, got {gen}")
            syl.append((gen, exp))
        self.syllables = _reduce(syl)
        self._hash = hash(self.syllables)

    @classmethod
    def identity(cls) -> "Word":
        return _IDENTITY

    @classmethod
    def gen(cls, index: int, exponent: int = 1) -> "Word":
        return cls([(index, exponent)])

    @classmethod
    def from_letters(cls, letters: Iterable[int]) -> "Word":
        """Build from signed letters, e.g. ``[1, -2]`` is x1*x2^-1."""
        return cls((abs(a), 1 if a > 0 else -1) for a in letters)

    def letters(self) -> Iterator[int]:
        for gen, exp in self.syllables:
            sign = 1 if exp > 0 else -1
            for _ in range(abs(exp)):
                yield sign * gen

    def is_identity(self) -> bool:
        return not self.syllables

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.syllables)

    def generators(self) -> frozenset:
        return frozenset(g for g, _ in self.syllables)

    def exponent_sum(self, gen: int) -> int:
        return sum(e for g, e in self.syllables if g == gen)

    def __mul__(self, other: "Word") -> "Word":
        if not isinstance(other, Word):
            return NotImplemented
        if not other.syllables:
            return self
        if not self.syllables:
            return other
        return Word(self.syllables + other.syllables)

    def __invert__(self) -> "Word":
        return Word((g, -e) for g, e in reversed(self.syllables))

    inverse = __invert__

    def __pow__(self, k: int) -> "Word":
        if k == 0 or not self.syllables:
            return _IDENTITY
        if k < 0:
            return (~self) ** (-k)
        if len(self.syllables) == 1:
            gen, exp = self.syllables[0]
            return Word([(gen, exp * k)])
        result, base = _IDENTITY, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate_by(self, c: "Word") -> "Word":
        """Return c * self * c^-1."""
        return c * self * ~c

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.syllables == other.syllables

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "Word") -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return compare(self, other) is OrderRelation.LESS

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r})"

    def __str__(self) -> str:
        return format_word(self)


_IDENTITY = Word()


def format_word(w: Word) -> str:
    if not w.syllables:
        return "1"
    parts = []
    for gen, exp in w.syllables:
        parts.append(f"x{gen}" if exp == 1 else f"x{gen}^{exp}")
    return "*".join(parts)


def multiply(a: Word, b: Word) -> Word:
    return a * b


def invert(a: Word) -> Word:
    return ~a


def power(a: Word, k: int) -> Word:
    return a ** k


def commutator(a: Word, b: Word) -> Word:
    """[a, b] = a b a^-1 b^-1."""
    return a * b * ~a * ~b


# -- Magnus expansion -------------------------------------------------------


class MagnusExpansion:
    """Truncated image of a word in Z<<t_1, t_2, ...>>.

    ``coefficients`` maps monomials (tuples of generator indices, length at
    most ``degree_bound``) to nonzero integers.
    """

    __slots__ = ("degree_bound", "coefficients")

    def __init__(self, degree_bound: int, coefficients: Dict[Monomial, int]):
        self.degree_bound = degree_bound
        self.coefficients = {m: c for m, c in coefficients.items() if c and len(m) <= degree_bound}

    def __getitem__(self, monomial: Monomial) -> int:
        return self.coefficients.get(tuple(monomial), 0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MagnusExpansion)
            and self.degree_bound == other.degree_bound
            and self.coefficients == other.coefficients
        )

    def __mul__(self, other: "MagnusExpansion") -> "MagnusExpansion":
        bound = min(self.degree_bound, other.degree_bound)
        return MagnusExpansion(bound, _poly_mul(self.coefficients, other.coefficients, bound))

    def monomials(self):
        return sorted(self.coefficients, key=monomial_key)

    def __repr__(self) -> str:
        return f"MagnusExpansion(D={self.degree_bound}, {format_expansion(self)})"


def monomial_key(m: Monomial):
    """Degree first, then lexicographic in generator index."""
    return (len(m), m)


def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    i = 0
    while i < len(m):
        j = i
        while j < len(m) and m[j] == m[i]:
            j += 1
        run = j - i
        parts.append(f"t{m[i]}" if run == 1 else f"t{m[i]}^{run}")
        i = j
    return "*".join(parts)


def format_expansion(e: MagnusExpansion) -> str:
    out = []
    for m in e.monomials():
        c = e.coefficients[m]
        body = format_monomial(m)
        if not m:
            term = str(c)
        elif c == 1:
            term = body
        elif c == -1:
            term = "-" + body
        else:
            term = f"{c}*{body}"
        out.append(term)
    return " + ".join(out).replace("+ -", "- ") or "0"


def _poly_mul(a: Dict[Monomial, int], b: Dict[Monomial, int], bound: int) -> Dict[Monomial, int]:
    out: Dict[Monomial, int] = {}
    for ma, ca in a.items():
        room = bound - len(ma)
        if room < 0:
            continue
        for mb, cb in b.items():
            if len(mb) > room:
                continue
            key = ma + mb
            out[key] = out.get(key, 0) + ca * cb
    return {m: c for m, c in out.items() if c}


def _syllable_series(gen: int, exp: int, bound: int) -> Dict[Monomial, int]:
    # (1 + t)^exp, with the binomial series for negative exponents
    out = {}
    for k in range(bound + 1):
        if exp > 0:
            if k > exp:
                break
            c = comb(exp, k)
        else:
            m = -exp
            c = (-1) ** k * comb(m + k - 1, k)
        out[(gen,) * k] = c
    return out


@lru_cache(maxsize=1 << 16)
def _expand_cached(syllables: Tuple[Syllable, ...], bound: int) -> Dict[Monomial, int]:
    if not syllables:
        return {(): 1}
    if len(syllables) == 1:
        return _syllable_series(syllables[0][0], syllables[0][1], bound)
    mid = len(syllables) // 2
    left = _expand_cached(syllables[:mid], bound)
    right = _expand_cached(syllables[mid:], bound)
    return _poly_mul(left, right, bound)


def magnus_expand(a: Word, degree_bound: int) -> MagnusExpansion:
    if degree_bound < 1:
        raise ValueError("degree bound must be at least 1")
    return MagnusExpansion(degree_bound, _expand_cached(a.syllables, degree_bound))


def truncate(e: MagnusExpansion, degree_bound: int) -> MagnusExpansion:
    return MagnusExpansion(degree_bound, e.coefficients)


class Comparison:
    """Outcome of a Magnus comparison, with the witnessing monomial."""

    __slots__ = ("relation", "monomial", "left", "right", "degree_bound")

    def __init__(self, relation, monomial=None, left=0, right=0, degree_bound=0):
        self.relation = relation
        self.monomial = monomial
        self.left = left
        self.right = right
        self.degree_bound = degree_bound

    def __repr__(self) -> str:
        if self.monomial is None:
            return f"Comparison({self.relation.value})"
        return (
            f"Comparison({self.relation.value}, {format_monomial(self.monomial)}: "
            f"{self.left} vs {self.right})"
        )


def first_difference(a: Word, b: Word, degree_cap: int = DEFAULT_DEGREE_CAP) -> Comparison:
    """Compare ``a`` and ``b`` and report where their expansions first differ."""
    if a == b:
        return Comparison(OrderRelation.EQUAL)
    bound = 2
    while True:
        ea = _expand_cached(a.syllables, bound)
        eb = _expand_cached(b.syllables, bound)
        diff = [m for m in set(ea) | set(eb) if ea.get(m, 0) != eb.get(m, 0)]
        if diff:
            m = min(diff, key=monomial_key)
            ca, cb = ea.get(m, 0), eb.get(m, 0)
            rel = OrderRelation.LESS if ca < cb else OrderRelation.GREATER
            return Comparison(rel, m, ca, cb, bound)
        if bound >= degree_cap:
            raise DeepeningCapExceeded(
                f"no Magnus difference up to degree {degree_cap} between {a} and {b}"
            )
        bound = min(2 * bound, degree_cap)


def compare(a: Word, b: Word, degree_cap: int = DEFAULT_DEGREE_CAP) -> OrderRelation:
    return first_difference(a, b, degree_cap).relation


def is_positive(w: Word) -> bool:
    """True iff 1 < w, i.e. the lowest nonzero term of M(w) - 1 is positive."""
    return compare(_IDENTITY, w) is OrderRelation.LESS


def min_of_support(words: Iterable[Word], degree_cap: int = DEFAULT_DEGREE_CAP) -> Word:
    """Magnus-least element of a finite set of words.

    Expansions are compared as coefficient vectors over the deg-lex sorted
    monomials, which is the same order as pairwise :func:`compare`; only
    words that tie at the current degree are expanded further.
    """
    candidates = list(dict.fromkeys(words))
    if not candidates:
        raise EmptySupport("cannot take the minimum of an empty support")
    bound = 2
    while len(candidates) > 1:
        expansions = [_expand_cached(w.syllables, bound) for w in candidates]
        monomials = sorted(set().union(*expansions), key=monomial_key)
        keys = [tuple(e.get(m, 0) for m in monomials) for e in expansions]
        best = min(keys)
        candidates = [w for w, k in zip(candidates, keys) if k == best]
        if len(candidates) > 1:
            if bound >= degree_cap:
                raise DeepeningCapExceeded(
                    f"no Magnus difference up to degree {degree_cap} among {candidates}"
                )
            bound = min(2 * bound, degree_cap)
    return candidates[0]


def word_min(a: Optional[Word], b: Optional[Word]) -> Optional[Word]:
    """Minimum where None stands for +infinity."""
    if a is None:
        return b
    if b is None:
        return a
    return a if compare(a, b) is not OrderRelation.GREATER else b
