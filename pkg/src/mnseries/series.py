"""Finite-support elements of the twisted series ring K((G, Phi)).

Only finitely supported series are stored. Inverses of non-monomials have
infinite support, so they are returned as :class:`ApproxSeries`: a finite
part together with a guarantee word ``gamma`` such that the true value minus
the finite part is supported on words ``>= gamma`` in the Magnus order.
"""

from functools import cmp_to_key
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import GuaranteeTooCoarse, ZeroHasNoSupport, ZeroInversion
from .field import ONE, FieldElement, TwistMap
from .free_group import OrderRelation, Word, compare, format_word, min_of_support, word_min

TRIVIAL_TWIST = TwistMap.trivial()


def _word_cmp(a: Word, b: Word) -> int:
    rel = compare(a, b)
    return -1 if rel is OrderRelation.LESS else (1 if rel is OrderRelation.GREATER else 0)


magnus_sort_key = cmp_to_key(_word_cmp)


def _at_least(w: Word, bound: Optional[Word]) -> bool:
    return bound is not None and compare(w, bound) is not OrderRelation.LESS


class Series:
    """A finitely supported sum of ``coefficient * word``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Word, object] = None):
        clean: Dict[Word, FieldElement] = {}
        for w, c in (terms or {}).items():
            c = c if isinstance(c, FieldElement) else FieldElement(c)
            if c:
                clean[w] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def zero(cls) -> "Series":
        return cls()

    @classmethod
    def one(cls) -> "Series":
        return cls({Word.identity(): ONE})

    @classmethod
    def monomial(cls, word: Word, coeff=1) -> "Series":
        return cls({word: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def support(self) -> frozenset:
        return frozenset(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, w: Word) -> FieldElement:
        return self.terms.get(w, FieldElement(0))

    def sorted_terms(self) -> List[Tuple[Word, FieldElement]]:
        return sorted(self.terms.items(), key=lambda kv: magnus_sort_key(kv[0]))

    def __add__(self, other: "Series") -> "Series":
        if not isinstance(other, Series):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return Series(out)

    def __neg__(self) -> "Series":
        return Series({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Series") -> "Series":
        if not isinstance(other, Series):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "Series":
        """Multiply every coefficient on the left by a field element."""
        return Series({w: c * a for w, a in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Series) and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Series({format_series(self)!r})"

    def __str__(self) -> str:
        return format_series(self)


def format_series(a: Series) -> str:
    if a.is_zero():
        return "0"
    return " + ".join(f"({c})*[{format_word(w)}]" for w, c in a.sorted_terms())


def add(a: Series, b: Series) -> Series:
    return a + b


def mul(a: Series, b: Series, twist: TwistMap = TRIVIAL_TWIST) -> Series:
    """Twisted convolution: (a_g g)(b_h h) = a_g Phi_g(b_h) gh."""
    out: Dict[Word, FieldElement] = {}
    for g, ag in a.terms.items():
        shift = twist.shift_of(g)
        for h, bh in b.terms.items():
            t = g * h
            c = ag * bh.shift(shift)
            out[t] = out[t] + c if t in out else c
    return Series(out)


def power(a: Series, k: int, twist: TwistMap = TRIVIAL_TWIST) -> Series:
    if k < 0:
        raise ValueError("negative powers of a series need truncated_inverse")
    result, base = Series.one(), a
    while k:
        if k & 1:
            result = mul(result, base, twist)
        k >>= 1
        if k:
            base = mul(base, base, twist)
    return result


def d(a) -> Word:
    """Magnus-least word of the support of a series or approximate series."""
    if isinstance(a, ApproxSeries):
        if a.terms.is_zero():
            if a.guarantee is None:
                raise ZeroHasNoSupport("the zero series has no support")
            raise GuaranteeTooCoarse(
                f"no stored term lies below the guarantee {format_word(a.guarantee)}"
            )
        return min_of_support(a.terms.terms)
    if a.is_zero():
        raise ZeroHasNoSupport("the zero series has no support")
    return min_of_support(a.terms)


def leading(a: Series) -> Tuple[Word, FieldElement]:
    u = d(a)
    return u, a.terms[u]


def monomial_inverse(word: Word, coeff: FieldElement, twist: TwistMap = TRIVIAL_TWIST) -> Series:
    """(c u)^-1 = Phi_{u^-1}(c^-1) u^-1."""
    if not coeff:
        raise ZeroInversion("zero coefficient")
    inv = ~word
    return Series.monomial(inv, twist.act(inv, coeff.inverse()))


class ApproxSeries:
    """A finite part plus a guarantee word; ``guarantee=None`` means exact.

    Stored terms always lie strictly below the guarantee; anything at or
    above it is dropped on construction because it carries no information.
    """

    __slots__ = ("terms", "guarantee")

    def __init__(self, terms: Series, guarantee: Optional[Word] = None):
        if guarantee is not None:
            terms = Series({w: c for w, c in terms.terms.items() if not _at_least(w, guarantee)})
        self.terms = terms
        self.guarantee = guarantee

    @classmethod
    def exact(cls, a: Series) -> "ApproxSeries":
        return cls(a, None)

    def is_exact(self) -> bool:
        return self.guarantee is None

    def is_one(self) -> bool:
        """Equal to 1 as far as the guarantee can tell."""
        return (self.terms - Series.one()).is_zero()

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ApproxSeries)
            and self.terms == other.terms
            and self.guarantee == other.guarantee
        )

    def __repr__(self) -> str:
        g = "exact" if self.guarantee is None else format_word(self.guarantee)
        return f"ApproxSeries({format_series(self.terms)!r}, guarantee={g})"


def approx_add(a: ApproxSeries, b: ApproxSeries) -> ApproxSeries:
    return ApproxSeries(a.terms + b.terms, word_min(a.guarantee, b.guarantee))


def approx_neg(a: ApproxSeries) -> ApproxSeries:
    return ApproxSeries(-a.terms, a.guarantee)


def approx_sub(a: ApproxSeries, b: ApproxSeries) -> ApproxSeries:
    return approx_add(a, approx_neg(b))


def approx_mul(a: ApproxSeries, b: ApproxSeries, twist: TwistMap = TRIVIAL_TWIST) -> ApproxSeries:
    g1, g2 = a.guarantee, b.guarantee
    candidates: List[Optional[Word]] = []
    if g1 is not None and not b.terms.is_zero():
        candidates.append(g1 * d(b.terms))
    if g2 is not None and not a.terms.is_zero():
        candidates.append(d(a.terms) * g2)
    if g1 is not None and g2 is not None:
        candidates.append(g1 * g2)
    guarantee = None
    for c in candidates:
        guarantee = word_min(guarantee, c)
    return ApproxSeries(mul(a.terms, b.terms, twist), guarantee)


def split_leading(a: Series, twist: TwistMap = TRIVIAL_TWIST) -> Tuple[Word, FieldElement, Series]:
    """Write a = (a_u u)(1 + eps) and return (u, a_u, eps)."""
    u, au = leading(a)
    lead_inv = monomial_inverse(u, au, twist)
    rest = a - Series.monomial(u, au)
    eps = mul(lead_inv, rest, twist)
    return u, au, eps


def truncated_inverse(a: Series, n: int, twist: TwistMap = TRIVIAL_TWIST) -> ApproxSeries:
    """Geometric-series inverse keeping the powers eps^0 .. eps^n.

    With a = (a_u u)(1 + eps), the returned terms are
    sum_{k<=n} (-eps)^k (a_u u)^-1 with everything at or above
    d(eps)^(n+1) u^-1 dropped; that word is also the guarantee on the
    exact inverse. See :func:`inverse_residual_guarantees` for the bounds
    on ``a*inv - 1`` and ``inv*a - 1``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if a.is_zero():
        raise ZeroInversion("the zero series has no inverse")
    u, au, eps = split_leading(a, twist)
    lead_inv = monomial_inverse(u, au, twist)
    if eps.is_zero():
        return ApproxSeries(lead_inv, None)
    cutoff = d(eps) ** (n + 1)
    neg_eps = -eps
    total = Series.one()
    term = Series.one()
    for _ in range(n):
        term = mul(term, neg_eps, twist)
        # words >= cutoff only ever produce words >= cutoff (eps is supported above 1)
        term = Series({w: c for w, c in term.terms.items() if not _at_least(w, cutoff)})
        if term.is_zero():
            break
        total = total + term
    return ApproxSeries(mul(total, lead_inv, twist), cutoff * ~u)


def inverse_residual_guarantees(a: Series, n: int, twist: TwistMap = TRIVIAL_TWIST):
    """Return ``(left, right)`` with a*inv - 1 >= left and inv*a - 1 >= right.

    ``left = u d(eps)^(n+1) u^-1`` and ``right = d(eps)^(n+1)``; both are None
    when ``a`` is a monomial (the inverse is then exact).
    """
    u, _, eps = split_leading(a, twist)
    if eps.is_zero():
        return None, None
    p = d(eps) ** (n + 1)
    return u * p * ~u, p


def approx_inverse(a: ApproxSeries, depth: int, twist: TwistMap = TRIVIAL_TWIST) -> ApproxSeries:
    """Inverse of an approximate value.

    If the exact value is a_t + A with A >= gamma and u = d(a_t) < gamma, the
    exact inverse differs from a_t^-1 by terms >= u^-1 gamma u^-1.
    """
    if a.terms.is_zero():
        if a.guarantee is None:
            raise ZeroInversion("the zero series has no inverse")
        raise GuaranteeTooCoarse("cannot invert: no term below the guarantee")
    inv = truncated_inverse(a.terms, depth, twist)
    if a.guarantee is None:
        return inv
    u = d(a.terms)
    return ApproxSeries(inv.terms, word_min(inv.guarantee, ~u * a.guarantee * ~u))


def approx_power(a: ApproxSeries, k: int, depth: int, twist: TwistMap = TRIVIAL_TWIST) -> ApproxSeries:
    if k < 0:
        return approx_power(approx_inverse(a, depth, twist), -k, depth, twist)
    result, base = ApproxSeries.exact(Series.one()), a
    while k:
        if k & 1:
            result = approx_mul(result, base, twist)
        k >>= 1
        if k:
            base = approx_mul(base, base, twist)
    return result


# -- serialization ----------------------------------------------------------


def series_to_json(a: Series) -> list:
    return [{"word": format_word(w), "coeff": str(c)} for w, c in a.sorted_terms()]


def approx_to_json(a: ApproxSeries) -> dict:
    return {
        "terms": series_to_json(a.terms),
        "guarantee": None if a.guarantee is None else format_word(a.guarantee),
    }


def series_from_json(data: Iterable[dict]) -> Series:
    from .parsing import parse_field, parse_word

    return Series({parse_word(t["word"]): parse_field(t["coeff"]) for t in data})


def approx_from_json(data: dict) -> ApproxSeries:
    from .parsing import parse_word

    g = data.get("guarantee")
    return ApproxSeries(series_from_json(data["terms"]), None if g is None else parse_word(g))
