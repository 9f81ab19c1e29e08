"""The coefficient field Q(s), its shift automorphisms and twist maps.

Elements are stored as a pair of python-flint ``fmpq_poly`` values: a
numerator and a monic denominator with no common factor. Everything is
exact.
"""

import re
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

import flint

from .errors import ZeroInversion
from .free_group import Word

Number = Union[int, Fraction]

_ZERO_POLY = flint.fmpq_poly([0])
_ONE_POLY = flint.fmpq_poly([1])
_S_POLY = flint.fmpq_poly([0, 1])


def _fmpq(c) -> "flint.fmpq":
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


class FieldElement:
    """An element of Q(s). Immutable and hashable."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, value=0, den=None):
        if isinstance(value, FieldElement):
            num, den = value.num, value.den
        elif isinstance(value, flint.fmpq_poly):
            num, den = _normalize(value, _ONE_POLY if den is None else den)
        else:
            num, den = flint.fmpq_poly([_fmpq(value)]), _ONE_POLY
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _raw(cls, num, den) -> "FieldElement":
        out = cls.__new__(cls)
        out.num, out.den, out._hash = num, den, None
        return out

    @classmethod
    def s(cls) -> "FieldElement":
        return cls._raw(_S_POLY, _ONE_POLY)

    @classmethod
    def from_coefficients(cls, numerator: Iterable[Number], denominator: Iterable[Number] = (1,)):
        """Coefficient lists are given lowest degree first."""
        num = flint.fmpq_poly([_fmpq(c) for c in numerator] or [0])
        den = flint.fmpq_poly([_fmpq(c) for c in denominator] or [0])
        if den == 0:
            raise ZeroInversion("zero denominator")
        return cls(num, den)

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return FieldElement(self.num + other.num, self.den)
        return FieldElement(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return FieldElement(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.num == 0:
            raise ZeroInversion("the zero element of Q(s) has no inverse")
        return FieldElement(self.den, self.num)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement._raw(self.num ** k, self.den ** k)

    def __bool__(self) -> bool:
        return self.num != 0

    def is_zero(self) -> bool:
        return self.num == 0

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        return other is not None and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((tuple(self.num.coeffs()), tuple(self.den.coeffs())))
        return self._hash

    def shift(self, c: int) -> "FieldElement":
        """Substitute s -> s + c."""
        if c == 0 or self.is_constant():
            return self
        target = flint.fmpq_poly([c, 1])
        # a shift is a ring automorphism of Q[s]: coprimality and monic leading terms survive
        return FieldElement._raw(self.num(target), self.den(target))

    def numerator_coefficients(self) -> Tuple[Fraction, ...]:
        """Numerator coefficients, lowest degree first; the denominator is monic."""
        return _fractions(self.num)

    def denominator_coefficients(self) -> Tuple[Fraction, ...]:
        return _fractions(self.den)

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def as_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a rational constant")
        num = _fractions(self.num)
        return num[0] if num else Fraction(0)

    def evaluate(self, point: Fraction) -> Fraction:
        """Evaluate at a rational point via plain Fraction arithmetic."""
        d = _horner(_fractions(self.den), point)
        if d == 0:
            raise ZeroDivisionError(f"pole at s = {point}")
        return _horner(_fractions(self.num), point) / d

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    def __str__(self) -> str:
        return format_field(self)


def _normalize(num, den):
    if den == 0:
        raise ZeroInversion("zero denominator")
    if num == 0:
        return _ZERO_POLY, _ONE_POLY
    if den.degree() > 0:
        g = num.gcd(den)
        if g.degree() > 0:
            num, den = num / g, den / g
    lead = den.coeffs()[-1]
    if lead != 1:
        num, den = num / lead, den / lead
    return num, den


def _coerce(x):
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, (int, Fraction)):
        return FieldElement(x)
    return None


def _fractions(poly) -> tuple:
    return tuple(Fraction(int(c.p), int(c.q)) for c in poly.coeffs())


def _horner(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_poly(coeffs) -> str:
    if not coeffs:
        return "0"
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = _format_rational(mag)
        else:
            power = "s" if k == 1 else f"s^{k}"
            body = power if mag == 1 else f"{_format_rational(mag)}*{power}"
        terms.append(("-" if c < 0 else "+", body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def format_field(f: FieldElement) -> str:
    num, den = _fractions(f.num), _fractions(f.den)
    if den == (Fraction(1),):
        return _format_poly(num)
    if len(den) == 1:
        # constant denominator: fold into coefficients
        return _format_poly(tuple(c / den[0] for c in num))
    n, m = _format_poly(num), _format_poly(den)
    if not re.fullmatch(r"-?(\d+|s)", n):
        n = f"({n})"
    if not re.fullmatch(r"s(\^\d+)?", m):
        m = f"({m})"
    return f"{n}/{m}"


ZERO = FieldElement(0)
ONE = FieldElement(1)


class FieldAutomorphism:
    """The automorphism s -> s + shift of Q(s)."""

    __slots__ = ("shift",)

    def __init__(self, shift: int = 0):
        self.shift = int(shift)

    def __call__(self, f: FieldElement) -> FieldElement:
        return f.shift(self.shift)

    apply = __call__

    def compose(self, other: "FieldAutomorphism") -> "FieldAutomorphism":
        """self after other."""
        return FieldAutomorphism(self.shift + other.shift)

    def inverse(self) -> "FieldAutomorphism":
        return FieldAutomorphism(-self.shift)

    def is_identity(self) -> bool:
        return self.shift == 0

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldAutomorphism) and self.shift == other.shift

    def __hash__(self) -> int:
        return hash(("shift", self.shift))

    def __repr__(self) -> str:
        return f"FieldAutomorphism(shift={self.shift})"


def apply(sigma: FieldAutomorphism, f: FieldElement) -> FieldElement:
    return sigma(f)


class TwistMap:
    """Group homomorphism from the free group to the shift automorphisms.

    ``x_i`` acts by a shift of ``weights[i]`` (0 when absent), so a word acts
    by the weighted sum of its exponent sums. An empty weight map gives the
    trivial twist.
    """

    __slots__ = ("weights",)

    def __init__(self, weights: Mapping[int, int] = None):
        self.weights: Dict[int, int] = {int(k): int(v) for k, v in (weights or {}).items() if v}

    @classmethod
    def trivial(cls) -> "TwistMap":
        return cls({})

    def is_trivial(self) -> bool:
        return not self.weights

    def shift_of(self, g: Word) -> int:
        w = self.weights
        return sum(w.get(gen, 0) * exp for gen, exp in g.syllables)

    def __call__(self, g: Word) -> FieldAutomorphism:
        return FieldAutomorphism(self.shift_of(g))

    def act(self, g: Word, f: FieldElement) -> FieldElement:
        return f.shift(self.shift_of(g))

    def __eq__(self, other) -> bool:
        return isinstance(other, TwistMap) and self.weights == other.weights

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.weights.items())))

    def __repr__(self) -> str:
        return f"TwistMap({self.weights})"


def twist_of(phi: TwistMap, g: Word) -> FieldAutomorphism:
    return phi(g)
