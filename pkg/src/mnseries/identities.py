"""Word recursions w_n, u_n, v_n, phi_n and generalized group identities.

A :class:`SeriesShape` records, level by level, whether each step of an
almost normal series is normal or of finite index l. It drives

* ``w_0 = x``; ``w_n = [w_(n-1), y]`` at normal levels (and beyond the last
  level), ``w_n = w_(n-1)^(l!)`` at finite-index levels;
* ``phi_0 = h``; ``phi_n = [phi_(n-1), g]`` or ``phi_(n-1)^(l!)``.

At normal levels phi_n must keep the trailing g^-1 of the commutator: g
commutes with 1+g, so it can be moved inside the conjugation, but it does
not disappear. Dropping it (``phi_(n-1) g phi_(n-1)^-1``) breaks the
conjugation formula already at n = 1.

The conjugation formula ``u_n = (1+g) phi_n (1+g)^-1`` is checked two ways:
symbolically in the group where a letter standing for (1+g) commutes with g
and nothing else, and numerically with truncated series inverses.
"""

from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .expr import (
    Commutator,
    Const,
    FreeGroupTarget,
    Inverse,
    Power,
    Product,
    Var,
    WordExpr,
    eval_expr,
)
from .field import TwistMap
from .free_group import Word, format_word
from .parsing import parse_identity
from .series import (
    TRIVIAL_TWIST,
    ApproxSeries,
    Series,
    approx_inverse,
    approx_mul,
    approx_power,
    approx_sub,
    approx_to_json,
    d,
)

# -- shapes of almost normal series ----------------------------------------


@dataclass(frozen=True)
class Level:
    """One step N_(i-1) >= N_i: normal when ``index`` is None, else of that index."""

    index: Optional[int] = None

    def __post_init__(self):
        if self.index is not None and self.index < 2:
            raise ValueError(f"finite index levels need l >= 2, got {self.index}")

    @property
    def is_normal(self) -> bool:
        return self.index is None

    def __str__(self) -> str:
        return "N" if self.index is None else f"F{self.index}"


NORMAL = Level()


def finite_index(l: int) -> Level:
    return Level(l)


@dataclass(frozen=True)
class SeriesShape:
    levels: Tuple[Level, ...]

    def __post_init__(self):
        if not self.levels:
            raise ValueError("a series shape needs at least one level")

    @property
    def depth(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> Level:
        """Level n (1-based); levels past the end behave as normal."""
        if n < 1:
            raise ValueError("levels are numbered from 1")
        return self.levels[n - 1] if n <= len(self.levels) else NORMAL

    def __str__(self) -> str:
        return ",".join(str(l) for l in self.levels)


def parse_shape(text: str) -> SeriesShape:
    """``"N,F2,N"`` -> normal, index 2, normal."""
    levels = []
    for part in text.replace(" ", "").split(","):
        if part.upper() == "N":
            levels.append(NORMAL)
        elif part[:1].upper() == "F" and part[1:].isdigit():
            levels.append(finite_index(int(part[1:])))
        else:
            raise ValueError(f"bad level {part!r}; use N or F<l>")
    return SeriesShape(tuple(levels))


def all_shapes(r: int, choices: Sequence[Level]) -> List[SeriesShape]:
    shapes = [()]
    for _ in range(r):
        shapes = [s + (c,) for s in shapes for c in choices]
    return [SeriesShape(s) for s in shapes]


# -- recursions -------------------------------------------------------------


X, Y, H_VAR, G_VAR = Var("x"), Var("y"), Var("h"), Var("g")


def build_w(n: int, shape: SeriesShape) -> WordExpr:
    """w_n(x, y); repeated subtrees are shared, not copied."""
    w: WordExpr = X
    for i in range(1, n + 1):
        lvl = shape.level(i)
        w = Commutator(w, Y) if lvl.is_normal else Power(w, factorial(lvl.index))
    return w


def phi_n(n: int, shape: SeriesShape) -> WordExpr:
    """phi_n(h, g), a word in h and g."""
    p: WordExpr = H_VAR
    for i in range(1, n + 1):
        lvl = shape.level(i)
        p = Commutator(p, G_VAR) if lvl.is_normal else Power(p, factorial(lvl.index))
    return p


# -- the group <G1, g> * <h> -------------------------------------------------
#
# G1 stands for the unit 1+g. It commutes with g and with nothing else that
# appears, so words live in the free product of Z^2 = <G1, g> with Z = <h>.
# The normal form alternates blocks G1^a g^b (a, b not both 0) with powers
# h^k (k != 0); within a block every G1 sits to the left of every g.


class PCWord:
    __slots__ = ("blocks",)

    def __init__(self, blocks: Iterable[tuple] = ()):
        self.blocks = _pc_normalize(blocks)

    @classmethod
    def h(cls, k: int = 1) -> "PCWord":
        return cls([("h", k)])

    @classmethod
    def g(cls, k: int = 1) -> "PCWord":
        return cls([("A", 0, k)])

    @classmethod
    def G1(cls, k: int = 1) -> "PCWord":
        return cls([("A", k, 0)])

    def __mul__(self, other: "PCWord") -> "PCWord":
        return PCWord(self.blocks + other.blocks)

    def __invert__(self) -> "PCWord":
        out = []
        for b in reversed(self.blocks):
            out.append(("h", -b[1]) if b[0] == "h" else ("A", -b[1], -b[2]))
        return PCWord(out)

    def __pow__(self, k: int) -> "PCWord":
        base = self if k >= 0 else ~self
        k = abs(k)
        result = PCWord()
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, PCWord) and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash(self.blocks)

    def is_identity(self) -> bool:
        return not self.blocks

    def letters(self) -> List[Tuple[str, int]]:
        """Normal form as (letter, exponent) pairs with G1 before g in each block."""
        out = []
        for b in self.blocks:
            if b[0] == "h":
                out.append(("h", b[1]))
            else:
                if b[1]:
                    out.append(("G1", b[1]))
                if b[2]:
                    out.append(("g", b[2]))
        return out

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters())

    def __str__(self) -> str:
        if not self.blocks:
            return "1"
        return "*".join(l if e == 1 else f"{l}^{e}" for l, e in self.letters())

    def __repr__(self) -> str:
        return f"PCWord({self})"


def _pc_normalize(blocks) -> tuple:
    out: list = []
    for b in blocks:
        if b[0] == "h":
            if b[1] == 0:
                continue
        elif b[1] == 0 and b[2] == 0:
            continue
        if out and out[-1][0] == b[0]:
            top = out.pop()
            merged = ("h", top[1] + b[1]) if b[0] == "h" else ("A", top[1] + b[1], top[2] + b[2])
            trivial = merged[1] == 0 if b[0] == "h" else merged[1] == 0 and merged[2] == 0
            if not trivial:
                out.append(merged)
        else:
            out.append(tuple(b))
    return tuple(out)


class PCTarget:
    def identity(self):
        return PCWord()

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return ~a

    def pow(self, a, k):
        return a ** k

    def is_one(self, a):
        return a.is_identity()

    def from_word(self, w):
        raise ValueError("literal free-group words have no meaning in <G1, g> * <h>")


@dataclass
class SymbolicReport:
    n: int
    shape: str
    u_holds: bool
    v_holds: bool
    u_normal_form: str = ""
    expected_u: str = ""

    @property
    def holds(self) -> bool:
        return self.u_holds and self.v_holds


def conjugation_form_symbolic(n: int, shape: SeriesShape, phi_word: WordExpr = None) -> SymbolicReport:
    """Rewrite u_n and v_n in <G1, g> * <h> and compare with G1^(+-1) phi_n G1^(-+1)."""
    t = PCTarget()
    h, g, G1 = PCWord.h(), PCWord.g(), PCWord.G1()
    w = build_w(n, shape)
    phi = phi_word if phi_word is not None else phi_n(n, shape)
    p = eval_expr(phi, {"h": h, "g": g}, t)
    u = eval_expr(w, {"x": G1 * h * ~G1, "y": g}, t)
    v = eval_expr(w, {"x": ~G1 * h * G1, "y": g}, t)
    expected_u = G1 * p * ~G1
    expected_v = ~G1 * p * G1
    return SymbolicReport(n, str(shape), u == expected_u, v == expected_v, str(u), str(expected_u))


def verify_lemma5_symbolic(n: int, shape: SeriesShape) -> bool:
    return conjugation_form_symbolic(n, shape).holds


def commutator_form_symbolic(n: int, shape: SeriesShape) -> bool:
    """[phi_n, u_n] equals (1+g)[v_n, phi_n](1+g)^-1 after rewriting."""
    t = PCTarget()
    h, g, G1 = PCWord.h(), PCWord.g(), PCWord.G1()
    w = build_w(n, shape)
    p = eval_expr(phi_n(n, shape), {"h": h, "g": g}, t)
    u = eval_expr(w, {"x": G1 * h * ~G1, "y": g}, t)
    v = eval_expr(w, {"x": ~G1 * h * G1, "y": g}, t)
    lhs = p * u * ~p * ~u
    rhs = G1 * (v * p * ~v * ~p) * ~G1
    return lhs == rhs


# -- truncated-series evaluation --------------------------------------------


class ApproxSeriesTarget:
    """Evaluate in the series ring; inverses are truncated at ``depth``."""

    def __init__(self, twist: TwistMap = TRIVIAL_TWIST, depth: int = 4):
        if depth < 1:
            raise ValueError("depth must be at least 1")
        self.twist = twist
        self.depth = depth

    def identity(self):
        return ApproxSeries.exact(Series.one())

    def mul(self, a, b):
        return approx_mul(a, b, self.twist)

    def inv(self, a):
        return approx_inverse(a, self.depth, self.twist)

    def pow(self, a, k):
        return approx_power(a, k, self.depth, self.twist)

    def from_word(self, w):
        return ApproxSeries.exact(Series.monomial(w))

    def is_one(self, a):
        return a.is_one()


def _as_series(v) -> Series:
    if isinstance(v, Series):
        return v
    if isinstance(v, Word):
        return Series.monomial(v)
    raise TypeError(f"expected a Word or Series, got {type(v).__name__}")


def one_plus(g) -> Series:
    unit = Series.one() + _as_series(g)
    if unit.is_zero():
        raise ValueError("g = -1 makes 1 + g zero")
    return unit


def build_u_v(n: int, shape: SeriesShape, h, g, depth: int, twist: TwistMap = TRIVIAL_TWIST):
    """Return approximate (u_n(h, g), v_n(h, g))."""
    t = ApproxSeriesTarget(twist, depth)
    hs = ApproxSeries.exact(_as_series(h))
    gs = ApproxSeries.exact(_as_series(g))
    unit = ApproxSeries.exact(one_plus(g))
    unit_inv = t.inv(unit)
    x_u = t.mul(t.mul(unit, hs), unit_inv)
    x_v = t.mul(t.mul(unit_inv, hs), unit)
    w = build_w(n, shape)
    return eval_expr(w, {"x": x_u, "y": gs}, t), eval_expr(w, {"x": x_v, "y": gs}, t)


@dataclass
class NumericReport:
    n: int
    shape: str
    depth: int
    success: bool
    guarantee: Optional[str]
    offending_word: Optional[str] = None
    residual: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "shape": self.shape,
            "depth": self.depth,
            "success": self.success,
            "guarantee": self.guarantee,
            "offending_word": self.offending_word,
            "residual": self.residual,
        }


def verify_lemma5_numeric(
    n: int,
    shape: SeriesShape,
    h,
    g,
    depth: int,
    twist: TwistMap = TRIVIAL_TWIST,
    phi_word: WordExpr = None,
) -> NumericReport:
    """Compute (1+g) phi_n - u_n (1+g); success iff nothing survives below its guarantee."""
    t = ApproxSeriesTarget(twist, depth)
    hs = ApproxSeries.exact(_as_series(h))
    gs = ApproxSeries.exact(_as_series(g))
    unit = ApproxSeries.exact(one_plus(g))
    phi = phi_word if phi_word is not None else phi_n(n, shape)
    p = eval_expr(phi, {"h": hs, "g": gs}, t)
    u, _ = build_u_v(n, shape, h, g, depth, twist)
    delta = approx_sub(t.mul(unit, p), t.mul(u, unit))
    guarantee = None if delta.guarantee is None else format_word(delta.guarantee)
    if delta.terms.is_zero():
        return NumericReport(n, str(shape), depth, True, guarantee, None, approx_to_json(delta))
    return NumericReport(
        n, str(shape), depth, False, guarantee, format_word(d(delta.terms)), approx_to_json(delta)
    )


# -- the H_n chain -----------------------------------------------------------


def h_chain_generators(n: int, shape: SeriesShape, a: Word, sample: Iterable[Word]) -> List[Word]:
    """Generators of H_n from sampled elements b of H_(n-1): b a b^-1 or b^(l!)."""
    if n < 1:
        raise ValueError("H_n generators are defined for n >= 1")
    lvl = shape.level(n)
    if lvl.is_normal:
        return [b * a * ~b for b in sample]
    k = factorial(lvl.index)
    return [b ** k for b in sample]


def conjugation_rewrite(a: Word, b: Word, c: Word) -> bool:
    """c (b a b^-1) c^-1 == (c b c^-1) a (c b c^-1)^-1."""
    cb = c * b * ~c
    return c * (b * a * ~b) * ~c == cb * a * ~cb


def power_rewrite(b: Word, c: Word, l: int) -> bool:
    """(c b c^-1)^(l!) == c b^(l!) c^-1."""
    k = factorial(l)
    return (c * b * ~c) ** k == c * b ** k * ~c


# -- generalized identities --------------------------------------------------


CONJUGATE_PRODUCT_WORD = parse_identity("?x*a*?x^-1*a*?x*a^-1*?x^-1*a^-1")


def power_commutator_word(n: int) -> WordExpr:
    """x^n y^n x^-n y^-n."""
    x, y = Var("x"), Var("y")
    return Product((Power(x, n), Power(y, n), Power(x, -n), Power(y, -n)))


@dataclass
class IdentityVerdict:
    holds: bool
    trials: int
    counterexample: Optional[dict] = None
    value: object = None

    def __bool__(self) -> bool:
        return self.holds


def _is_one(target, value) -> bool:
    if hasattr(target, "is_one"):
        return target.is_one(value)
    return value == target.identity()


def check_identity(
    e: WordExpr,
    sampler: Callable[[int], Mapping[str, object]],
    trials: int,
    target=None,
) -> IdentityVerdict:
    """Evaluate ``e`` on ``trials`` sampled assignments; stop at the first non-identity."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    target = target or FreeGroupTarget()
    for i in range(trials):
        env = dict(sampler(i))
        value = eval_expr(e, env, target)
        if not _is_one(target, value):
            return IdentityVerdict(False, i + 1, env, value)
    return IdentityVerdict(True, trials)
