"""The index-3 subgroup H of the free group and its pullback N = d^-1(H).

H is the preimage of {Id, (1 2)} under a homomorphism onto S3 that sends
two generators not occurring in a chosen word x to (1 2) and (1 2 3) and
kills every other generator. Membership of a series in N only depends on the
S3 image of its Magnus-least word.

Permutations compose right to left: ``(p * q)(i) = p(q(i))``.
"""

from dataclasses import dataclass
from itertools import permutations
from typing import FrozenSet, Iterable, Optional, Tuple

from .errors import MalformedCertificate, NotASubgroup
from .free_group import Word
from .series import Series, TRIVIAL_TWIST, d, power


class Permutation:
    """A permutation of {1, 2, 3} given by its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int] = (1, 2, 3)):
        images = tuple(int(i) for i in images)
        if sorted(images) != [1, 2, 3]:
            raise ValueError(f"not a permutation of {{1,2,3}}: {images}")
        self.images = images

    @classmethod
    def identity(cls) -> "Permutation":
        return ID

    @classmethod
    def cycle(cls, *points: int) -> "Permutation":
        images = [1, 2, 3]
        for a, b in zip(points, points[1:] + points[:1]):
            images[a - 1] = b
        return cls(images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(self(other(i)) for i in (1, 2, 3))

    def __invert__(self) -> "Permutation":
        out = [0, 0, 0]
        for i, j in enumerate(self.images, start=1):
            out[j - 1] = i
        return Permutation(out)

    inverse = __invert__

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else ~self
        out = ID
        for _ in range(abs(k) % 6):
            out = out * base
        return out

    def order(self) -> int:
        p, k = self, 1
        while p != ID:
            p, k = p * self, k + 1
        return k

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def cycle_notation(self) -> str:
        seen, cycles = set(), []
        for start in (1, 2, 3):
            if start in seen:
                continue
            cyc, i = [], start
            while i not in seen:
                seen.add(i)
                cyc.append(i)
                i = self(i)
            if len(cyc) > 1:
                cycles.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(cycles) or "Id"

    __str__ = cycle_notation

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_notation()})"


ID = Permutation((1, 2, 3))
TRANSPOSITION = Permutation.cycle(1, 2)
THREE_CYCLE = Permutation.cycle(1, 2, 3)
S3 = frozenset(Permutation(p) for p in permutations((1, 2, 3)))
H_IMAGE = frozenset({ID, TRANSPOSITION})
COSET_REPRESENTATIVES = (ID, THREE_CYCLE, THREE_CYCLE * THREE_CYCLE)
COSET_NAMES = {ID: "H", THREE_CYCLE: "H(1 2 3)", THREE_CYCLE * THREE_CYCLE: "H(1 3 2)"}


class PermutationTarget:
    """Evaluation target for word expressions in S3."""

    def __init__(self, hom: Optional["GroupHomToS3"] = None):
        self.hom = hom

    def identity(self):
        return ID

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return ~a

    def pow(self, a, k):
        return a ** k

    def from_word(self, w):
        if self.hom is None:
            raise ValueError("literal words need a homomorphism to S3")
        return self.hom(w)


@dataclass(frozen=True)
class GroupHomToS3:
    """x_lambda -> (1 2), x_mu -> (1 2 3), every other generator -> Id."""

    lambda_index: int
    mu_index: int

    def __post_init__(self):
        if self.lambda_index == self.mu_index or min(self.lambda_index, self.mu_index) < 1:
            raise ValueError("lambda and mu must be distinct positive indices")

    def __call__(self, w: Word) -> Permutation:
        out = ID
        for gen, exp in w.syllables:
            if gen == self.lambda_index:
                out = out * TRANSPOSITION ** exp
            elif gen == self.mu_index:
                out = out * THREE_CYCLE ** exp
        return out

    def x_lambda(self) -> Word:
        return Word.gen(self.lambda_index)

    def x_mu(self) -> Word:
        return Word.gen(self.mu_index)


def phi_eval(phi: GroupHomToS3, w: Word) -> Permutation:
    return phi(w)


def make_maximal_subgroup(x: Word) -> GroupHomToS3:
    """Pick the two smallest generator indices not occurring in ``x``."""
    used = x.generators()
    fresh = []
    i = 1
    while len(fresh) < 2:
        if i not in used:
            fresh.append(i)
        i += 1
    return GroupHomToS3(fresh[0], fresh[1])


def in_H(phi: GroupHomToS3, w: Word) -> bool:
    return phi(w) in H_IMAGE


def in_N(phi: GroupHomToS3, alpha) -> bool:
    return in_H(phi, d(alpha))


def coset_of_permutation(p: Permutation) -> Permutation:
    """Canonical representative r with p in H r."""
    for r in COSET_REPRESENTATIVES:
        if p * ~r in H_IMAGE:
            return r
    raise AssertionError("unreachable: three right cosets cover S3")


def coset_label(phi: GroupHomToS3, alpha) -> str:
    """Right coset of N containing ``alpha``: one of H, H(1 2 3), H(1 3 2)."""
    return COSET_NAMES[coset_of_permutation(phi(d(alpha)))]


def coset_action(label: str, p: Permutation) -> str:
    """Label of (coset ``label``) * p; S3 acts on the three right cosets."""
    rep = next(r for r, name in COSET_NAMES.items() if name == label)
    return COSET_NAMES[coset_of_permutation(rep * p)]


def is_subgroup(s: Iterable[Permutation]) -> bool:
    s = frozenset(s)
    return ID in s and all(a * ~b in s for a in s for b in s)


def core_in_S3(s: Iterable[Permutation]) -> FrozenSet[Permutation]:
    """Largest normal subgroup of S3 inside ``s``: the intersection of its conjugates."""
    s = frozenset(s)
    if not s or not is_subgroup(s):
        raise NotASubgroup(f"not a subgroup of S3: {sorted(str(p) for p in s)}")
    core = s
    for g in S3:
        core = core & frozenset(g * p * ~g for p in s)
    return core


def generated_subgroup(gens: Iterable[Permutation]) -> FrozenSet[Permutation]:
    out = {ID}
    frontier = list(gens)
    while frontier:
        p = frontier.pop()
        if p in out:
            continue
        out.add(p)
        frontier.extend(p * q for q in list(out))
        frontier.extend(q * p for q in list(out))
    return frozenset(out)


def poincare_check(phi: GroupHomToS3, alpha: Series, twist=TRIVIAL_TWIST) -> bool:
    """Is alpha^6 in N? Index 3 forces yes, since 3! = 6."""
    return in_N(phi, power(alpha, 6, twist))


# -- normal-closure certificates -------------------------------------------
#
# <x>_0 = G and <x>_n is the normal closure of x inside <x>_(n-1). Deciding
# membership is out of reach, so elements of <x>_n are carried as trees that
# are correct by construction; each node states the level it claims.


class ClosureExpression:
    level: int

    def evaluate(self, x: Word) -> Word:
        raise NotImplementedError


@dataclass(frozen=True)
class Base(ClosureExpression):
    """The word x itself, which lies in every <x>_n."""

    level: int = 0


@dataclass(frozen=True)
class Element(ClosureExpression):
    """An arbitrary word: only certified to lie in <x>_0 = G."""

    word: Word
    level: int = 0


@dataclass(frozen=True)
class Conj(ClosureExpression):
    """h e h^-1 with h in <x>_(n-1) and e in <x>_n."""

    conjugator: ClosureExpression
    core: ClosureExpression
    level: int = 1


@dataclass(frozen=True)
class ProductCert(ClosureExpression):
    factors: Tuple[ClosureExpression, ...]
    level: int = 0


@dataclass(frozen=True)
class InverseCert(ClosureExpression):
    child: ClosureExpression
    level: int = 0


def _check(e: ClosureExpression) -> None:
    if e.level < 0:
        raise MalformedCertificate(f"negative level in {e!r}")
    if isinstance(e, Base):
        return
    if isinstance(e, Element):
        if e.level != 0:
            raise MalformedCertificate(
                f"a bare word is only certified at level 0, not {e.level}"
            )
        return
    if isinstance(e, Conj):
        _check(e.conjugator)
        _check(e.core)
        if e.level < 1:
            raise MalformedCertificate("a conjugate certifies level >= 1")
        if e.conjugator.level < e.level - 1:
            raise MalformedCertificate(
                f"conjugator at level {e.conjugator.level} cannot certify level {e.level}"
            )
        if e.core.level < e.level:
            raise MalformedCertificate(
                f"conjugated element at level {e.core.level} cannot certify level {e.level}"
            )
        return
    if isinstance(e, ProductCert):
        for f in e.factors:
            _check(f)
            if f.level < e.level:
                raise MalformedCertificate(
                    f"factor at level {f.level} cannot certify level {e.level}"
                )
        return
    if isinstance(e, InverseCert):
        _check(e.child)
        if e.child.level < e.level:
            raise MalformedCertificate(
                f"child at level {e.child.level} cannot certify level {e.level}"
            )
        return
    raise MalformedCertificate(f"unknown certificate node {e!r}")


def closure_eval(e: ClosureExpression, x: Word) -> Word:
    """Evaluate a certificate to the reduced word it denotes (an element of <x>_level)."""
    _check(e)
    return _eval_cert(e, x)


def _eval_cert(e: ClosureExpression, x: Word) -> Word:
    if isinstance(e, Base):
        return x
    if isinstance(e, Element):
        return e.word
    if isinstance(e, Conj):
        h = _eval_cert(e.conjugator, x)
        return h * _eval_cert(e.core, x) * ~h
    if isinstance(e, ProductCert):
        out = Word.identity()
        for f in e.factors:
            out = out * _eval_cert(f, x)
        return out
    if isinstance(e, InverseCert):
        return ~_eval_cert(e.child, x)
    raise MalformedCertificate(f"unknown certificate node {e!r}")


def certified_series(e: ClosureExpression, x: Word, tail: Series = None, coeff=1) -> Series:
    """A series in N_level = d^-1(<x>_level): leading word from the certificate.

    ``tail`` terms are only kept if they sit above the certified word, so the
    certificate stays the Magnus-least word of the support.
    """
    from .free_group import OrderRelation, compare

    w = closure_eval(e, x)
    out = Series.monomial(w, coeff)
    if tail is not None:
        keep = {t: c for t, c in tail.terms.items() if compare(w, t) is OrderRelation.LESS}
        out = out + Series(keep)
    return out
