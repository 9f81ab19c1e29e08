"""Property suites and the r = 1 construction demo.

Each suite draws its samples from ``random.Random(f"{seed}:{name}")`` so the
results depend only on the configuration. Reports are plain dicts with a
stable key order; nothing time-dependent is recorded.
"""

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import expr as E
from .field import TwistMap
from .free_group import OrderRelation, Word, compare, format_word
from .identities import (
    CONJUGATE_PRODUCT_WORD,
    NORMAL,
    ApproxSeriesTarget,
    all_shapes,
    build_w,
    check_identity,
    finite_index,
    h_chain_generators,
    conjugation_rewrite,
    power_rewrite,
    conjugation_form_symbolic,
    parse_shape,
    power_commutator_word,
    commutator_form_symbolic,
    verify_lemma5_numeric,
)
from .parsing import parse_word
from .sampling import random_field_element, random_series, random_unit, random_word
from .series import (
    ApproxSeries,
    Series,
    approx_inverse,
    approx_mul,
    d,
    format_series,
    inverse_residual_guarantees,
    leading,
    mul,
    truncated_inverse,
)
from .subgroups import (
    COSET_NAMES,
    H_IMAGE,
    ID,
    S3,
    THREE_CYCLE,
    TRANSPOSITION,
    PermutationTarget,
    coset_label,
    in_N,
    make_maximal_subgroup,
    poincare_check,
)

SUITES = ("order", "ring", "d-hom", "inverse", "lemma4", "lemma5", "identities")

DEFAULT_SAMPLES = {
    "order": 1000,
    "d-hom": 1000,
    "ring": 300,
    "inverse": 200,
    "lemma4": 500,
    "lemma5": 20,
    "identities": 200,
    "demo": 1000,
}


@dataclass
class RunConfig:
    weights: Dict[int, int] = field(default_factory=lambda: {1: 1, 2: -2})
    depth: int = 4
    samples: Optional[int] = None
    seed: int = 0
    x: str = "x1^2*x2"
    desc: str = "F3"
    n: Optional[int] = None

    @property
    def twist(self) -> TwistMap:
        return TwistMap(self.weights)

    def count(self, suite: str) -> int:
        return DEFAULT_SAMPLES[suite] if self.samples is None else self.samples

    def rng(self, suite: str) -> random.Random:
        return random.Random(f"{self.seed}:{suite}")

    def to_json(self) -> dict:
        return {
            "weights": {str(k): v for k, v in sorted(self.weights.items())},
            "depth": self.depth,
            "samples": self.samples,
            "seed": self.seed,
            "x": self.x,
            "desc": self.desc,
            "n": self.n,
        }


@dataclass
class Assertion:
    name: str
    claim: str
    passed: int = 0
    total: int = 0
    failures: List[str] = field(default_factory=list)

    def record(self, ok: bool, detail: Callable[[], str] = None) -> None:
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < 5:
            self.failures.append(detail() if detail else "")

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "passed": self.passed,
            "total": self.total,
            "ok": self.ok,
            "failures": self.failures,
        }


@dataclass
class SuiteResult:
    name: str
    assertions: List[Assertion]
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(a.ok for a in self.assertions)

    def assertion(self, name: str) -> Assertion:
        return next(a for a in self.assertions if a.name == name)

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "ok": self.ok,
            "assertions": [a.to_json() for a in self.assertions],
            "info": self.info,
        }


def _le(a: Word, b: Word) -> bool:
    return compare(a, b) is not OrderRelation.GREATER


# -- order -------------------------------------------------------------------


def order_suite(cfg: RunConfig) -> SuiteResult:
    rng = cfg.rng("order")
    total = Assertion("totality", "exactly one of a<b, a=b, a>b; a=b iff identical reduced words")
    anti = Assertion("antisymmetry", "a<=b and b<=a imply a=b")
    trans = Assertion("transitivity", "a<=b and b<=c imply a<=c")
    right = Assertion("right-invariance", "a<=b implies ac<=bc")
    left = Assertion("left-invariance", "a<=b implies ca<=cb")
    cone = Assertion("positive-cone", "a<b iff 1<a^-1 b iff 1<b a^-1")
    one = Word.identity()
    for _ in range(cfg.count("order")):
        a, b, c = (random_word(rng, 8, (1, 2, 3, 4, 5)) for _ in range(3))
        ab, ba = compare(a, b), compare(b, a)
        total.record(
            ab is ba.reversed() and ((ab is OrderRelation.EQUAL) == (a == b)),
            lambda: f"{a} vs {b}: {ab.value}/{ba.value}",
        )
        anti.record(not (_le(a, b) and _le(b, a)) or a == b, lambda: f"{a}, {b}")
        ok = True
        for p, q, r in itertools.permutations((a, b, c)):
            if _le(p, q) and _le(q, r) and not _le(p, r):
                ok = False
        trans.record(ok, lambda: f"{a}, {b}, {c}")
        right.record(compare(a * c, b * c) is ab, lambda: f"a={a} b={b} c={c}")
        left.record(compare(c * a, c * b) is ab, lambda: f"a={a} b={b} c={c}")
        cone.record(
            compare(one, ~a * b) is ab and compare(one, b * ~a) is ab,
            lambda: f"a={a} b={b}",
        )
    return SuiteResult("order", [total, anti, trans, right, left, cone])


# -- series ring -------------------------------------------------------------


def d_hom_suite(cfg: RunConfig) -> SuiteResult:
    rng = cfg.rng("d-hom")
    twist = cfg.twist
    mult = Assertion("d-multiplicative", "d(ab) = d(a) d(b) for nonzero a, b")
    lead = Assertion("leading-coefficient", "coefficient of d(a)d(b) in ab is a_u Phi_u(b_v), nonzero")
    lower = Assertion("lower-bound", "d(a)d(b) <= t for every t in supp(ab) (brute force)")
    for _ in range(cfg.count("d-hom")):
        a = random_series(rng, 5, 4, (1, 2, 3, 4))
        b = random_series(rng, 5, 4, (1, 2, 3, 4))
        ab = mul(a, b, twist)
        (u, au), (v, bv) = leading(a), leading(b)
        uv = u * v
        mult.record(not ab.is_zero() and d(ab) == uv, lambda: f"a={a} b={b}")
        expected = au * twist.act(u, bv)
        lead.record(bool(expected) and ab.coefficient(uv) == expected, lambda: f"a={a} b={b}")
        lower.record(all(_le(uv, t) for t in ab.terms), lambda: f"a={a} b={b}")
    return SuiteResult("d-hom", [mult, lead, lower])


def ring_suite(cfg: RunConfig) -> SuiteResult:
    rng = cfg.rng("ring")
    twist = cfg.twist
    assoc = Assertion("associativity", "(ab)c = a(bc)")
    left = Assertion("left-distributivity", "a(b+c) = ab + ac")
    right = Assertion("right-distributivity", "(a+b)c = ac + bc")
    unit = Assertion("identity", "1a = a1 = a")
    for _ in range(cfg.count("ring")):
        a, b, c = (random_series(rng, 3, 3, (1, 2, 3)) for _ in range(3))
        assoc.record(mul(mul(a, b, twist), c, twist) == mul(a, mul(b, c, twist), twist),
                     lambda: f"a={a} b={b} c={c}")
        left.record(mul(a, b + c, twist) == mul(a, b, twist) + mul(a, c, twist),
                    lambda: f"a={a} b={b} c={c}")
        right.record(mul(a + b, c, twist) == mul(a, c, twist) + mul(b, c, twist),
                     lambda: f"a={a} b={b} c={c}")
        one = Series.one()
        unit.record(mul(one, a, twist) == a and mul(a, one, twist) == a, lambda: f"a={a}")
    return SuiteResult("ring", [assoc, left, right, unit])


def _min_support(s: Series) -> Optional[Word]:
    return None if s.is_zero() else d(s)


def inverse_suite(cfg: RunConfig) -> SuiteResult:
    rng = cfg.rng("inverse")
    twist = cfg.twist
    left = Assertion("left-residual", "a*inv_n(a) - 1 has support >= u d(eps)^(n+1) u^-1")
    right = Assertion("right-residual", "inv_n(a)*a - 1 has support >= d(eps)^(n+1)")
    exact_left = Assertion("left-residual-exact", "min supp(a*inv_n(a) - 1) = u d(eps)^(n+1) u^-1")
    strict = Assertion("strict-increase", "the residual bound strictly increases with n")
    tail = Assertion("value-tail", "inv_n(a) and inv_(n+2)(a) agree below the guarantee of inv_n(a)")
    single_bound_misses = 0
    one = Series.one()
    for _ in range(cfg.count("inverse")):
        a = random_series(rng, 4, 3, (1, 2, 3))
        previous = None
        invs = [truncated_inverse(a, n, twist) for n in range(8)]
        for n in range(6):
            inv = invs[n]
            lb, rb = inverse_residual_guarantees(a, n, twist)
            res_l = mul(a, inv.terms, twist) - one
            res_r = mul(inv.terms, a, twist) - one
            if lb is None:
                left.record(res_l.is_zero(), lambda: f"a={a} n={n}")
                right.record(res_r.is_zero(), lambda: f"a={a} n={n}")
                exact_left.record(res_l.is_zero(), lambda: f"a={a} n={n}")
                tail.record(inv.guarantee is None and invs[n + 2].terms == inv.terms, lambda: f"a={a}")
                continue
            ml, mr = _min_support(res_l), _min_support(res_r)
            left.record(ml is None or _le(lb, ml), lambda: f"a={a} n={n} min={ml} bound={lb}")
            right.record(mr is None or _le(rb, mr), lambda: f"a={a} n={n} min={mr} bound={rb}")
            exact_left.record(ml == lb, lambda: f"a={a} n={n} min={ml} bound={lb}")
            if mr is not None and not _le(lb, mr):
                single_bound_misses += 1
            if previous is not None:
                strict.record(compare(previous, lb) is OrderRelation.LESS,
                              lambda: f"a={a} n={n} {previous} !< {lb}")
            previous = lb
            diff = invs[n + 2].terms - inv.terms
            tail.record(diff.is_zero() or _le(inv.guarantee, d(diff)),
                        lambda: f"a={a} n={n} diff min {d(diff)} below {inv.guarantee}")
    info = {"right_residual_below_left_bound": single_bound_misses}
    return SuiteResult("inverse", [left, right, exact_left, strict, tail], info)


# -- identities and recursions --------------------------------------------------


def chain_suite(cfg: RunConfig) -> SuiteResult:
    rng = cfg.rng("lemma4")
    conj = Assertion("conjugation-rewrite", "c(bab^-1)c^-1 = (cbc^-1) a (cbc^-1)^-1 whenever ac = ca")
    powr = Assertion("power-rewrite", "(cbc^-1)^(l!) = c b^(l!) c^-1")
    chain = Assertion("chain-generators", "H_n generators are bab^-1 (normal) or b^(l!) (index l)")
    normal_shape = parse_shape("N")
    for i in range(cfg.count("lemma4")):
        # the rewrite needs c to commute with a: in a free group both are
        # powers of a common root
        root = random_word(rng, 4, (1, 2, 3, 4, 5), min_length=1)
        a = root ** rng.choice((-2, -1, 1, 2))
        c = root ** rng.randint(-2, 2)
        b = random_word(rng, 8, (1, 2, 3, 4, 5))
        l = 2 + i % 2
        conj.record(a * c == c * a and conjugation_rewrite(a, b, c), lambda: f"a={a} b={b} c={c}")
        powr.record(power_rewrite(b, c, l), lambda: f"b={b} c={c} l={l}")
        gens_n = h_chain_generators(1, normal_shape, a, [b, c])
        gens_f = h_chain_generators(1, parse_shape(f"F{l}"), a, [b, c])
        k = 2 if l == 2 else 6
        chain.record(gens_n == [b * a * ~b, c * a * ~c] and gens_f == [b ** k, c ** k],
                     lambda: f"a={a} b={b} c={c}")
    return SuiteResult("lemma4", [conj, powr, chain])


def conjugation_suite(cfg: RunConfig) -> SuiteResult:
    rng = cfg.rng("lemma5")
    twist = cfg.twist
    levels = [NORMAL, finite_index(2), finite_index(3)]
    symbolic = Assertion("symbolic", "u_n = G1 phi_n G1^-1 and v_n = G1^-1 phi_n G1 where G1 = 1+g commutes with g")
    alpha = Assertion("commutator-form", "[phi_n, u_n] = (1+g)[v_n, phi_n](1+g)^-1")
    numeric = Assertion("numeric", "(1+g) phi_n - u_n (1+g) vanishes below the propagated guarantee")
    control = Assertion("negative-control", "replacing phi_1 by h g h leaves a term below the guarantee")
    if cfg.n is not None:
        shapes = [parse_shape(cfg.desc)]
        ns = [cfg.n]
    else:
        shapes = [s for r in range(1, 5) for s in all_shapes(r, levels)]
        ns = list(range(5))
    for shape in shapes:
        for n in ns:
            rep = conjugation_form_symbolic(n, shape)
            symbolic.record(rep.holds, lambda: f"n={n} shape={shape}: {rep.u_normal_form} vs {rep.expected_u}")
            alpha.record(commutator_form_symbolic(n, shape), lambda: f"n={n} shape={shape}")
    numeric_cases = ["N", "F2", "F3", "N,N", "N,F2", "F2,N"]
    reports = []
    for i in range(cfg.count("lemma5")):
        if cfg.n is not None:
            shape, n = parse_shape(cfg.desc), cfg.n
        else:
            shape = parse_shape(numeric_cases[i % len(numeric_cases)])
            n = shape.depth
        h = random_word(rng, 3, (1, 2, 3), min_length=1)
        g = random_word(rng, 3, (1, 2, 3), min_length=1)
        rep = verify_lemma5_numeric(n, shape, h, g, cfg.depth, twist)
        numeric.record(rep.success, lambda: f"h={h} g={g} n={n} shape={shape} offending={rep.offending_word}")
        reports.append({"h": format_word(h), "g": format_word(g), "n": n, "shape": str(shape),
                        "success": rep.success, "guarantee": rep.guarantee})
    wrong = E.Product((E.Var("h"), E.Var("g"), E.Var("h")))
    neg = verify_lemma5_numeric(1, parse_shape("N"), Word.gen(1), Word.gen(3), cfg.depth, twist, phi_word=wrong)
    control.record(not neg.success, lambda: "mutated phi_1 was not detected")
    info = {"numeric_cases": reports, "negative_control_offending_word": neg.offending_word}
    return SuiteResult("lemma5", [symbolic, alpha, numeric, control], info)


def random_expr(rng: random.Random, names=("x", "y", "z"), depth: int = 3) -> E.WordExpr:
    if depth == 0 or rng.random() < 0.25:
        return E.Var(rng.choice(names))
    kind = rng.randrange(4)
    if kind == 0:
        return E.Product(tuple(random_expr(rng, names, depth - 1) for _ in range(rng.randint(2, 3))))
    if kind == 1:
        return E.Inverse(random_expr(rng, names, depth - 1))
    if kind == 2:
        return E.Power(random_expr(rng, names, depth - 1), rng.choice((-2, 2, 3)))
    return E.Commutator(random_expr(rng, names, depth - 1), random_expr(rng, names, depth - 1))


def identities_suite(cfg: RunConfig) -> SuiteResult:
    rng = cfg.rng("identities")
    x_word = parse_word(cfg.x)
    phi = make_maximal_subgroup(x_word)
    commuting = Assertion("conjugate-word-commuting", "x a x^-1 a x a^-1 x^-1 a^-1 = 1 when x and a commute")
    free = Assertion("conjugate-word-free", "the same word is not 1 for a = x1, x = x2 in the free group")
    s3 = Assertion("power-commutator-S3", "x^6 y^6 x^-6 y^-6 = 1 on all 36 pairs of S3")
    functorial = Assertion("functoriality-phi", "phi(eval in G) = eval in S3 of the phi-images")
    d_functorial = Assertion("functoriality-d", "d(eval on monomials) = eval on their words")
    cascade = Assertion("membership-cascade", "for shape F3 and b in N, w_n(a, b) lies in N for n >= 1")

    count = cfg.count("identities")
    for _ in range(count):
        base = random_word(rng, 4, (1, 2, 3), min_length=1)
        i, j = rng.randint(-3, 3), rng.randint(-3, 3)
        verdict = check_identity(CONJUGATE_PRODUCT_WORD, lambda _k: {"x": base ** i, "a": base ** j}, 1)
        commuting.record(verdict.holds, lambda: f"x={base ** i} a={base ** j}")
    verdict = check_identity(CONJUGATE_PRODUCT_WORD, lambda _k: {"x": Word.gen(2), "a": Word.gen(1)}, 1)
    free.record(not verdict.holds, lambda: "no counterexample on free samples")
    pairs = list(itertools.product(sorted(S3, key=lambda p: p.images), repeat=2))
    verdict = check_identity(power_commutator_word(6), lambda k: {"x": pairs[k][0], "y": pairs[k][1]},
                             len(pairs), PermutationTarget())
    s3.record(verdict.holds and verdict.trials == 36, lambda: f"failed at {verdict.counterexample}")

    gens = (1, 2, phi.lambda_index, phi.mu_index)
    target_g, target_s3 = E.FreeGroupTarget(), PermutationTarget(phi)
    for _ in range(count):
        e = random_expr(rng)
        env = {v: random_word(rng, 3, gens) for v in ("x", "y", "z")}
        in_g = E.eval_expr(e, env, target_g)
        in_s3 = E.eval_expr(e, {k: phi(w) for k, w in env.items()}, target_s3)
        functorial.record(phi(in_g) == in_s3, lambda: f"e={e} env={env}")

    t_series = ApproxSeriesTarget(cfg.twist, cfg.depth)
    for _ in range(max(1, count // 4)):
        e = random_expr(rng, depth=2)
        env_w = {v: random_word(rng, 2, (1, 2, 3)) for v in ("x", "y", "z")}
        env_s = {k: ApproxSeries.exact(Series.monomial(w, random_field_element(rng))) for k, w in env_w.items()}
        value = E.eval_expr(e, env_s, t_series)
        d_functorial.record(d(value) == E.eval_expr(e, env_w, target_g), lambda: f"e={e} env={env_w}")

    shape = parse_shape("F3")
    for _ in range(max(1, count // 2)):
        a = random_unit(rng, 3, 3, gens)
        b = random_unit(rng, 3, 3, gens)
        if not in_N(phi, b):
            continue
        pa, pb = phi(d(a)), phi(d(b))
        ok = True
        for n in range(1, 4):
            ok &= E.eval_expr(build_w(n, shape), {"x": pa, "y": pb}, PermutationTarget()) in H_IMAGE
        cascade.record(ok, lambda: f"a={a} b={b}")
    return SuiteResult("identities", [commuting, free, s3, functorial, d_functorial, cascade])


SUITE_FUNCTIONS = {
    "order": order_suite,
    "ring": ring_suite,
    "d-hom": d_hom_suite,
    "inverse": inverse_suite,
    "lemma4": chain_suite,
    "lemma5": conjugation_suite,
    "identities": identities_suite,
}


def run_suite(name: str, cfg: RunConfig) -> List[SuiteResult]:
    if name == "all":
        return [SUITE_FUNCTIONS[n](cfg) for n in SUITES]
    if name not in SUITE_FUNCTIONS:
        raise KeyError(name)
    return [SUITE_FUNCTIONS[name](cfg)]


# -- the r = 1 construction ----------------------------------------------------


def nonnormality_witness(phi, units: List[Series], twist: TwistMap, depth: int):
    """Find a in the sample with phi(d(a)) = (1 2 3) and b in N with phi(d(b)) = (1 2).

    The conjugate a b a^-1 is computed with a truncated inverse; its leading
    word is exact because d is multiplicative. Falls back to the monomials
    x_mu, x_lambda when the sample has no suitable pair.
    """
    a = next((u for u in units if phi(d(u)) == THREE_CYCLE), None)
    b = next((u for u in units if phi(d(u)) == TRANSPOSITION), None)
    source = "sample"
    if a is None or b is None:
        a, b = Series.monomial(phi.x_mu()), Series.monomial(phi.x_lambda())
        source = "monomials"
    ea, eb = ApproxSeries.exact(a), ApproxSeries.exact(b)
    conj = approx_mul(approx_mul(ea, eb, twist), approx_inverse(ea, depth, twist), twist)
    images = [phi(d(a)), phi(d(b)), phi(d(conj))]
    return {
        "source": source,
        "alpha": format_series(a),
        "beta": format_series(b),
        "conjugate_leading_word": format_word(d(conj)),
        "phi_images": [str(p) for p in images],
        "beta_in_N": in_N(phi, b),
        "conjugate_in_N": in_N(phi, conj),
    }


def demo_theorem(cfg: RunConfig) -> dict:
    twist = cfg.twist
    rng = cfg.rng("demo")
    x_word = parse_word(cfg.x)
    phi = make_maximal_subgroup(x_word)
    gens = tuple(sorted({1, 2, 3, phi.lambda_index, phi.mu_index}))
    count = cfg.count("demo")
    units = [random_unit(rng, 4, 3, gens) for _ in range(count)]

    dhom = Assertion("d-multiplicative", "d(ab) = d(a) d(b) on sampled units")
    for a, b in zip(units, units[1:] + units[:1]):
        if len(units) < 2:
            break
        dhom.record(d(mul(a, b, twist)) == d(a) * d(b), lambda: f"a={a} b={b}")

    labels = sorted({coset_label(phi, a) for a in units})
    cosets = Assertion("three-cosets", "exactly the 3 right cosets of N are realized")
    if units:
        cosets.record(labels == sorted(COSET_NAMES.values()), lambda: f"realized {labels}")

    poincare = Assertion("poincare", "a^6 lies in N for every unit a (index 3, 3! = 6)")
    for a in units:
        poincare.record(poincare_check(phi, a, twist), lambda: f"a={a}")

    contains_x = Assertion("x-in-H", "phi(x) = Id, so x lies in H")
    contains_x.record(phi(x_word) == ID, lambda: f"phi(x) = {phi(x_word)}")

    witness_ok = Assertion("non-normality", "b in N and a b a^-1 not in N with images ((1 2 3), (1 2), (2 3))")
    witness = None
    if units:
        witness = nonnormality_witness(phi, units, twist, cfg.depth)
        witness_ok.record(
            witness["phi_images"] == ["(1 2 3)", "(1 2)", "(2 3)"]
            and witness["beta_in_N"] and not witness["conjugate_in_N"],
            lambda: f"{witness}",
        )

    assertions = [dhom, cosets, witness_ok, poincare, contains_x]
    return {
        "config": cfg.to_json(),
        "x": format_word(x_word),
        "lambda": phi.lambda_index,
        "mu": phi.mu_index,
        "samples": count,
        "coset_labels_realized": labels,
        "witness": witness,
        "assertions": [a.to_json() for a in assertions],
        "ok": bool(units) and all(a.ok for a in assertions),
    }
