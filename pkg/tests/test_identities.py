import itertools
import random

import pytest

from mnseries import expr as E
from mnseries.expr import FreeGroupTarget, eval_expr, format_expr
from mnseries.field import TwistMap
from mnseries.free_group import OrderRelation, Word, compare
from mnseries.identities import (
    CONJUGATE_PRODUCT_WORD,
    NORMAL,
    ApproxSeriesTarget,
    PCTarget,
    PCWord,
    SeriesShape,
    all_shapes,
    build_u_v,
    build_w,
    check_identity,
    finite_index,
    h_chain_generators,
    conjugation_rewrite,
    power_rewrite,
    conjugation_form_symbolic,
    one_plus,
    parse_shape,
    phi_n,
    power_commutator_word,
    commutator_form_symbolic,
    verify_lemma5_numeric,
    verify_lemma5_symbolic,
)
from mnseries.parsing import parse_identity, parse_word
from mnseries.sampling import random_unit, random_word
from mnseries.series import ApproxSeries, Series, d
from mnseries.subgroups import (
    ID,
    S3,
    THREE_CYCLE,
    TRANSPOSITION,
    PermutationTarget,
    in_N,
    make_maximal_subgroup,
)

X1, X2 = Word.gen(1), Word.gen(2)
TWIST = TwistMap({1: 1, 2: -2})
LEVELS = [NORMAL, finite_index(2), finite_index(3)]


def free(e, **env):
    return eval_expr(e, env, FreeGroupTarget())


class TestShapes:
    def test_parse(self):
        shape = parse_shape("N,F2,N")
        assert shape.levels == (NORMAL, finite_index(2), NORMAL)
        assert str(shape) == "N,F2,N"
        assert shape.level(7) == NORMAL

    def test_bad(self):
        with pytest.raises(ValueError):
            parse_shape("N,G2")
        with pytest.raises(ValueError):
            finite_index(1)

    def test_counts(self):
        assert len(all_shapes(4, LEVELS)) == 81
        assert sum(len(all_shapes(r, LEVELS)) for r in range(1, 5)) == 120


class TestRecursions:
    def test_w(self):
        assert build_w(0, parse_shape("N")) == E.Var("x")
        assert free(build_w(1, parse_shape("N")), x=X1, y=X2) == parse_word("[x1,x2]")
        assert free(build_w(1, parse_shape("F3")), x=X1, y=X2) == X1 ** 6

    def test_w_beyond_depth_is_commutator(self):
        w = free(build_w(2, parse_shape("F2")), x=X1, y=X2)
        assert w == parse_word("[x1^2,x2]")

    def test_phi(self):
        assert phi_n(0, parse_shape("N")) == E.Var("h")
        assert free(phi_n(1, parse_shape("N")), h=X1, g=X2) == parse_word("x1*x2*x1^-1*x2^-1")
        assert free(phi_n(1, parse_shape("F2")), h=X1, g=X2) == X1 ** 2

    def test_phi_lies_in_h_g(self):
        p = free(phi_n(3, parse_shape("N,F2,N")), h=X1, g=X2)
        assert p.generators() <= {1, 2}


class TestConjugationForm:
    def test_n0(self):
        assert verify_lemma5_symbolic(0, parse_shape("F3"))

    def test_n1_normal(self):
        rep = conjugation_form_symbolic(1, parse_shape("N"))
        assert rep.u_holds and rep.v_holds

    def test_exhaustive(self):
        for r in range(1, 5):
            for shape in all_shapes(r, LEVELS):
                for n in range(5):
                    assert verify_lemma5_symbolic(n, shape), (n, str(shape))

    def test_commutator_form(self):
        for shape in all_shapes(2, LEVELS):
            for n in range(4):
                assert commutator_form_symbolic(n, shape)

    def test_printed_recursion_fails(self):
        # phi_1 = h g h^-1 without the trailing g^-1
        wrong = E.Product((E.Var("h"), E.Var("g"), E.Inverse(E.Var("h"))))
        assert not conjugation_form_symbolic(1, parse_shape("N"), wrong).holds

    def test_pc_normal_form(self):
        h, g, G1 = PCWord.h(), PCWord.g(), PCWord.G1()
        assert G1 * g == g * G1
        assert h * g != g * h
        assert G1 * ~G1 == PCWord()

    def test_numeric_examples(self):
        phi = make_maximal_subgroup(parse_word("x1^2*x2"))
        shape = parse_shape("N")
        assert verify_lemma5_numeric(0, shape, X1, phi.x_lambda(), 2, TWIST).success
        assert verify_lemma5_numeric(1, shape, X1, phi.x_lambda(), 3, TWIST).success

    def test_numeric_random(self):
        rng = random.Random(9)
        for text in ["N", "F2", "N,F2"]:
            shape = parse_shape(text)
            h = random_word(rng, 3, (1, 2, 3), min_length=1)
            g = random_word(rng, 3, (1, 2, 3), min_length=1)
            assert verify_lemma5_numeric(shape.depth, shape, h, g, 4, TWIST).success

    def test_numeric_negative_control(self):
        wrong = E.Product((E.Var("h"), E.Var("g"), E.Var("h")))
        rep = verify_lemma5_numeric(1, parse_shape("N"), X1, Word.gen(3), 4, TWIST, phi_word=wrong)
        assert not rep.success and rep.offending_word is not None

    def test_printed_recursion_fails_numerically(self):
        wrong = E.Product((E.Var("h"), E.Var("g"), E.Inverse(E.Var("h"))))
        rep = verify_lemma5_numeric(1, parse_shape("N"), X1, Word.gen(3), 4, TWIST, phi_word=wrong)
        assert not rep.success

    def test_u0_times_unit(self):
        g, h = Word.gen(3), X1
        u, _ = build_u_v(0, parse_shape("N"), h, g, 4, TWIST)
        t = ApproxSeriesTarget(TWIST, 4)
        unit = ApproxSeries.exact(one_plus(g))
        lhs = t.mul(u, unit)
        rhs = t.mul(unit, ApproxSeries.exact(Series.monomial(h)))
        diff = lhs.terms - rhs.terms
        assert lhs.guarantee is not None
        assert all(compare(w, lhs.guarantee) is not OrderRelation.LESS for w in diff.support())

    def test_h_is_one(self):
        for n in range(3):
            u, v = build_u_v(n, parse_shape("N,F2"), Word.identity(), X2, 3, TWIST)
            assert u.is_one() and v.is_one()

    def test_minus_one_rejected(self):
        with pytest.raises(ValueError):
            one_plus(-Series.one())


class TestChainRewrites:
    def test_h_chain(self):
        a = parse_word("x1*x2")
        assert h_chain_generators(1, parse_shape("N"), a, [Word.identity()]) == [a]
        assert h_chain_generators(1, parse_shape("F2"), a, [X1]) == [X1 ** 2]

    def test_conjugation_rewrite_with_commuting_a_c(self):
        rng = random.Random(11)
        for _ in range(100):
            root = random_word(rng, 3, (1, 2, 3), min_length=1)
            a, c = root ** rng.randint(-2, 2), root ** rng.randint(-2, 2)
            b = random_word(rng, 8, (1, 2, 3, 4, 5))
            assert conjugation_rewrite(a, b, c)

    def test_conjugation_rewrite_needs_hypothesis(self):
        assert not conjugation_rewrite(X1, Word.identity(), X2)

    def test_power_rewrite(self):
        rng = random.Random(12)
        for _ in range(100):
            b, c = random_word(rng, 5), random_word(rng, 5)
            assert power_rewrite(b, c, rng.choice([2, 3]))


class TestEvaluation:
    def test_commutator_in_S3(self):
        e = parse_identity("[?x,?y]")
        val = eval_expr(e, {"x": TRANSPOSITION, "y": THREE_CYCLE}, PermutationTarget())
        assert val.order() == 3

    def test_all_ones(self):
        e = build_w(3, parse_shape("N,F3"))
        assert free(e, x=Word.identity(), y=Word.identity()) == Word.identity()

    def test_functorial(self):
        phi = make_maximal_subgroup(parse_word("x1"))
        rng = random.Random(13)
        e = build_w(2, parse_shape("N,F2"))
        for _ in range(30):
            x, y = random_word(rng, 4, (1, 2, 3)), random_word(rng, 4, (1, 2, 3))
            in_s3 = eval_expr(e, {"x": phi(x), "y": phi(y)}, PermutationTarget())
            assert phi(free(e, x=x, y=y)) == in_s3

    def test_d_functorial(self):
        rng = random.Random(14)
        e = build_w(1, parse_shape("N"))
        t = ApproxSeriesTarget(TWIST, 3)
        for _ in range(20):
            a, b = random_unit(rng, 3, 2), random_unit(rng, 3, 2)
            val = eval_expr(e, {"x": ApproxSeries.exact(a), "y": ApproxSeries.exact(b)}, t)
            assert d(val) == free(e, x=d(a), y=d(b))

    def test_format(self):
        assert format_expr(parse_identity("[?x,?y]^2")) == "([?x,?y])^2"


class TestIdentities:
    def test_conjugate_word_commuting(self):
        root = parse_word("x1*x2")
        verdict = check_identity(
            CONJUGATE_PRODUCT_WORD, lambda i: {"a": root ** 2, "x": root ** (i - 3)}, 7
        )
        assert verdict.holds

    def test_conjugate_word_free(self):
        verdict = check_identity(CONJUGATE_PRODUCT_WORD, lambda i: {"a": X1, "x": X2}, 1)
        assert not verdict.holds and verdict.value != Word.identity()

    def test_sixth_powers_in_S3(self):
        pairs = list(itertools.product(sorted(S3, key=lambda p: p.images), repeat=2))
        verdict = check_identity(
            power_commutator_word(6), lambda i: {"x": pairs[i][0], "y": pairs[i][1]}, 36, PermutationTarget()
        )
        assert verdict.holds and verdict.trials == 36

    def test_square_commutator_fails_in_S3(self):
        verdict = check_identity(
            power_commutator_word(1), lambda i: {"x": TRANSPOSITION, "y": THREE_CYCLE}, 1, PermutationTarget()
        )
        assert not verdict.holds

    def test_trials_positive(self):
        with pytest.raises(ValueError):
            check_identity(CONJUGATE_PRODUCT_WORD, lambda i: {}, 0)

    def test_membership_cascade(self):
        # w_1 = a^6 for the shape F3 lands in N
        phi = make_maximal_subgroup(parse_word("x1^2*x2"))
        rng = random.Random(15)
        t = ApproxSeriesTarget(TWIST, 3)
        e = build_w(1, parse_shape("F3"))
        for _ in range(20):
            a = random_unit(rng, 2, 2, (1, 3, 4))
            val = eval_expr(e, {"x": ApproxSeries.exact(a), "y": ApproxSeries.exact(a)}, t)
            assert in_N(phi, val.terms)
