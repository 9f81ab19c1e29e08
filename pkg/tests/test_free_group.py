import random

import pytest
from hypothesis import given, settings, strategies as st

from mnseries.errors import DeepeningCapExceeded, EmptySupport
from mnseries.free_group import (
    OrderRelation,
    Word,
    commutator,
    compare,
    first_difference,
    format_expansion,
    is_positive,
    magnus_expand,
    min_of_support,
    truncate,
    word_min,
)
from mnseries.parsing import parse_word

from oracles import naive_compare, naive_inverse, naive_magnus, naive_min, naive_reduce

letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=10)

LESS, EQUAL, GREATER = OrderRelation.LESS, OrderRelation.EQUAL, OrderRelation.GREATER
X1, X2 = Word.gen(1), Word.gen(2)


def w(text):
    return parse_word(text)


class TestArithmetic:
    def test_cancellation(self):
        assert X1 * ~X1 == Word.identity()

    def test_reduction_example(self):
        assert w("x1*x2") * w("x2^-1*x1") == w("x1^2")

    def test_identity_law(self):
        a = w("x3^-2*x1*x2^5")
        assert a * Word.identity() == a == Word.identity() * a

    def test_invert(self):
        assert ~w("x1*x2^-1") == w("x2*x1^-1")
        assert ~Word.identity() == Word.identity()

    def test_power(self):
        assert X1 ** 6 == w("x1^6")
        assert len(commutator(X1, X2) ** 2) == 8
        assert w("x1*x2") ** 0 == Word.identity()
        assert w("x1*x2") ** -2 == ~(w("x1*x2") ** 2)

    def test_syllables_are_reduced(self):
        a = Word([(1, 2), (1, -1), (2, 0), (3, 1), (3, -1)])
        assert a.syllables == ((1, 1),)

    def test_bad_generator(self):
        with pytest.raises(ValueError):
            Word.gen(0)

    @given(letters, letters)
    def test_product_matches_naive_reducer(self, a, b):
        assert list((Word.from_letters(a) * Word.from_letters(b)).letters()) == naive_reduce(a + b)

    @given(letters)
    def test_inverse_matches_naive(self, a):
        wa = Word.from_letters(a)
        assert list((~wa).letters()) == naive_reduce(naive_inverse(a))
        assert ~~wa == wa
        assert wa * ~wa == Word.identity()

    @given(letters, st.integers(-4, 4))
    def test_power_recursion(self, a, k):
        wa = Word.from_letters(a)
        assert wa ** (k + 1) == wa ** k * wa

    @given(letters, letters, letters)
    def test_associative(self, a, b, c):
        wa, wb, wc = map(Word.from_letters, (a, b, c))
        assert (wa * wb) * wc == wa * (wb * wc)


class TestMagnus:
    def test_generator(self):
        assert magnus_expand(X1, 2).coefficients == {(): 1, (1,): 1}

    def test_inverse_generator(self):
        assert magnus_expand(~X1, 2).coefficients == {(): 1, (1,): -1, (1, 1): 1}

    def test_commutator(self):
        e = magnus_expand(commutator(X1, X2), 2)
        assert e.coefficients == {(): 1, (1, 2): 1, (2, 1): -1}
        assert format_expansion(e) == "1 + t1*t2 - t2*t1"

    def test_degree_bound_must_be_positive(self):
        with pytest.raises(ValueError):
            magnus_expand(X1, 0)

    @given(letters, st.integers(1, 5))
    def test_matches_naive_expansion(self, a, bound):
        assert magnus_expand(Word.from_letters(a), bound).coefficients == naive_magnus(naive_reduce(a), bound)

    @given(letters, letters, st.integers(1, 4))
    def test_multiplicative_up_to_truncation(self, a, b, bound):
        wa, wb = Word.from_letters(a), Word.from_letters(b)
        prod = truncate(magnus_expand(wa, bound) * magnus_expand(wb, bound), bound)
        assert magnus_expand(wa * wb, bound) == prod

    @given(letters)
    def test_constant_term_is_one(self, a):
        assert magnus_expand(Word.from_letters(a), 3)[()] == 1


class TestOrder:
    def test_one_below_x1(self):
        c = first_difference(Word.identity(), X1)
        assert c.relation is LESS
        assert (c.monomial, c.left, c.right) == ((1,), 0, 1)

    def test_inverse_below_one(self):
        c = first_difference(~X1, Word.identity())
        assert c.relation is LESS
        assert (c.monomial, c.left, c.right) == ((1,), -1, 0)

    def test_equal(self):
        assert compare(X1, X1) is EQUAL

    def test_x2_below_x1(self):
        assert compare(X2, X1) is LESS
        assert X2 < X1

    def test_min_of_support(self):
        assert min_of_support([X1, X2]) == X2
        assert min_of_support([w("x1*x2")]) == w("x1*x2")
        assert min_of_support([Word.identity(), X1, ~X1]) == ~X1

    def test_min_of_empty(self):
        with pytest.raises(EmptySupport):
            min_of_support([])

    def test_cap(self):
        # a double commutator first differs from 1 in degree 3
        c = commutator(commutator(X1, X2), X1)
        assert compare(c, Word.identity()) is not EQUAL
        with pytest.raises(DeepeningCapExceeded):
            compare(c, Word.identity(), degree_cap=2)

    def test_word_min_infinity(self):
        assert word_min(None, X1) == X1
        assert word_min(X1, None) == X1
        assert word_min(None, None) is None

    def test_positive(self):
        assert is_positive(X1) and not is_positive(~X1) and not is_positive(Word.identity())

    @given(letters, letters)
    @settings(max_examples=150)
    def test_matches_naive_comparator(self, a, b):
        expected = {-1: LESS, 0: EQUAL, 1: GREATER}[naive_compare(a, b)]
        assert compare(Word.from_letters(a), Word.from_letters(b)) is expected

    @given(letters, letters)
    def test_positivity_cone(self, a, b):
        wa, wb = Word.from_letters(a), Word.from_letters(b)
        rel = compare(wa, wb)
        assert compare(Word.identity(), ~wa * wb) is rel
        assert compare(wb * ~wa, Word.identity()) is rel.reversed()

    @given(letters, letters, letters)
    def test_bi_invariant(self, a, b, c):
        wa, wb, wc = map(Word.from_letters, (a, b, c))
        rel = compare(wa, wb)
        assert compare(wa * wc, wb * wc) is rel
        assert compare(wc * wa, wc * wb) is rel

    def test_min_matches_pairwise(self):
        rng = random.Random(7)
        for _ in range(60):
            words = {Word.from_letters([rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(rng.randint(0, 6))])
                     for _ in range(rng.randint(1, 6))}
            m = min_of_support(words)
            assert m == naive_min(words)
            assert all(compare(m, s) is not GREATER for s in words)
