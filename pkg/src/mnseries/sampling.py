"""Seeded random words, field elements and series for the property suites."""

import random
from typing import Optional, Sequence

from .field import FieldElement
from .free_group import Word
from .series import Series


def random_word(rng: random.Random, max_length: int = 8, generators: Sequence[int] = (1, 2, 3, 4, 5),
                min_length: int = 0) -> Word:
    """Reduced word of length between ``min_length`` and ``max_length``.

    Letters are drawn one at a time, never immediately cancelling the
    previous one, so the drawn length is the reduced length.
    """
    length = rng.randint(min_length, max_length)
    letters = []
    for _ in range(length):
        while True:
            a = rng.choice(generators) * rng.choice((1, -1))
            if not letters or letters[-1] != -a:
                break
        letters.append(a)
    return Word.from_letters(letters)


def random_nonzero_rational(rng: random.Random, bound: int = 5) -> FieldElement:
    num = rng.choice([i for i in range(-bound, bound + 1) if i])
    den = rng.randint(1, bound)
    return FieldElement(num) / FieldElement(den)


def random_field_element(rng: random.Random, nonzero: bool = True) -> FieldElement:
    """Small element of Q(s): a constant, a linear polynomial or a ratio of linears."""
    s = FieldElement.s()
    kind = rng.randrange(4)
    if kind == 0:
        out = random_nonzero_rational(rng)
    elif kind == 1:
        out = random_nonzero_rational(rng) * s + rng.randint(-3, 3)
    elif kind == 2:
        out = (s + rng.randint(-3, 3)) / (s + rng.randint(-3, 3))
    else:
        out = random_nonzero_rational(rng) * s * s + rng.randint(-2, 2) * s + random_nonzero_rational(rng)
    if nonzero and out.is_zero():
        return FieldElement(1)
    return out


def random_series(rng: random.Random, max_support: int = 5, max_length: int = 4,
                  generators: Sequence[int] = (1, 2, 3), min_support: int = 1) -> Series:
    size = rng.randint(min_support, max_support)
    terms = {}
    attempts = 0
    while len(terms) < size and attempts < 50 * size:
        attempts += 1
        w = random_word(rng, max_length, generators)
        if w not in terms:
            terms[w] = random_field_element(rng)
    return Series(terms)


def random_unit(rng: random.Random, max_support: int = 4, max_length: int = 3,
                generators: Sequence[int] = (1, 2, 3)) -> Series:
    """A nonzero series (every nonzero element of the division ring is a unit)."""
    return random_series(rng, max_support, max_length, generators, min_support=1)
