"""Seeded random words and elements for the verification suites."""

from __future__ import annotations

import random
from typing import List, Sequence

from .algebra import DTHETA, DX, THETA, X, XINV, Element, GradedAlgebra, Word, word_parity
from .coeffs import ONE, ParamRational, p, q

COEFF_POOL = (ONE, q, p - 1, q.inverse())

COORDINATES = (X, XINV, THETA)
ALL_LETTERS = (X, XINV, THETA, DX, DTHETA)


def make_rng(seed: int) -> random.Random:
    return random.Random(seed)


def random_word(rng: random.Random, letters: Sequence[str], min_len: int = 1, max_len: int = 6) -> Word:
    n = rng.randint(min_len, max_len)
    return tuple(rng.choice(letters) for _ in range(n))


def random_element(alg: GradedAlgebra, rng: random.Random, letters: Sequence[str] | None = None,
                   min_len: int = 1, max_len: int = 6, max_terms: int = 3,
                   homogeneous: bool = False, pool: Sequence[ParamRational] = COEFF_POOL) -> Element:
    """A raw element: a few random words with coefficients from a small pool.

    With ``homogeneous=True`` every word shares the parity of the first one.
    """
    letters = letters or alg.letters
    terms = {}
    first = None
    for _ in range(rng.randint(1, max_terms)):
        w = random_word(rng, letters, min_len, max_len)
        if homogeneous:
            if first is None:
                first = word_parity(w)
            elif word_parity(w) != first:
                continue
        terms[w] = terms.get(w, 0) + rng.choice(pool)
    return Element(alg, terms, normalized=False)


def random_elements(alg: GradedAlgebra, count: int, seed: int, **kw) -> List[Element]:
    rng = make_rng(seed)
    return [random_element(alg, rng, **kw) for _ in range(count)]
