"""Seeded random polynomials and matrices.

All randomness goes through :func:`trial_rng`: Python's Mersenne Twister
(MT19937) seeded with the string ``"<seed>/<trial>"`` (hashed with SHA-512
by :mod:`random`), so every trial is reproducible on its own and results do
not depend on the order or thread in which trials run.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .poly import UniPoly
from .ring import RATIONALS, RingSpec
from .triangular import MatrixPoly, UTMatrix, upper_positions


def trial_rng(seed: int, trial: int) -> random.Random:
    return random.Random(f"{seed}/{trial}")


def random_scalar(rng: random.Random, ring: RingSpec, spread: int = 3, dens=(1,)):
    if ring.is_finite:
        return rng.randrange(ring.modulus)
    num = rng.randint(-spread, spread)
    if ring.kind == RATIONALS:
        return Fraction(num, rng.choice(dens))
    return num


def random_unipoly(rng: random.Random, ring: RingSpec, max_degree: int, spread: int = 3,
                   dens=(1,)) -> UniPoly:
    deg = rng.randint(0, max_degree)
    return UniPoly(ring, [random_scalar(rng, ring, spread, dens) for _ in range(deg + 1)])


def random_utmatrix(rng: random.Random, ring: RingSpec, n: int, spread: int = 3) -> UTMatrix:
    return UTMatrix.from_entries(
        ring, n, {p: random_scalar(rng, ring, spread) for p in upper_positions(n)})


def random_matrixpoly(rng: random.Random, ring: RingSpec, n: int, max_degree: int,
                      spread: int = 3, dens=(1,)) -> MatrixPoly:
    deg = rng.randint(0, max_degree)
    return MatrixPoly(ring, n, tuple(
        UTMatrix.from_entries(ring, n, {p: random_scalar(rng, ring, spread, dens)
                                        for p in upper_positions(n)})
        for _ in range(deg + 1)))
