"""Shared constants and random generators for the test suite."""

import numpy as np

from boolnorm import BoolFun, mm_construct

# Example 1 near-bent function and its two flats
G5_ANF = "x1*x4 + x2*x4 + x3*x4 + x2*x3*x4 + x2*x5 + x3*x5 + x1*x3*x5"
G5_SPECTRUM = [8, 0, 8, 0, 0, 8, 0, 8, 8, 0, 0, -8, 0, -8, 8, 0,
               8, -8, -8, 8, 0, 0, 0, 0, 8, 8, 0, 0, 0, 0, -8, -8]
V1A1 = ([[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1]], [1, 1, 0, 0, 1])
V2A2 = ([[1, 0, 0, 1, 0], [0, 1, 0, 1, 1], [0, 0, 1, 0, 0]], [1, 0, 1, 0, 1])

QUINTIC7 = "x1*x2*x3*x4*x5*x6 + x2*x3*x4*x5*x7 + x1*x3*x4*x6*x7 + x1*x2*x5*x6*x7"
QUARTIC7_RDEG = ("x2*x3*x4*x5 + x1*x2*x3*x6 + x1*x4*x6 + x3*x4*x5*x6 + x2*x3*x7 + x4*x5*x7"
                 " + x3*x4*x5*x7 + x1*x3*x6*x7 + x3*x4*x6*x7 + x1*x5*x6*x7")
QUARTIC7_SIEVE = ("x1*x2*x4 + x2*x3*x4 + x2*x3*x5 + x1*x4*x5 + x3*x4*x5 + x2*x3*x4*x5 + x1*x4*x6"
                  " + x2*x3*x5*x6 + x3*x4*x5*x6 + x1*x2*x7 + x1*x3*x6*x7 + x4*x5*x6*x7")
SIEVE_Q = "x2*x3 + x1*x5 + x2*x5 + x3*x5 + x3*x7 + x5*x7 + x6*x7"

EA_F = "x1*x4 + x2*x5 + x3*x6"
EA_G = "x1*x4 + x2*x5 + x3*x6 + x1*x2*x3"
# output coordinates y_1..y_6 as (variables, constant)
EA_MAP = [({2, 4}, 1), ({1, 2, 4, 6}, 0), ({2, 4, 6}, 0), ({1, 2, 5}, 1), ({1, 2}, 0), ({2, 3, 5}, 1)]


def random_boolfun(rng, m: int) -> BoolFun:
    return BoolFun(m, rng.integers(0, 2, 1 << m).astype(np.uint8))


def random_mm_bent(rng, m: int) -> BoolFun:
    k = m // 2
    return mm_construct(rng.permutation(1 << k), random_boolfun(rng, k))
