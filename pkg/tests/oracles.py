"""Independent brute-force reference implementations.

Nothing here imports the package's transforms or enumerators; everything is
computed from definitions on small inputs.
"""

from __future__ import annotations

import itertools

import numpy as np


def bit(x: int, i: int) -> int:
    return (x >> i) & 1


def dot(u: int, v: int) -> int:
    return bin(u & v).count("1") & 1


def walsh(table) -> list[int]:
    n = len(table)
    return [sum((-1) ** (int(table[x]) ^ dot(a, x)) for x in range(n)) for a in range(n)]


def anf_coeffs(table) -> list[int]:
    """Coefficient of X_S is the sum of f over the points below S."""
    n = len(table)
    return [sum(int(table[x]) for x in range(n) if x & s == x) & 1 for s in range(n)]


def degree(table) -> int:
    coeffs = anf_coeffs(table)
    return max((bin(s).count("1") for s, c in enumerate(coeffs) if c), default=0)


def eval_anf(monomials, x: int) -> int:
    """``monomials`` is a list of tuples of 1-based variable indices; ``()`` is 1."""
    return sum(all(bit(x, i - 1) for i in mono) for mono in monomials) & 1


def table_from_monomials(monomials, m: int) -> np.ndarray:
    return np.array([eval_anf(monomials, x) for x in range(1 << m)], dtype=np.uint8)


def span(vectors) -> frozenset[int]:
    pts = {0}
    for v in vectors:
        pts |= {p ^ v for p in pts}
    return frozenset(pts)


def subspaces(m: int, r: int) -> set[frozenset[int]]:
    """All r-dimensional subspaces as point sets, by closure of vector subsets."""
    out = set()
    for vs in itertools.combinations(range(1, 1 << m), r):
        s = span(vs)
        if len(s) == 1 << r:
            out.add(s)
    return out


def flats(m: int, r: int) -> list[list[int]]:
    """All r-flats as sorted point lists."""
    out = set()
    for v in subspaces(m, r):
        for a in range(1 << m):
            out.add(tuple(sorted(p ^ a for p in v)))
    return [list(f) for f in sorted(out)]


def flat_degree(table, points) -> int:
    """Degree of a restriction, using a basis adapted to the sorted points."""
    a = points[0]
    basis = []
    for p in points:
        if p ^ a not in span(basis):
            basis.append(p ^ a)
    param = [table[a ^ _combo(basis, t)] for t in range(1 << len(basis))]
    return degree(param)


def _combo(basis, t: int) -> int:
    x = 0
    for i, b in enumerate(basis):
        if bit(t, i):
            x ^= b
    return x


def r_degree(table, r: int) -> int:
    m = len(table).bit_length() - 1
    return min(flat_degree(table, pts) for pts in flats(m, r))


class FlatBank:
    """Precomputed r-flats of F_2^m with parametrised point arrays for batched degrees."""

    def __init__(self, m: int, r: int):
        self.m, self.r = m, r
        params = []
        for pts in flats(m, r):
            a = pts[0]
            basis = []
            for p in pts:
                if p ^ a not in span(basis):
                    basis.append(p ^ a)
            params.append([a ^ _combo(basis, t) for t in range(1 << r)])
        self.points = np.array(params, dtype=np.int64)
        sizes = np.array([bin(s).count("1") for s in range(1 << r)])
        below = np.array([[1 if x & s == x else 0 for x in range(1 << r)] for s in range(1 << r)], dtype=np.int64)
        self.sizes, self.below = sizes, below

    def degrees(self, tables: np.ndarray) -> np.ndarray:
        """``(n_functions, n_flats)`` restriction degrees."""
        sub = tables[:, self.points].astype(np.int64)          # (n, F, 2^r)
        coeffs = (sub @ self.below.T) & 1                     # (n, F, 2^r)
        return np.where(coeffs.astype(bool), self.sizes, 0).max(axis=2)

    def min_degree(self, tables: np.ndarray) -> np.ndarray:
        return self.degrees(tables).min(axis=1)


def quadratic_tables(m: int) -> np.ndarray:
    """Truth tables of all pure quadratic forms, indexed by lexicographic pair bits."""
    prs = list(itertools.combinations(range(m), 2))
    x = np.arange(1 << m)
    mono = np.array([((x >> i) & (x >> j) & 1) for i, j in prs], dtype=np.uint8)
    idx = np.arange(1 << len(prs))
    sel = ((idx[:, None] >> np.arange(len(prs))) & 1).astype(np.uint8)
    return (sel @ mono) & 1


def bent_expansions(g_table) -> set[int]:
    """All bent (g||h) by inverse transform over sign choices on the zeros of g's spectrum."""
    n = len(g_table)
    gs = np.array(walsh(g_table))
    zeros = np.flatnonzero(gs == 0)
    amp = int(np.abs(gs).max())
    h_mat = np.array([[(-1) ** dot(a, x) for a in range(n)] for x in range(n)], dtype=np.int64)
    choice = (np.arange(1 << len(zeros))[:, None] >> np.arange(len(zeros))) & 1
    spec = np.zeros((choice.shape[0], n), dtype=np.int64)
    spec[:, zeros] = amp * (1 - 2 * choice)
    vals = spec @ h_mat.T
    keep = np.all(np.abs(vals) == n, axis=1)
    out = set()
    for row in vals[keep]:
        full = np.concatenate([np.asarray(g_table, dtype=np.uint8), (row < 0).astype(np.uint8)])
        out.add(int("".join(map(str, full[::-1])), 2))
    return out


def random_affine(m: int, rng) -> tuple[list[int], int]:
    """Random invertible rows (row i is the image of e_{i+1}) and translate."""
    while True:
        rows = [int(v) for v in rng.integers(0, 1 << m, m)]
        if len(span(rows)) == 1 << m:
            return rows, int(rng.integers(0, 1 << m))


def affine_points(rows, b: int) -> np.ndarray:
    return np.array([_combo(rows, x) ^ b for x in range(1 << len(rows))], dtype=np.int64)
