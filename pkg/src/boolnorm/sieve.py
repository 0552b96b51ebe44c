"""Sieving quadratic perturbations that make a function abnormal.

For ``f`` we compute ``Q(f) = {q in B(2,2,m) : f + q abnormal}``.  ``f + q``
has degree at most one on ``a + V`` exactly when the restriction of ``f``
has degree at most two and its quadratic part equals that of ``q``.  The
quadratic-part restriction map is linear with a kernel depending only on
``V`` (translations change affine parts only), so each hit removes a whole
coset ``q0 + K_V`` from the candidate set.

Quadratic forms are bitsets over the pairs ``i < j`` in lexicographic order
``(1,2), (1,3), ..., (1,m), (2,3), ...``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from . import _kernels, gf2
from .core import Anf, BoolFun, restrict
from .exceptions import CapacityError, DimensionError, DomainError
from .normality import _shards, default_workers, half_dim
from .spaces import Flat, Subspace, enumerate_subspaces, subspace_arrays

MAX_SIEVE_VARS = 8


@lru_cache(maxsize=None)
def pairs(m: int) -> tuple[tuple[int, int], ...]:
    """0-based coordinate pairs in bit order."""
    return tuple((i, j) for i in range(m) for j in range(i + 1, m))


def n_pairs(m: int) -> int:
    return m * (m - 1) // 2


@dataclass(frozen=True)
class QuadForm:
    """Pure quadratic form; bit ``c`` of ``index`` is the coefficient of pair ``c``."""

    m: int
    index: int

    def __post_init__(self):
        if self.index < 0 or self.index >> n_pairs(self.m):
            raise DomainError(f"index {self.index} out of range for m={self.m}")

    @classmethod
    def from_pairs(cls, m: int, items) -> QuadForm:
        """Build from 1-based ``(i, j)`` pairs."""
        lookup = {p: c for c, p in enumerate(pairs(m))}
        idx = 0
        for i, j in items:
            i, j = sorted((i - 1, j - 1))
            idx ^= 1 << lookup[(i, j)]
        return cls(m, idx)

    @classmethod
    def from_boolfun(cls, f: BoolFun) -> QuadForm:
        """Quadratic part of ``f``'s ANF (other monomials are ignored)."""
        coeffs = f.anf().coeffs
        idx = 0
        for c, (i, j) in enumerate(pairs(f.m)):
            if coeffs[(1 << i) | (1 << j)]:
                idx |= 1 << c
        return cls(f.m, idx)

    @classmethod
    def from_anf(cls, text: str, m: int) -> QuadForm:
        f = BoolFun.from_anf(text, m)
        q = cls.from_boolfun(f)
        if q.to_boolfun() != f:
            raise DomainError("expression is not a pure quadratic form")
        return q

    @property
    def coeffs(self) -> tuple[int, ...]:
        return tuple(self.index >> c & 1 for c in range(n_pairs(self.m)))

    def monomials(self) -> list[tuple[int, int]]:
        """1-based pairs with coefficient one."""
        return [(i + 1, j + 1) for c, (i, j) in enumerate(pairs(self.m)) if self.index >> c & 1]

    def to_boolfun(self) -> BoolFun:
        coeffs = np.zeros(1 << self.m, dtype=np.uint8)
        for i, j in self.monomials():
            coeffs[(1 << (i - 1)) | (1 << (j - 1))] = 1
        return Anf(self.m, coeffs).to_boolfun()

    def __add__(self, other: QuadForm) -> QuadForm:
        if other.m != self.m:
            raise DimensionError("quadratic forms on different spaces")
        return QuadForm(self.m, self.index ^ other.index)

    def __str__(self):
        mons = self.monomials()
        if not mons:
            return "0"
        # ANF order: increasing monomial index
        mons.sort(key=lambda p: (1 << (p[0] - 1)) | (1 << (p[1] - 1)))
        return " + ".join(f"x{i}*x{j}" for i, j in mons)


class QSet:
    """Subset of ``B(2,2,m)`` stored as a packed bit vector of length ``2**C(m,2)``."""

    def __init__(self, m: int, words: np.ndarray | None = None):
        self.m = m
        self.size = 1 << n_pairs(m)
        nwords = max(1, self.size >> 6)
        if words is None:
            words = np.zeros(nwords, dtype=np.uint64)
        words = np.asarray(words, dtype=np.uint64)
        if words.shape != (nwords,):
            raise DimensionError(f"QSet for m={m} needs {nwords} words")
        if self.size < 64:
            words = words & np.uint64((1 << self.size) - 1)
        self.words = words

    @classmethod
    def full(cls, m: int) -> QSet:
        q = cls(m)
        q.words[:] = np.uint64(0xFFFFFFFFFFFFFFFF)
        return cls(m, q.words)

    def __len__(self):
        return int(np.unpackbits(self.words.view(np.uint8)).sum())

    def __contains__(self, q: QuadForm | int) -> bool:
        idx = q.index if isinstance(q, QuadForm) else int(q)
        return bool(int(self.words[idx >> 6]) >> (idx & 63) & 1)

    def indices(self) -> np.ndarray:
        bits = np.unpackbits(self.words.view(np.uint8), bitorder="little")
        return np.flatnonzero(bits[: self.size])

    def __iter__(self) -> Iterator[QuadForm]:
        return (QuadForm(self.m, int(i)) for i in self.indices())

    def __eq__(self, other):
        return isinstance(other, QSet) and self.m == other.m and np.array_equal(self.words, other.words)

    def __repr__(self):
        return f"QSet(m={self.m}, count={len(self)})"


@dataclass(frozen=True)
class KernelBasis:
    subspace: Subspace
    basis: tuple[QuadForm, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)


def _local_quadratic_part(r_fun: BoolFun) -> QuadForm:
    return QuadForm.from_boolfun(r_fun)


def quad_restriction(f: BoolFun, flat: Flat) -> tuple[QuadForm, int]:
    """Quadratic part (in the flat's own coordinates) and degree of ``f`` on ``flat``."""
    fr = restrict(f, flat)
    return _local_quadratic_part(fr), fr.degree


def _product_quadratic_part(u: int, v: int, m: int) -> int:
    out = 0
    for c, (p, q) in enumerate(pairs(m)):
        out |= ((((u >> p) & (v >> q)) ^ ((u >> q) & (v >> p))) & 1) << c
    return out


def quad_lift(rho: QuadForm, flat: Flat) -> QuadForm:
    """A form ``q0`` on F_2^m whose restriction to ``flat`` has quadratic part ``rho``.

    Each ``t_i t_j`` is replaced by the product of the flat's coordinate
    functionals; the affine part of the product is dropped.
    """
    if rho.m != flat.rank:
        raise DimensionError(f"rho has {rho.m} variables, flat has rank {flat.rank}")
    ld = flat.lift_data()
    idx = 0
    for i, j in rho.monomials():
        idx ^= _product_quadratic_part(ld.functionals[i - 1], ld.functionals[j - 1], flat.m)
    return QuadForm(flat.m, idx)


def restriction_images(v: Subspace | Flat) -> list[int]:
    """Image of each ``x_p x_q`` under the quadratic-part restriction map."""
    rows = v.basis
    m = v.m
    images = []
    for p, q in pairs(m):
        img = 0
        for d, (i, j) in enumerate(pairs(len(rows))):
            bi, bj = rows[i], rows[j]
            img |= ((((bi >> p) & (bj >> q)) ^ ((bj >> p) & (bi >> q))) & 1) << d
        images.append(img)
    return images


def kernel_basis(v: Subspace) -> KernelBasis:
    """Basis of the kernel of the quadratic-part restriction to ``v``.

    It has dimension ``C(m,2) - C(dim v, 2)`` and is shared by every coset of ``v``.
    """
    kern = gf2.nullspace(restriction_images(v))
    return KernelBasis(v, tuple(QuadForm(v.m, k) for k in kern))


def iter_eliminations(f: BoolFun) -> Iterator[tuple[Flat, QuadForm, KernelBasis]]:
    """Reference (pure Python) walk of the sieve: every flat that triggers a removal.

    Yields ``(flat, q0, kernel)``; the removed set is ``q0 + span(kernel)``.
    """
    k = half_dim(f.m)
    for v in enumerate_subspaces(f.m, k):
        kern = None
        for a in v.coset_representatives():
            flat = Flat(f.m, v.basis, a)
            rho, deg = quad_restriction(f, flat)
            if deg <= 2:
                if kern is None:
                    kern = kernel_basis(v)
                yield flat, quad_lift(rho, flat), kern


def coset_members(q0: QuadForm, kern: KernelBasis) -> Iterator[QuadForm]:
    basis = [b.index for b in kern.basis]
    for c in range(1 << len(basis)):
        yield QuadForm(q0.m, q0.index ^ gf2.vec_mat(c, basis))


def sieving(f: BoolFun, workers: int | None = None) -> QSet:
    """Algorithm 2: the quadratic forms ``q`` for which ``f + q`` is abnormal."""
    m = f.m
    if m > MAX_SIEVE_VARS:
        raise CapacityError(f"sieve needs a 2**C({m},2)-bit vector; m <= {MAX_SIEVE_VARS} only")
    if m < 2:
        raise DomainError("the sieve needs m >= 2")
    bases, masks = subspace_arrays(m, half_dim(m))
    shards = _shards(bases.shape[0], workers or default_workers())
    nwords = max(1, (1 << n_pairs(m)) >> 6)

    def run(shard):
        lo, hi = shard
        eliminated = np.zeros(nwords, dtype=np.uint64)
        _kernels.sieve_shard(f.table, m, bases, masks, lo, hi, eliminated)
        return eliminated

    if len(shards) == 1:
        parts = [run(shards[0])]
    else:
        with ThreadPoolExecutor(len(shards)) as pool:
            parts = list(pool.map(run, shards))
    eliminated = np.bitwise_or.reduce(parts)
    return QSet(m, ~eliminated)


def abnormal_perturbations(f: BoolFun, qset: QSet | None = None) -> list[BoolFun]:
    """``f + q`` for every surviving ``q``."""
    if qset is None:
        qset = sieving(f)
    return [f + q.to_boolfun() for q in qset]


__all__ = [
    "KernelBasis",
    "QSet",
    "QuadForm",
    "abnormal_perturbations",
    "coset_members",
    "iter_eliminations",
    "kernel_basis",
    "quad_lift",
    "quad_restriction",
    "sieving",
]
