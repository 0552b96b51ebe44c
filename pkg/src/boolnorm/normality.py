"""Relative degree, r-degree and (ab)normality of Boolean functions."""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .core import BoolFun, restrict
from .exceptions import DimensionError, DomainError
from .spaces import Flat, gaussian_binomial, subspace_arrays

WORKERS_ENV = "BOOLNORM_WORKERS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def half_dim(m: int) -> int:
    return (m + 1) // 2


class Normality(str, enum.Enum):
    NORMAL = "normal"
    WEAKLY_NORMAL = "weakly_normal"
    ABNORMAL = "abnormal"

    @classmethod
    def from_half_degree(cls, d: int) -> Normality:
        if d == 0:
            return cls.NORMAL
        if d == 1:
            return cls.WEAKLY_NORMAL
        return cls.ABNORMAL


@dataclass(frozen=True)
class RDegree:
    value: int
    witness: Flat


@dataclass(frozen=True)
class NormalityClass:
    kind: Normality
    half_degree: int
    witness: Flat | None = None


def relative_degree(f: BoolFun, flat: Flat) -> int:
    return restrict(f, flat).degree


def _shards(n: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, n))
    step = math.ceil(n / workers)
    return [(i, min(i + step, n)) for i in range(0, n, step)]


def _sharded_min(f: BoolFun, r: int, stop_at: int, workers: int):
    """Deterministic (value, subspace index, rep): first minimiser in enumeration order."""
    bases, masks = subspace_arrays(f.m, r)
    shards = _shards(bases.shape[0], workers)
    cancel = np.zeros(len(shards), dtype=np.int64)
    tt = f.table

    def run(i):
        lo, hi = shards[i]
        res = _kernels.min_restriction_degree(tt, f.m, bases, masks, lo, hi, stop_at, cancel[i : i + 1])
        if res[0] <= stop_at:
            cancel[i + 1 :] = 1
        return res

    if len(shards) == 1:
        results = [run(0)]
    else:
        with ThreadPoolExecutor(len(shards)) as pool:
            results = list(pool.map(run, range(len(shards))))
    # earlier shards are never cancelled by later ones, so the first hit is canonical
    best = min(results, key=lambda res: res[0])[0]
    value, s, a = next(res for res in results if res[0] == best)
    return int(value), int(s), int(a), bases


def r_degree(f: BoolFun, r: int, workers: int | None = None) -> RDegree:
    """Minimum relative degree over all ``r``-dimensional flats, with a witness."""
    if not 0 <= r <= f.m:
        raise DomainError(f"need 0 <= r <= m, got r={r}, m={f.m}")
    value, s, a, bases = _sharded_min(f, r, 0, workers or default_workers())
    return RDegree(value, Flat(f.m, tuple(int(b) for b in bases[s]), a))


def _abnormal_search(f: BoolFun, workers: int):
    if f.m < 1:
        raise DomainError("abnormality needs m >= 1")
    bases, masks = subspace_arrays(f.m, half_dim(f.m) - 1)
    shards = _shards(bases.shape[0], workers)
    cancel = np.zeros(len(shards), dtype=np.int64)

    def run(i):
        lo, hi = shards[i]
        res = _kernels.two_constant_cosets(f.table, f.m, bases, masks, lo, hi, cancel[i : i + 1])
        if res[0] >= 0:
            cancel[i + 1 :] = 1
        return res

    if len(shards) == 1:
        results = [run(0)]
    else:
        with ThreadPoolExecutor(len(shards)) as pool:
            results = list(pool.map(run, range(len(shards))))
    for s, a1, a2 in results:
        if s >= 0:
            return tuple(int(b) for b in bases[s]), int(a1), int(a2)
    return None


def is_abnormal(f: BoolFun, workers: int | None = None) -> bool:
    """Algorithm 1: scan ``(ceil(m/2)-1)``-subspaces for two cosets where ``f`` is constant."""
    return _abnormal_search(f, workers or default_workers()) is None


def abnormality_witness(f: BoolFun, workers: int | None = None) -> Flat | None:
    """A ``ceil(m/2)``-flat on which ``f`` is constant or affine, or ``None``.

    Built as the union of the two constant cosets found by Algorithm 1.
    """
    hit = _abnormal_search(f, workers or default_workers())
    if hit is None:
        return None
    basis, a1, a2 = hit
    return Flat(f.m, basis + (a1 ^ a2,), a1)


def classify_normality(f: BoolFun, workers: int | None = None) -> NormalityClass:
    rd = r_degree(f, half_dim(f.m), workers)
    return NormalityClass(Normality.from_half_degree(rd.value), rd.value, rd.witness)


def batch_r_degree(tables: np.ndarray, r: int, stop_at: int = 0) -> np.ndarray:
    """r-degrees of many truth tables (rows of a 0/1 array).

    With ``stop_at > 0`` a row's result is only exact when it exceeds
    ``stop_at``; otherwise it is some value ``<= stop_at``.
    """
    tables = np.ascontiguousarray(tables, dtype=np.uint8)
    m = tables.shape[1].bit_length() - 1
    bases, masks = subspace_arrays(m, r)
    return _kernels.batch_min_restriction_degree(tables, m, bases, masks, stop_at)


def batch_is_abnormal(tables: np.ndarray) -> np.ndarray:
    tables = np.ascontiguousarray(tables, dtype=np.uint8)
    m = tables.shape[1].bit_length() - 1
    bases, masks = subspace_arrays(m, half_dim(m) - 1)
    return _kernels.batch_is_abnormal(tables, m, bases, masks)


def work_factor(n_functions: int, m: int, r: int) -> int:
    """Brute-force cost of r-degrees for ``n_functions`` representatives."""
    return n_functions * (1 << (m - r)) * gaussian_binomial(m, r) * r * (1 << r)


@dataclass
class DTable:
    """Maximum r-degree over a stream of functions.

    ``mode`` is ``"exact"`` (functions of degree exactly ``k``) or
    ``"at_most"`` (degree at most ``k``); ``k=None`` keeps every function.
    """

    m: int
    r: int
    k: int | None
    mode: str
    value: int
    count: int
    histogram: dict[int, int] = field(default_factory=dict)
    by_degree: dict[int, int] = field(default_factory=dict)
    predicted_work: int = 0


def d_table(functions: Iterable[BoolFun], r: int, mode: str = "exact", k: int | None = None,
            workers: int | None = None) -> DTable:
    if mode not in ("exact", "at_most"):
        raise DomainError(f"unknown mode {mode!r}")
    m = None
    hist: dict[int, int] = {}
    by_degree: dict[int, int] = {}
    count = 0
    for f in functions:
        if m is None:
            m = f.m
        elif f.m != m:
            raise DimensionError(f"mixed variable counts in stream: {m} and {f.m}")
        deg = f.degree
        if k is not None and (deg != k if mode == "exact" else deg > k):
            continue
        v = r_degree(f, r, workers).value
        hist[v] = hist.get(v, 0) + 1
        by_degree[deg] = max(by_degree.get(deg, 0), v)
        count += 1
    if count == 0:
        raise DomainError("d_table needs at least one function")
    return DTable(m, r, k, mode, max(hist), count, dict(sorted(hist.items())),
                  dict(sorted(by_degree.items())), work_factor(count, m, r))


def at_most_from_exact(dagger: Mapping[int, int], k: int) -> int:
    """``D_r(k, m) = max_{1 <= l <= k} D^dagger_r(l, m)`` from per-degree maxima."""
    vals = [v for l, v in dagger.items() if 1 <= l <= k]
    if not vals:
        raise DomainError(f"no degrees 1..{k} available")
    return max(vals)


def check_mono(dagger: Mapping[tuple[int, int, int], int]) -> list[tuple[int, int, int, int]]:
    """Check ``D_r(k, m') <= D_r(min(k, m), m)`` over every table entry pair.

    ``dagger`` maps ``(r, k, m)`` to the exact-degree maximum.  Returns the
    violating ``(r, k, m, m')`` tuples (empty when consistent).  Entries whose
    at-most value needs degrees missing from the table are skipped.
    """
    by_rm: dict[tuple[int, int], dict[int, int]] = {}
    for (r, k, m), v in dagger.items():
        by_rm.setdefault((r, m), {})[k] = v

    def at_most(r, k, m):
        table = by_rm.get((r, m), {})
        if any(l not in table for l in range(1, k + 1)):
            return None
        return at_most_from_exact(table, k)

    bad = []
    for (r, m2), table in by_rm.items():
        for k in table:
            big = at_most(r, k, m2)
            if big is None:
                continue
            for (r1, m1) in by_rm:
                if r1 != r or not r <= m1 < m2:
                    continue
                small = at_most(r, min(k, m1), m1)
                if small is not None and big > small:
                    bad.append((r, k, m1, m2))
    return sorted(bad)


__all__ = [
    "DTable",
    "Normality",
    "NormalityClass",
    "RDegree",
    "abnormality_witness",
    "batch_is_abnormal",
    "batch_r_degree",
    "check_mono",
    "classify_normality",
    "d_table",
    "is_abnormal",
    "r_degree",
    "relative_degree",
    "work_factor",
]
