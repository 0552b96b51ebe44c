"""Linear subspaces and flats of F_2^m.

A subspace is identified by its reduced row echelon basis (pivot = highest
set bit of a row).  The canonical coset representative of ``a + V`` is ``a``
reduced against that basis, i.e. zero at every pivot column; it is also the
smallest integer in the coset.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import gf2
from .core import span_points
from .exceptions import DomainError, InvalidFlatError, ParseError


def gaussian_binomial(m: int, r: int) -> int:
    """Number of ``r``-dimensional subspaces of F_2^m."""
    if r < 0 or r > m:
        raise DomainError(f"need 0 <= r <= m, got r={r}, m={m}")
    num = den = 1
    for i in range(r):
        num *= (1 << m) - (1 << i)
        den *= (1 << r) - (1 << i)
    return num // den


def _check_rows(rows: Sequence[int], m: int) -> None:
    for b in rows:
        if b < 0 or b >> m:
            raise InvalidFlatError(f"basis row {b:#x} does not fit in F_2^{m}")


@dataclass(frozen=True)
class Subspace:
    m: int
    basis: tuple[int, ...]

    @classmethod
    def from_rows(cls, rows: Iterable[int], m: int) -> Subspace:
        rows = [int(r) for r in rows]
        _check_rows(rows, m)
        return cls(m, tuple(gf2.rref(rows)))

    @classmethod
    def full(cls, m: int) -> Subspace:
        return cls(m, tuple(1 << i for i in range(m)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(b.bit_length() - 1 for b in self.basis)

    @property
    def pivot_mask(self) -> int:
        return sum(1 << p for p in self.pivots)

    def is_canonical(self) -> bool:
        return list(self.basis) == gf2.rref(self.basis)

    def reduce(self, a: int) -> int:
        return gf2.reduce(a, self.basis)

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0

    def points(self) -> np.ndarray:
        return span_points(self.basis)

    def coset_representatives(self) -> Iterator[int]:
        """The ``2**(m - dim)`` canonical representatives, ascending."""
        free = [j for j in range(self.m) if not self.pivot_mask >> j & 1]
        for c in range(1 << len(free)):
            yield sum(1 << j for k, j in enumerate(free) if c >> k & 1)

    def orthogonal(self) -> Subspace:
        """``V^perp = {a : a.v = 0 for all v in V}``."""
        return Subspace.from_rows(self.flat().lift_data().orthogonal, self.m)

    def flat(self, a: int = 0) -> Flat:
        return Flat(self.m, self.basis, a)


@dataclass(frozen=True)
class LiftData:
    """Coordinates on a flat ``a + V`` with basis ``b_1..b_r``.

    ``functionals[i]`` is a vector ``u`` and ``offsets[i]`` a bit ``c`` with
    ``u.(a + sum t_j b_j) + c = t_i``.
    """

    functionals: tuple[int, ...]
    offsets: tuple[int, ...]
    complement_basis: tuple[int, ...]
    orthogonal: tuple[int, ...]

    def coordinates(self, x: int) -> int:
        """Inverse of the flat parametrisation, for ``x`` on the flat."""
        return sum((gf2.dot(u, x) ^ c) << i for i, (u, c) in enumerate(zip(self.functionals, self.offsets)))


@dataclass(frozen=True)
class Flat:
    """Affine subspace ``a + span(basis)``; basis rows keep their given order."""

    m: int
    basis: tuple[int, ...]
    translate: int = 0

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(int(b) for b in self.basis))
        object.__setattr__(self, "translate", int(self.translate))

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[int]], a: Sequence[int]) -> Flat:
        """Build from 0/1 coordinate lists; entry ``j`` of a row is ``x_{j+1}``."""
        m = len(a)
        to_int = lambda v: sum(int(bit) << j for j, bit in enumerate(v))
        return cls(m, tuple(to_int(r) for r in rows), to_int(a))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def check(self) -> None:
        _check_rows(self.basis, self.m)
        if self.translate < 0 or self.translate >> self.m:
            raise InvalidFlatError(f"translate {self.translate:#x} does not fit in F_2^{self.m}")
        if gf2.rank(self.basis) != len(self.basis):
            raise InvalidFlatError("flat basis is rank deficient")

    @property
    def subspace(self) -> Subspace:
        self.check()
        return Subspace.from_rows(self.basis, self.m)

    def canonical(self) -> Flat:
        """Same point set with RREF basis and minimal translate."""
        v = self.subspace
        return Flat(self.m, v.basis, v.reduce(self.translate))

    def same_points(self, other: Flat) -> bool:
        return self.canonical() == other.canonical()

    def points(self) -> np.ndarray:
        """Point ``t`` of the parametrisation is ``a + sum t_i b_i``."""
        return span_points(self.basis) ^ self.translate

    def __contains__(self, x: int) -> bool:
        return self.subspace.reduce(x ^ self.translate) == 0

    def lift_data(self) -> LiftData:
        self.check()
        r = self.rank
        pivmask = Subspace.from_rows(self.basis, self.m).pivot_mask
        complement = tuple(1 << j for j in range(self.m) if not pivmask >> j & 1)
        full = list(self.basis) + list(complement)
        inv = gf2.inverse(full, self.m)
        # u_i = column i of the inverse, so that u_i . row_j = delta_ij
        cols = gf2.transpose(inv, self.m)
        funcs = tuple(cols[:r])
        offsets = tuple(gf2.dot(u, self.translate) for u in funcs)
        return LiftData(funcs, offsets, complement, tuple(cols[r:]))

    def to_text(self) -> str:
        return format_flat(self)

    @classmethod
    def from_text(cls, text: str, m: int) -> Flat:
        return parse_flat(text, m)


def format_flat(flat: Flat) -> str:
    rows = ",".join(format(b, "x") for b in flat.basis)
    return f"basis={rows};a={flat.translate:x}"


_FLAT_RE = re.compile(r"\s*basis\s*=\s*(?P<rows>[0-9a-fA-F,\s]*?)\s*;\s*a\s*=\s*(?P<a>[0-9a-fA-F]+)\s*")


def parse_flat(text: str, m: int) -> Flat:
    """Parse ``basis=<hex row>,<hex row>,...;a=<hex>``."""
    match = _FLAT_RE.fullmatch(text)
    if not match:
        raise ParseError("flat must look like 'basis=<hex>,...;a=<hex>'", 0)
    rows_text = match.group("rows").strip()
    rows = []
    if rows_text:
        for part in rows_text.split(","):
            part = part.strip()
            if not part:
                raise ParseError("empty basis row", match.start("rows"))
            rows.append(int(part, 16))
    flat = Flat(m, tuple(rows), int(match.group("a"), 16))
    flat.check()
    return flat


def pivot_patterns(m: int, r: int) -> list[tuple[int, ...]]:
    if r < 0 or r > m:
        raise DomainError(f"need 0 <= r <= m, got r={r}, m={m}")
    return list(itertools.combinations(range(m), r))


def _bases_for_pattern(pivots: tuple[int, ...]) -> np.ndarray:
    pset = set(pivots)
    free = [[j for j in range(p) if j not in pset] for p in pivots]
    nfree = sum(len(fr) for fr in free)
    counter = np.arange(1 << nfree, dtype=np.int64)
    out = np.empty((counter.size, len(pivots)), dtype=np.int64)
    shift = 0
    # the last row owns the low counter bits so that rows vary fastest at the end
    for i in reversed(range(len(pivots))):
        row = np.full(counter.size, 1 << pivots[i], dtype=np.int64)
        for j in free[i]:
            row |= ((counter >> shift) & 1) << j
            shift += 1
        out[:, i] = row
    return out


@lru_cache(maxsize=64)
def subspace_arrays(m: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    """All ``r``-subspaces as an ``(n, r)`` array of RREF rows plus pivot masks.

    Row order is the canonical enumeration order (pivot pattern, then
    free-entry counter).
    """
    bases, masks = [], []
    for p in pivot_patterns(m, r):
        rows = _bases_for_pattern(p)
        bases.append(rows)
        masks.append(np.full(rows.shape[0], sum(1 << j for j in p), dtype=np.int64))
    bases = np.ascontiguousarray(np.concatenate(bases, axis=0))
    masks = np.concatenate(masks)
    bases.setflags(write=False)
    masks.setflags(write=False)
    return bases, masks


def enumerate_subspaces(m: int, r: int, patterns: Iterable[tuple[int, ...]] | None = None) -> Iterator[Subspace]:
    """Yield every ``r``-dimensional subspace of F_2^m exactly once.

    ``patterns`` restricts the stream to the given pivot patterns; disjoint
    pattern sets give disjoint shards.
    """
    if patterns is None:
        bases, _ = subspace_arrays(m, r)
        for row in bases:
            yield Subspace(m, tuple(int(b) for b in row))
        return
    for p in patterns:
        for row in _bases_for_pattern(tuple(p)):
            yield Subspace(m, tuple(int(b) for b in row))


def enumerate_flats(m: int, r: int) -> Iterator[Flat]:
    for v in enumerate_subspaces(m, r):
        for a in v.coset_representatives():
            yield Flat(m, v.basis, a)


def lift_data(flat: Flat) -> LiftData:
    return flat.lift_data()


__all__ = [
    "Flat",
    "LiftData",
    "Subspace",
    "enumerate_flats",
    "enumerate_subspaces",
    "format_flat",
    "gaussian_binomial",
    "lift_data",
    "parse_flat",
    "pivot_patterns",
    "subspace_arrays",
]
