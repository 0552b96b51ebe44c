"""Bent expansions of near-bent functions (Algorithm 3).

A bent expansion of ``g`` on ``m - 1`` variables is a bent ``f = (g||h)``.
We build the dual ``Phi = (Phi0||Phi1)`` of ``f`` block by block.  Blocks
are named by bit strings ``lam`` read most significant first: ``lam[0]`` is
``x_m``, ``lam[1]`` is ``x_{m-1}`` and so on, so ``Phi_lam`` is block
``int(lam, 2)`` of the truth table cut into ``2**len(lam)`` pieces.  The
part of ``g``'s spectrum that constrains ``Phi_lam`` is the block named by
``lam[1:]`` (``x_m`` is not a coordinate of ``g``).
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .bent import SpectralKind, spectral_class
from .core import BoolFun, walsh_spectrum
from .exceptions import BudgetExceededError, CapacityError, DomainError, SpectralError
from .normality import default_workers

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 1 << 24
DEFAULT_PAIR_BUDGET = 1 << 34
SUPPORTED_M = (4, 6, 8)


def w_set(m: int, r: int) -> frozenset[int]:
    """``W_r``: possible Walsh values of an ``r``-codimensional restriction of a bent function."""
    if r < 0 or m // 2 - r + 1 < 0:
        raise DomainError(f"W_r undefined for m={m}, r={r}")
    top = 1 << (m // 2)
    step = 1 << (m // 2 - r + 1)
    return frozenset(top - i * step for i in range((1 << r) + 1))


def _check_lambda(lam: str) -> None:
    if not 1 <= len(lam) <= 3 or set(lam) - {"0", "1"}:
        raise DomainError(f"block name must be 1..3 bits, got {lam!r}")


def _near_bent_spectrum(g: BoolFun) -> np.ndarray:
    spec = walsh_spectrum(g)
    if spectral_class(spec).kind is not SpectralKind.NEAR_BENT:
        raise SpectralError("expected a near-bent function")
    return spec.values


def _block(values: np.ndarray, lam: str) -> np.ndarray:
    """Block ``lam[1:]`` of a table on ``m - 1`` variables."""
    tail = lam[1:]
    if not tail:
        return values
    return values.reshape(1 << len(tail), -1)[int(tail, 2)]


@dataclass(frozen=True)
class ZeroIndicator:
    """``zeta(w) = 1`` iff ``g``'s Walsh coefficient at ``w`` vanishes, with block zero counts."""

    m: int
    zeta: BoolFun
    counts: dict[str, int]

    def block(self, lam: str) -> np.ndarray:
        return _block(self.zeta.table, lam)

    def count(self, lam: str) -> int:
        return self.counts[lam]


def zero_indicator(g: BoolFun) -> ZeroIndicator:
    values = _near_bent_spectrum(g)
    zeta = (values == 0).astype(np.uint8)
    counts = {}
    for r in (1, 2, 3):
        if r > g.m:
            break
        for i in range(1 << r):
            lam = format(i, f"0{r}b")
            counts[lam] = int(_block(zeta, lam).sum())
    return ZeroIndicator(g.m + 1, BoolFun(g.m, zeta), counts)


def normalize_prefix(g: BoolFun) -> BoolFun:
    """Return ``g`` or ``g + x_{m-1}`` so that block ``00`` has at most ``2**(m-3)`` free values.

    Adding ``x_{m-1}`` translates the spectrum by ``e_{m-1}``, swapping the
    zero counts of blocks ``00`` and ``01``.
    """
    zi = zero_indicator(g)
    if zi.count("00") > 1 << (zi.m - 3):
        return g + BoolFun.linear(g.m, 1 << (g.m - 1))
    return g


@dataclass(frozen=True)
class Candidate:
    lam: str
    phi: BoolFun
    forced_mask: int


@dataclass(frozen=True)
class Key:
    """Positions where the Walsh value is an odd multiple of ``2**(m/2 - 1)``."""

    m: int
    mask: int

    def positions(self) -> list[int]:
        return [a for a in range(1 << (self.m - 2)) if self.mask >> a & 1]


def _key_masks(spec: np.ndarray, unit: int) -> np.ndarray:
    """Bitmask of positions whose Walsh value is an odd multiple of ``unit``."""
    return _kernels.key_masks(np.atleast_2d(spec), unit)


def key(phi: BoolFun) -> Key:
    m = phi.m + 2
    if m % 2:
        raise DomainError("the key is defined for functions on m - 2 variables with m even")
    if phi.m > 6:
        raise CapacityError("keys are 64-bit masks; phi must have at most 6 variables")
    return Key(m, int(_key_masks(walsh_spectrum(phi).values, 1 << (m // 2 - 1))[0]))


def _unpack(packed: np.ndarray, n: int) -> np.ndarray:
    shifts = np.arange(1 << n, dtype=np.uint64)
    return ((packed[:, None] >> shifts) & np.uint64(1)).astype(np.uint8)


def _pack(bits: np.ndarray) -> int:
    return sum(1 << int(t) for t in np.flatnonzero(bits))


@dataclass
class AdmissibleSet:
    """All ``phi`` with ``phi`` and ``phi + zeta_lam`` both ``lam``-candidates.

    Members are packed truth tables (bit ``t`` is ``phi(t)``).
    """

    lam: str
    m: int
    forced_mask: int
    zeta: np.ndarray
    packed: np.ndarray
    enumerated: int = 0

    def __len__(self):
        return self.packed.size

    @property
    def n(self) -> int:
        return self.m - len(self.lam)

    @property
    def tables(self) -> np.ndarray:
        return _unpack(self.packed, self.n)

    @cached_property
    def _spectra(self) -> tuple[np.ndarray, np.ndarray]:
        return _kernels.packed_spectra(self.packed, self.n, np.uint64(_pack(self.zeta)))

    @property
    def spectra(self) -> np.ndarray:
        return self._spectra[0]

    @property
    def alt_spectra(self) -> np.ndarray:
        """Spectra of the partners ``phi + zeta_lam``."""
        return self._spectra[1]

    @property
    def members(self) -> list[Candidate]:
        return [Candidate(self.lam, BoolFun(self.n, t), self.forced_mask) for t in self.tables]


def _allowed_popcounts(nfree: int, ones: int, n: int, allowed: frozenset[int]) -> np.ndarray:
    ok = lambda w: ((1 << n) - 2 * w) in allowed
    return np.array([k for k in range(nfree + 1) if ok(ones + k) and ok(ones + nfree - k)], dtype=np.int64)


def _membership(allowed: frozenset[int], bound: int) -> np.ndarray:
    """Lookup table: ``ok[v + bound]`` iff ``v`` is allowed."""
    ok = np.zeros(2 * bound + 1, dtype=np.bool_)
    for v in allowed:
        if abs(v) <= bound:
            ok[v + bound] = True
    return ok


def admissible_set(g: BoolFun, lam: str, budget: int = DEFAULT_BUDGET) -> AdmissibleSet:
    """Enumerate ``A_lam(g)``.

    Free values (zeros of ``g``'s spectrum in the block) are assigned by
    popcount so that only weights compatible with ``W_r`` at 0 are tried;
    full spectra of ``phi`` and ``phi + zeta_lam`` are then checked.
    ``budget`` caps the number of assignments tried.
    """
    _check_lambda(lam)
    values = _near_bent_spectrum(g)
    m = g.m + 1
    r = len(lam)
    n = m - r
    if n < 0:
        raise DomainError(f"block {lam!r} is longer than m={m}")
    top = 1 << (m // 2)
    block = _block(values, lam)
    forced_one = block == -top
    free = np.flatnonzero(block == 0)
    zeta = (block == 0).astype(np.uint8)
    allowed = w_set(m, r)
    ks = _allowed_popcounts(free.size, int(forced_one.sum()), n, allowed)
    work = sum(math.comb(free.size, int(k)) for k in ks)
    if work > budget:
        raise BudgetExceededError(
            f"block {lam}: {work} assignments of {free.size} free values exceed the budget {budget}",
            work, budget)
    if n > 6:
        raise CapacityError(f"admissible sets are packed into 64-bit words; block {lam} has {n} variables")
    ok = _membership(allowed, 1 << n)
    base = forced_one.astype(np.uint8)
    packed = _kernels.enumerate_admissible(base, free.astype(np.int64), zeta, n, ks, ok)
    forced_mask = sum(1 << int(t) for t in np.flatnonzero(block != 0))
    log.debug("A_%s: %d free, %d tried, %d admissible", lam, free.size, work, packed.size)
    return AdmissibleSet(lam, m, forced_mask, zeta, packed, work)


@dataclass
class _Piece:
    """Block ready for concatenation: packed tables (when they fit), zeta and both spectra."""

    packed: np.ndarray | None
    zeta: np.ndarray
    spec: np.ndarray
    alt: np.ndarray

    @classmethod
    def from_set(cls, s: AdmissibleSet) -> _Piece:
        return cls(s.packed, s.zeta, s.spectra, s.alt_spectra)

    def __len__(self):
        return self.spec.shape[0]


def _group(keys: np.ndarray):
    """Unique key rows, inverse labels and counts (rows compared as raw bytes)."""
    flat = np.ascontiguousarray(keys).view(np.dtype((np.void, keys.dtype.itemsize * keys.shape[1]))).ravel()
    return np.unique(flat, return_inverse=True, return_counts=True)


def _buckets(left: _Piece, right: _Piece, unit: int, use_key: bool):
    """Index arrays and bounds of the key buckets shared by both sides.

    Concatenating blocks whose values are multiples of ``unit`` can only
    land on multiples of ``2 * unit`` if both blocks are odd multiples of
    ``unit`` at the same positions; the same holds for the partners.
    """
    nl, nr = len(left), len(right)
    if not use_key:
        return np.arange(nl), np.array([0, nl]), np.arange(nr), np.array([0, nr])
    kl = np.stack([_key_masks(left.spec, unit), _key_masks(left.alt, unit)], axis=1)
    kr = np.stack([_key_masks(right.spec, unit), _key_masks(right.alt, unit)], axis=1)
    ul, invl, cl = _group(kl)
    ur, invr, cr = _group(kr)
    _, bl, br = np.intersect1d(ul, ur, assume_unique=True, return_indices=True)
    # relabel both sides by shared-bucket number, -1 for unmatched keys
    lab_l = np.full(ul.size, -1)
    lab_l[bl] = np.arange(bl.size)
    lab_r = np.full(ur.size, -1)
    lab_r[br] = np.arange(br.size)
    out = []
    for lab, inv, counts, b in ((lab_l, invl, cl, bl), (lab_r, invr, cr, br)):
        rows = lab[inv.ravel()]
        keep = np.flatnonzero(rows >= 0)
        idx = keep[np.argsort(rows[keep], kind="stable")]
        out += [idx, np.concatenate([[0], np.cumsum(counts[b])])]
    return tuple(out)


def _join(left: _Piece, right: _Piece, unit: int, allowed: frozenset[int], use_key: bool,
          pair_budget: int | None = None) -> np.ndarray:
    """Index pairs ``(i, j)`` with both ``(L_i||R_j)`` and ``(L_i'||R_j')`` spectra inside ``allowed``."""
    lidx, lb, ridx, rb = _buckets(left, right, unit, use_key)
    work = int(np.dot(np.diff(lb), np.diff(rb)))
    if pair_budget is not None and work > pair_budget:
        raise BudgetExceededError(f"merge needs {work} pair checks, budget {pair_budget}", work, pair_budget)
    bound = 2 * left.spec.shape[1]
    pairs = _kernels.join_pairs(left.spec, left.alt, right.spec, right.alt,
                                lidx.astype(np.int64), lb.astype(np.int64),
                                ridx.astype(np.int64), rb.astype(np.int64),
                                _membership(allowed, bound), bound)
    log.debug("merge: %d x %d, %d buckets, %d pair checks, %d kept",
              len(left), len(right), lb.size - 1, work, pairs.shape[0])
    return pairs


def _concat_spectra(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a, b = a.astype(np.int32), b.astype(np.int32)
    return np.concatenate([a + b, a - b], axis=1)


def _combine(left: _Piece, right: _Piece, pairs: np.ndarray) -> _Piece:
    i, j = pairs[:, 0], pairs[:, 1]
    width = left.spec.shape[1]
    packed = None
    if left.packed is not None and 2 * width <= 64:
        packed = left.packed[i] | (right.packed[j] << np.uint64(width))
    return _Piece(packed, np.concatenate([left.zeta, right.zeta]),
                  _concat_spectra(left.spec[i], right.spec[j]).astype(np.int16),
                  _concat_spectra(left.alt[i], right.alt[j]).astype(np.int16))


@dataclass
class ExpansionReport:
    """Expansions of ``g`` plus the set sizes seen along the way."""

    g: BoolFun
    expansions: list[BoolFun]
    shifted: bool = False
    sizes: dict[str, int] = field(default_factory=dict)


def _dual_tables(ls, la, rs, ra) -> np.ndarray:
    """Duals of ``Phi = ((L||R) || (L'||R'))`` from aligned rows of block spectra."""
    s0 = _concat_spectra(ls, rs)
    s1 = _concat_spectra(la, ra)
    return np.concatenate([s0 + s1 < 0, s0 - s1 < 0], axis=1).astype(np.uint8)


def _is_bent_rows(ls, la, rs, ra, top) -> np.ndarray:
    s0 = _concat_spectra(ls, rs)
    s1 = _concat_spectra(la, ra)
    return (np.abs(s0 + s1) == top).all(1) & (np.abs(s0 - s1) == top).all(1)


def _sorted_by_keys(piece: _Piece, unit: int):
    k1, k2 = _key_masks(piece.spec, unit), _key_masks(piece.alt, unit)
    order = np.lexsort((k2, k1))
    return order, k1[order], k2[order]


def _stream_three_level(left: _Piece, a: _Piece, b: _Piece, m: int, use_key: bool,
                        pair_budget: int | None, workers: int) -> np.ndarray:
    """``(L, phi_010, phi_011)`` index triples whose assembled ``Phi`` is bent."""
    unit2, unit1, top = 1 << (m // 2 - 2), 1 << (m // 2 - 1), 1 << (m // 2)
    lidx, lb, ridx, rb = _buckets(a, b, unit2, use_key)
    work = int(np.dot(np.diff(lb), np.diff(rb)))
    if pair_budget is not None and work > pair_budget:
        raise BudgetExceededError(f"merge needs {work} pair checks, budget {pair_budget}", work, pair_budget)
    order, k1, k2 = _sorted_by_keys(left, unit1)
    if not use_key:
        # a single bucket: every left row carries the same (zero) key
        k1 = np.zeros_like(k1)
        k2 = np.zeros_like(k2)
    bound2, bound1 = 2 * a.spec.shape[1], 2 * left.spec.shape[1]
    ok2, ok1 = _membership(w_set(m, 2), bound2), _membership(w_set(m, 1), bound1)
    ls, la = np.ascontiguousarray(left.spec[order]), np.ascontiguousarray(left.alt[order])
    nb = lb.size - 1
    cuts = np.linspace(0, nb, max(1, min(workers, nb)) + 1).astype(np.int64)
    args = [lidx.astype(np.int64), lb.astype(np.int64), ridx.astype(np.int64), rb.astype(np.int64)]

    def run(c):
        return _kernels.stream_expand(a.spec, a.alt, b.spec, b.alt, *args, cuts[c], cuts[c + 1],
                                      ok2, bound2, ls, la, k1, k2, unit1 if use_key else 0, ok1, bound1, top)

    if cuts.size == 2:
        parts = [run(0)]
    else:
        with ThreadPoolExecutor(cuts.size - 1) as pool:
            parts = list(pool.map(run, range(cuts.size - 1)))
    log.debug("stream merge: %d x %d, %d buckets, %d pair checks", len(a), len(b), nb, work)
    triples = np.concatenate(parts) if parts else np.zeros((0, 3), dtype=np.int64)
    triples[:, 0] = order[triples[:, 0]]
    return triples


def expansion_report(g: BoolFun, budget: int = DEFAULT_BUDGET, use_key: bool = True,
                     pair_budget: int | None = DEFAULT_PAIR_BUDGET, workers: int | None = None) -> ExpansionReport:
    m = g.m + 1
    _near_bent_spectrum(g)
    if m not in SUPPORTED_M:
        raise DomainError(f"expansion supports m in {SUPPORTED_M}, got m={m}")
    g0 = normalize_prefix(g)
    shifted = g0 != g
    sizes = {}
    top = 1 << (m // 2)

    def admissible(lam):
        s = admissible_set(g0, lam, budget)
        sizes[lam] = len(s)
        return _Piece.from_set(s)

    left = admissible("00")
    if m <= 6:
        right = admissible("01")
        pairs = _join(left, right, 1 << (m // 2 - 1), w_set(m, 1), use_key, pair_budget)
        sizes["0"] = pairs.shape[0]
        i, j = pairs[:, 0], pairs[:, 1]
        ls, la, rs, ra = left.spec[i], left.alt[i], right.spec[j], right.alt[j]
        bent = _is_bent_rows(ls, la, rs, ra, top)
        ls, la, rs, ra = ls[bent], la[bent], rs[bent], ra[bent]
    else:
        a, b = admissible("010"), admissible("011")
        t = _stream_three_level(left, a, b, m, use_key, pair_budget, workers or default_workers())
        sizes["0"] = t.shape[0]
        ls, la = left.spec[t[:, 0]], left.alt[t[:, 0]]
        rs = _concat_spectra(a.spec[t[:, 1]], b.spec[t[:, 2]])
        ra = _concat_spectra(a.alt[t[:, 1]], b.alt[t[:, 2]])

    dual_tables = _dual_tables(ls, la, rs, ra)
    if shifted:
        dual_tables ^= BoolFun.linear(m, 1 << (m - 2)).table
    dual_tables = np.unique(dual_tables, axis=0)
    out = sorted((BoolFun(m, t) for t in dual_tables), key=lambda f: f.to_int())
    for f in out:
        if not (spectral_class(f).kind is SpectralKind.BENT and np.array_equal(f.table[: 1 << g.m], g.table)):
            raise SpectralError("internal check failed: output is not a bent expansion of g")
    sizes["expansions"] = len(out)
    return ExpansionReport(g, out, shifted, sizes)


def expansion(g: BoolFun, budget: int = DEFAULT_BUDGET, use_key: bool = True,
              pair_budget: int | None = DEFAULT_PAIR_BUDGET, workers: int | None = None) -> list[BoolFun]:
    """All bent ``f = (g||h)``, sorted by truth-table integer."""
    return expansion_report(g, budget, use_key, pair_budget, workers).expansions


__all__ = [
    "AdmissibleSet",
    "Candidate",
    "DEFAULT_BUDGET",
    "DEFAULT_PAIR_BUDGET",
    "ExpansionReport",
    "Key",
    "ZeroIndicator",
    "admissible_set",
    "expansion",
    "expansion_report",
    "key",
    "normalize_prefix",
    "w_set",
    "zero_indicator",
]
