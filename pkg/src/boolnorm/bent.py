"""Bent and near-bent functions, duals and Dickson quadratic forms."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .core import BoolFun, WalshSpectrum, walsh_spectrum
from .exceptions import DimensionError, DomainError, SpectralError
from .spaces import Subspace


class SpectralKind(str, enum.Enum):
    BENT = "bent"
    NEAR_BENT = "near_bent"
    OTHER = "other"


@dataclass(frozen=True)
class SpectralClass:
    kind: SpectralKind
    zero_count: int


def _spectrum(f: BoolFun | WalshSpectrum) -> WalshSpectrum:
    return f if isinstance(f, WalshSpectrum) else walsh_spectrum(f)


def spectral_class(f: BoolFun | WalshSpectrum) -> SpectralClass:
    """Classify by exact spectrum membership.

    Near-bent is only defined for an odd number of variables; plateaued
    functions in even dimension fall under ``OTHER``.
    """
    spec = _spectrum(f)
    m = spec.m
    absval = np.abs(spec.values)
    zeros = int(np.count_nonzero(absval == 0))
    kind = SpectralKind.OTHER
    if m % 2 == 0 and m >= 2 and np.all(absval == 1 << (m // 2)):
        kind = SpectralKind.BENT
    elif m % 2 == 1 and np.all((absval == 0) | (absval == 1 << ((m + 1) // 2))):
        kind = SpectralKind.NEAR_BENT
    if kind is not SpectralKind.OTHER:
        wt = ((1 << m) - int(spec.values[0])) // 2
        if wt not in allowed_weights(m, kind):
            raise SpectralError(f"weight {wt} contradicts a {kind.value} spectrum")
    return SpectralClass(kind, zeros)


def allowed_weights(k: int, kind: SpectralKind) -> set[int]:
    """Hamming weights a bent / near-bent function on ``k`` variables can have."""
    half = 1 << (k - 1)
    if kind is SpectralKind.BENT:
        d = 1 << (k // 2 - 1)
        return {half - d, half + d}
    if kind is SpectralKind.NEAR_BENT:
        d = 1 << ((k + 1) // 2 - 1)
        return {half - d, half, half + d}
    raise DomainError("weights are only constrained for bent and near-bent functions")


def is_bent(f: BoolFun | WalshSpectrum) -> bool:
    return spectral_class(f).kind is SpectralKind.BENT


def is_near_bent(f: BoolFun | WalshSpectrum) -> bool:
    return spectral_class(f).kind is SpectralKind.NEAR_BENT


def dual_from_spectrum(values: np.ndarray) -> np.ndarray:
    """Dual truth table read off a bent spectrum (1 where the coefficient is negative)."""
    return (np.asarray(values) < 0).astype(np.uint8)


def dual(f: BoolFun) -> BoolFun:
    """The dual bent function: ``(-1)^dual(a) = 2^(-m/2) * walsh(f)(a)``."""
    spec = walsh_spectrum(f)
    if not is_bent(spec):
        raise SpectralError("dual is only defined for bent functions")
    return BoolFun(f.m, dual_from_spectrum(spec.values))


def are_complementary(g: BoolFun, h: BoolFun) -> bool:
    """Whether the Walsh zero sets of two near-bent functions partition the space."""
    if g.m != h.m:
        raise DimensionError(f"need equal variable counts, got {g.m} and {h.m}")
    sg, sh = walsh_spectrum(g), walsh_spectrum(h)
    if not (is_near_bent(sg) and is_near_bent(sh)):
        raise SpectralError("complementarity is defined for near-bent pairs")
    return bool(np.all((sg.values == 0) != (sh.values == 0)))


@dataclass(frozen=True)
class DicksonForm:
    """A Dickson normal form with a subspace it is constant (or affine) on."""

    function: BoolFun
    witness: Subspace
    witness_degree: int


def dickson_form(m: int, k: int, balanced: bool = False, b: int = 0) -> DicksonForm:
    """``Q_k = x1x2 + ... + x_{2k-1}x_{2k} + x_{2k+1}`` or ``Q_{k,b} = ... + b``.

    The witness has dimension ``ceil(m/2)`` and is spanned by ``e1, e3, ...,
    e_{2k-1}`` padded with coordinates outside the quadratic part.  It keeps
    the form constant except for balanced ``Q_k`` with ``k = (m-1)/2``,
    where the linear term must be included and the restriction is linear.
    """
    limit = (m - 1) // 2 if balanced else m // 2
    if k < 0 or k > limit:
        raise DomainError(f"k={k} out of range 0..{limit} for m={m}")
    terms = [f"x{2 * i + 1}*x{2 * i + 2}" for i in range(k)]
    if balanced:
        terms.append(f"x{2 * k + 1}")
    elif b:
        terms.append("1")
    f = BoolFun.from_anf(" + ".join(terms) or "0", m)
    want = (m + 1) // 2
    rows = [1 << (2 * i) for i in range(k)]
    spare = [1 << j for j in range(2 * k + (1 if balanced else 0), m)]
    rows += spare[: want - len(rows)]
    witness_degree = 0
    if len(rows) < want:
        rows.append(1 << (2 * k))
        witness_degree = 1
    return DicksonForm(f, Subspace.from_rows(rows, m), witness_degree)


__all__ = [
    "DicksonForm",
    "SpectralClass",
    "SpectralKind",
    "allowed_weights",
    "are_complementary",
    "dickson_form",
    "dual",
    "is_bent",
    "is_near_bent",
    "spectral_class",
]
