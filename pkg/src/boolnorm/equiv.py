"""EA-invariant fingerprints and explicit EA-equivalence certificates.

``f2`` is EA-equivalent to ``f`` when ``f2(x) = f(xA + b) + a(x)`` for an
invertible ``A``, a vector ``b`` and an affine ``a``.  Vectors are row
vectors; row ``i`` of ``A`` is the image of ``e_{i+1}``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import gf2
from .core import BoolFun
from .exceptions import DimensionError, InvalidCertificateError, ParseError
from .normality import half_dim, r_degree


@dataclass(frozen=True)
class Fingerprint:
    """Degree, ``|Walsh|`` histogram and r-degree profile.

    Degrees are clipped below at 1: adding an affine function can turn a
    constant restriction into an affine one, so only ``max(d, 1)`` is invariant.
    """

    degree: int
    abs_walsh_histogram: tuple[tuple[int, int], ...]
    rdegree_profile: tuple[int, ...]


def fingerprint(f: BoolFun, workers: int | None = None) -> Fingerprint:
    hist = tuple(sorted(f.walsh().abs_histogram().items()))
    profile = tuple(max(r_degree(f, r, workers).value, 1) for r in range(1, half_dim(f.m) + 1))
    return Fingerprint(max(f.degree, 1), hist, profile)


def bucket_by_fingerprint(functions: Iterable[BoolFun], workers: int | None = None) -> dict[Fingerprint, list[BoolFun]]:
    """Group functions; different buckets are certainly EA-inequivalent."""
    out: dict[Fingerprint, list[BoolFun]] = {}
    for f in functions:
        out.setdefault(fingerprint(f, workers), []).append(f)
    return out


@dataclass(frozen=True)
class EACertificate:
    m: int
    rows: tuple[int, ...]
    b: int
    a: BoolFun

    def __post_init__(self):
        if len(self.rows) != self.m:
            raise InvalidCertificateError(f"A needs {self.m} rows, got {len(self.rows)}")
        if any(r < 0 or r >> self.m for r in self.rows) or self.b < 0 or self.b >> self.m:
            raise InvalidCertificateError(f"entries do not fit in F_2^{self.m}")
        if gf2.rank(self.rows) != self.m:
            raise InvalidCertificateError("A is singular")
        if self.a.m != self.m or self.a.degree > 1:
            raise InvalidCertificateError("the additive part must be affine on the same space")

    @classmethod
    def identity(cls, m: int) -> EACertificate:
        return cls(m, tuple(1 << i for i in range(m)), 0, BoolFun.zero(m))

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]], b: Sequence[int], a: BoolFun | str) -> EACertificate:
        """``matrix[i][j]`` is the coefficient of ``x_{i+1}`` in output coordinate ``j+1``."""
        m = len(matrix)
        rows = tuple(sum(int(v) << j for j, v in enumerate(row)) for row in matrix)
        if isinstance(a, str):
            a = BoolFun.from_anf(a, m)
        return cls(m, rows, sum(int(v) << j for j, v in enumerate(b)), a)

    def points(self) -> np.ndarray:
        """``xA + b`` for every ``x``."""
        img = np.zeros(1 << self.m, dtype=np.int64)
        for i, row in enumerate(self.rows):
            img[1 << i : 1 << (i + 1)] = img[: 1 << i] ^ row
        return img ^ self.b

    def apply(self, f: BoolFun) -> BoolFun:
        if f.m != self.m:
            raise DimensionError(f"certificate is for m={self.m}, function has m={f.m}")
        return BoolFun(self.m, f.table[self.points()] ^ self.a.table)

    def to_text(self) -> str:
        return format_certificate(self)


@dataclass(frozen=True)
class EAVerdict:
    ok: bool
    counterexample: int | None = None

    def __bool__(self):
        return self.ok


def verify_ea_certificate(f: BoolFun, f2: BoolFun, cert: EACertificate) -> EAVerdict:
    """Check ``f2(x) = f(xA + b) + a(x)`` at all points; report the first failing ``x``."""
    if not f.m == f2.m == cert.m:
        raise DimensionError(f"dimensions disagree: {f.m}, {f2.m}, certificate {cert.m}")
    bad = np.flatnonzero(cert.apply(f).table != f2.table)
    if bad.size:
        return EAVerdict(False, int(bad[0]))
    return EAVerdict(True)


def random_certificate(m: int, rng: np.random.Generator) -> EACertificate:
    while True:
        rows = tuple(int(v) for v in rng.integers(0, 1 << m, m))
        if gf2.rank(rows) == m:
            break
    b = int(rng.integers(0, 1 << m))
    a = BoolFun.linear(m, int(rng.integers(0, 1 << m)))
    if rng.integers(0, 2):
        a = a + BoolFun.constant(m, 1)
    return EACertificate(m, rows, b, a)


def _vec_hex(v: int, m: int) -> str:
    return format(v, f"0{max(1, -(-m // 4))}x")


def _parse_vec(text: str, m: int, pos: int) -> int:
    if not re.fullmatch(r"[0-9a-fA-F]+", text):
        raise ParseError(f"bad hex vector {text!r}", pos)
    v = int(text, 16)
    if v >> m:
        raise ParseError(f"vector {text} does not fit in F_2^{m}", pos)
    return v


def format_certificate(cert: EACertificate) -> str:
    rows = ",".join(_vec_hex(r, cert.m) for r in cert.rows)
    return f"A={rows};b={_vec_hex(cert.b, cert.m)};a={cert.a.to_anf_string()}"


_CERT_RE = re.compile(r"\s*A\s*=\s*(?P<rows>[^;]*);\s*b\s*=\s*(?P<b>[^;]*);\s*a\s*=\s*(?P<a>.*?)\s*")


def parse_certificate(text: str) -> EACertificate:
    """Parse ``A=<hex rows>;b=<hex>;a=<ANF>``; ``m`` is the number of rows."""
    match = _CERT_RE.fullmatch(text)
    if not match:
        raise ParseError("certificate must look like 'A=<rows>;b=<hex>;a=<ANF>'", 0)
    parts = [p.strip() for p in match.group("rows").split(",")]
    if not parts or not all(parts):
        raise ParseError("empty matrix row", match.start("rows"))
    m = len(parts)
    rows = tuple(_parse_vec(p, m, match.start("rows")) for p in parts)
    b = _parse_vec(match.group("b").strip(), m, match.start("b"))
    return EACertificate(m, rows, b, BoolFun.from_anf(match.group("a"), m))


__all__ = [
    "EACertificate",
    "EAVerdict",
    "Fingerprint",
    "bucket_by_fingerprint",
    "fingerprint",
    "format_certificate",
    "parse_certificate",
    "random_certificate",
    "verify_ea_certificate",
]
