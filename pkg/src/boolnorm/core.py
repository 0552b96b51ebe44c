"""Truth tables, algebraic normal forms and Walsh spectra.

A vector ``x = (x_1, ..., x_m)`` is identified with the integer
``sum(x_i * 2**(i-1))``; bit ``i-1`` of an index is coordinate ``x_i``.
Every module in the package uses this convention.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .exceptions import (
    DimensionError,
    FormatError,
    InvalidPermutationError,
    ParseError,
)

MAX_VARS = 16


def _log2_length(n: int) -> int:
    if n <= 0 or n & (n - 1):
        raise FormatError(f"length {n} is not a power of two")
    return n.bit_length() - 1


def mobius(bits: np.ndarray) -> np.ndarray:
    """Binary Möbius transform along the last axis (returns a new uint8 array).

    Maps truth tables to ANF coefficients and back.
    """
    a = np.array(bits, dtype=np.uint8, copy=True, order="C")
    n = a.shape[-1]
    m = _log2_length(n)
    lead = a.shape[:-1]
    for i in range(m):
        h = 1 << i
        v = a.reshape(*lead, n // (2 * h), 2, h)
        v[..., 1, :] ^= v[..., 0, :]
    return a


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard butterfly along the last axis (int64)."""
    a = np.array(values, dtype=np.int64, copy=True, order="C")
    n = a.shape[-1]
    m = _log2_length(n)
    lead = a.shape[:-1]
    for i in range(m):
        h = 1 << i
        v = a.reshape(*lead, n // (2 * h), 2, h)
        x = v[..., 0, :].copy()
        y = v[..., 1, :]
        v[..., 0, :] = x + y
        v[..., 1, :] = x - y
    return a


def signs(table: np.ndarray) -> np.ndarray:
    return 1 - 2 * np.asarray(table, dtype=np.int64)


def anf_mobius(bits: Sequence[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise FormatError("expected a 1-d bit sequence")
    if arr.size and not np.isin(arr, (0, 1)).all():
        raise FormatError("entries must be 0 or 1")
    return mobius(arr)


_POPCOUNT_CACHE: dict[int, np.ndarray] = {}


def monomial_sizes(m: int) -> np.ndarray:
    """Popcount of every index in ``range(2**m)``."""
    out = _POPCOUNT_CACHE.get(m)
    if out is None:
        idx = np.arange(1 << m, dtype=np.int64)
        out = np.zeros(1 << m, dtype=np.int64)
        for i in range(m):
            out += (idx >> i) & 1
        out.setflags(write=False)
        _POPCOUNT_CACHE[m] = out
    return out


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Anf:
    """ANF coefficient vector; ``coeffs[S]`` is the coefficient of X_S."""

    m: int
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.uint8)
        if coeffs.shape != (1 << self.m,):
            raise FormatError(f"ANF of {self.m} variables needs {1 << self.m} coefficients")
        object.__setattr__(self, "coeffs", _freeze(coeffs.copy()))

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.coeffs)

    @property
    def degree(self) -> int:
        s = self.support
        return int(monomial_sizes(self.m)[s].max()) if s.size else 0

    @property
    def valuation(self) -> int | None:
        """Smallest monomial size, or ``None`` for the zero function."""
        s = self.support
        return int(monomial_sizes(self.m)[s].min()) if s.size else None

    def to_boolfun(self) -> BoolFun:
        return BoolFun(self.m, mobius(self.coeffs))

    def __str__(self) -> str:
        return format_anf(self)

    def __eq__(self, other):
        return isinstance(other, Anf) and self.m == other.m and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.m, self.coeffs.tobytes()))


@dataclass(frozen=True, eq=False)
class WalshSpectrum:
    m: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.int64)
        if vals.shape != (1 << self.m,):
            raise FormatError("spectrum length must be 2**m")
        object.__setattr__(self, "values", _freeze(vals.copy()))

    def __getitem__(self, a):
        return int(self.values[a])

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return (int(v) for v in self.values)

    def histogram(self) -> dict[int, int]:
        vals, counts = np.unique(self.values, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def abs_histogram(self) -> dict[int, int]:
        vals, counts = np.unique(np.abs(self.values), return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}


@dataclass(frozen=True, eq=False)
class BoolFun:
    """Boolean function on F_2^m stored as its truth table."""

    m: int
    table: np.ndarray

    def __post_init__(self):
        if not 0 <= self.m <= MAX_VARS:
            raise DimensionError(f"m={self.m} outside supported range 0..{MAX_VARS}")
        table = np.asarray(self.table)
        if table.shape != (1 << self.m,):
            raise FormatError(f"truth table of {self.m} variables needs {1 << self.m} entries, got {table.shape}")
        if table.dtype != np.uint8:
            if table.size and not np.isin(table, (0, 1)).all():
                raise FormatError("truth table entries must be 0 or 1")
            table = table.astype(np.uint8)
        elif table.size and table.max() > 1:
            raise FormatError("truth table entries must be 0 or 1")
        if not table.flags.writeable and table.flags.c_contiguous:
            object.__setattr__(self, "table", table)
        else:
            object.__setattr__(self, "table", _freeze(table.copy()))

    # construction

    @classmethod
    def from_table(cls, table) -> BoolFun:
        table = np.asarray(table)
        return cls(_log2_length(table.size), table)

    @classmethod
    def from_int(cls, value: int, m: int) -> BoolFun:
        n = 1 << m
        if value < 0 or value >> n:
            raise FormatError(f"integer does not fit a {m}-variable truth table")
        raw = np.frombuffer(value.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
        return cls(m, np.unpackbits(raw, bitorder="little")[:n])

    @classmethod
    def from_anf(cls, text: str, m: int) -> BoolFun:
        return parse_anf(text, m).to_boolfun()

    @classmethod
    def from_hex(cls, text: str, m: int) -> BoolFun:
        return parse_hex(text, m)

    @classmethod
    def zero(cls, m: int) -> BoolFun:
        return cls(m, np.zeros(1 << m, dtype=np.uint8))

    @classmethod
    def constant(cls, m: int, value: int) -> BoolFun:
        return cls(m, np.full(1 << m, value & 1, dtype=np.uint8))

    @classmethod
    def linear(cls, m: int, u: int) -> BoolFun:
        """The linear function ``x -> u.x``."""
        idx = np.arange(1 << m, dtype=np.int64) & u
        parity = np.zeros(1 << m, dtype=np.uint8)
        for i in range(m):
            parity ^= ((idx >> i) & 1).astype(np.uint8)
        return cls(m, parity)

    @classmethod
    def from_callable(cls, func, m: int) -> BoolFun:
        return cls(m, np.array([func(x) & 1 for x in range(1 << m)], dtype=np.uint8))

    # views

    def anf(self) -> Anf:
        return Anf(self.m, mobius(self.table))

    @property
    def degree(self) -> int:
        return self.anf().degree

    @property
    def valuation(self) -> int | None:
        return self.anf().valuation

    @property
    def weight(self) -> int:
        return int(self.table.sum(dtype=np.int64))

    def walsh(self) -> WalshSpectrum:
        return walsh_spectrum(self)

    def to_int(self) -> int:
        return int.from_bytes(np.packbits(self.table, bitorder="little").tobytes(), "little")

    def to_hex(self) -> str:
        return format_hex(self)

    def to_anf_string(self) -> str:
        return format_anf(self.anf())

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __add__(self, other: BoolFun) -> BoolFun:
        if not isinstance(other, BoolFun):
            return NotImplemented
        if other.m != self.m:
            raise DimensionError(f"cannot add functions of {self.m} and {other.m} variables")
        return BoolFun(self.m, self.table ^ other.table)

    __xor__ = __add__

    def __eq__(self, other):
        return isinstance(other, BoolFun) and self.m == other.m and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash((self.m, self.table.tobytes()))

    def __repr__(self):
        return f"BoolFun(m={self.m}, hex={self.to_hex()!r})"


def degree_valuation_weight(f: BoolFun) -> tuple[int, int | None, int]:
    """Return ``(deg, val, wt)``; ``val`` is ``None`` for the zero function."""
    anf = f.anf()
    return anf.degree, anf.valuation, f.weight


def walsh_spectrum(f: BoolFun) -> WalshSpectrum:
    return WalshSpectrum(f.m, fwht(signs(f.table)))


def inverse_walsh(values) -> np.ndarray:
    """Recover the ±1 sign vector from a Walsh spectrum (float-free)."""
    values = np.asarray(values, dtype=np.int64)
    n = values.shape[-1]
    out = fwht(values)
    if np.any(out % n):
        raise FormatError("spectrum is not the transform of a ±1 vector")
    return out // n


def concat(g: BoolFun, h: BoolFun) -> BoolFun:
    """``(g||h)``: ``g`` on ``x_m = 0`` and ``h`` on ``x_m = 1``."""
    if g.m != h.m:
        raise DimensionError(f"concat needs equal variable counts, got {g.m} and {h.m}")
    return BoolFun(g.m + 1, np.concatenate([g.table, h.table]))


def span_points(basis: Sequence[int]) -> np.ndarray:
    """All ``sum(t_i * b_i)`` indexed by ``t`` (bit ``i`` of ``t`` selects ``b_i``)."""
    pts = np.zeros(1 << len(basis), dtype=np.int64)
    for i, b in enumerate(basis):
        h = 1 << i
        pts[h : 2 * h] = pts[:h] ^ b
    return pts


def restrict(f: BoolFun, flat) -> BoolFun:
    """``t -> f(a + sum t_i b_i)`` with the flat's basis rows in stored order."""
    if flat.m != f.m:
        raise DimensionError(f"flat lives in F_2^{flat.m}, function has {f.m} variables")
    flat.check()
    return BoolFun(flat.rank, f.table[flat.points()])


def mm_construct(pi: Sequence[int], g: BoolFun) -> BoolFun:
    """Maiorana-McFarland function ``(x, y) -> <x, pi(y)> + g(y)``.

    ``y`` occupies coordinates ``1..k`` and ``x`` coordinates ``k+1..2k``.
    """
    k = g.m
    pi = np.asarray(pi, dtype=np.int64)
    if pi.shape != (1 << k,) or not np.array_equal(np.sort(pi), np.arange(1 << k)):
        raise InvalidPermutationError(f"pi is not a permutation of F_2^{k}")
    z = np.arange(1 << (2 * k), dtype=np.int64)
    y = z & ((1 << k) - 1)
    x = z >> k
    dot = x & pi[y]
    parity = np.zeros(z.size, dtype=np.uint8)
    for i in range(k):
        parity ^= ((dot >> i) & 1).astype(np.uint8)
    return BoolFun(2 * k, parity ^ g.table[y])


# text formats

def hex_digits(m: int) -> int:
    return max(1, (1 << m) // 4)


def format_hex(f: BoolFun) -> str:
    return format(f.to_int(), f"0{hex_digits(f.m)}x")


def parse_hex(text: str, m: int) -> BoolFun:
    s = text.strip()
    want = hex_digits(m)
    if len(s) != want:
        raise ParseError(f"hex truth table for m={m} needs {want} digits, got {len(s)}")
    bad = re.search(r"[^0-9a-fA-F]", s)
    if bad:
        raise ParseError(f"invalid hex digit {bad.group()!r}", bad.start())
    value = int(s, 16)
    if value >> (1 << m):
        raise ParseError(f"hex value too large for m={m}", 0)
    return BoolFun.from_int(value, m)


def format_monomial(s: int) -> str:
    if s == 0:
        return "1"
    return "*".join(f"x{i + 1}" for i in range(s.bit_length()) if s >> i & 1)


def format_anf(anf: Anf | BoolFun) -> str:
    """Canonical ANF text: monomials in increasing index order joined by " + "."""
    if isinstance(anf, BoolFun):
        anf = anf.anf()
    terms = [format_monomial(int(s)) for s in anf.support]
    return " + ".join(terms) if terms else "0"


_TOKEN = re.compile(r"\s*(?:(?P<plus>\+)|(?P<star>\*)|(?P<const>[01])(?![0-9])|x(?P<var>[0-9]+)|(?P<bad>\S))")


def parse_anf(text: str, m: int) -> Anf:
    """Parse ANF text such as ``"x1*x2 + x3 + 1"`` into coefficients.

    Repeated monomials cancel (addition is over F_2).
    """
    coeffs = np.zeros(1 << m, dtype=np.uint8)
    pos = 0
    end = len(text.rstrip())
    term: int | None = None  # monomial mask, or -1 for the constant 0
    expect_factor = True

    def close_term():
        if term is not None and term >= 0:
            coeffs[term] ^= 1

    while pos < end:
        tok = _TOKEN.match(text, pos)
        kind = tok.lastgroup
        start = tok.start(kind)
        pos = tok.end()
        if kind == "bad":
            raise ParseError(f"unexpected character {tok.group('bad')!r}", start)
        if kind == "plus":
            if expect_factor:
                raise ParseError("expected a term before '+'", start)
            close_term()
            term, expect_factor = None, True
        elif kind == "star":
            if expect_factor or term is None or term <= 0:
                raise ParseError("unexpected '*'", start)
            expect_factor = True
        elif not expect_factor:
            raise ParseError("missing operator between terms", start)
        elif kind == "const":
            if term is not None:
                raise ParseError("constant inside a monomial", start)
            term = 0 if tok.group("const") == "1" else -1
            expect_factor = False
        else:
            i = int(tok.group("var"))
            if not 1 <= i <= m:
                raise ParseError(f"variable x{i} out of range for m={m}", start)
            term = (term or 0) | (1 << (i - 1))
            expect_factor = False
    if expect_factor:
        raise ParseError("expression ends where a term is expected", end)
    close_term()
    return Anf(m, coeffs)


def read_function_file(path: str | Path) -> tuple[int, list[BoolFun]]:
    """Read ``m=<int>`` followed by one hex truth table per line.

    Blank lines and ``#`` comments are ignored.
    """
    lines = Path(path).read_text().splitlines()
    return parse_function_lines(lines)


def parse_function_lines(lines: Iterable[str]) -> tuple[int, list[BoolFun]]:
    m = None
    funcs = []
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if m is None:
            match = re.fullmatch(r"m\s*=\s*(\d+)", line)
            if not match:
                raise ParseError(f"line {lineno}: expected header 'm=<int>'", 0)
            m = int(match.group(1))
            if not 1 <= m <= MAX_VARS:
                raise ParseError(f"line {lineno}: m={m} unsupported", 0)
            continue
        token = line.split()[0]
        try:
            funcs.append(parse_hex(token, m))
        except ParseError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    if m is None:
        raise ParseError("missing 'm=<int>' header")
    return m, funcs


def format_function_lines(m: int, funcs: Iterable[BoolFun]) -> str:
    out = [f"m={m}"]
    for f in funcs:
        if f.m != m:
            raise DimensionError(f"function with {f.m} variables in an m={m} file")
        out.append(f.to_hex())
    return "\n".join(out) + "\n"


def write_function_file(path: str | Path, m: int, funcs: Iterable[BoolFun]) -> None:
    Path(path).write_text(format_function_lines(m, funcs))


__all__ = [
    "Anf",
    "BoolFun",
    "WalshSpectrum",
    "anf_mobius",
    "concat",
    "degree_valuation_weight",
    "format_anf",
    "format_hex",
    "fwht",
    "inverse_walsh",
    "mm_construct",
    "mobius",
    "parse_anf",
    "parse_hex",
    "read_function_file",
    "restrict",
    "span_points",
    "walsh_spectrum",
    "write_function_file",
]
