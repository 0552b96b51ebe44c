"""Small GF(2) linear algebra on int bitsets (bit ``j`` = column ``j``)."""

from __future__ import annotations

from typing import Sequence


def parity(x: int) -> int:
    return bin(x).count("1") & 1


def dot(u: int, v: int) -> int:
    return parity(u & v)


def rref(rows: Sequence[int]) -> list[int]:
    """Reduced row echelon basis of the row span, sorted by pivot.

    The pivot of a row is its highest set bit; every other row is zero at
    that position.  The result is unique for a given span.
    """
    basis: dict[int, int] = {}
    for v in rows:
        for p, b in basis.items():
            if v >> p & 1:
                v ^= b
        if not v:
            continue
        p = v.bit_length() - 1
        for q in basis:
            if basis[q] >> p & 1:
                basis[q] ^= v
        basis[p] = v
    return [basis[p] for p in sorted(basis)]


def rank(rows: Sequence[int]) -> int:
    return len(rref(rows))


def reduce(v: int, basis: Sequence[int]) -> int:
    """Reduce ``v`` modulo the span of an RREF basis (clears pivot bits)."""
    for b in basis:
        if v >> (b.bit_length() - 1) & 1:
            v ^= b
    return v


def inverse(rows: Sequence[int], n: int) -> list[int]:
    """Inverse of the ``n x n`` matrix whose row ``i`` is ``rows[i]``.

    Row vectors multiply on the left: ``x M = XOR of rows[i] for bits i of x``.
    Raises ``ValueError`` when the matrix is singular.
    """
    work = [(rows[i], 1 << i) for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][0] >> col & 1), None)
        if piv is None:
            raise ValueError("matrix is singular over GF(2)")
        work[col], work[piv] = work[piv], work[col]
        r, a = work[col]
        for i in range(n):
            if i != col and work[i][0] >> col & 1:
                work[i] = (work[i][0] ^ r, work[i][1] ^ a)
    return [a for _, a in work]


def transpose(rows: Sequence[int], n_cols: int) -> list[int]:
    return [sum(((r >> j) & 1) << i for i, r in enumerate(rows)) for j in range(n_cols)]


def vec_mat(x: int, rows: Sequence[int]) -> int:
    out = 0
    i = 0
    while x:
        if x & 1:
            out ^= rows[i]
        x >>= 1
        i += 1
    return out


def nullspace(images: Sequence[int]) -> list[int]:
    """Kernel of the linear map sending basis vector ``e_i`` to ``images[i]``.

    Returns kernel vectors as bitsets over the input basis.
    """
    pivots: dict[int, tuple[int, int]] = {}
    kernel = []
    for i, img in enumerate(images):
        combo = 1 << i
        while img:
            p = img.bit_length() - 1
            if p not in pivots:
                pivots[p] = (img, combo)
                break
            pimg, pcombo = pivots[p]
            img ^= pimg
            combo ^= pcombo
        else:
            kernel.append(combo)
    return kernel
