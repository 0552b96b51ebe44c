"""Compiled inner loops.

Subspaces arrive as ``(n, r)`` int64 arrays of RREF rows with a parallel
array of pivot masks (see ``spaces.subspace_arrays``).  All kernels release
the GIL so callers can shard subspace ranges across threads.  ``cancel`` is a
one-element int64 array polled between subspaces; a nonzero value stops the
shard early.
"""

import numpy as np
from numba import njit, prange

_JIT = dict(cache=True, nogil=True)


@njit(**_JIT)
def popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@njit(**_JIT)
def span_into(rows, out):
    out[0] = 0
    h = 1
    for i in range(rows.shape[0]):
        b = rows[i]
        for t in range(h):
            out[h + t] = out[t] ^ b
        h <<= 1


@njit(**_JIT)
def mobius_inplace(buf, n):
    size = 1 << n
    h = 1
    while h < size:
        for j in range(size):
            if j & h:
                buf[j] ^= buf[j ^ h]
        h <<= 1


@njit(**_JIT)
def anf_degree(buf, n):
    """Degree of the ANF held in ``buf`` (0 for constants)."""
    best = 0
    for j in range(1 << n):
        if buf[j]:
            c = popcount(j)
            if c > best:
                best = c
    return best


@njit(**_JIT)
def fwht_inplace(vals, n):
    size = 1 << n
    h = 1
    while h < size:
        for j in range(size):
            if not (j & h):
                x = vals[j]
                y = vals[j | h]
                vals[j] = x + y
                vals[j | h] = x - y
        h <<= 1


@njit(**_JIT)
def _restriction_degree(tt, rep, span, r, buf):
    for t in range(1 << r):
        buf[t] = tt[rep ^ span[t]]
    mobius_inplace(buf, r)
    return anf_degree(buf, r)


@njit(**_JIT)
def min_restriction_degree(tt, m, bases, masks, start, stop, stop_at, cancel):
    """Minimum degree of ``tt`` restricted to the flats of subspaces ``start..stop``.

    Returns ``(value, subspace index, coset representative)``; stops as soon
    as ``value <= stop_at``.
    """
    r = bases.shape[1]
    full = (1 << m) - 1
    span = np.empty(1 << r, dtype=np.int64)
    buf = np.empty(1 << r, dtype=np.uint8)
    best = r + 1
    best_s = -1
    best_a = 0
    for s in range(start, stop):
        if cancel[0]:
            break
        span_into(bases[s], span)
        comp = full & ~masks[s]
        a = 0
        while True:
            d = _restriction_degree(tt, a, span, r, buf)
            if d < best:
                best = d
                best_s = s
                best_a = a
                if best <= stop_at:
                    return best, best_s, best_a
            a = (a - comp) & comp
            if a == 0:
                break
    return best, best_s, best_a


@njit(**_JIT)
def two_constant_cosets(tt, m, bases, masks, start, stop, cancel):
    """Algorithm-1 inner loop: first subspace with two cosets where ``tt`` is constant.

    Returns ``(subspace index, rep1, rep2)`` or ``(-1, 0, 0)``.
    """
    r = bases.shape[1]
    full = (1 << m) - 1
    span = np.empty(1 << r, dtype=np.int64)
    for s in range(start, stop):
        if cancel[0]:
            break
        span_into(bases[s], span)
        comp = full & ~masks[s]
        count = 0
        first = 0
        a = 0
        while True:
            v = tt[a]
            const = True
            for t in range(1, 1 << r):
                if tt[a ^ span[t]] != v:
                    const = False
                    break
            if const:
                count += 1
                if count == 2:
                    return s, first, a
                first = a
            a = (a - comp) & comp
            if a == 0:
                break
    return -1, 0, 0


@njit(cache=True, parallel=True)
def batch_min_restriction_degree(tts, m, bases, masks, stop_at):
    n = tts.shape[0]
    out = np.empty(n, dtype=np.int64)
    for i in prange(n):
        cancel = np.zeros(1, dtype=np.int64)
        out[i] = min_restriction_degree(tts[i], m, bases, masks, 0, bases.shape[0], stop_at, cancel)[0]
    return out


@njit(cache=True, parallel=True)
def batch_is_abnormal(tts, m, bases, masks):
    n = tts.shape[0]
    out = np.empty(n, dtype=np.bool_)
    for i in prange(n):
        cancel = np.zeros(1, dtype=np.int64)
        out[i] = two_constant_cosets(tts[i], m, bases, masks, 0, bases.shape[0], cancel)[0] < 0
    return out


# quadratic forms

@njit(**_JIT)
def pair_tables(n):
    """Coordinates of the lexicographically ordered pairs ``i < j`` of ``n`` variables."""
    npairs = n * (n - 1) // 2
    pi = np.empty(npairs, dtype=np.int64)
    pj = np.empty(npairs, dtype=np.int64)
    c = 0
    for i in range(n):
        for j in range(i + 1, n):
            pi[c] = i
            pj[c] = j
            c += 1
    return pi, pj


@njit(**_JIT)
def restriction_images(rows, m):
    """Quadratic part of the restriction of each ``x_p x_q`` to ``span(rows)``.

    Entry ``c`` (global pair order) is a bitset over the local pair order.
    """
    k = rows.shape[0]
    gp, gq = pair_tables(m)
    lp, lq = pair_tables(k)
    out = np.zeros(gp.size, dtype=np.int64)
    for c in range(gp.size):
        p = gp[c]
        q = gq[c]
        img = 0
        for d in range(lp.size):
            bi = rows[lp[d]]
            bj = rows[lq[d]]
            bit = (((bi >> p) & (bj >> q)) ^ ((bj >> p) & (bi >> q))) & 1
            img |= bit << d
        out[c] = img
    return out


@njit(**_JIT)
def nullspace_bits(images, width):
    """Kernel of ``e_c -> images[c]`` as bitsets over the input basis."""
    piv_img = np.zeros(width, dtype=np.int64)
    piv_combo = np.zeros(width, dtype=np.int64)
    has = np.zeros(width, dtype=np.bool_)
    kern = np.empty(images.size, dtype=np.int64)
    nk = 0
    for c in range(images.size):
        img = images[c]
        combo = np.int64(1) << c
        while img:
            p = 63
            while not (img >> p) & 1:
                p -= 1
            if not has[p]:
                has[p] = True
                piv_img[p] = img
                piv_combo[p] = combo
                break
            img ^= piv_img[p]
            combo ^= piv_combo[p]
        if img == 0:
            kern[nk] = combo
            nk += 1
    return kern[:nk]


@njit(**_JIT)
def dual_functionals(rows, mask, m):
    """Vectors ``u_i`` with ``u_i . rows[j] = delta_ij`` (first ``k`` columns of the inverse)."""
    k = rows.shape[0]
    mat = np.empty(m, dtype=np.int64)
    for i in range(k):
        mat[i] = rows[i]
    c = k
    for j in range(m):
        if not (mask >> j) & 1:
            mat[c] = np.int64(1) << j
            c += 1
    inv = np.empty(m, dtype=np.int64)
    for i in range(m):
        inv[i] = np.int64(1) << i
    for col in range(m):
        piv = col
        while not (mat[piv] >> col) & 1:
            piv += 1
        mat[col], mat[piv] = mat[piv], mat[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        for i in range(m):
            if i != col and (mat[i] >> col) & 1:
                mat[i] ^= mat[col]
                inv[i] ^= inv[col]
    out = np.zeros(k, dtype=np.int64)
    for i in range(k):
        for r in range(m):
            out[i] |= ((inv[r] >> i) & 1) << r
    return out


@njit(**_JIT)
def product_quadratic_part(u, v, m):
    """Global-pair bitset of the quadratic part of ``(u.x)(v.x)``."""
    gp, gq = pair_tables(m)
    out = 0
    for c in range(gp.size):
        p = gp[c]
        q = gq[c]
        out |= ((((u >> p) & (v >> q)) ^ ((u >> q) & (v >> p))) & 1) << c
    return out


@njit(**_JIT)
def sieve_shard(tt, m, bases, masks, start, stop, eliminated):
    """Algorithm-2 loop over subspaces ``start..stop``; sets bits of eliminated forms.

    Returns the number of (subspace, quadratic part) cosets cleared.
    """
    k = bases.shape[1]
    full = (1 << m) - 1
    nloc = k * (k - 1) // 2
    lp, lq = pair_tables(k)
    span = np.empty(1 << k, dtype=np.int64)
    buf = np.empty(1 << k, dtype=np.uint8)
    seen = np.zeros(1 << nloc, dtype=np.bool_)
    lifts = np.empty(nloc, dtype=np.int64)
    cleared = 0
    for s in range(start, stop):
        rows = bases[s]
        span_into(rows, span)
        kern = nullspace_bits(restriction_images(rows, m), max(nloc, 1))
        funcs = dual_functionals(rows, masks[s], m)
        for d in range(nloc):
            lifts[d] = product_quadratic_part(funcs[lp[d]], funcs[lq[d]], m)
        seen[:] = False
        comp = full & ~masks[s]
        a = 0
        while True:
            for t in range(1 << k):
                buf[t] = tt[a ^ span[t]]
            mobius_inplace(buf, k)
            if anf_degree(buf, k) <= 2:
                rho = 0
                for d in range(nloc):
                    if buf[(1 << lp[d]) | (1 << lq[d])]:
                        rho |= np.int64(1) << d
                if not seen[rho]:
                    seen[rho] = True
                    q0 = 0
                    for d in range(nloc):
                        if (rho >> d) & 1:
                            q0 ^= lifts[d]
                    clear_coset(eliminated, q0, kern)
                    cleared += 1
            a = (a - comp) & comp
            if a == 0:
                break
    return cleared


@njit(**_JIT)
def clear_coset(bits, q0, kern):
    """Mark every element of ``q0 + span(kern)`` (Gray-code walk)."""
    idx = q0
    bits[idx >> 6] |= np.uint64(1) << np.uint64(idx & 63)
    nk = kern.size
    for step in range(1, 1 << nk):
        tz = 0
        while not (step >> tz) & 1:
            tz += 1
        idx ^= kern[tz]
        bits[idx >> 6] |= np.uint64(1) << np.uint64(idx & 63)


# admissible restrictions

@njit(**_JIT)
def _spectrum_ok(tab, n, vals, ok, offset):
    size = 1 << n
    for j in range(size):
        vals[j] = 1 - 2 * np.int64(tab[j])
    fwht_inplace(vals, n)
    for j in range(size):
        v = vals[j] + offset
        if v < 0 or v >= ok.size or not ok[v]:
            return False
    return True


@njit(**_JIT)
def enumerate_admissible(base, free_pos, zeta, n, ks, ok):
    """Fill free positions of ``base`` with every allowed popcount in ``ks``.

    Keeps assignments where both the function and its ``zeta`` complement
    have spectra inside the set encoded by ``ok`` (indexed by value + 2**n).
    Functions are returned as packed uint64 truth tables (``n <= 6``).
    """
    size = 1 << n
    nfree = free_pos.size
    tab = base.copy()
    alt = base.copy()
    vals = np.empty(size, dtype=np.int64)
    out = np.empty(64, dtype=np.uint64)
    cnt = 0
    offset = size
    for ki in range(ks.size):
        kk = ks[ki]
        if kk == 0:
            x = np.int64(0)
        else:
            x = (np.int64(1) << kk) - 1
        limit = np.int64(1) << nfree
        while x < limit:
            for j in range(nfree):
                tab[free_pos[j]] = (x >> j) & 1
            for j in range(size):
                alt[j] = tab[j] ^ zeta[j]
            if _spectrum_ok(tab, n, vals, ok, offset) and _spectrum_ok(alt, n, vals, ok, offset):
                packed = np.uint64(0)
                for j in range(size):
                    if tab[j]:
                        packed |= np.uint64(1) << np.uint64(j)
                if cnt == out.size:
                    grown = np.empty(out.size * 2, dtype=np.uint64)
                    grown[:cnt] = out
                    out = grown
                out[cnt] = packed
                cnt += 1
            if x == 0:
                break
            # Gosper: next integer with the same popcount
            c = x & -x
            rr = x + c
            x = (((rr ^ x) >> 2) // c) | rr
    return out[:cnt]


@njit(**_JIT)
def packed_spectra(packed, n, zeta):
    """int16 Walsh spectra of packed tables and of their ``zeta`` complements."""
    size = 1 << n
    cnt = packed.size
    spec = np.empty((cnt, size), dtype=np.int16)
    alt = np.empty((cnt, size), dtype=np.int16)
    vals = np.empty(size, dtype=np.int64)
    for i in range(cnt):
        w = packed[i]
        for j in range(size):
            vals[j] = 1 - 2 * np.int64((w >> np.uint64(j)) & np.uint64(1))
        fwht_inplace(vals, n)
        for j in range(size):
            spec[i, j] = vals[j]
        w = w ^ zeta
        for j in range(size):
            vals[j] = 1 - 2 * np.int64((w >> np.uint64(j)) & np.uint64(1))
        fwht_inplace(vals, n)
        for j in range(size):
            alt[i, j] = vals[j]
    return spec, alt


@njit(**_JIT)
def join_pairs(sl, al, sr, ar, lidx, lbounds, ridx, rbounds, ok, off):
    """Pairs ``(i, j)`` from matching buckets with ``x + y`` and ``x - y`` allowed at every position.

    Bucket ``b`` holds left rows ``lidx[lbounds[b]:lbounds[b+1]]`` and right
    rows ``ridx[rbounds[b]:rbounds[b+1]]``; the test covers both the
    spectra and the complemented spectra.
    """
    out = np.empty((1024, 2), dtype=np.int64)
    cnt = 0
    w = sl.shape[1]
    for b in range(lbounds.size - 1):
        for p in range(lbounds[b], lbounds[b + 1]):
            i = lidx[p]
            for q in range(rbounds[b], rbounds[b + 1]):
                j = ridx[q]
                good = True
                for a in range(w):
                    x = np.int64(sl[i, a])
                    y = np.int64(sr[j, a])
                    if not ok[x + y + off] or not ok[x - y + off]:
                        good = False
                        break
                    x = np.int64(al[i, a])
                    y = np.int64(ar[j, a])
                    if not ok[x + y + off] or not ok[x - y + off]:
                        good = False
                        break
                if good:
                    if cnt == out.shape[0]:
                        grown = np.empty((2 * cnt, 2), dtype=np.int64)
                        grown[:cnt] = out
                        out = grown
                    out[cnt, 0] = i
                    out[cnt, 1] = j
                    cnt += 1
    return out[:cnt]


@njit(**_JIT)
def key_masks(spec, unit):
    """Per row, the bitmask of positions holding an odd multiple of ``unit``."""
    out = np.zeros(spec.shape[0], dtype=np.uint64)
    for i in range(spec.shape[0]):
        k = np.uint64(0)
        for j in range(spec.shape[1]):
            if abs(np.int64(spec[i, j])) % (2 * unit) == unit:
                k |= np.uint64(1) << np.uint64(j)
        out[i] = k
    return out


@njit(**_JIT)
def _key_lt(a1, a2, b1, b2):
    return a1 < b1 or (a1 == b1 and a2 < b2)


@njit(**_JIT)
def _lower_bound(k1, k2, x1, x2):
    lo, hi = 0, k1.size
    while lo < hi:
        mid = (lo + hi) >> 1
        if _key_lt(k1[mid], k2[mid], x1, x2):
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(**_JIT)
def stream_expand(sa, aa, sb, ab, lidx, lb, ridx, rb, b0, b1, ok2, off2,
                  ls, la, lk1, lk2, unit1, ok1, off1, top):
    """Three-level merge without materialising the right half.

    Walks matching buckets ``b0..b1`` of ``A_010 x A_011``; each admissible
    ``R`` probes the left table (rows sorted by key pair ``lk1, lk2``).
    Returns ``(left row, a row, b row)`` for every bent ``(Phi0||Phi1)``.
    """
    w = sa.shape[1]
    width = 2 * w
    rs = np.empty(width, dtype=np.int64)
    ra = np.empty(width, dtype=np.int64)
    out = np.empty((64, 3), dtype=np.int64)
    cnt = 0
    for b in range(b0, b1):
        for p in range(lb[b], lb[b + 1]):
            i = lidx[p]
            for q in range(rb[b], rb[b + 1]):
                j = ridx[q]
                good = True
                for t in range(w):
                    x = np.int64(sa[i, t])
                    y = np.int64(sb[j, t])
                    if not ok2[x + y + off2] or not ok2[x - y + off2]:
                        good = False
                        break
                    rs[t] = x + y
                    rs[t + w] = x - y
                    x = np.int64(aa[i, t])
                    y = np.int64(ab[j, t])
                    if not ok2[x + y + off2] or not ok2[x - y + off2]:
                        good = False
                        break
                    ra[t] = x + y
                    ra[t + w] = x - y
                if not good:
                    continue
                k1 = np.uint64(0)
                k2 = np.uint64(0)
                for t in range(width):
                    if unit1 == 0:
                        break
                    if abs(rs[t]) % (2 * unit1) == unit1:
                        k1 |= np.uint64(1) << np.uint64(t)
                    if abs(ra[t]) % (2 * unit1) == unit1:
                        k2 |= np.uint64(1) << np.uint64(t)
                u = _lower_bound(lk1, lk2, k1, k2)
                while u < lk1.size and lk1[u] == k1 and lk2[u] == k2:
                    good = True
                    for t in range(width):
                        x = np.int64(ls[u, t])
                        y = rs[t]
                        xa = np.int64(la[u, t])
                        ya = ra[t]
                        if not (ok1[x + y + off1] and ok1[x - y + off1]
                                and ok1[xa + ya + off1] and ok1[xa - ya + off1]):
                            good = False
                            break
                        # Phi = (Phi0 || Phi1) must be bent
                        if (abs(x + y + xa + ya) != top or abs(x + y - xa - ya) != top
                                or abs(x - y + xa - ya) != top or abs(x - y - xa + ya) != top):
                            good = False
                            break
                    if good:
                        if cnt == out.shape[0]:
                            grown = np.empty((2 * cnt, 3), dtype=np.int64)
                            grown[:cnt] = out
                            out = grown
                        out[cnt, 0] = u
                        out[cnt, 1] = i
                        out[cnt, 2] = j
                        cnt += 1
                    u += 1
    return out[:cnt]
