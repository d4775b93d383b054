"""Hot loops, each with a numba and a numpy implementation.

The public wrappers at the bottom dispatch on :data:`gstab._accel.USE_NUMBA`.
Both variants are importable directly (``*_nb`` / ``*_np``) so tests can pin
them against each other and the benchmark can time them side by side.

Symplectic points are packed into one integer as ``(v << n) | w`` where ``v``
is the X-part and ``w`` the Z-part; bit ``j`` of either half is coordinate
``j + 1``.
"""

import numpy as np

from . import _accel
from ._accel import njit

# ---------------------------------------------------------------------------
# Walsh-Hadamard butterfly (unnormalised, in place, along the last axis)


@njit
def _butterfly_1d(buf):
    n = buf.shape[0]
    h = 1
    while h < n:
        for i in range(0, n, 2 * h):
            for j in range(i, i + h):
                x = buf[j]
                y = buf[j + h]
                buf[j] = x + y
                buf[j + h] = x - y
        h *= 2


@njit
def wht_rows_nb(a):
    for r in range(a.shape[0]):
        _butterfly_1d(a[r])


def wht_rows_np(a):
    rows, size = a.shape
    h = 1
    while h < size:
        v = a.reshape(rows, size // (2 * h), 2, h)
        x = v[:, :, 0, :].copy()
        y = v[:, :, 1, :]
        v[:, :, 0, :] += y
        v[:, :, 1, :] = x - y
        h *= 2


# ---------------------------------------------------------------------------
# Characteristic-distribution rows: p(v, .) = 2^-n |WHT(f(x) conj f(x^v))|^2


@njit
def char_rows_nb(f, v0, v1, out):
    size = f.shape[0]
    buf = np.empty(size, dtype=np.complex128)
    for v in range(v0, v1):
        for x in range(size):
            buf[x] = f[x] * np.conj(f[x ^ v])
        _butterfly_1d(buf)
        for w in range(size):
            z = buf[w]
            out[v - v0, w] = z.real * z.real + z.imag * z.imag


def char_rows_np(f, v0, v1, out):
    size = f.shape[0]
    xs = np.arange(size)
    vs = np.arange(v0, v1)
    buf = f[None, :] * np.conj(f[xs[None, :] ^ vs[:, None]])
    wht_rows_np(buf)
    out[...] = buf.real ** 2 + buf.imag ** 2


# ---------------------------------------------------------------------------
# Direct Gowers sum:  sum_{x,h_1..h_k} prod_omega C^{|omega|} f(x + omega.h)


@njit
def gowers_sum_nb(f, k):
    # levels[d] is the d-fold derivative D_{h_d} ... D_{h_1} f; walk the h
    # tuples as an odometer and rebuild only the levels whose h changed
    size = f.shape[0]
    levels = np.empty((k + 1, size), dtype=np.complex128)
    levels[0] = f
    hs = np.zeros(k, dtype=np.int64)
    dirty = 1
    total = 0.0 + 0.0j
    while True:
        for d in range(dirty, k + 1):
            h = hs[d - 1]
            prev = levels[d - 1]
            cur = levels[d]
            for x in range(size):
                cur[x] = prev[x] * np.conj(prev[x ^ h])
        for x in range(size):
            total += levels[k, x]
        i = k - 1
        while i >= 0 and hs[i] == size - 1:
            hs[i] = 0
            i -= 1
        if i < 0:
            break
        hs[i] += 1
        dirty = i + 1
    return total


def gowers_sum_np(f, k):
    # the corner product is the k-fold multiplicative derivative
    # D_h g(x) = g(x) conj(g(x ^ h)); loop over h_1, vectorise the rest
    size = f.shape[0]
    xs = np.arange(size)
    shift = xs[:, None] ^ xs[None, :]  # shift[h, x] = x ^ h
    total = 0.0 + 0.0j
    for h1 in range(size):
        g = (f * np.conj(f[xs ^ h1]))[None, :]
        for _ in range(1, k):
            g = (g[:, None, :] * np.conj(g[:, shift])).reshape(-1, size)
        total += g.sum()
    return total


# ---------------------------------------------------------------------------
# Pairwise symplectic products of packed points


@njit
def _parity64(t):
    t ^= t >> 32
    t ^= t >> 16
    t ^= t >> 8
    t ^= t >> 4
    t ^= t >> 2
    t ^= t >> 1
    return t & 1


@njit
def anticommutation_matrix_nb(pts, n):
    m = pts.shape[0]
    mask = (np.int64(1) << n) - 1
    out = np.zeros((m, m), dtype=np.bool_)
    for i in range(m):
        a = pts[i]
        for j in range(i + 1, m):
            b = pts[j]
            t = ((a >> n) & b & mask) ^ (a & mask & (b >> n))
            if _parity64(t):
                out[i, j] = True
                out[j, i] = True
    return out


def parity_np(t):
    t = np.asarray(t, dtype=np.int64).copy()
    for s in (32, 16, 8, 4, 2, 1):
        t ^= t >> s
    return t & 1


def anticommutation_matrix_np(pts, n):
    pts = np.asarray(pts, dtype=np.int64)
    mask = (1 << n) - 1
    a = pts[:, None]
    b = pts[None, :]
    t = ((a >> n) & b & mask) ^ (a & mask & (b >> n))
    return parity_np(t).astype(bool)


# ---------------------------------------------------------------------------
# Sumset indicator over a dense universe of size 2^bits


@njit
def sumset_indicator_nb(a, b, universe):
    out = np.zeros(universe, dtype=np.bool_)
    for i in range(a.shape[0]):
        x = a[i]
        for j in range(b.shape[0]):
            out[x ^ b[j]] = True
    return out


def sumset_indicator_np(a, b, universe, chunk=4096):
    out = np.zeros(universe, dtype=bool)
    for s in range(0, a.shape[0], chunk):
        out[np.bitwise_xor.outer(a[s:s + chunk], b).ravel()] = True
    return out


# ---------------------------------------------------------------------------
# dispatch


def wht_rows(a):
    """In-place unnormalised Walsh-Hadamard transform of each row of ``a``."""
    if _accel.USE_NUMBA:
        wht_rows_nb(a)
    else:
        wht_rows_np(a)


def char_rows(f, v0, v1, out):
    if _accel.USE_NUMBA:
        char_rows_nb(f, v0, v1, out)
    else:
        char_rows_np(f, v0, v1, out)


def gowers_sum(f, k):
    if _accel.USE_NUMBA:
        return gowers_sum_nb(f, k)
    return gowers_sum_np(f, k)


def anticommutation_matrix(pts, n):
    pts = np.ascontiguousarray(pts, dtype=np.int64)
    if _accel.USE_NUMBA:
        return anticommutation_matrix_nb(pts, n)
    return anticommutation_matrix_np(pts, n)


def sumset_indicator(a, b, universe):
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if _accel.USE_NUMBA:
        return sumset_indicator_nb(a, b, universe)
    return sumset_indicator_np(a, b, universe)
