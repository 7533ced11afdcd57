"""Packed-word kernels for batch hashing.

Every kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version with the same signature. The public names point at the numba
versions unless numba is missing or ``UHFSEC_PURE_NUMPY`` is set to a
non-empty value other than ``"0"``. Both variants stay importable so the
bench and the tests can compare them directly.

Words are ``uint64``; field kernels need l + 1 <= 63, Toeplitz kernels need
l <= 64 and k <= 64.
"""

import os

import numpy as np

PURE_NUMPY_ENV = "UHFSEC_PURE_NUMPY"

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional extra
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get(PURE_NUMPY_ENV, "") in ("", "0")

MAX_FIELD_WORD_L = 62
MAX_TOEPLITZ_WORD_L = 64


def _njit(fn):
    if HAVE_NUMBA:
        return numba.njit(nogil=True)(fn)
    return fn


# --- GF(2^l) multiplication in the cyclic ring F2[X]/(X^(l+1) - 1) ---------


def _ring_mul_numpy(a, b, l):
    width = l + 1
    mask = np.uint64((1 << width) - 1)
    top = np.uint64(1 << l)
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    acc = np.zeros(np.broadcast(a, b).shape, dtype=np.uint64)
    one = np.uint64(1)
    for j in range(width):
        sh = np.uint64(j)
        rot = ((a << sh) | (a >> np.uint64(width - j))) & mask
        take = ((b >> sh) & one).astype(bool)
        acc ^= np.where(take, rot, np.uint64(0))
    fold = (acc & top) != 0
    acc[fold] ^= mask
    return acc


@_njit
def _ring_mul_loop(a, b, l):
    width = np.uint64(l + 1)
    mask = (np.uint64(1) << width) - np.uint64(1)
    top = np.uint64(1) << np.uint64(l)
    one = np.uint64(1)
    zero = np.uint64(0)
    out = np.empty(a.shape[0], dtype=np.uint64)
    for i in range(a.shape[0]):
        x = a[i]
        y = b[i]
        acc = x & (zero - (y & one))
        j = one
        while j < width:
            y >>= one
            rot = ((x << j) | (x >> (width - j))) & mask
            acc ^= rot & (zero - (y & one))
            j += one
        if acc & top:
            acc ^= mask
        out[i] = acc
    return out


def _ring_mul_numba(a, b, l):
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.uint64), np.asarray(b, dtype=np.uint64))
    shape = a.shape
    out = _ring_mul_loop(np.ascontiguousarray(a).ravel(), np.ascontiguousarray(b).ravel(), l)
    return out.reshape(shape)


# --- Toeplitz / row-mask parity products ------------------------------------


def _parity64_numpy(v):
    v = v.copy()
    for sh in (32, 16, 8, 4, 2, 1):
        v ^= v >> np.uint64(sh)
    return v & np.uint64(1)


def _rowmask_apply_numpy(rows, xs):
    """Output word with bit (k-1-i) = parity(rows[i] & x), MSB-first rows."""
    rows = np.asarray(rows, dtype=np.uint64)
    xs = np.asarray(xs, dtype=np.uint64)
    k = rows.shape[0]
    out = np.zeros(xs.shape, dtype=np.uint64)
    for i in range(k):
        bit = _parity64_numpy(xs & rows[i])
        out |= bit << np.uint64(k - 1 - i)
    return out


@_njit
def _rowmask_apply_loop(rows, xs):
    k = rows.shape[0]
    one = np.uint64(1)
    zero = np.uint64(0)
    out = np.empty(xs.shape[0], dtype=np.uint64)
    for t in range(xs.shape[0]):
        x = xs[t]
        word = zero
        for i in range(k):
            v = rows[i] & x
            v ^= v >> np.uint64(32)
            v ^= v >> np.uint64(16)
            v ^= v >> np.uint64(8)
            v ^= v >> np.uint64(4)
            v ^= v >> np.uint64(2)
            v ^= v >> one
            word = (word << one) | (v & one)
        out[t] = word
    return out


def _rowmask_apply_numba(rows, xs):
    xs = np.asarray(xs, dtype=np.uint64)
    shape = xs.shape
    out = _rowmask_apply_loop(np.ascontiguousarray(rows, dtype=np.uint64),
                              np.ascontiguousarray(xs).ravel())
    return out.reshape(shape)


# --- transform-based binary convolution (large l) ---------------------------


def gf2_convolve(a_bits, b_bits):
    """Linear convolution of two 0/1 vectors over GF(2), via real FFT."""
    a = np.asarray(a_bits, dtype=np.float64)
    b = np.asarray(b_bits, dtype=np.float64)
    size = a.size + b.size - 1
    nfft = 1 << max(1, (size - 1).bit_length())
    prod = np.fft.irfft(np.fft.rfft(a, nfft) * np.fft.rfft(b, nfft), nfft)[:size]
    return (np.rint(prod).astype(np.int64) & 1).astype(np.uint8)


if USE_NUMBA:
    ring_mul = _ring_mul_numba
    rowmask_apply = _rowmask_apply_numba
    BACKEND = "numba"
else:
    ring_mul = _ring_mul_numpy
    rowmask_apply = _rowmask_apply_numpy
    BACKEND = "numpy"

IMPLEMENTATIONS = {
    "numpy": {"ring_mul": _ring_mul_numpy, "rowmask_apply": _rowmask_apply_numpy},
}
if HAVE_NUMBA:
    IMPLEMENTATIONS["numba"] = {"ring_mul": _ring_mul_numba, "rowmask_apply": _rowmask_apply_numba}
