"""Bit-vector conversions.

Vectors are MSB-first: element 0 of an n-bit vector is the most significant
bit of its integer form, so taking the first k bits is ``v >> (n - k)``.
"""

import numpy as np


def int_to_bits(value, n):
    if value < 0 or value >> n:
        raise ValueError(f"value {value} does not fit in {n} bits")
    out = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        out[n - 1 - i] = (value >> i) & 1
    return out


def bits_to_int(bits):
    value = 0
    for b in np.asarray(bits).ravel():
        if b not in (0, 1):
            raise ValueError(f"bit vectors hold 0/1 entries, got {b!r}")
        value = (value << 1) | int(b)
    return value


def ints_to_bits(values, n):
    """Row-wise expansion of an integer array into an (len, n) 0/1 array."""
    values = np.asarray(values, dtype=np.uint64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64)
    return ((values[..., None] >> shifts) & np.uint64(1)).astype(np.uint8)


def bits_to_ints(bits):
    """Inverse of :func:`ints_to_bits` along the last axis (n <= 64)."""
    bits = np.asarray(bits, dtype=np.uint64)
    n = bits.shape[-1]
    weights = np.uint64(1) << np.arange(n - 1, -1, -1, dtype=np.uint64)
    return (bits * weights).sum(axis=-1, dtype=np.uint64)


def to_hex(value, n):
    """Zero-padded hex with ceil(n/4) digits."""
    if value < 0 or value >> n:
        raise ValueError(f"value {value} does not fit in {n} bits")
    return format(value, f"0{(n + 3) // 4}x")


def from_hex(text, n):
    text = text.strip().lower()
    if text.startswith("0x"):
        text = text[2:]
    if not text:
        raise ValueError("empty hex string")
    value = int(text, 16)
    if value >> n:
        raise ValueError(f"hex value 0x{text} does not fit in {n} bits")
    return value


def parse_bitstring(text):
    """'0110' or '0,1,1,0' -> uint8 array."""
    cleaned = text.replace(",", "").replace(" ", "")
    if not cleaned or set(cleaned) - {"0", "1"}:
        raise ValueError(f"expected a string of 0/1 characters, got {text!r}")
    return np.array([int(c) for c in cleaned], dtype=np.uint8)


def format_bits(bits):
    return "".join(str(int(b)) for b in np.asarray(bits).ravel())


def popcount(value):
    return value.bit_count()
