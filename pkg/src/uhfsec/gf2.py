"""Arithmetic in GF(2^l) modulo the all-ones polynomial.

Phi(X) = X^l + X^(l-1) + ... + X + 1 is irreducible over GF(2) exactly when
l + 1 is prime and 2 generates the multiplicative group mod l + 1. For such
l the field sits inside the cyclic ring F2[X]/(X^(l+1) - 1), so a product is
one cyclic convolution of the (l+1)-length coefficient vectors followed by a
single fold: if the X^l coefficient is set, add Phi (flip all l+1 bits).

Elements are plain ints: bit j of the int is the coefficient of X^j, which
makes the usual binary spelling of the int the MSB-first coefficient vector.
:class:`FieldElement` wraps an int with its length for the public API.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from uhfsec import _kernels
from uhfsec.bits import bits_to_int, from_hex, int_to_bits, to_hex
from uhfsec.errors import InvalidLengthError

# Above this length products go through the FFT convolution.
FFT_THRESHOLD = 4096


def _is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=None)
def is_valid_length(l):
    """True iff l + 1 is prime and 2 has order l modulo l + 1."""
    if l < 1 or not _is_prime(l + 1):
        return False
    p = l + 1
    seen = set()
    v = 1
    for _ in range(l):
        if v in seen:
            return False
        seen.add(v)
        v = (v * 2) % p
    return True


def find_valid_lengths(max_l):
    """All valid field lengths 2 <= l <= max_l, ascending."""
    if max_l < 2:
        raise ValueError(f"max_l must be at least 2, got {max_l}")
    return [l for l in range(2, max_l + 1) if is_valid_length(l)]


def largest_valid_length(n):
    """Largest valid l <= n, or None."""
    for l in range(n, 1, -1):
        if is_valid_length(l):
            return l
    return None


def _clmul(a, b):
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        a <<= 1
        b >>= 1
    return acc


def _poly_mod(a, m):
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _int_to_lsb_bits(v, n):
    raw = np.frombuffer(v.to_bytes((n + 7) // 8, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:n]


def _lsb_bits_to_int(bits):
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")


class GF2Field:
    """GF(2^l) for a valid length l; use :func:`field` for a cached instance."""

    def __init__(self, l):
        if not is_valid_length(l):
            raise InvalidLengthError(
                f"l={l}: X^l+...+1 is not irreducible (need l+1 prime with 2 primitive mod l+1)"
            )
        self.l = l
        self.order = 1 << l
        self.ring_mask = (1 << (l + 1)) - 1
        self.phi = self.ring_mask
        self._top = 1 << l

    def __repr__(self):
        return f"GF2Field(l={self.l})"

    def check(self, a):
        if not 0 <= a < self.order:
            raise ValueError(f"{a} is not an element of GF(2^{self.l})")
        return a

    def _fold(self, acc):
        return acc ^ self.phi if acc & self._top else acc

    def mul(self, a, b):
        """Product of two elements."""
        self.check(a)
        self.check(b)
        if self.l > FFT_THRESHOLD:
            return self.mul_fft(a, b)
        w = self.l + 1
        mask = self.ring_mask
        acc = 0
        j = 0
        while b:
            if b & 1:
                acc ^= ((a << j) | (a >> (w - j))) & mask
            b >>= 1
            j += 1
        return self._fold(acc)

    def mul_fft(self, a, b):
        w = self.l + 1
        lin = _kernels.gf2_convolve(_int_to_lsb_bits(a, w), _int_to_lsb_bits(b, w))
        cyc = np.zeros(w + w, dtype=np.uint8)
        cyc[: lin.size] = lin
        ring = cyc[:w] ^ cyc[w:]
        return self._fold(_lsb_bits_to_int(ring))

    def mul_many(self, a, b):
        """Elementwise product of uint64 arrays (needs l <= 62)."""
        if self.l > _kernels.MAX_FIELD_WORD_L:
            out = [self.mul(int(x), int(y)) for x, y in zip(np.ravel(a), np.ravel(b))]
            return np.array(out, dtype=object).reshape(np.shape(a))
        return _kernels.ring_mul(a, b, self.l)

    def inv(self, a):
        """Inverse by the binary extended Euclidean algorithm."""
        self.check(a)
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(2^l)")
        u, v = a, self.phi
        g1, g2 = 1, 0
        while u != 1:
            j = u.bit_length() - v.bit_length()
            if j < 0:
                u, v = v, u
                g1, g2 = g2, g1
                j = -j
            u ^= v << j
            g1 ^= g2 << j
        return _poly_mod(g1, self.phi)

    def pow(self, a, e):
        result = 1
        base = self.check(a)
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def element(self, value):
        return FieldElement(self.check(value), self.l)


@lru_cache(maxsize=None)
def field(l):
    return GF2Field(l)


@dataclass(frozen=True)
class FieldElement:
    """Element of GF(2^length); ``value`` bit j is the X^j coefficient."""

    value: int
    length: int

    def __post_init__(self):
        if self.length < 1 or not 0 <= self.value < (1 << self.length):
            raise ValueError(f"value {self.value} is not a {self.length}-bit vector")

    @classmethod
    def from_bits(cls, bits):
        bits = np.asarray(bits)
        return cls(bits_to_int(bits), int(bits.size))

    @classmethod
    def from_hex(cls, text, length):
        return cls(from_hex(text, length), length)

    @classmethod
    def zero(cls, length):
        return cls(0, length)

    @classmethod
    def one(cls, length):
        return cls(1, length)

    @property
    def bits(self):
        """MSB-first 0/1 vector: entry i is the coefficient of X^(l-1-i)."""
        return int_to_bits(self.value, self.length)

    def hex(self):
        return to_hex(self.value, self.length)

    def _same(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        if other.length != self.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.value ^ other.value, self.length)

    __sub__ = __add__

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return gf_mul(self, other)

    def inverse(self):
        return gf_inv(self)

    def __bool__(self):
        return self.value != 0

    def __str__(self):
        return self.hex()


def gf_mul(a, b):
    """Product of two :class:`FieldElement` of the same valid length."""
    if a.length != b.length:
        raise ValueError(f"length mismatch: {a.length} vs {b.length}")
    return FieldElement(field(a.length).mul(a.value, b.value), a.length)


def gf_inv(a):
    """Multiplicative inverse; raises ``ZeroDivisionError`` for zero."""
    return FieldElement(field(a.length).inv(a.value), a.length)
