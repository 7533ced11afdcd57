"""2-universal hash families, inverse samplers, and exhaustive verifiers.

All inputs, outputs, and seeds are MSB-first integers (see :mod:`uhfsec.bits`).

* ``field``: f_s(x) = k most significant bits of s*x in GF(2^l), s != 0.
* ``toeplitz``: f_s(x) = A x over GF(2), A the k x l Toeplitz matrix whose
  first row is s_1..s_l and whose first column continues with
  s_(l+1)..s_(l+k-1).
* ``modified-toeplitz``: f_s(x) = [A, I] x with A a k x (l-k) Toeplitz matrix
  built from l-1 seed bits; inverse sampler (r, m + A r).
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from uhfsec import _kernels
from uhfsec.errors import check_budget
from uhfsec.gf2 import field

KINDS = ("field", "toeplitz", "modified-toeplitz")


def _parity(v):
    return v.bit_count() & 1


def toeplitz_rows(seed, n_cols, n_rows):
    """Row masks (MSB-first over n_cols) of the Toeplitz matrix for ``seed``.

    ``seed`` has n_cols + n_rows - 1 bits; A[i][j] = s[j-i] for j >= i and
    s[n_cols + (i-j) - 1] below the diagonal (0-based indices into s).
    """
    nbits = n_cols + n_rows - 1
    s = [(seed >> (nbits - 1 - t)) & 1 for t in range(nbits)]
    rows = []
    for i in range(n_rows):
        mask = 0
        for j in range(n_cols):
            bit = s[j - i] if j >= i else s[n_cols + (i - j) - 1]
            mask = (mask << 1) | bit
        rows.append(mask)
    return rows


def _apply_rows(rows, x):
    out = 0
    for r in rows:
        out = (out << 1) | _parity(r & x)
    return out


class UHF:
    """A seeded family {f_s : {0,1}^l -> {0,1}^k}."""

    kind = None
    linear = True

    def __init__(self, l, k):
        self.l = l
        self.k = k

    @property
    def seed_bits(self):
        raise NotImplementedError

    @property
    def seed_count(self):
        return 1 << self.seed_bits

    @property
    def balanced_b(self):
        return None

    def seeds(self):
        return range(self.seed_count)

    def sample_seed(self, rng):
        """Uniform draw from {0,1}^seed_bits."""
        nbits = self.seed_bits
        if nbits <= 62:
            return int(rng.integers(0, 1 << nbits))
        raw = int.from_bytes(rng.bytes((nbits + 7) // 8), "big")
        return raw >> (-nbits % 8)

    def eval(self, seed, x):
        raise NotImplementedError

    def eval_many(self, seed, xs):
        xs = np.asarray(xs, dtype=np.uint64)
        return np.array([self.eval(seed, int(x)) for x in xs.ravel()], dtype=np.uint64).reshape(xs.shape)

    def output_table(self, seed):
        """f_seed evaluated on every input, as a uint64 array of length 2^l."""
        return self.eval_many(seed, np.arange(1 << self.l, dtype=np.uint64))

    def check_seed(self, seed):
        if not 0 <= seed < (1 << self.seed_bits):
            raise ValueError(f"seed must have {self.seed_bits} bits, got {seed:#x}")

    def _check_input(self, x):
        if not 0 <= x < (1 << self.l):
            raise ValueError(f"input must have {self.l} bits, got {x:#x}")

    def descriptor(self):
        return {
            "kind": self.kind,
            "l": self.l,
            "k": self.k,
            "seed_bits": self.seed_bits,
            "seed_count": self.seed_count,
            "balanced_b": self.balanced_b,
        }

    def __repr__(self):
        return f"{type(self).__name__}(l={self.l}, k={self.k})"


class FieldUHF(UHF):
    kind = "field"

    def __init__(self, l, k):
        if not 0 <= k <= l:
            raise ValueError(f"need 0 <= k <= l, got k={k}, l={l}")
        self.field = field(l)
        super().__init__(l, k)

    @property
    def seed_bits(self):
        return self.l

    @property
    def seed_count(self):
        return (1 << self.l) - 1

    @property
    def balanced_b(self):
        return self.l - self.k

    def seeds(self):
        return range(1, 1 << self.l)

    def sample_seed(self, rng):
        # rejection keeps the draw uniform over the nonzero elements
        while True:
            s = super().sample_seed(rng)
            if s:
                return s

    def check_seed(self, seed):
        super().check_seed(seed)
        if seed == 0:
            raise ValueError("field-family seeds must be nonzero")

    def eval(self, seed, x):
        self.check_seed(seed)
        self._check_input(x)
        return self.field.mul(seed, x) >> (self.l - self.k)

    def eval_many(self, seed, xs):
        self.check_seed(seed)
        if self.l > _kernels.MAX_FIELD_WORD_L:
            return super().eval_many(seed, xs)
        xs = np.asarray(xs, dtype=np.uint64)
        prod = self.field.mul_many(np.full(xs.shape, seed, dtype=np.uint64), xs)
        return prod >> np.uint64(self.l - self.k)

    def invert(self, seed, m, r):
        """s^-1 * (m || r): an element of f_s^-1(m), uniform when r is."""
        self.check_seed(seed)
        if not 0 <= m < (1 << self.k) or not 0 <= r < (1 << (self.l - self.k)):
            raise ValueError("m must have k bits and r must have l-k bits")
        return self.field.mul(self.field.inv(seed), (m << (self.l - self.k)) | r)


class ToeplitzUHF(UHF):
    kind = "toeplitz"

    def __init__(self, l, k):
        if not 1 <= k <= l:
            raise ValueError(f"need 1 <= k <= l, got k={k}, l={l}")
        super().__init__(l, k)

    @property
    def seed_bits(self):
        return self.l + self.k - 1

    def rows(self, seed):
        self.check_seed(seed)
        return toeplitz_rows(seed, self.l, self.k)

    def eval(self, seed, x):
        self._check_input(x)
        return _apply_rows(self.rows(seed), x)

    def eval_many(self, seed, xs):
        if self.l > _kernels.MAX_TOEPLITZ_WORD_L:
            return super().eval_many(seed, xs)
        rows = np.array(self.rows(seed), dtype=np.uint64)
        return _kernels.rowmask_apply(rows, np.asarray(xs, dtype=np.uint64))


class ModifiedToeplitzUHF(UHF):
    kind = "modified-toeplitz"

    def __init__(self, l, k):
        if not 1 <= k < l:
            raise ValueError(f"need 1 <= k < l, got k={k}, l={l}")
        super().__init__(l, k)

    @property
    def seed_bits(self):
        return self.l - 1

    def a_rows(self, seed):
        """Rows of the k x (l-k) Toeplitz block A."""
        self.check_seed(seed)
        return toeplitz_rows(seed, self.l - self.k, self.k)

    def rows(self, seed):
        # [A, I]: A occupies the high l-k columns, I the low k
        return [(a << self.k) | (1 << (self.k - 1 - i)) for i, a in enumerate(self.a_rows(seed))]

    def eval(self, seed, x):
        self._check_input(x)
        front = x >> self.k
        back = x & ((1 << self.k) - 1)
        return _apply_rows(self.a_rows(seed), front) ^ back

    def eval_many(self, seed, xs):
        if self.l > _kernels.MAX_TOEPLITZ_WORD_L:
            return super().eval_many(seed, xs)
        rows = np.array(self.rows(seed), dtype=np.uint64)
        return _kernels.rowmask_apply(rows, np.asarray(xs, dtype=np.uint64))

    def invert(self, seed, m, r):
        """(r, m + A r); always lands in f_s^-1(m)."""
        if not 0 <= m < (1 << self.k) or not 0 <= r < (1 << (self.l - self.k)):
            raise ValueError("m must have k bits and r must have l-k bits")
        return (r << self.k) | (m ^ _apply_rows(self.a_rows(seed), r))


class ExplicitUHF(UHF):
    """Family given by an explicit table ``table[s][x]``; for tests and demos."""

    kind = "explicit"
    linear = False

    def __init__(self, l, k, table):
        table = np.asarray(table, dtype=np.uint64)
        if table.ndim != 2 or table.shape[1] != 1 << l:
            raise ValueError("table must have shape (seed_count, 2^l)")
        if k < 64 and (table >> np.uint64(k)).any():
            raise ValueError(f"table outputs exceed {k} bits")
        self.table = table
        super().__init__(l, k)

    @property
    def seed_bits(self):
        return max(0, (self.table.shape[0] - 1).bit_length())

    @property
    def seed_count(self):
        return self.table.shape[0]

    def eval(self, seed, x):
        return int(self.table[seed, x])

    def eval_many(self, seed, xs):
        return self.table[seed][np.asarray(xs, dtype=np.int64)]


def make_family(kind, l, k):
    """UHF instance for a kind name in :data:`KINDS`."""
    if kind == "field":
        return FieldUHF(l, k)
    if kind == "toeplitz":
        return ToeplitzUHF(l, k)
    if kind == "modified-toeplitz":
        return ModifiedToeplitzUHF(l, k)
    raise ValueError(f"unknown UHF kind {kind!r}; expected one of {KINDS}")


# --- function interface --------------------------------------------------


def field_uhf_eval(s, x, k, l):
    return FieldUHF(l, k).eval(s, x)


def field_uhf_invert(s, m, r, k, l):
    return FieldUHF(l, k).invert(s, m, r)


def toeplitz_eval(s, x, l, k):
    return ToeplitzUHF(l, k).eval(s, x)


def modified_toeplitz_eval(s, x, l, k):
    return ModifiedToeplitzUHF(l, k).eval(s, x)


def modified_toeplitz_invert(s, m, r, l, k):
    return ModifiedToeplitzUHF(l, k).invert(s, m, r)


# --- exhaustive verifiers ------------------------------------------------


def _enumeration_size(family):
    return family.seed_count * (1 << family.l)


def verify_uhf_property(family, budget=None):
    """max over x != x' of the fraction of seeds with f_s(x) = f_s(x').

    Returned as an exact :class:`~fractions.Fraction`; the family is 2-universal
    iff the value is at most 2^-k. Linear families only need the count of
    seeds sending each nonzero difference to 0.
    """
    check_budget(f"verify_uhf_property({family!r})", _enumeration_size(family), budget)
    n_in = 1 << family.l
    if n_in < 2:
        return Fraction(0)
    if family.linear:
        zero_hits = np.zeros(n_in, dtype=np.int64)
        for s in family.seeds():
            zero_hits += family.output_table(s) == 0
        worst = int(zero_hits[1:].max())
    else:
        check_budget("pairwise collision matrix", family.seed_count * n_in * n_in, budget)
        coll = np.zeros((n_in, n_in), dtype=np.int64)
        for s in family.seeds():
            t = family.output_table(s)
            coll += t[:, None] == t[None, :]
        np.fill_diagonal(coll, 0)
        worst = int(coll.max())
    return Fraction(worst, family.seed_count)


@dataclass(frozen=True)
class BalanceReport:
    balanced: bool
    b: int | None
    witness: dict | None = None

    def as_dict(self):
        return {"balanced": self.balanced, "b": self.b, "witness": self.witness}


def verify_balanced(family, budget=None):
    """Exhaustive check of the balanced conditions.

    (a) every preimage f_s^-1(m) has the same size 2^b, for all s and m;
    (b) every nonzero input x is sent to each nonzero output m by the same
        number of seeds.

    The witness names the first violation found: ``{"condition": "a", "seed",
    "m", "preimage_size", "expected"}`` or ``{"condition": "b", "x", "m",
    "seed_count", "expected"}``.
    """
    check_budget(f"verify_balanced({family!r})", _enumeration_size(family), budget)
    l, k = family.l, family.k
    n_in, n_out = 1 << l, 1 << k
    expected = n_in // n_out
    seeds_to = np.zeros((n_in, n_out), dtype=np.int64)
    rows = np.arange(n_in)
    for s in family.seeds():
        t = family.output_table(s).astype(np.int64)
        sizes = np.bincount(t, minlength=n_out)
        bad = np.flatnonzero(sizes != expected)
        if bad.size:
            m = int(bad[0])
            return BalanceReport(False, None, {
                "condition": "a", "seed": int(s), "m": m,
                "preimage_size": int(sizes[m]), "expected": expected,
            })
        seeds_to[rows, t] += 1
    sub = seeds_to[1:, 1:]
    if sub.size and (sub != sub.flat[0]).any():
        values, counts = np.unique(sub, return_counts=True)
        typical = int(values[np.argmax(counts)])
        # prefer a concentrated input (all seeds agree on its output)
        conc = np.flatnonzero(seeds_to[1:].max(axis=1) == family.seed_count)
        if conc.size:
            x = int(conc[0]) + 1
            m = int(np.argmax(seeds_to[x]))
        else:
            i, j = np.argwhere(sub != typical)[0]
            x, m = int(i) + 1, int(j) + 1
        return BalanceReport(False, None, {
            "condition": "b", "x": x, "m": m,
            "seed_count": int(seeds_to[x, m]), "expected": typical,
        })
    return BalanceReport(True, l - k)
