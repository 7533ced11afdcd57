"""Binary linear codes with syndrome (coset-leader) decoding.

Vectors are uint8 0/1 arrays; every operation also accepts a stack of
vectors along the leading axes. Syndromes are packed MSB-first into ints to
index the coset-leader table.
"""

from itertools import combinations
from pathlib import Path

import numpy as np

from uhfsec.bits import bits_to_ints, int_to_bits, ints_to_bits
from uhfsec.errors import check_budget

MAX_TABLE_REDUNDANCY = 20

_GOLAY_B = """
110111000101
101110001011
011100010111
111000101101
110001011011
100010110111
000101101111
001011011101
010110111001
101101110001
011011100011
111111111110
"""


def _rref(m):
    """Reduced row echelon form over GF(2); returns (matrix, pivot columns)."""
    a = (np.array(m, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.flatnonzero(a[r:, c]) + r
        if hits.size == 0:
            continue
        p = hits[0]
        if p != r:
            a[[r, p]] = a[[p, r]]
        others = np.flatnonzero(a[:, c])
        others = others[others != r]
        a[others] ^= a[r]
        pivots.append(c)
        r += 1
    return a[:r], pivots


def gf2_rank(m):
    return len(_rref(m)[1])


def null_space(G):
    """Basis (as rows) of {h : G h^T = 0} over GF(2)."""
    R, pivots = _rref(G)
    n = R.shape[1]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for row, p in zip(R, pivots):
            v[p] = row[f]
        basis.append(v)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), n)


def _gf2_inverse(m):
    k = m.shape[0]
    aug = np.concatenate([np.array(m, dtype=np.uint8), np.eye(k, dtype=np.uint8)], axis=1)
    R, pivots = _rref(aug)
    if pivots[:k] != list(range(k)):
        raise ValueError("matrix is singular over GF(2)")
    return R[:, k:]


def load_matrix(path):
    """Read a 0/1 matrix: one row per line, blank lines and '#' comments ignored."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip().replace(" ", "")
        if not line:
            continue
        if set(line) - {"0", "1"}:
            raise ValueError(f"{path}:{lineno}: rows must contain only 0/1 characters")
        rows.append([int(c) for c in line])
    if not rows:
        raise ValueError(f"{path}: no matrix rows")
    if len({len(r) for r in rows}) != 1:
        raise ValueError(f"{path}: rows have unequal lengths")
    return np.array(rows, dtype=np.uint8)


def save_matrix(path, m):
    Path(path).write_text("".join("".join(str(int(b)) for b in row) + "\n" for row in m))


class LinearCode:
    """[n, k] binary linear code with a minimum-weight coset-leader table.

    The table is filled by scanning error patterns in order of weight and,
    within a weight, in ``itertools.combinations`` order; the first pattern
    reaching a syndrome becomes its leader. This fixes tie-breaking.
    """

    def __init__(self, G, H=None, name=None, build_table=True):
        G = np.array(G, dtype=np.uint8) & 1
        if G.ndim != 2:
            raise ValueError("generator must be a 2-D 0/1 matrix")
        k, n = G.shape
        if gf2_rank(G) != k:
            raise ValueError("generator rows are linearly dependent")
        H = null_space(G) if H is None else np.array(H, dtype=np.uint8) & 1
        if H.shape[1] != n or H.shape[0] != n - k or gf2_rank(H) != n - k:
            raise ValueError(f"parity-check must be a full-rank {n - k} x {n} matrix")
        if ((G.astype(np.int64) @ H.T.astype(np.int64)) & 1).any():
            raise ValueError("G H^T != 0")
        self.G = G
        self.H = H
        G.setflags(write=False)
        H.setflags(write=False)
        self.n = n
        self.k = k
        self.r = n - k
        self.name = name or f"linear[{n},{k}]"
        _, info = _rref(G)
        self.info_set = np.array(info)
        self._info_inv = _gf2_inverse(G[:, info])
        self.leaders = self._build_table() if build_table else None

    def __repr__(self):
        return f"LinearCode({self.name}, n={self.n}, k={self.k})"

    # -- constructors ---------------------------------------------------

    @classmethod
    def repetition(cls, n):
        return cls(np.ones((1, n), dtype=np.uint8), name=f"repetition({n})")

    @classmethod
    def bitwise_repetition(cls, k, reps):
        """Each of k message bits repeated ``reps`` times (block layout)."""
        G = np.kron(np.eye(k, dtype=np.uint8), np.ones((1, reps), dtype=np.uint8))
        return cls(G, name=f"bitrep({k}x{reps})")

    @classmethod
    def identity(cls, n):
        """Uncoded transmission: n = k, no redundancy."""
        return cls(np.eye(n, dtype=np.uint8), np.zeros((0, n), dtype=np.uint8),
                   name=f"identity({n})")

    @classmethod
    def hamming74(cls):
        P = np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1], [1, 1, 1]], dtype=np.uint8)
        G = np.concatenate([np.eye(4, dtype=np.uint8), P], axis=1)
        H = np.concatenate([P.T, np.eye(3, dtype=np.uint8)], axis=1)
        return cls(G, H, name="hamming(7,4)")

    @classmethod
    def golay24(cls):
        B = np.array([[int(c) for c in row] for row in _GOLAY_B.split()], dtype=np.uint8)
        G = np.concatenate([np.eye(12, dtype=np.uint8), B], axis=1)
        H = np.concatenate([B.T, np.eye(12, dtype=np.uint8)], axis=1)
        return cls(G, H, name="golay(24,12)")

    @classmethod
    def from_files(cls, generator, parity_check=None):
        G = load_matrix(generator)
        H = load_matrix(parity_check) if parity_check else None
        return cls(G, H, name=Path(generator).stem)

    # -- core operations --------------------------------------------------

    def _build_table(self):
        if self.r > MAX_TABLE_REDUNDANCY:
            raise ValueError(f"coset table needs n-k <= {MAX_TABLE_REDUNDANCY}, got {self.r}")
        check_budget(f"coset table for {self.name}", (1 << self.r) * self.n)
        size = 1 << self.r
        table = np.zeros((size, self.n), dtype=np.uint8)
        filled = np.zeros(size, dtype=bool)
        filled[0] = True
        remaining = size - 1
        cols = np.array([self.syndrome_int(np.eye(self.n, dtype=np.uint8)[j])
                         for j in range(self.n)], dtype=np.int64)
        for w in range(1, self.n + 1):
            if remaining == 0:
                break
            for support in combinations(range(self.n), w):
                syn = 0
                for j in support:
                    syn ^= int(cols[j])
                if not filled[syn]:
                    filled[syn] = True
                    table[syn, list(support)] = 1
                    remaining -= 1
                    if remaining == 0:
                        break
        table.setflags(write=False)
        return table

    def encode(self, u):
        """u G; ``u`` has trailing dimension k."""
        u = np.asarray(u, dtype=np.int64)
        if u.shape[-1] != self.k:
            raise ValueError(f"message must have {self.k} bits, got {u.shape[-1]}")
        return ((u @ self.G.astype(np.int64)) & 1).astype(np.uint8)

    def encode_int(self, v):
        return self.encode(int_to_bits(v, self.k))

    def syndrome(self, y):
        """H y^T as an (n-k)-bit vector."""
        y = np.asarray(y, dtype=np.int64)
        if y.shape[-1] != self.n:
            raise ValueError(f"word must have {self.n} bits, got {y.shape[-1]}")
        return ((y @ self.H.T.astype(np.int64)) & 1).astype(np.uint8)

    def syndrome_int(self, y):
        s = self.syndrome(y)
        if self.r == 0:
            return np.zeros(s.shape[:-1], dtype=np.int64) if s.ndim > 1 else 0
        packed = bits_to_ints(s).astype(np.int64)
        return packed if packed.ndim else int(packed)

    def leader_for_syndrome(self, syn):
        return self.leaders[syn]

    def coset_leader(self, x):
        """Minimum-weight e_x with syndrome(e_x) = syndrome(x); equals x + c_x."""
        return self.leaders[self.syndrome_int(x)]

    def decode_nearest(self, y):
        y = np.asarray(y, dtype=np.uint8)
        return y ^ self.coset_leader(y)

    def message_of(self, c):
        """Message bits of a codeword (inverse of :meth:`encode` on the code)."""
        c = np.asarray(c, dtype=np.int64)
        return ((c[..., self.info_set] @ self._info_inv.astype(np.int64)) & 1).astype(np.uint8)

    def decode_message(self, y):
        return self.message_of(self.decode_nearest(y))

    def codewords(self):
        check_budget(f"codewords of {self.name}", (1 << self.k) * self.n)
        return self.encode(ints_to_bits(np.arange(1 << self.k, dtype=np.uint64), self.k))

    def leader_weights(self):
        return self.leaders.sum(axis=1).astype(np.int64)

    def correct_decoding_probability(self, p):
        """P(decode_nearest(c + e) = c) over a BSC(p); the same for every c."""
        w = self.leader_weights()
        return float(np.sum(p ** w * (1 - p) ** (self.n - w)))

    def describe(self):
        return {"name": self.name, "n": self.n, "k": self.k}


def parse_code(spec):
    """Code from a name (``hamming74``, ``golay24``, ``repetition:N``,
    ``bitrep:KxR``, ``identity:N``) or a mapping with ``generator`` and
    optional ``parity_check`` file paths."""
    if isinstance(spec, LinearCode):
        return spec
    if isinstance(spec, dict):
        if "generator" not in spec:
            raise ValueError("code mapping needs a 'generator' path")
        return LinearCode.from_files(spec["generator"], spec.get("parity_check"))
    name, _, arg = str(spec).partition(":")
    if name in ("hamming74", "hamming"):
        return LinearCode.hamming74()
    if name in ("golay24", "golay"):
        return LinearCode.golay24()
    if name == "repetition":
        return LinearCode.repetition(int(arg))
    if name == "identity":
        return LinearCode.identity(int(arg))
    if name == "bitrep":
        k, _, reps = arg.partition("x")
        return LinearCode.bitwise_repetition(int(k), int(reps))
    raise ValueError(f"unknown code {spec!r}")
