"""Discrete channels, composition, tensor powers, and capacity.

A channel is a row-stochastic matrix ``W[x, z]``. Outputs of an n-fold
product are indexed mixed-radix with the first use most significant, which
matches the MSB-first convention for binary words.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy.special import ndtr

from uhfsec.errors import check_budget

ROW_TOL = 1e-12
MATERIALIZE_BUDGET = 1 << 24


def binary_entropy(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


@dataclass(frozen=True, eq=False)
class DiscreteChannel:
    """Stochastic matrix ``matrix[x, z] = W(z|x)``.

    ``kind`` and ``params`` record how the channel was built so closed-form
    capacities can be used where they exist.
    """

    matrix: np.ndarray
    kind: str = "dmc"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.size == 0:
            raise ValueError("channel matrix must be a nonempty 2-D array")
        if (m < 0).any() or (m > 1).any():
            raise ValueError("channel entries must lie in [0, 1]")
        bad = np.flatnonzero(np.abs(m.sum(axis=1) - 1.0) > ROW_TOL)
        if bad.size:
            raise ValueError(f"row {int(bad[0])} sums to {m[bad[0]].sum()!r}, not 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def n_inputs(self):
        return self.matrix.shape[0]

    @property
    def n_outputs(self):
        return self.matrix.shape[1]

    def row(self, x):
        return self.matrix[x]

    def describe(self):
        return {"kind": self.kind, "params": dict(self.params),
                "inputs": self.n_inputs, "outputs": self.n_outputs}


def bsc(p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"crossover probability must be in [0, 1], got {p}")
    return DiscreteChannel(np.array([[1 - p, p], [p, 1 - p]]), "bsc", {"p": p})


def bec(p):
    """Binary erasure channel; output 2 is the erasure symbol."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"erasure probability must be in [0, 1], got {p}")
    return DiscreteChannel(np.array([[1 - p, 0.0, p], [0.0, 1 - p, p]]), "bec", {"p": p})


def noiseless(q=2):
    return DiscreteChannel(np.eye(q), "noiseless", {"q": q})


@dataclass(frozen=True)
class AwgnChannel:
    """Real AWGN with noise variance ``sigma2`` and average input power ``power``."""

    sigma2: float
    power: float

    def __post_init__(self):
        if self.sigma2 <= 0:
            raise ValueError(f"noise variance must be positive, got {self.sigma2}")
        if self.power < 0:
            raise ValueError(f"power must be nonnegative, got {self.power}")

    def capacity(self):
        return 0.5 * math.log2(1 + self.power / self.sigma2)

    def default_grid(self, levels, points=33, span=4.0):
        sigma = math.sqrt(self.sigma2)
        grids = [np.linspace(a - span * sigma, a + span * sigma, points) for a in levels]
        return np.unique(np.concatenate(grids))

    def discretize(self, levels=None, grid=None, points=33):
        """Finite channel from input ``levels`` to the cells of ``grid``.

        Each grid point owns the interval between the midpoints to its
        neighbours; the outermost cells extend to infinity. Default levels
        are antipodal +-sqrt(P).
        """
        if levels is None:
            a = math.sqrt(self.power)
            levels = [-a, a]
        levels = np.asarray(levels, dtype=np.float64)
        grid = self.default_grid(levels, points) if grid is None else np.asarray(grid, float)
        if grid.ndim != 1 or grid.size < 2 or (np.diff(grid) <= 0).any():
            raise ValueError("AWGN grid must be a strictly increasing 1-D array")
        edges = np.concatenate(([-np.inf], (grid[1:] + grid[:-1]) / 2, [np.inf]))
        sigma = math.sqrt(self.sigma2)
        cdf = ndtr((edges[None, :] - levels[:, None]) / sigma)
        w = np.diff(cdf, axis=1)
        w /= w.sum(axis=1, keepdims=True)
        return DiscreteChannel(w, "awgn-discrete",
                               {"sigma2": self.sigma2, "power": self.power,
                                "levels": levels.tolist(), "grid_points": int(grid.size)})


def compose_degraded(T, V):
    """W(z|x) = sum_y V(z|y) T(y|x): V applied after T."""
    if T.n_outputs != V.n_inputs:
        raise ValueError(f"cannot compose: T has {T.n_outputs} outputs, V has {V.n_inputs} inputs")
    w = T.matrix @ V.matrix
    w /= w.sum(axis=1, keepdims=True)
    if T.kind == "bsc" and V.kind == "bsc":
        # still a BSC; keep the tag so capacity stays closed-form
        return DiscreteChannel(w, "bsc", {"p": float(w[0, 1])})
    return DiscreteChannel(w, "dmc", {"T": T.describe(), "V": V.describe()})


def product_channel(W, n, budget=MATERIALIZE_BUDGET):
    """n independent uses of W as one channel X^n -> Z^n."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    check_budget(f"product_channel(n={n})", (W.n_inputs * W.n_outputs) ** n, budget)
    m = W.matrix
    out = m
    for _ in range(n - 1):
        out = np.kron(out, m)
    return DiscreteChannel(out, "product", {"base": W.describe(), "n": n})


@dataclass(frozen=True, eq=False)
class AugmentedChannel(DiscreteChannel):
    """Channel v -> Z^n obtained by sending e0(v) over n uses of ``base``."""

    base: DiscreteChannel = None
    n: int = 0


def augment_with_encoder(W, n, encoder, l=None, budget=MATERIALIZE_BUDGET):
    """W^n composed with an encoder from l-bit words to length-n codewords.

    ``encoder`` is a :class:`~uhfsec.codes.LinearCode` (l defaults to its
    dimension) or a callable mapping an int to a length-n symbol array, in
    which case ``l`` is required.
    """
    if hasattr(encoder, "encode_int"):
        l = encoder.k if l is None else l
        if encoder.n != n:
            raise ValueError(f"code length {encoder.n} differs from n={n}")
        enc = encoder.encode_int
    else:
        if l is None:
            raise ValueError("l is required for a callable encoder")
        enc = encoder
    check_budget(f"augment_with_encoder(l={l}, n={n})", (1 << l) * W.n_outputs ** n, budget)
    rows = []
    for v in range(1 << l):
        word = np.asarray(enc(v)).ravel()
        if word.size != n:
            raise ValueError(f"encoder output for {v} has length {word.size}, expected {n}")
        row = np.ones(1)
        for sym in word:
            row = np.kron(row, W.matrix[int(sym)])
        rows.append(row)
    mat = np.vstack(rows)
    return AugmentedChannel(mat, "augmented", {"base": W.describe(), "n": n, "l": l},
                            base=W, n=n)


def sample(channel, x, rng):
    """Draw outputs for input symbol(s) ``x`` using the caller's generator."""
    x = np.asarray(x, dtype=np.int64)
    cdf = np.cumsum(channel.matrix, axis=1)
    u = rng.random(x.shape)
    z = (u[..., None] >= cdf[x]).sum(axis=-1)
    z = np.minimum(z, channel.n_outputs - 1)
    return z if z.ndim else int(z)


def blahut_arimoto(matrix, tol=1e-9, max_iter=100_000):
    """Capacity (bits/use) and optimal input law of a DMC."""
    w = np.asarray(matrix, dtype=np.float64)
    nx = w.shape[0]
    p = np.full(nx, 1.0 / nx)
    logw = np.where(w > 0, np.log2(np.where(w > 0, w, 1.0)), 0.0)
    lower = 0.0
    for _ in range(max_iter):
        q = p @ w
        logq = np.where(q > 0, np.log2(np.where(q > 0, q, 1.0)), 0.0)
        d = (w * (logw - logq[None, :])).sum(axis=1)
        lower = float(p @ d)
        upper = float(d.max())
        if upper - lower < tol:
            break
        p = p * np.exp2(d)
        p /= p.sum()
    return max(lower, 0.0), p


def capacity(channel):
    """Capacity in bits per channel use."""
    if isinstance(channel, AwgnChannel):
        return channel.capacity()
    if channel.kind == "bsc":
        return 1.0 - binary_entropy(channel.params["p"])
    if channel.kind == "bec":
        return 1.0 - channel.params["p"]
    if channel.kind == "noiseless":
        return math.log2(channel.params["q"])
    return blahut_arimoto(channel.matrix)[0]


def parse_channel(spec):
    """Channel from a config mapping or a ``kind:param`` shorthand string.

    Accepted kinds: ``bsc`` (p), ``bec`` (p), ``noiseless`` (q), ``dmc``
    (matrix), ``awgn`` (sigma2, power, optional points), the last returned
    discretized.
    """
    if isinstance(spec, DiscreteChannel):
        return spec
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        spec = {"kind": kind}
        if arg:
            if kind in ("bsc", "bec"):
                spec["p"] = float(arg)
            elif kind == "noiseless":
                spec["q"] = int(arg)
            else:
                raise ValueError(f"no shorthand for channel kind {kind!r}")
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError(f"channel spec needs a 'kind', got {spec!r}")
    kind = spec["kind"]
    if kind == "bsc":
        return bsc(float(spec["p"]))
    if kind == "bec":
        return bec(float(spec["p"]))
    if kind == "noiseless":
        return noiseless(int(spec.get("q", 2)))
    if kind == "dmc":
        return DiscreteChannel(np.asarray(spec["matrix"], dtype=float))
    if kind == "awgn":
        ch = AwgnChannel(float(spec["sigma2"]), float(spec["power"]))
        return ch.discretize(spec.get("levels"), spec.get("grid"), int(spec.get("points", 33)))
    raise ValueError(f"unknown channel kind {kind!r}")
