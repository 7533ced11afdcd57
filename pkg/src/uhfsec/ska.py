"""One-way secret key agreement: syndrome reconciliation then hashing.

The parties hold X^n and Y^n = X^n + E^n with E_i ~ Bern(eps_src). The sender
publishes the syndrome of x (equivalently its coset leader e_x); the receiver
decodes y + e_x = c_x + e and recovers x as c_x + e_x. Both then hash the
first l bits with a common public seed.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from uhfsec.bits import bits_to_int, ints_to_bits
from uhfsec.codes import LinearCode
from uhfsec.errors import check_budget
from uhfsec.gf2 import largest_valid_length
from uhfsec.leakage import LeakageReport
from uhfsec.measures import renyi2_entropy, smooth_cond_min_entropy
from uhfsec.rng import make_rng
from uhfsec.uhf import make_family

MAX_EVAL_N = 10
MAX_EVAL_L = 4


def ska_select_key_length(h, r, delta):
    """floor(h - r - 2 log(2/delta)), clamped at 0 (0 means infeasible)."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    return max(math.floor(h - r - 2.0 * math.log2(2.0 / delta)), 0)


@dataclass
class SkaConfig:
    code: LinearCode
    eps_src: float
    delta: float = 0.25
    l: int | None = None
    uhf_kind: str = "field"
    entropy_mode: str = "exact"
    eve_q: float | None = None
    k: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.eps_src <= 1.0:
            raise ValueError(f"eps_src must lie in [0, 1], got {self.eps_src}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if self.entropy_mode not in ("exact", "order2"):
            raise ValueError(f"entropy_mode must be 'exact' or 'order2', got {self.entropy_mode!r}")
        if self.eve_q is not None and not 0.0 <= self.eve_q <= 1.0:
            raise ValueError(f"eve_q must lie in [0, 1], got {self.eve_q}")
        if self.l is None:
            self.l = largest_valid_length(self.n) if self.uhf_kind == "field" else self.n
            if self.l is None:
                raise ValueError(f"no valid field length <= n={self.n}")
        if self.l > self.n:
            raise ValueError(f"uhf length l={self.l} exceeds n={self.n}")
        if self.k is None:
            self.k = ska_select_key_length(self.source_entropy(), self.r, self.delta)
        if not 0 <= self.k <= self.l:
            raise ValueError(f"key length k={self.k} must lie in [0, l={self.l}]")

    @property
    def n(self):
        return self.code.n

    @property
    def r(self):
        return self.code.r

    def family(self, k=None):
        return make_family(self.uhf_kind, self.l, self.k if k is None else k)

    def source_joint(self):
        """P[x, z] of the first l bits of X and the eavesdropper's copy of them."""
        size = 1 << self.l
        if self.eve_q is None:
            return np.full((size, 1), 1.0 / size)
        xs = np.arange(size)
        flips = np.array([bin(v).count("1") for v in range(size)])
        d = flips[xs[:, None] ^ xs[None, :]]
        q = self.eve_q
        return (q ** d) * ((1 - q) ** (self.l - d)) / size

    def source_entropy(self):
        """Threshold entropy used by the key-length rule."""
        P = self.source_joint()
        if self.entropy_mode == "order2":
            pz = P.sum(axis=0)
            return float(-np.log2(np.sum(P ** 2 / pz[None, :])))
        return smooth_cond_min_entropy(P, self.delta / 2)

    def describe(self):
        return {
            "code": self.code.describe(), "eps_src": self.eps_src, "delta": self.delta,
            "l": self.l, "k": self.k, "uhf_kind": self.uhf_kind,
            "entropy_mode": self.entropy_mode, "eve_q": self.eve_q,
        }


@dataclass
class SkaTranscript:
    syndrome: np.ndarray
    r: int
    seed: int
    k1: int
    k2: int
    reconciled: bool
    agreement: bool = field(init=False)

    def __post_init__(self):
        self.agreement = self.k1 == self.k2


def ska_reconcile(x, y, code):
    """Return (x_hat at the receiver, public syndrome of x)."""
    x = np.asarray(x, dtype=np.uint8)
    y = np.asarray(y, dtype=np.uint8)
    e_x = code.coset_leader(x)
    syndrome = code.syndrome(x)
    c_hat = code.decode_nearest(y ^ e_x)
    return c_hat ^ e_x, syndrome


def _prefix_int(bits, l):
    return bits_to_int(np.asarray(bits)[:l])


def ska_run(config, rng):
    """One run: sample the source, reconcile, hash with a fresh public seed."""
    n = config.n
    x = rng.integers(0, 2, n).astype(np.uint8)
    e = (rng.random(n) < config.eps_src).astype(np.uint8)
    y = x ^ e
    fam = config.family()
    seed = fam.sample_seed(rng)
    x_hat, syndrome = ska_reconcile(x, y, config.code)
    k1 = fam.eval(seed, _prefix_int(x, config.l))
    k2 = fam.eval(seed, _prefix_int(x_hat, config.l))
    return SkaTranscript(syndrome, config.r, int(seed), int(k1), int(k2),
                         bool((x_hat == x).all()))


def ska_simulate(config, trials, master_seed):
    """Monte Carlo agreement rates; trial i uses substream (master_seed, i)."""
    reconciled = 0
    agreed = 0
    for i in range(trials):
        t = ska_run(config, make_rng(master_seed, i))
        reconciled += t.reconciled
        agreed += t.agreement
    analytic = config.code.correct_decoding_probability(config.eps_src)
    rate = reconciled / trials
    sigma = math.sqrt(analytic * (1 - analytic) / trials)
    return {
        "trials": trials,
        "reconciliation_rate": rate,
        "key_agreement_rate": agreed / trials,
        "analytic_reconciliation": analytic,
        "sigma": sigma,
        "within_3sigma": bool(abs(rate - analytic) <= 3 * sigma + 1e-15),
    }


def ska_exact_security_eval(config, k=None, budget=None):
    """Exact TV distance of (K, Pi, Z, S) from uniform x (Pi, Z, S).

    K is the sender's key, Pi the public syndrome, S the public seed and Z the
    eavesdropper's observation: constant, or X^n through BSC(eve_q). X^n is
    uniform, as in the model. The report passes when TV <= delta; for an
    explicit ``k`` above the selection rule this may fail, which is reported
    rather than raised.
    """
    n, l = config.n, config.l
    if n > MAX_EVAL_N or l > MAX_EVAL_L:
        raise ValueError(f"exact SKA evaluation needs n <= {MAX_EVAL_N} and l <= {MAX_EVAL_L}")
    k = config.k if k is None else k
    fam = config.family(k)
    size_x = 1 << n
    nz = 1 if config.eve_q is None else size_x
    size = fam.seed_count * size_x * nz
    check_budget("ska_exact_security_eval", size, budget)

    xs = np.arange(size_x, dtype=np.uint64)
    syn = np.asarray(config.code.syndrome_int(ints_to_bits(xs, n)), dtype=np.int64).reshape(size_x)
    if config.eve_q is None:
        P = np.full((size_x, 1), 1.0 / size_x)
    else:
        weights = np.array([bin(v).count("1") for v in range(size_x)])
        d = weights[np.arange(size_x)[:, None] ^ np.arange(size_x)[None, :]]
        q = config.eve_q
        P = (q ** d) * ((1 - q) ** (n - d)) / size_x
    n_keys = 1 << k
    n_cols = (1 << config.r) * nz
    cols = syn[:, None] * nz + np.arange(nz)[None, :]
    marginal = np.zeros(n_cols)
    np.add.at(marginal, cols, P)
    ref = marginal[None, :] / n_keys
    prefix = (xs >> np.uint64(n - l)).astype(np.int64)
    tv = 0.0
    for s in fam.seeds():
        keys = fam.output_table(s).astype(np.int64)[prefix]
        J = np.zeros((n_keys, n_cols))
        np.add.at(J, (np.broadcast_to(keys[:, None], cols.shape), cols), P)
        tv += 0.5 * np.abs(J - ref).sum()
    tv /= fam.seed_count
    return LeakageReport(
        "TV(K,Pi,Z,S)", float(tv), config.delta, config.delta / 2, size,
        {"k": k, "k_rule": config.k, "l": l, "r": config.r,
         "h": config.source_entropy(), "eve": "constant" if config.eve_q is None else f"bsc({config.eve_q})"},
    )
