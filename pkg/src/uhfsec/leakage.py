"""Exact leakage of hashed sources and of UHF-based channel encoders.

Everything here is a full enumeration over seeds, inputs and outputs, so the
returned numbers are exact (up to float rounding, or exactly rational where
requested) and can be compared directly against the closed-form bounds.
"""

from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from uhfsec.bounds import channel_lhl_bound, lhl_bound_kl, lhl_bound_tv, pinsker_tv_bound
from uhfsec.errors import check_budget
from uhfsec.measures import (
    as_distribution,
    cond_min_entropy,
    cond_min_entropy_given,
    smooth_max_information,
)

BOUND_SLACK = 1e-12


@dataclass
class LeakageReport:
    """An exact leakage value next to the bound it is checked against."""

    quantity: str
    exact: float
    bound: float
    eps: float
    enumeration_size: int
    extras: dict = field(default_factory=dict)

    @property
    def passed(self):
        return bool(self.exact <= self.bound + BOUND_SLACK)

    def as_dict(self):
        out = asdict(self)
        out["passed"] = self.passed
        return out


def _onehot(table, width):
    out = np.zeros((table.size, width))
    out[np.arange(table.size), table.astype(np.int64)] = 1.0
    return out


def _kl_rows(J, ref):
    """sum J log(J / ref) over the support of J, in bits."""
    mask = J > 0
    return float(np.sum(J[mask] * np.log2(J[mask] / np.broadcast_to(ref, J.shape)[mask])))


def _exact_tv(tables, P, k):
    P = np.asarray(P, dtype=object)
    pz = P.sum(axis=0)
    n_out = 1 << k
    total = Fraction(0)
    for t in tables:
        J = [[Fraction(0)] * P.shape[1] for _ in range(n_out)]
        for x, m in enumerate(t):
            for z in range(P.shape[1]):
                J[int(m)][z] += Fraction(P[x, z])
        for m in range(n_out):
            for z in range(P.shape[1]):
                total += abs(J[m][z] - Fraction(pz[z]) / n_out)
    return total / (2 * len(tables))


def exact_extraction_leakage(family, P_XZ, exact=False, budget=None):
    """TV distance and KL security index of (f_S(X), Z, S) against uniform x (Z, S).

    ``P_XZ[x, z]`` is indexed by the l-bit integer x. With ``exact=True`` the
    TV distance is also computed in rational arithmetic (floats are converted
    exactly) and returned under ``tv_exact``.
    """
    P = as_distribution(P_XZ, "P_XZ")
    if P.ndim == 1:
        P = P[:, None]
    n_in = 1 << family.l
    if P.shape[0] != n_in:
        raise ValueError(f"P_XZ needs {n_in} rows for l={family.l}, got {P.shape[0]}")
    check_budget("exact_extraction_leakage", family.seed_count * P.size, budget)
    Pf = P.astype(np.float64)
    k = family.k
    n_out = 1 << k
    pz = Pf.sum(axis=0)
    ref = pz[None, :] / n_out
    tv = 0.0
    kl = 0.0
    tables = []
    for s in family.seeds():
        t = family.output_table(s)
        if exact:
            tables.append(t)
        J = _onehot(t, n_out).T @ Pf
        tv += 0.5 * np.abs(J - ref).sum()
        kl += _kl_rows(J, ref)
    tv /= family.seed_count
    kl = max(kl / family.seed_count, 0.0)
    hmin = cond_min_entropy(Pf)
    hmin_pz = cond_min_entropy_given(Pf, pz)
    out = {
        "k": k,
        "tv": float(tv),
        "kl": float(kl),
        "hmin": hmin,
        "hmin_given_pz": hmin_pz,
        "tv_bound": lhl_bound_tv(k, hmin, 0.0, 1),
        "kl_bound": lhl_bound_kl(k, hmin_pz),
        "pinsker_tv_bound": pinsker_tv_bound(kl),
        "enumeration_size": family.seed_count * int(P.size),
    }
    if exact:
        out["tv_exact"] = _exact_tv(tables, P, k)
    return out


def preimage_sizes(family, seed):
    return np.bincount(family.output_table(seed).astype(np.int64), minlength=1 << family.k)


def conditional_rows(family, V, seed):
    """P(z | m, s) for every m: the mean of V's rows over f_s^-1(m)."""
    W = np.asarray(getattr(V, "matrix", V), dtype=np.float64)
    t = family.output_table(seed)
    onehot = _onehot(t, 1 << family.k)
    counts = onehot.sum(axis=0)
    if (counts == 0).any():
        raise ValueError(f"seed {seed} has an empty preimage; the family is not balanced")
    return (onehot.T @ W) / counts[:, None]


def _mutual_information_rows(R, weights):
    """I(M; Z) for P(z|m) = R[m] and P(m) = weights."""
    mix = weights @ R
    total = 0.0
    for w, row in zip(weights, R):
        if w > 0:
            total += w * _kl_rows(row, mix)
    return max(total, 0.0)


def message_set(k, which="all"):
    if which == "all":
        return np.arange(1 << k)
    if which == "nonzero":
        return np.arange(1, 1 << k)
    return np.asarray(which, dtype=np.int64)


def exact_channel_leakage(family, V, messages="all", budget=None):
    """I(M ; Z, S) in bits for M uniform on ``messages`` and X uniform on f_S^-1(M).

    ``V`` is a channel whose rows are indexed by the l-bit input x. Every
    preimage must have the same size (checked for every seed).
    """
    W = np.asarray(getattr(V, "matrix", V), dtype=np.float64)
    if W.shape[0] != 1 << family.l:
        raise ValueError(f"channel needs {1 << family.l} inputs, got {W.shape[0]}")
    check_budget("exact_channel_leakage", family.seed_count * W.size, budget)
    msgs = message_set(family.k, messages)
    weights = np.full(msgs.size, 1.0 / msgs.size)
    total = 0.0
    for s in family.seeds():
        sizes = preimage_sizes(family, s)
        if (sizes != sizes[0]).any():
            raise ValueError(f"seed {s} has unequal preimage sizes; the family is not balanced")
        R = conditional_rows(family, W, s)[msgs]
        total += _mutual_information_rows(R, weights)
    return float(total / family.seed_count)


def channel_leakage_reports(family, V, eps_list=(0.0,), messages="all", budget=None):
    """Exact I(M ; Z, S) checked against the channel bound at each eps."""
    # equal preimage sizes (checked below) force 2^b = 2^l / 2^k
    b = family.l - family.k
    leak = exact_channel_leakage(family, V, messages, budget)
    W = np.asarray(getattr(V, "matrix", V))
    size = family.seed_count * int(W.size)
    eps_values = sorted({0.0, *map(float, eps_list)})
    reports = []
    for eps in eps_values:
        smooth = smooth_max_information(W, eps)
        bound = channel_lhl_bound(b, smooth.bits, eps, family.k)
        reports.append(LeakageReport(
            "I(M;Z,S)", leak, bound, eps, size,
            {"imax_eps": smooth.bits, "residual": smooth.residual, "b": b, "k": family.k},
        ))
    return reports
