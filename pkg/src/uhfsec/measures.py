"""Exact information measures on finite distributions and channels.

All logarithms are base 2. Distributions are 1-D probability arrays, joint
distributions are 2-D arrays ``P[x, z]``, and channels are row-stochastic
matrices ``W[x, z]`` (or :class:`~uhfsec.channels.DiscreteChannel`).
Object arrays of :class:`fractions.Fraction` are accepted wherever only
sums and comparisons are needed (``tv_distance``).
"""

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

PROB_TOL = 1e-12


def _matrix(W):
    return np.asarray(getattr(W, "matrix", W))


def as_distribution(P, name="P"):
    """Validate nonnegativity and normalisation (tolerance 1e-12)."""
    arr = np.asarray(P)
    if arr.dtype == object:
        if any(v < 0 for v in arr.ravel()):
            raise ValueError(f"{name} has negative mass")
        if abs(sum(arr.ravel()) - 1) > PROB_TOL:
            raise ValueError(f"{name} sums to {sum(arr.ravel())}, not 1")
        return arr
    arr = arr.astype(np.float64)
    if (arr < 0).any():
        raise ValueError(f"{name} has negative mass")
    total = arr.sum()
    if abs(total - 1.0) > PROB_TOL:
        raise ValueError(f"{name} sums to {total!r}, not 1")
    return arr


def _same_shape(P, Q):
    if np.shape(P) != np.shape(Q):
        raise ValueError(f"alphabet mismatch: {np.shape(P)} vs {np.shape(Q)}")


def tv_distance(P, Q):
    """(1/2) sum |P - Q|; exact when both inputs hold Fractions."""
    P = as_distribution(P, "P")
    Q = as_distribution(Q, "Q")
    _same_shape(P, Q)
    if P.dtype == object or Q.dtype == object:
        return sum(abs(Fraction(p) - Fraction(q)) for p, q in zip(P.ravel(), Q.ravel())) / 2
    return float(0.5 * np.abs(P - Q).sum())


def _kl_terms(P, Q):
    P = np.asarray(P, dtype=np.float64).ravel()
    Q = np.asarray(Q, dtype=np.float64).ravel()
    if ((P > 0) & (Q <= 0)).any():
        return math.inf
    mask = P > 0
    return float(np.sum(P[mask] * np.log2(P[mask] / Q[mask])))


def kl_divergence(P, Q):
    """D(P || Q) in bits; +inf when P puts mass outside the support of Q."""
    P = as_distribution(P, "P")
    Q = as_distribution(Q, "Q")
    _same_shape(P, Q)
    return max(_kl_terms(P, Q), 0.0)


def entropy(P):
    p = np.asarray(P, dtype=np.float64).ravel()
    p = p[p > 0]
    return float(-(p * np.log2(p)).sum())


def min_entropy(P):
    """-log max_x P(x)."""
    P = as_distribution(P)
    return float(-np.log2(np.max(P)))


def renyi2_entropy(P):
    """Collision entropy -log sum P(x)^2."""
    P = as_distribution(P)
    return float(-np.log2(np.sum(P.astype(float) ** 2)))


def _cap_level(p, eps):
    """Smallest lam >= 0 with sum (p - lam)_+ <= eps, for a 1-D array p."""
    srt = np.sort(np.asarray(p, dtype=np.float64).ravel())[::-1]
    if eps <= 0:
        return float(srt[0])
    csum = np.cumsum(srt)
    nxt = np.append(srt[1:], 0.0)
    for j in range(srt.size):
        lam = (csum[j] - eps) / (j + 1)
        if lam >= nxt[j]:
            return max(float(lam), 0.0)
    return 0.0


def smooth_min_entropy(P, eps, normalized=False):
    """eps-smooth min-entropy by capping the largest masses.

    Mass above the cap lam* is removed, with lam* the smallest level whose
    removed mass is at most eps; the trimmed vector is a subnormalised
    candidate within eps of P, worth -log lam*. With ``normalized=True`` the
    removed mass must be placed back below the cap, so lam* cannot drop
    under 1/|X| and the result is exact over normalised candidates.
    """
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    P = as_distribution(P)
    lam = _cap_level(P, eps)
    if normalized:
        lam = max(lam, 1.0 / P.size)
    return float(-np.log2(lam))


def cond_min_entropy(P_XZ):
    """H_min(X|Z) = -log sum_z max_x P(x, z), the optimum over reference laws Q_Z."""
    P = as_distribution(P_XZ, "P_XZ")
    if P.ndim != 2:
        raise ValueError("joint distribution must be 2-D, indexed [x, z]")
    return float(-np.log2(P.max(axis=0).sum()))


def cond_min_entropy_given(P_XZ, Q_Z):
    """H_min(P_XZ | Q_Z) = min over x, z in supp(Q_Z) of -log P(x, z)/Q(z).

    Returns -inf if P_Z has mass outside supp(Q_Z) (Q_Z not admissible).
    """
    P = as_distribution(P_XZ, "P_XZ")
    Q = np.asarray(Q_Z, dtype=np.float64)
    if Q.shape != (P.shape[1],):
        raise ValueError("Q_Z must match the z-alphabet of P_XZ")
    pz = P.sum(axis=0)
    if ((pz > 0) & (Q <= 0)).any():
        return -math.inf
    sup = Q > 0
    ratio = P[:, sup].max(axis=0) / Q[sup]
    return float(-np.log2(ratio.max()))


def smooth_cond_min_entropy(P_XZ, eps):
    """Lower bound on the eps-smooth conditional min-entropy.

    Mass is trimmed from the atoms that set the column maxima, always in the
    column where removing mass lowers sum_z max_x fastest (fewest atoms at
    the current cap), until eps has been spent. The trimmed matrix is a
    feasible candidate, so the value is a valid lower bound on the supremum.
    """
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    Q = as_distribution(P_XZ, "P_XZ").astype(np.float64).copy()
    if Q.ndim != 2:
        raise ValueError("joint distribution must be 2-D, indexed [x, z]")
    budget = float(eps)
    while budget > 1e-15:
        caps = Q.max(axis=0)
        live = caps > 0
        if not live.any():
            break
        at_cap = np.isclose(Q, caps[None, :], rtol=0, atol=1e-15) & live[None, :]
        cnt = np.where(live, at_cap.sum(axis=0), np.iinfo(np.int64).max)
        z = int(np.argmin(cnt))
        col = Q[:, z]
        below = col[~at_cap[:, z]]
        nxt = float(below.max()) if below.size else 0.0
        drop = min(caps[z] - nxt, budget / cnt[z])
        Q[at_cap[:, z], z] = caps[z] - drop
        budget -= drop * cnt[z]
    return float(-np.log2(Q.max(axis=0).sum()))


def mutual_information(P_XY):
    """I(X; Y) in bits for a 2-D joint ``P[x, y]``."""
    P = as_distribution(P_XY, "P_XY").astype(np.float64)
    px = P.sum(axis=1, keepdims=True)
    py = P.sum(axis=0, keepdims=True)
    return max(_kl_terms(P, px * py), 0.0)


def conditional_mutual_information(P_XYS):
    """I(X; Y | S) for a 3-D joint ``P[x, y, s]``."""
    P = as_distribution(P_XYS, "P_XYS").astype(np.float64)
    ps = P.sum(axis=(0, 1))
    total = 0.0
    for s in np.flatnonzero(ps > 0):
        total += ps[s] * mutual_information(P[:, :, s] / ps[s])
    return total


def max_information(V):
    """I_max(V) = log sum_z max_x W(z|x)."""
    return float(np.log2(_matrix(V).max(axis=0).sum()))


@dataclass(frozen=True)
class SmoothingSet:
    """Retained atoms ``mask[x, z]`` and the largest per-input mass removed."""

    mask: np.ndarray
    residual: float
    bits: float


def _trim_schedule(W):
    """Fixed, eps-independent order in which column-maximum atoms are dropped.

    Each move removes the current top atom of one column. A move's key is the
    removed mass of the affected input after the move. Moves that do not raise
    the running maximum key are taken first (largest drop in the column
    maximum wins); otherwise the smallest key wins. The running maximum is
    therefore nondecreasing along the schedule. Yields (x, z, running max).
    """
    n_x, n_z = W.shape
    order = np.argsort(-W, axis=0, kind="stable")
    sorted_w = np.take_along_axis(W, order, axis=0)
    padded = np.vstack([sorted_w, np.zeros((1, n_z))])
    ptr = np.zeros(n_z, dtype=np.int64)
    removed = np.zeros(n_x)
    cols = np.arange(n_z)
    running = 0.0
    while True:
        top = padded[ptr, cols]
        live = top > 0
        if not live.any():
            return
        x_top = order[np.minimum(ptr, n_x - 1), cols]
        key = np.where(live, removed[x_top] + top, np.inf)
        gain = np.where(live, top - padded[np.minimum(ptr + 1, n_x), cols], -np.inf)
        free = key <= running
        if free.any():
            z = int(np.argmax(np.where(free, gain, -np.inf)))
        else:
            kmin = key.min()
            z = int(np.argmax(np.where(key == kmin, gain, -np.inf)))
        x = int(x_top[z])
        running = max(running, float(key[z]))
        removed[x] += top[z]
        ptr[z] += 1
        yield x, z, running


def smooth_max_information(V, eps):
    """Upper bound on the eps-smooth max-information, with the set T used.

    T keeps every atom except the longest prefix of :func:`_trim_schedule`
    whose per-input removed mass stays within eps. Any such T is feasible,
    so I_max(V_T) bounds the infimum from above; the prefix only grows with
    eps, so the value is nonincreasing in eps.
    """
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    W = np.asarray(_matrix(V), dtype=np.float64)
    mask = np.ones(W.shape, dtype=bool)
    if eps > 0:
        for x, z, running in _trim_schedule(W):
            if running > eps:
                break
            mask[x, z] = False
    removed = np.where(mask, 0.0, W).sum(axis=1)
    total = np.where(mask, W, 0.0).max(axis=0).sum()
    bits = float(np.log2(total)) if total > 0 else -math.inf
    return SmoothingSet(mask, float(removed.max()), bits)


def max_information_of_mask(V, mask):
    """I_max(V_T) for an explicit retention mask."""
    W = np.asarray(_matrix(V), dtype=np.float64)
    total = np.where(mask, W, 0.0).max(axis=0).sum()
    return float(np.log2(total)) if total > 0 else -math.inf
