"""Closed-form security bounds, all reported in bits."""

import math

LOG2E = 1.0 / math.log(2.0)


def lhl_bound_tv(k, h, eps=0.0, z2_cardinality=1):
    """Total-variation leftover hash bound eps + (1/2) sqrt(|Z2| 2^(k - h)).

    ``h`` is the (smooth) conditional min-entropy in bits and ``z2_cardinality``
    the size of any extra side information not covered by ``h``. Without side
    information take ``z2_cardinality=1``.
    """
    if z2_cardinality < 1:
        raise ValueError(f"|Z2| must be at least 1, got {z2_cardinality}")
    return eps + 0.5 * math.sqrt(z2_cardinality * 2.0 ** (k - h))


def lhl_bound_kl(k, hmin_cond):
    """Divergence-form bound 2^(k - H_min) / ln 2 on the security index."""
    return 2.0 ** (k - hmin_cond) * LOG2E


def channel_lhl_bound(b, imax_eps, eps, k):
    """(1/ln 2) 2^-(b - I_max^eps) + eps k, bounding I(M ; Z, S) for a b-balanced family."""
    return LOG2E * 2.0 ** (-(b - imax_eps)) + eps * k


def awgn_imax_bound(n, delta, power, sigma2):
    """Bound on the eps_n-smooth max-information of n uses of an AWGN channel.

    Returns a dict with the total ``value`` (bits), the paired ``eps_n`` and
    the three summands under ``terms``.
    """
    if not 0 < delta < 0.5:
        raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if sigma2 <= 0 or power < 0:
        raise ValueError("need sigma2 > 0 and power >= 0")
    snr = power / sigma2
    capacity_term = 0.5 * n * math.log2(1.0 + delta + snr)
    spread_term = 0.5 * n * delta * LOG2E
    volume_term = 0.5 * math.log2(n * math.pi)
    return {
        "value": capacity_term + spread_term + volume_term,
        "eps_n": math.exp(-n * delta * delta / 8.0),
        "terms": {
            "capacity": capacity_term,
            "spread": spread_term,
            "volume": volume_term,
        },
    }


def pinsker_tv_bound(kl_bits):
    """Largest TV distance compatible with a KL divergence given in bits."""
    return math.sqrt(max(kl_bits, 0.0) * math.log(2.0) / 2.0)
