"""Seeded wiretap coding: a balanced field UHF inverted in front of an ECC.

The message m (k bits, nonzero) and a uniform r (l-k bits) give
U = s^-1 * (m || r), the l-bit word with f_s(U) = m. U is zero-padded to the
code dimension and sent as e0(U). The receiver decodes U and applies f_s.
"""

from dataclasses import dataclass
from fractions import Fraction
import math
import warnings

import numpy as np

from uhfsec.bits import bits_to_int, int_to_bits, ints_to_bits
from uhfsec.channels import (
    DiscreteChannel,
    augment_with_encoder,
    capacity,
    compose_degraded,
    noiseless,
    sample,
)
from uhfsec.codes import LinearCode
from uhfsec.errors import check_budget
from uhfsec.gf2 import largest_valid_length
from uhfsec.leakage import (
    _mutual_information_rows,
    channel_leakage_reports,
    conditional_rows,
    message_set,
)
from uhfsec.rng import make_rng
from uhfsec.uhf import FieldUHF


class RateConditionWarning(UserWarning):
    """k/n is not below R - C_W; the scheme is not expected to be secure."""


@dataclass
class WiretapConfig:
    code: LinearCode
    k: int
    T: DiscreteChannel = None
    W: DiscreteChannel = None
    V: DiscreteChannel = None
    l: int | None = None
    messages: str = "nonzero"

    def __post_init__(self):
        if self.T is None:
            self.T = noiseless(2)
        if self.W is None:
            if self.V is None:
                raise ValueError("give the eavesdropper channel W or a degrading channel V")
            self.W = compose_degraded(self.T, self.V)
        if self.l is None:
            self.l = largest_valid_length(self.code.k)
            if self.l is None:
                raise ValueError(f"code dimension {self.code.k} admits no valid field length")
        if self.l > self.code.k:
            raise ValueError(f"l={self.l} exceeds the code dimension {self.code.k}")
        if not 1 <= self.k <= self.l:
            raise ValueError(f"need 1 <= k <= l={self.l}, got k={self.k}")
        if self.messages not in ("nonzero", "all"):
            raise ValueError("messages must be 'nonzero' or 'all'")
        self.family = FieldUHF(self.l, self.k)
        if self.rate_condition_violated():
            warnings.warn(
                f"k/n = {self.k}/{self.n} is not below R - C_W = {self.rate_margin():.6g}",
                RateConditionWarning, stacklevel=2,
            )

    @property
    def n(self):
        return self.code.n

    def rate_margin(self):
        return self.code.k / self.n - capacity(self.W)

    def rate_condition_violated(self):
        return self.k / self.n >= self.rate_margin()

    def encoder_word(self, u):
        """e0(U): U padded with zeros to the code dimension, then encoded."""
        return self.code.encode_int(u << (self.code.k - self.l))

    def eavesdropper_channel(self, budget=None):
        """W^n composed with e0 as a channel on l-bit words."""
        return augment_with_encoder(self.W, self.n, self.encoder_word, l=self.l,
                                    **({} if budget is None else {"budget": budget}))

    def describe(self):
        return {
            "code": self.code.describe(), "l": self.l, "k": self.k, "messages": self.messages,
            "T": self.T.describe(), "W": self.W.describe(),
        }


def _check_message(config, m):
    if not 0 <= m < (1 << config.k):
        raise ValueError(f"message must have {config.k} bits, got {m}")
    if m == 0 and config.messages == "nonzero":
        raise ValueError("the all-zero message is excluded")


def wiretap_encode_with(config, m, s, r):
    """Deterministic encoder: U = s^-1 (m || r), returns (U, e0(U))."""
    _check_message(config, m)
    u = config.family.invert(s, m, r)
    return u, config.encoder_word(u)


def wiretap_encode(config, m, s, rng):
    r = int(rng.integers(0, 1 << (config.l - config.k)))
    return wiretap_encode_with(config, m, s, r)[1]


def _decode_u(config, y):
    bits = config.code.decode_message(np.asarray(y, dtype=np.uint8))
    return bits_to_int(bits) >> (config.code.k - config.l)


def wiretap_decode(config, y, s):
    """m_hat = f_s(U_hat); uses only the received word and the seed."""
    return config.family.eval(s, _decode_u(config, y))


def _check_binary(T):
    if T.matrix.shape != (2, 2):
        raise ValueError("decoding needs a binary-input, binary-output channel T")


def code_max_error(code, T, budget=None):
    """max over codewords of P(nearest-codeword decoding fails) over T^n."""
    _check_binary(T)
    m = T.matrix
    if np.isclose(m[0, 1], m[1, 0], rtol=0, atol=1e-15):
        return 1.0 - code.correct_decoding_probability(float(m[0, 1]))
    check_budget("code_max_error", (1 << code.k) << code.n, budget)
    ys = ints_to_bits(np.arange(1 << code.n, dtype=np.uint64), code.n)
    decoded = code.decode_nearest(ys)
    worst = 0.0
    for c in code.codewords():
        p = np.prod(m[c[None, :], ys], axis=1)
        ok = (decoded == c[None, :]).all(axis=1)
        worst = max(worst, float(1.0 - p[ok].sum()))
    return worst


def wiretap_simulate(config, trials, master_seed):
    """Monte Carlo block and message error rates over T."""
    _check_binary(config.T)
    block_err = 0
    msg_err = 0
    lo = 1 if config.messages == "nonzero" else 0
    for i in range(trials):
        rng = make_rng(master_seed, i)
        s = config.family.sample_seed(rng)
        m = int(rng.integers(lo, 1 << config.k))
        r = int(rng.integers(0, 1 << (config.l - config.k)))
        u, x = wiretap_encode_with(config, m, s, r)
        y = sample(config.T, x, rng)
        u_hat = _decode_u(config, y)
        block_err += u_hat != u
        msg_err += config.family.eval(s, u_hat) != m
    p_e = code_max_error(config.code, config.T)
    rate = block_err / trials
    sigma = math.sqrt(p_e * (1 - p_e) / trials)
    return {
        "trials": trials,
        "block_error_rate": rate,
        "message_error_rate": msg_err / trials,
        "analytic_block_error": p_e,
        "sigma": sigma,
        "within_3sigma": bool(abs(rate - p_e) <= 3 * sigma + 1e-15),
    }


def wiretap_exact_leakage(config, eps_list=(0.0,), budget=None):
    """Exact I(M ; Z^n, S) against the channel bound at each eps (0 always included)."""
    Wa = config.eavesdropper_channel(budget)
    return channel_leakage_reports(config.family, Wa, eps_list, config.messages, budget)


def single_block_leakage(config, budget=None):
    return wiretap_exact_leakage(config, (0.0,), budget)[0].exact


def multi_block_leakage(config, t, budget=None):
    """Exact I(M_1..M_t ; Z(1)..Z(t), S) and I(M_1..M_t ; Z(1)..Z(t)) with one seed.

    Each block draws its own r; messages are independent and uniform on the
    configured message set.
    """
    Wa = np.asarray(config.eavesdropper_channel(budget).matrix)
    msgs = message_set(config.k, config.messages)
    n_out = Wa.shape[1]
    check_budget("multi_block_leakage",
                 config.family.seed_count * msgs.size ** t * n_out ** t, budget)
    weights = np.full(msgs.size ** t, 1.0 / msgs.size ** t)
    with_s = 0.0
    mix_rows = None
    for s in config.family.seeds():
        R = conditional_rows(config.family, Wa, s)[msgs]
        Rt = R
        for _ in range(t - 1):
            Rt = np.einsum("ia,jb->ijab", Rt, R).reshape(Rt.shape[0] * R.shape[0], -1)
        with_s += _mutual_information_rows(Rt, weights)
        mix_rows = Rt if mix_rows is None else mix_rows + Rt
    with_s /= config.family.seed_count
    mix_rows /= config.family.seed_count
    return {"with_seed": float(with_s), "without_seed": float(_mutual_information_rows(mix_rows, weights))}


def seed_transport_blocks(config, c=None):
    """Blocks used to carry the l-bit seed at k_code bits per block."""
    need = math.ceil(config.family.seed_bits / config.code.k)
    if c is None:
        return need
    if c < need:
        raise ValueError(f"c={c} blocks carry {c * config.code.k} bits, seed needs {config.family.seed_bits}")
    return c


def recycling_rate(t, k, c, n):
    return Fraction(t * k, (t + c) * n)


def seed_recycling_run(config, t, rng, c=None):
    """Send one seed over T, then t messages under that seed."""
    _check_binary(config.T)
    if t < 1:
        raise ValueError(f"t must be positive, got {t}")
    c = seed_transport_blocks(config, c)
    code = config.code
    s = config.family.sample_seed(rng)
    seed_bits = int_to_bits(s, c * code.k)
    s_hat_bits = []
    for j in range(c):
        block = seed_bits[j * code.k:(j + 1) * code.k]
        y = sample(config.T, code.encode(block), rng)
        s_hat_bits.append(code.decode_message(y))
    s_hat = bits_to_int(np.concatenate(s_hat_bits))
    lo = 1 if config.messages == "nonzero" else 0
    blocks = []
    for _ in range(t):
        m = int(rng.integers(lo, 1 << config.k))
        r = int(rng.integers(0, 1 << (config.l - config.k)))
        _, x = wiretap_encode_with(config, m, s, r)
        y = sample(config.T, x, rng)
        u_hat = _decode_u(config, y)
        m_hat = config.family.eval(s_hat, u_hat) if 0 < s_hat < (1 << config.l) else None
        blocks.append({"m": m, "m_hat": m_hat, "ok": m_hat == m})
    single = single_block_leakage(config)
    p_e = code_max_error(code, config.T)
    rate = recycling_rate(t, config.k, c, config.n)
    return {
        "seed": int(s),
        "seed_recovered": s_hat == s,
        "c": c,
        "blocks": blocks,
        "single_block_leakage": single,
        "leakage_bound": t * single,
        "error_bound": min((t + 1) * p_e, 1.0),
        "rate": rate,
    }


def wiretap_leakage_report(config, eps_list=(0.0,)):
    """All per-eps reports plus the pass flag over them."""
    reports = wiretap_exact_leakage(config, eps_list)
    return {"reports": [r.as_dict() for r in reports], "passed": all(r.passed for r in reports)}
