from fractions import Fraction
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import (
    channel_leakage_oracle,
    extraction_tv_kl_oracle,
    field_uhf_oracle,
    modified_toeplitz_oracle,
    toeplitz_oracle,
)
from uhfsec.bounds import channel_lhl_bound
from uhfsec.channels import bsc, noiseless, product_channel
from uhfsec.errors import BudgetExceededError
from uhfsec.leakage import (
    LeakageReport,
    channel_leakage_reports,
    exact_channel_leakage,
    exact_extraction_leakage,
    message_set,
)
from uhfsec.measures import smooth_max_information
from uhfsec.uhf import ExplicitUHF, FieldUHF, ModifiedToeplitzUHF, ToeplitzUHF


def random_joint(seed, nx, nz):
    return np.random.default_rng(seed).dirichlet(np.ones(nx * nz)).reshape(nx, nz)


FAMILIES = [
    (FieldUHF, field_uhf_oracle),
    (ToeplitzUHF, toeplitz_oracle),
    (ModifiedToeplitzUHF, modified_toeplitz_oracle),
]


@pytest.mark.parametrize("cls,oracle", FAMILIES, ids=lambda v: getattr(v, "__name__", ""))
@pytest.mark.parametrize("k", [1, 2])
def test_extraction_matches_table_oracle(cls, oracle, k):
    l = 4 if cls is FieldUHF else 3
    fam = cls(l, k)
    P = random_joint(7 + k, 1 << l, 3)
    res = exact_extraction_leakage(fam, P)
    tv, kl = extraction_tv_kl_oracle(lambda s, x: oracle(s, x, l, k), list(fam.seeds()), l, k, P)
    assert res["tv"] == pytest.approx(tv, abs=1e-12)
    assert res["kl"] == pytest.approx(kl, abs=1e-12)


def test_extraction_examples():
    fam = FieldUHF(4, 4)
    uniform = np.full((16, 1), 1 / 16)
    res = exact_extraction_leakage(fam, uniform, exact=True)
    assert res["tv_exact"] == 0
    assert res["tv"] == pytest.approx(0, abs=1e-15)
    point = np.zeros((16, 1))
    point[5] = 1.0
    for k in (1, 2, 3):
        res = exact_extraction_leakage(FieldUHF(4, k), point, exact=True)
        assert res["tv_exact"] == Fraction(1, 2) * (1 - Fraction(1, 2**k)) * 2
        assert float(res["tv_exact"]) == pytest.approx(res["tv"], abs=1e-15)
    P = random_joint(3, 16, 4)
    res = exact_extraction_leakage(FieldUHF(4, 2), P)
    assert res["tv"] <= res["tv_bound"]


def test_point_mass_half_when_one_bit():
    point = np.zeros((16, 1))
    point[9] = 1.0
    assert exact_extraction_leakage(FieldUHF(4, 1), point)["tv"] == pytest.approx(0.5)


@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 4]), st.integers(1, 3))
@settings(max_examples=25)
def test_extraction_bound_domination(seed, nz, k):
    P = random_joint(seed, 16, nz)
    res = exact_extraction_leakage(FieldUHF(4, k), P, exact=True)
    assert res["tv"] <= res["tv_bound"] + 1e-12
    assert res["kl"] <= res["kl_bound"] + 1e-12
    assert res["tv"] <= res["pinsker_tv_bound"] + 1e-12
    assert float(res["tv_exact"]) == pytest.approx(res["tv"], abs=1e-12)


def test_extraction_shape_and_budget():
    with pytest.raises(ValueError):
        exact_extraction_leakage(FieldUHF(4, 2), np.full((8, 1), 1 / 8))
    with pytest.raises(BudgetExceededError):
        exact_extraction_leakage(FieldUHF(4, 2), np.full((16, 1), 1 / 16), budget=10)


@pytest.mark.parametrize("messages", ["all", "nonzero"])
@pytest.mark.parametrize("k", [1, 2])
def test_channel_leakage_matches_oracle(messages, k):
    fam = FieldUHF(4, k)
    V = product_channel(bsc(0.2), 4).matrix
    msgs = list(message_set(k, messages))
    got = exact_channel_leakage(fam, V, messages)
    want = channel_leakage_oracle(lambda s, x: field_uhf_oracle(s, x, 4, k), list(fam.seeds()), 4, k, V, msgs)
    assert got == pytest.approx(want, abs=1e-12)


def test_channel_leakage_examples():
    fam = FieldUHF(4, 2)
    flat = np.full((16, 2), 0.5)
    assert exact_channel_leakage(fam, flat) == pytest.approx(0, abs=1e-12)
    assert exact_channel_leakage(fam, noiseless(16)) == pytest.approx(2)
    for r in channel_leakage_reports(FieldUHF(4, 1), product_channel(bsc(0.2), 4), [0.0, 0.01]):
        assert r.passed


def test_channel_leakage_requires_equal_preimages():
    lopsided = ExplicitUHF(2, 1, [[0, 0, 0, 1], [0, 1, 0, 1]])
    with pytest.raises(ValueError, match="not balanced"):
        exact_channel_leakage(lopsided, np.eye(4))


def test_channel_reports_include_zero_eps():
    fam = FieldUHF(4, 1)
    V = product_channel(bsc(0.3), 4)
    reports = channel_leakage_reports(fam, V, [0.05])
    assert [r.eps for r in reports] == [0.0, 0.05]
    for r in reports:
        imax = smooth_max_information(V, r.eps).bits
        assert r.bound == pytest.approx(channel_lhl_bound(3, imax, r.eps, 1))
        assert r.extras["b"] == 3


def test_leakage_report_pass_flag():
    assert LeakageReport("q", 0.1, 0.1, 0.0, 1).passed
    assert not LeakageReport("q", 0.2, 0.1, 0.0, 1).passed
    assert LeakageReport("q", 0.2, 0.1, 0.0, 1).as_dict()["passed"] is False


def test_message_set():
    assert message_set(2).tolist() == [0, 1, 2, 3]
    assert message_set(2, "nonzero").tolist() == [1, 2, 3]
    assert message_set(2, [3]).tolist() == [3]
    assert math.isclose(len(message_set(3, "nonzero")), 7)
