import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from finitekey import entropy
from finitekey.engine import (
    Bound,
    LeakAt,
    YieldKind,
    OptimizerSettings,
    SecurityBudget,
    _evaluate,
    delta_correction,
    find_threshold_n0,
    key_rate,
    optimize_rate,
    yields,
)
from finitekey.exceptions import BudgetError, DomainError, ThresholdNotFoundError
from finitekey.protocol import ProtocolSpec

# mpmath: -7 sqrt(log2(2e10) / 1e6)
DELTA_REF = -0.040948074026684179941


def test_delta_reference(bb84):
    assert delta_correction(1e6, 1e-10, bb84) == pytest.approx(DELTA_REF, abs=1e-16)
    qudit2 = ProtocolSpec.d_bases(2)
    assert delta_correction(1e6, 1e-10, qudit2) == pytest.approx(DELTA_REF * 5 / 7, abs=1e-16)


def test_yields(bb84, six_state):
    y = yields(1e6, 0.9, bb84)
    assert y.n == pytest.approx(1e6 * 0.81) and y.m == pytest.approx(1e6 * 0.01)
    assert y.discarded == pytest.approx(1e6 - y.n - y.m)
    y = yields(1e6, 0.8, six_state, "per-basis")
    assert y.m == pytest.approx(1e6 * 2 * 0.1**2)


def test_budget_invariant():
    b = SecurityBudget.from_fractions(1e-9, 1e-10, 0.2, 0.3)
    assert math.fsum([b.eps_ec, b.eps_pe, b.eps_pa, b.eps_bar]) == pytest.approx(1e-9, rel=1e-15)
    with pytest.raises(BudgetError):
        SecurityBudget(1e-9, 1e-10, 1e-10, 1e-10, 1e-10)
    with pytest.raises(BudgetError):
        SecurityBudget.from_fractions(1e-9, 2e-9, 0.2, 0.3)


def test_key_rate_breakdown(bb84):
    budget = SecurityBudget.from_fractions(1e-9, 1e-10, 0.3, 0.3)
    b = key_rate("vn", bb84, 0.02, 1e8, budget, 0.95)
    assert b.rate == b.recompose()
    assert b.q_eff == pytest.approx(0.02 + 2 * b.xi)
    assert b.entropy_term == pytest.approx(entropy.vn_entropy(bb84, b.q_eff))
    assert b.leak == pytest.approx(entropy.leak_ec(bb84, b.q_eff))
    assert b.pa_term == pytest.approx(2 / 1e8 * math.log2(2 * budget.eps_pa))
    measured = key_rate("vn", bb84, 0.02, 1e8, budget, 0.95, leak_at="measured")
    assert measured.leak == pytest.approx(entropy.leak_ec(bb84, 0.02))
    m = key_rate("min", bb84, 0.02, 1e8, budget, 0.95)
    assert m.delta == 0.0


def test_key_rate_domain(bb84):
    budget = SecurityBudget.from_fractions(1e-9, 1e-10, 0.3, 0.3)
    with pytest.raises(DomainError):
        key_rate("vn", bb84, 0.6, 1e6, budget, 0.9)
    with pytest.raises(DomainError):
        key_rate("vn", bb84, 0.05, 0.0, budget, 0.9)
    with pytest.raises(ValueError):
        key_rate("renyi", bb84, 0.05, 1e6, budget, 0.9)


def test_clamped_flag(bb84):
    budget = SecurityBudget.from_fractions(1e-9, 1e-10, 0.3, 0.3)
    b = key_rate("vn", bb84, 0.4, 1e3, budget, 0.5)
    assert b.clamped and b.q_eff == 0.5


def test_optimizer_deterministic(bb84):
    a = optimize_rate("vn", bb84, 0.03, 1e7)
    b = optimize_rate("vn", bb84, 0.03, 1e7)
    assert a.best == b.best and a.params == b.params


def test_optimizer_respects_floor(six_state):
    s = OptimizerSettings()
    best, params = optimize_rate("min", six_state, 0.02, 1e6, settings=s)
    floor = s.min_fraction * (1e-9 - 1e-10)
    for k in ("eps_pe", "eps_pa", "eps_bar"):
        assert params[k] >= floor * (1 - 1e-12)


def test_rate_nondecreasing_in_n(bb84):
    grid = np.logspace(4, 12, 17)
    rates = [optimize_rate("vn", bb84, 0.03, N).best.rate for N in grid]
    assert all(b >= a - 1e-9 for a, b in zip(rates, rates[1:]))


def test_asymptote(bb84):
    best = optimize_rate("vn", bb84, 0.05, 1e14).best
    ref = best.q_key**2 * (1 - 2.2 * entropy.binary_entropy(0.05))
    assert abs(best.rate / ref - 1) < 0.01


def test_min_vs_vn_conditional(bb84):
    # identical parameters: the min-entropy rate wins exactly when its entropy term does
    for Q in (0.005, 0.02, 0.05):
        for N in (1e5, 1e8):
            kw = dict(eps_pe=3e-10, eps_pa=3e-10, eps_bar=3e-10, q=0.9,
                      model=YieldKind.PAPER, leak_factor=1.2, leak_at=LeakAt.WORST_CASE)
            vn = _evaluate(Bound.VON_NEUMANN, bb84, Q, N, **kw)
            mn = _evaluate(Bound.MIN_ENTROPY, bb84, Q, N, **kw)
            if mn["entropy_term"] >= vn["entropy_term"] + vn["delta"]:
                assert mn["rate"] >= vn["rate"]


def test_threshold_monotone_in_q(bb84):
    n0 = [find_threshold_n0("min", bb84, Q)[0] for Q in (0.002, 0.01, 0.02, 0.038)]
    assert all(b >= a for a, b in zip(n0, n0[1:]))


def test_threshold_scaled():
    n0, scaled = find_threshold_n0("min", ProtocolSpec.d_bases(3), 0.01)
    assert scaled == pytest.approx(n0 * math.log2(3))


def test_threshold_not_found(bb84):
    with pytest.raises(ThresholdNotFoundError):
        find_threshold_n0("vn", bb84, 0.2, n_ceiling=1e6)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 0.1), st.floats(4.0, 12.0), st.floats(0.5, 0.99),
       st.floats(0.01, 0.98), st.sampled_from(["vn", "min"]))
def test_recomposition_identity(Q, logN, q, f_pe, bound):
    proto = ProtocolSpec.bb84()
    budget = SecurityBudget.from_fractions(1e-9, 1e-10, f_pe, (1 - f_pe) / 2)
    b = key_rate(bound, proto, Q, 10**logN, budget, q)
    assert abs(b.recompose() - b.rate) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(st.floats(-9, 9), st.floats(-9, 9))
def test_budget_from_fractions_sums(a, b):
    w1, w2 = 10**a, 10**b
    tot = w1 + w2 + 1
    budget = SecurityBudget.from_fractions(1e-9, 1e-10, w1 / tot, w2 / tot)
    parts = [budget.eps_ec, budget.eps_pe, budget.eps_pa, budget.eps_bar]
    assert abs(math.fsum(parts) - 1e-9) <= 1e-15 * 1e-9
