import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitekey.estimation import (
    relative_entropy,
    scheme_params,
    scheme_xi,
    simulate_pe_bound,
    worst_case_q,
    xi_bound,
)
from finitekey.exceptions import DomainError
from finitekey.protocol import PeScheme, ProtocolSpec

# mpmath: sqrt((ln 1e9 + 2 ln(10001)) / 8e4)
XI_REF = 0.022120167995208423384


def test_xi_reference():
    assert xi_bound(1e-9, 2, 1e4) == pytest.approx(XI_REF, abs=1e-16)


def test_xi_decreases_with_m():
    m = np.logspace(1, 8, 30)
    assert np.all(np.diff(xi_bound(1e-9, 2, m)) < 0)


@pytest.mark.parametrize("eps, m", [(0.0, 10), (1.5, 10), (0.1, 0)])
def test_xi_domain(eps, m):
    with pytest.raises(DomainError):
        xi_bound(eps, 2, m)


def test_scheme_split():
    bb = ProtocolSpec.bb84("ipovm")
    six = ProtocolSpec.six_state("ipovm")
    assert scheme_xi(bb, 1e-9, 1e4) == xi_bound(0.5e-9, 2, 5e3)
    assert scheme_xi(six, 1e-9, 1e4) == xi_bound(1e-9 / 3, 2, 1e4 / 3)
    assert scheme_xi(ProtocolSpec.six_state(), 1e-9, 1e4) == xi_bound(1e-9, 2, 1e4)
    assert scheme_params(six).kind is PeScheme.IPOVM
    with pytest.raises(DomainError):
        scheme_params(ProtocolSpec.d_bases(3, "ipovm"))


def test_worst_case_q_shift_and_clamp(bb84):
    out = worst_case_q(0.05, 0.01, bb84)
    assert out.q_eff == pytest.approx(0.06)
    assert not out.clamped
    out = worst_case_q(0.45, 0.1, bb84)
    assert out.q_eff == 0.5 and out.clamped


def test_relative_entropy():
    assert relative_entropy([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert relative_entropy([1.0, 0.0], [0.5, 0.5]) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        relative_entropy([0.5, 0.5], [1.0, 0.0])


@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
def test_pinsker(a, b):
    p, q = np.array([a, 1 - a]), np.array([b, 1 - b])
    tv = 0.5 * np.abs(p - q).sum()
    assert relative_entropy(p, q) * math.log(2) >= 2 * tv**2 - 1e-12


def test_monte_carlo_is_seeded():
    a = simulate_pe_bound((0.9, 0.1), 50, 0.1, 500, seed=3)
    b = simulate_pe_bound((0.9, 0.1), 50, 0.1, 500, seed=3)
    assert a == b


def test_parameter_statistic_weaker_than_total_variation():
    tv, _ = simulate_pe_bound((0.5, 0.5), 50, 0.01, 2000, 1)
    par, _ = simulate_pe_bound((0.5, 0.5), 50, 0.01, 2000, 1, statistic="parameter")
    assert par <= tv


def test_monte_carlo_rejects_bad_input():
    with pytest.raises(DomainError):
        simulate_pe_bound((0.4, 0.4), 50, 0.1, 10, 1)
    with pytest.raises(DomainError):
        simulate_pe_bound((0.5, 0.5), 50, 0.1, 10, 1, statistic="kl")
