import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from finitekey import entropy
from finitekey.exceptions import DomainError
from finitekey.protocol import ProtocolSpec

# reference values computed with mpmath at 40 digits, Q = 0.05
H_005 = 0.286396957115956128766
PG_BB84 = 0.717944947177033677612
HMIN_BB84 = 0.478054874069926978765
PG_SIX = 0.677069063257455492225
VN_SIX = 0.783213225435372329115
VN_BB84 = 0.713603042884043871234
LEAK = 0.343676348539147354520
HD3 = 0.336396957115956128766
PG_D3 = 0.489811169380648470689
VN_D3 = 1.368000122815690947842


def test_reference_values(bb84, six_state):
    d3 = ProtocolSpec.d_bases(3)
    assert entropy.binary_entropy(0.05) == pytest.approx(H_005, abs=1e-15)
    assert entropy.pguess(bb84, 0.05) == pytest.approx(PG_BB84, abs=1e-15)
    assert entropy.min_entropy_from_pguess(PG_BB84) == pytest.approx(HMIN_BB84, abs=1e-15)
    assert entropy.pguess(six_state, 0.05) == pytest.approx(PG_SIX, abs=1e-15)
    assert entropy.vn_entropy(six_state, 0.05) == pytest.approx(VN_SIX, abs=1e-14)
    assert entropy.vn_entropy(bb84, 0.05) == pytest.approx(VN_BB84, abs=1e-15)
    assert entropy.leak_ec(bb84, 0.05) == pytest.approx(LEAK, abs=1e-15)
    assert entropy.d_ary_entropy(0.05, 3) == pytest.approx(HD3, abs=1e-15)
    assert entropy.pguess(d3, 0.05) == pytest.approx(PG_D3, abs=1e-14)
    assert entropy.vn_entropy(d3, 0.05) == pytest.approx(VN_D3, abs=1e-13)


def test_endpoints(bb84):
    assert entropy.binary_entropy(0.0) == 0.0
    assert entropy.binary_entropy(0.5) == 1.0
    assert entropy.pguess(bb84, 0.0) == 0.5
    assert entropy.pguess(bb84, 0.5) == 1.0
    assert entropy.vn_entropy(bb84, 0.0) == 1.0


def test_vectorized_matches_scalar(six_state):
    Q = np.linspace(0, 0.3, 7)
    vec = entropy.pguess(six_state, Q)
    assert isinstance(vec, np.ndarray)
    assert np.allclose(vec, [entropy.pguess(six_state, float(x)) for x in Q], rtol=0, atol=0)


def test_d2_reduction():
    Q = np.linspace(0.0, 0.3, 400)
    six, qudit = ProtocolSpec.six_state(), ProtocolSpec.d_bases(2)
    assert np.max(np.abs(entropy.pguess(qudit, Q) - entropy.pguess(six, Q))) <= 1e-12
    assert np.max(np.abs(entropy.vn_entropy(qudit, Q) - entropy.vn_entropy(six, Q))) <= 1e-12


@pytest.mark.parametrize("bad", [-0.1, 1.1, math.nan])
def test_binary_entropy_domain(bad):
    with pytest.raises(DomainError):
        entropy.binary_entropy(bad)


def test_pguess_domain(six_state):
    with pytest.raises(DomainError):
        entropy.pguess(six_state, 0.9)


def test_min_entropy_domain():
    with pytest.raises(DomainError):
        entropy.min_entropy_from_pguess(0.0)


@given(st.floats(0.0, 0.5), st.floats(0.0, 0.5))
def test_binary_entropy_monotone_on_lower_half(a, b):
    lo, hi = sorted((a, b))
    assert entropy.binary_entropy(lo) <= entropy.binary_entropy(hi) + 1e-15


@given(st.sampled_from([2, 3, 5, 7]), st.floats(0.0, 0.6))
def test_pguess_monotone_and_min_entropy_below_vn(d, q):
    proto = ProtocolSpec.d_bases(d)
    q = min(q, proto.q_saturation * 0.999)
    pg = entropy.pguess(proto, q)
    assert 1.0 / d - 1e-12 <= pg <= 1.0 + 1e-12
    assert entropy.pguess(proto, q * 0.9) <= pg + 1e-12
    # the min-entropy never exceeds the von Neumann entropy
    hmin = entropy.min_entropy_from_pguess(pg)
    assert hmin <= entropy.vn_entropy(proto, q) + 1e-9


@given(st.lists(st.floats(0.01, 0.99), min_size=1, max_size=4))
def test_min_entropy_additive(ps):
    joint = math.prod(ps)
    total = sum(entropy.min_entropy_from_pguess(p) for p in ps)
    assert entropy.min_entropy_from_pguess(joint) == pytest.approx(total, rel=1e-12, abs=1e-12)
