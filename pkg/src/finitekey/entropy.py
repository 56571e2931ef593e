"""Closed-form entropies, guessing probabilities and leakage terms.

All functions accept scalars or numpy arrays and broadcast. Scalar input
gives a Python float back.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DomainError
from .protocol import Family, ProtocolSpec

__all__ = [
    "binary_entropy",
    "d_ary_entropy",
    "vn_entropy",
    "pguess",
    "pguess_bb84",
    "pguess_six_state",
    "pguess_d_bases",
    "min_entropy_from_pguess",
    "leak_ec",
    "q_domain_max",
]

_TOL = 1e-12


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def _check_interval(x, lo, hi, what):
    x = np.asarray(x, dtype=float)
    if np.any(np.isnan(x)) or np.any(x < lo) or np.any(x > hi):
        raise DomainError(f"{what} must lie in [{lo}, {hi}], got {x}")
    return x


def _xlog2x(x):
    # 0 log 0 := 0
    safe = np.where(x > 0, x, 1.0)
    return np.where(x > 0, x * np.log2(safe), 0.0)


def binary_entropy(x):
    """Shannon entropy in bits of a Bernoulli(x) variable."""
    x = _check_interval(x, 0.0, 1.0, "binary entropy argument")
    return _out(-_xlog2x(x) - _xlog2x(1.0 - x))


def d_ary_entropy(p, d: int):
    """Entropy of the distribution (1-p, p/(d-1), ..., p/(d-1)) in bits."""
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d}")
    p = _check_interval(p, 0.0, 1.0, "d-ary entropy argument")
    # -p log2(p/(d-1)) = -p log2 p + p log2(d-1)
    h = -_xlog2x(p) + p * np.log2(d - 1) - _xlog2x(1.0 - p)
    return _out(h)


def q_domain_max(protocol: ProtocolSpec) -> float:
    """Largest error rate accepted by the protocol's closed forms."""
    if protocol.family is Family.TWO_BASES:
        return 1.0
    d = protocol.dimension
    return d / (d + 1)


def vn_entropy(protocol: ProtocolSpec, Q):
    """Conditional von Neumann entropy S(X|E) of the symmetric attack.

    Raises
    ------
    DomainError
        If the entropy argument leaves [0, 1], i.e. Q > 2/3 for the
        six-state formula and Q > d/(d+1) for the general one.
    """
    if protocol.family is Family.TWO_BASES:
        Q = _check_interval(Q, 0.0, 1.0, "error rate")
        s = 1.0 - np.asarray(binary_entropy(Q))
    else:
        Q = _check_interval(Q, 0.0, q_domain_max(protocol), "error rate")
        d = protocol.dimension
        one_minus = np.where(Q < 1, 1.0 - Q, 1.0)
        if protocol.qudit:
            arg = 1.0 - (1.0 - (d + 1) / d * Q) / one_minus
            arg = np.clip(arg, 0.0, 1.0)
            s = (1.0 - Q) * (np.log2(d) - np.asarray(d_ary_entropy(arg, d)))
        else:
            arg = (1.0 - 1.5 * Q) / one_minus
            arg = np.clip(arg, 0.0, 1.0)
            s = (1.0 - Q) * (1.0 - np.asarray(binary_entropy(arg)))
    # only rounding can push these below zero
    return _out(np.maximum(s, 0.0))


def pguess_bb84(Q):
    """Helstrom guessing probability for BB84 at the optimal attack."""
    Q = _check_interval(Q, 0.0, 1.0, "error rate")
    return _out(0.5 * (1.0 + 2.0 * np.sqrt((1.0 - Q) * Q)))


def pguess_six_state(Q):
    """Qubit closed form of the six-state guessing probability."""
    Q = _check_interval(Q, 0.0, 2.0 / 3.0, "error rate")
    return _out(0.5 * (1.0 + np.sqrt(np.maximum(Q * (2.0 - 3.0 * Q), 0.0)) + Q))


def pguess_d_bases(d: int, Q):
    """Square-root-measurement guessing probability of the (d+1)-basis protocol.

    Equals ``Q + (1 - Q) * eta0`` with ``eta0`` the success probability of
    discriminating d pyramid states.
    """
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d}")
    Q = _check_interval(Q, 0.0, d / (d + 1), "error rate")
    one_minus = 1.0 - Q
    radicand = (d * Q - (d + 1) * Q**2) / ((d - 1) * d**2 * one_minus**2)
    bracket = (
        1.0
        - (d - 2) * Q / (d * (Q - 1.0))
        + 2.0 * (d - 1) * np.sqrt(np.maximum(radicand, 0.0))
    )
    return _out(Q + one_minus / d * bracket)


def pguess(protocol: ProtocolSpec, Q):
    """Eve's optimal guessing probability for Alice's key symbol."""
    if protocol.family is Family.TWO_BASES:
        return pguess_bb84(Q)
    if protocol.qudit:
        return pguess_d_bases(protocol.dimension, Q)
    return pguess_six_state(Q)


def min_entropy_from_pguess(p):
    """Min-entropy -log2 p of a guessing probability."""
    p = np.asarray(p, dtype=float)
    if np.any(np.isnan(p)) or np.any(p <= 0) or np.any(p > 1 + _TOL):
        raise DomainError(f"guessing probability must lie in (0, 1], got {p}")
    return _out(-np.log2(np.minimum(p, 1.0)))


def leak_ec(protocol: ProtocolSpec, Q, factor: float = 1.2):
    """Error-correction leakage per sifted symbol, ``factor * h_d(Q)``."""
    if not factor > 0:
        raise DomainError(f"leak factor must be positive, got {factor}")
    if protocol.dimension == 2:
        return _out(factor * np.asarray(binary_entropy(Q)))
    return _out(factor * np.asarray(d_ary_entropy(Q, protocol.dimension)))
