"""Input validation shared by the estimators and the CLI."""

from __future__ import annotations

import numpy as np
from sklearn.utils import check_array

from .exceptions import DomainError
from .protocol import ProtocolSpec

PROTOCOL_NAMES = ("bb84", "six-state", "d-bases")


def make_protocol(name: str, dimension: int = 2, pe: str = "cpovm") -> ProtocolSpec:
    """Build a :class:`ProtocolSpec` from CLI-style names.

    ``dimension > 2`` promotes ``six-state`` to the general (d+1)-basis family.
    """
    if name == "bb84":
        if dimension != 2:
            raise DomainError("bb84 is a qubit protocol; use d-bases for dimension > 2")
        return ProtocolSpec.bb84(pe)
    if name == "six-state":
        if dimension == 2:
            return ProtocolSpec.six_state(pe)
        return ProtocolSpec.d_bases(dimension, pe)
    if name == "d-bases":
        return ProtocolSpec.d_bases(dimension, pe)
    raise DomainError(f"unknown protocol {name!r}; expected one of {PROTOCOL_NAMES}")


def check_qn(X, protocol: ProtocolSpec) -> np.ndarray:
    """Validate an ``(n_samples, 2)`` array of ``[Q, N]`` rows."""
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if X.shape[1] != 2:
        raise ValueError(f"expected 2 columns [Q, N], got {X.shape[1]}")
    Q, N = X[:, 0], X[:, 1]
    if np.any(Q < 0) or np.any(Q >= protocol.q_saturation):
        raise DomainError(f"Q must lie in [0, {protocol.q_saturation})")
    if np.any(N <= 0):
        raise DomainError("N must be positive")
    return X


def check_q(X, protocol: ProtocolSpec) -> np.ndarray:
    """Validate a column (or 1-d array) of error rates."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    X = check_array(X, dtype=np.float64)
    if X.shape[1] != 1:
        raise ValueError(f"expected a single column of error rates, got {X.shape[1]}")
    if np.any(X < 0) or np.any(X >= protocol.q_saturation):
        raise DomainError(f"Q must lie in [0, {protocol.q_saturation})")
    return X[:, 0]
