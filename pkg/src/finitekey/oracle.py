"""Numerical state-discrimination oracle for the closed-form guessing probabilities.

BB84 is checked with the Helstrom bound on explicit 4x4 states of Eve. The
(d+1)-basis protocol is checked by building the square-root measurement for
the pyramid states directly from their Gram matrix, so no explicit basis for
Eve's system is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .linalg import HermitianMatrix, matrix_function, symmetric_eig, trace_norm
from .protocol import ChannelModel, is_prime

__all__ = [
    "EnsembleBB84",
    "build_eve_states_bb84",
    "helstrom_pguess",
    "f_of_v",
    "maximize_f_over_v",
    "pyramid_gram",
    "pyramid_states",
    "srm_overlaps",
    "srm_eta_numeric",
    "srm_pguess_numeric",
    "srm_eta_closed",
]

_PSD_TOL = 1e-10
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class EnsembleBB84:
    """Eve's conditional states for Alice's key bits 0 and 1."""

    rho0: HermitianMatrix
    rho1: HermitianMatrix
    prior: float = 0.5

    def __post_init__(self):
        for name in ("rho0", "rho1"):
            rho = getattr(self, name)
            if not isinstance(rho, HermitianMatrix):
                rho = HermitianMatrix(rho)
                object.__setattr__(self, name, rho)
            if abs(rho.trace() - 1.0) > 1e-10:
                raise DomainError(f"{name} has trace {rho.trace()!r}")
            w, _ = symmetric_eig(rho)
            if w[-1] < -_PSD_TOL:
                raise DomainError(f"{name} is not positive semidefinite (min eig {w[-1]:.3e})")
        if self.rho0.dim != self.rho1.dim:
            raise DomainError("states have different dimensions")


def build_eve_states_bb84(Q: float, u: float | None = None, v: float | None = None) -> EnsembleBB84:
    """Eve's states after Alice measures the key basis of a purified Bell-diagonal pair.

    Eve's purifying basis is labelled ``|jk>`` with ``j, k`` in {0, 1}, one
    vector per Bell weight ``lam[j, k]``. Conditioned on Alice's outcome
    ``x``, Eve holds ``|a_x><a_x| + |b_x><b_x|`` with
    ``a_x = sqrt(l00)|00> + (-1)^x sqrt(l01)|01>`` and
    ``b_x = sqrt(l10)|10> + (-1)^x sqrt(l11)|11>``.
    """
    ch = ChannelModel.bb84(Q, u, v)
    lam = ch.lam
    s = np.sqrt(lam.ravel())
    states = []
    for x in (0, 1):
        sign = (-1.0) ** x
        a = np.array([s[0], sign * s[1], 0.0, 0.0])
        b = np.array([0.0, 0.0, s[2], sign * s[3]])
        states.append(HermitianMatrix(np.outer(a, a) + np.outer(b, b)))
    return EnsembleBB84(states[0], states[1])


def helstrom_pguess(e: EnsembleBB84) -> float:
    """Optimal probability of identifying one of two equiprobable states."""
    if e.prior != 0.5:
        diff = e.prior * e.rho0.entries - (1.0 - e.prior) * e.rho1.entries
        return 0.5 * (1.0 + trace_norm(diff))
    return 0.5 * (1.0 + 0.5 * trace_norm(e.rho0 - e.rho1))


def f_of_v(v, Q: float):
    """Half trace distance of Eve's states along the constraint line, as a function of v."""
    v = np.asarray(v, dtype=float)
    a = np.maximum((1.0 - v) * Q * (1.0 + (v - 2.0) * Q), 0.0)
    b = np.maximum((1.0 - v) * v * Q * Q, 0.0)
    out = 2.0 * np.sqrt(a) + 2.0 * np.sqrt(b)
    return float(out) if out.ndim == 0 else out


def maximize_f_over_v(Q: float, tol: float = 1e-9) -> tuple[float, float]:
    """Golden-section maximization of ``f_of_v`` over v in [0, 1].

    Returns ``(v_star, f(v_star))``.
    """
    if not 0.0 < Q < 0.5:
        raise DomainError(f"Q must lie in (0, 1/2), got {Q}")
    lo, hi = 0.0, 1.0
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = f_of_v(x1, Q), f_of_v(x2, Q)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = f_of_v(x2, Q)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = f_of_v(x1, Q)
    v_star = 0.5 * (lo + hi)
    return v_star, f_of_v(v_star, Q)


def _check_pyramid(d, Q):
    if int(d) != d or d < 2 or not is_prime(int(d)):
        raise DomainError(f"d must be a prime >= 2, got {d}")
    if not 0.0 <= Q < (d - 1) / d:
        raise DomainError(f"Q must lie in [0, {(d - 1) / d}), got {Q}")


def pyramid_gram(d: int, Q: float) -> HermitianMatrix:
    """Gram matrix of the d pyramid states ``|E_xx>``.

    Unit diagonal and constant off-diagonal overlap ``1 - beta1/beta0``.
    """
    _check_pyramid(d, Q)
    beta0 = 1.0 - Q
    beta1 = Q / (d - 1)
    g = np.full((d, d), 1.0 - beta1 / beta0)
    np.fill_diagonal(g, 1.0)
    return HermitianMatrix(g)


def pyramid_states(d: int, Q: float) -> np.ndarray:
    """Columns realizing the pyramid states with the prescribed overlaps.

    Uses the symmetric square root of the Gram matrix, which stays defined
    when the states become linearly dependent at Q=0.
    """
    g = pyramid_gram(d, Q)
    return matrix_function(g, lambda w: np.sqrt(np.maximum(w, 0.0)))


def srm_overlaps(d: int, Q: float) -> np.ndarray:
    """Matrix of overlaps ``<e_x|E_y>`` between measurement vectors and pyramid states."""
    psi = pyramid_states(d, Q)
    rho_eq = HermitianMatrix(psi @ psi.T / d)
    # pseudo-inverse on the support: rho_eq is rank one at Q=0
    inv_sqrt = matrix_function(
        HermitianMatrix(d * rho_eq.entries), lambda w: 1.0 / np.sqrt(w), rcond=1e-12
    )
    e = inv_sqrt @ psi
    return e.conj().T @ psi


def srm_eta_numeric(d: int, Q: float) -> float:
    """Success probability of the square-root measurement on the pyramid states."""
    overlaps = np.diag(srm_overlaps(d, Q))
    return float(np.mean(np.abs(overlaps) ** 2))


def srm_pguess_numeric(d: int, Q: float) -> float:
    """Guessing probability ``Q + (1-Q) * eta0`` with ``eta0`` computed numerically.

    Off-diagonal ancilla states are orthogonal to everything else, so Eve
    guesses correctly with certainty on that branch (weight Q).
    """
    return Q + (1.0 - Q) * srm_eta_numeric(d, Q)


def srm_eta_closed(d: int, Q: float) -> tuple[float, float]:
    """Closed-form squared overlaps ``(eta0, eta1)`` of the square-root measurement.

    ``eta0`` is the probability of a correct identification and ``eta1`` that
    of each particular wrong one. The off-diagonal amplitude is
    ``(sqrt(r0) - sqrt(r1)) / sqrt(d)``, which makes ``eta0 + (d-1) eta1 = 1``.
    """
    _check_pyramid(d, Q)
    beta0 = 1.0 - Q
    beta1 = Q / (d - 1)
    r0 = 1.0 - (d - 1) / d * beta1 / beta0
    r1 = beta1 / (d * beta0)
    sq0 = (math.sqrt(r0) + (d - 1) * math.sqrt(r1)) / math.sqrt(d)
    sq1 = (math.sqrt(r0) - math.sqrt(r1)) / math.sqrt(d)
    return sq0 * sq0, sq1 * sq1
