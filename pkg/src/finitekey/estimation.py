"""Statistical parameter estimation.

Deviation bound for an empirical POVM distribution, the IPOVM/CPOVM
dispatch, the worst-case error rate compatible with the statistics, and a
Monte Carlo check of the deviation bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError
from .protocol import Family, PeScheme, ProtocolSpec

__all__ = [
    "PeSchemeParams",
    "PeOutcome",
    "xi_bound",
    "scheme_params",
    "scheme_xi",
    "worst_case_q",
    "relative_entropy",
    "simulate_pe_bound",
]


@dataclass(frozen=True)
class PeSchemeParams:
    """How the estimation budget is spent on each parameter.

    ``n_pe`` parameters are estimated. IPOVM splits the failure probability
    and the sample over them; CPOVM uses one POVM with ``chi`` outcomes for
    all of them.
    """

    kind: PeScheme
    n_pe: int
    chi: int

    def __post_init__(self):
        if self.n_pe < 1:
            raise DomainError("n_pe must be >= 1")
        if self.chi < 2:
            raise DomainError("chi must be >= 2")
        if self.kind is PeScheme.IPOVM and self.chi != 2:
            raise DomainError("IPOVM estimates every parameter with a 2-outcome POVM")

    def split(self, eps_pe, m):
        """Per-parameter ``(eps, m)`` fed to :func:`xi_bound`."""
        if self.kind is PeScheme.IPOVM:
            return eps_pe / self.n_pe, m / self.n_pe
        return eps_pe, m


@dataclass(frozen=True)
class PeOutcome:
    xi: float
    q_eff: float
    clamped: bool


def xi_bound(eps_pe, chi: int, m):
    """Deviation ``sqrt((ln(1/eps) + chi ln(m+1)) / (8m))``.

    Except with probability ``eps_pe``, half the L1 distance between the
    empirical and true distribution of a ``chi``-outcome POVM measured
    ``m`` times stays below this value.
    """
    eps_pe = np.asarray(eps_pe, dtype=float)
    m = np.asarray(m, dtype=float)
    if np.any(~(eps_pe > 0)) or np.any(eps_pe > 1):
        raise DomainError(f"eps_pe must lie in (0, 1], got {eps_pe}")
    if np.any(~(m > 0)):
        raise DomainError(f"m must be positive, got {m}")
    if chi < 1:
        raise DomainError(f"chi must be positive, got {chi}")
    xi = np.sqrt((np.log(1.0 / eps_pe) + chi * np.log1p(m)) / (8.0 * m))
    return float(xi) if xi.ndim == 0 else xi


def scheme_params(protocol: ProtocolSpec) -> PeSchemeParams:
    """Estimation scheme for the symmetrized one-parameter state.

    IPOVM estimates one error rate per basis. CPOVM only needs a two-outcome
    POVM because the symmetrized state has a single parameter.
    """
    if protocol.pe_scheme is PeScheme.CPOVM:
        return PeSchemeParams(PeScheme.CPOVM, 1, 2)
    if protocol.family is Family.TWO_BASES:
        return PeSchemeParams(PeScheme.IPOVM, 2, 2)
    if protocol.dimension == 2 and not protocol.qudit:
        return PeSchemeParams(PeScheme.IPOVM, 3, 2)
    raise DomainError("IPOVM is only defined for the qubit BB84 and six-state protocols")


def scheme_xi(protocol: ProtocolSpec, eps_pe, m):
    """Per-parameter deviation bound of the protocol's estimation scheme."""
    sp = scheme_params(protocol)
    eps_i, m_i = sp.split(eps_pe, m)
    return xi_bound(eps_i, sp.chi, m_i)


def worst_case_q(Q: float, xi: float, protocol: ProtocolSpec) -> PeOutcome:
    """Worst error rate within ``xi`` of the observed one.

    Shifting up is the worst case because every implemented entropy bound
    decreases with Q up to ``protocol.q_saturation``, where it reaches zero;
    the result is clamped there.
    """
    if Q < 0 or xi < 0:
        raise DomainError(f"Q and xi must be non-negative, got {Q}, {xi}")
    q_max = protocol.q_saturation
    q = Q + xi
    if q >= q_max:
        return PeOutcome(xi, q_max, True)
    return PeOutcome(xi, q, False)


def relative_entropy(p, q) -> float:
    """Kullback-Leibler divergence ``D(p||q)`` in bits."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DomainError(f"shape mismatch {p.shape} vs {q.shape}")
    if np.any(p < 0) or np.any(q < 0):
        raise DomainError("probabilities must be non-negative")
    support = p > 0
    if np.any(q[support] == 0):
        raise DomainError("p is not absolutely continuous with respect to q")
    return float(np.sum(p[support] * np.log2(p[support] / q[support])))


def simulate_pe_bound(true_dist, m: int, eps_pe: float, trials: int, seed: int,
                      statistic: str = "total-variation"):
    """Empirical failure rate of the deviation bound.

    Draws ``trials`` multinomial samples of size ``m`` and counts how often
    the deviation exceeds ``xi_bound(eps_pe, len(true_dist), m)``.

    Parameters
    ----------
    statistic : {"total-variation", "parameter"}
        ``"total-variation"`` compares half the L1 distance of the whole
        distribution with xi. ``"parameter"`` compares half the absolute
        deviation of the worst single outcome probability, the quantity the
        bound is proven for; the first event is the stronger requirement.

    Returns
    -------
    violation_rate : float
    xi_used : float
    """
    p = np.asarray(true_dist, dtype=float)
    if p.ndim != 1 or p.size < 2 or np.any(p < 0) or not math.isclose(p.sum(), 1.0, abs_tol=1e-12):
        raise DomainError("true_dist must be a probability vector of length >= 2")
    if m < 1 or trials < 1:
        raise DomainError("m and trials must be >= 1")
    if statistic not in ("total-variation", "parameter"):
        raise DomainError(f"unknown statistic {statistic!r}")
    xi = xi_bound(eps_pe, p.size, m)
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(int(m), p / p.sum(), size=int(trials))
    dev = np.abs(counts / m - p)
    if statistic == "total-variation":
        dist = 0.5 * dev.sum(axis=1)
    else:
        dist = 0.5 * dev.max(axis=1)
    return float(np.mean(dist > xi)), xi
