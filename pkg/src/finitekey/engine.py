"""Finite-key secret-key rates, security budget, optimizer and threshold search."""

from __future__ import annotations

import enum
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import entropy
from .estimation import scheme_xi
from .exceptions import BudgetError, DomainError, ThresholdNotFoundError
from .protocol import Family, ProtocolSpec

__all__ = [
    "Bound",
    "YieldKind",
    "LeakAt",
    "SecurityBudget",
    "YieldModel",
    "RateBreakdown",
    "OptimizerSettings",
    "yields",
    "delta_correction",
    "key_rate",
    "optimize_rate",
    "find_threshold_n0",
]

DEFAULT_EPS = 1e-9
DEFAULT_EPS_EC = 1e-10
DEFAULT_LEAK_FACTOR = 1.2


class Bound(str, enum.Enum):
    VON_NEUMANN = "vn"
    MIN_ENTROPY = "min"


class YieldKind(str, enum.Enum):
    """How many signals end up in parameter estimation.

    ``PAPER`` takes ``m = N p**2``; ``PER_BASIS`` counts every estimation
    basis, ``m = N d p**2`` for (d+1)-basis protocols.
    """

    PAPER = "paper"
    PER_BASIS = "per-basis"


class LeakAt(str, enum.Enum):
    """Error rate at which the error-correction leakage is charged."""

    WORST_CASE = "worst-case"
    MEASURED = "measured"


@dataclass(frozen=True)
class SecurityBudget:
    """Split of the total failure probability.

    ``eps_pa + eps_ec + eps_pe + eps_bar == eps_total`` up to rounding.
    """

    eps_total: float
    eps_ec: float
    eps_pe: float
    eps_pa: float
    eps_bar: float

    def __post_init__(self):
        parts = (self.eps_ec, self.eps_pe, self.eps_pa, self.eps_bar)
        if not all(x > 0 for x in parts):
            raise BudgetError(f"all budget components must be positive: {self}")
        total = math.fsum(parts)
        if abs(total - self.eps_total) > 1e-15 * self.eps_total:
            raise BudgetError(f"components sum to {total!r}, not {self.eps_total!r}")

    @classmethod
    def from_fractions(cls, eps_total, eps_ec, f_pe, f_bar) -> "SecurityBudget":
        """Budget with ``eps_pe``/``eps_bar`` given as fractions of ``eps_total - eps_ec``."""
        rest = eps_total - eps_ec
        if not rest > 0:
            raise BudgetError(f"eps_ec={eps_ec} leaves nothing of eps={eps_total}")
        eps_pe = rest * f_pe
        eps_bar = rest * f_bar
        eps_pa = rest - eps_pe - eps_bar
        return cls(eps_total, eps_ec, eps_pe, eps_pa, eps_bar)


@dataclass(frozen=True)
class YieldModel:
    N: float
    q_key: float
    p_pe: float
    n: float
    m: float
    model: YieldKind

    @property
    def discarded(self) -> float:
        """Signals lost to basis mismatch, ``N - n - m``."""
        return self.N - self.n - self.m


@dataclass(frozen=True)
class RateBreakdown:
    """Audit record of one key-rate evaluation."""

    rate: float
    N: float
    n: float
    m: float
    entropy_term: float
    delta: float
    leak: float
    pa_term: float
    Q: float
    q_eff: float
    xi: float
    q_key: float
    budget: SecurityBudget
    bound: str
    protocol: str
    dimension: int
    pe_scheme: str
    clamped: bool = False
    yield_model: str = YieldKind.PAPER.value
    leak_at: str = LeakAt.WORST_CASE.value

    def recompose(self) -> float:
        return _compose(self.N, self.n, self.entropy_term, self.delta, self.leak, self.pa_term)

    def to_dict(self) -> dict:
        d = asdict(self)
        budget = d.pop("budget")
        d.update(budget)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RateBreakdown":
        d = dict(d)
        budget = SecurityBudget(**{k: d.pop(k) for k in _BUDGET_FIELDS})
        return cls(budget=budget, **d)


_BUDGET_FIELDS = ("eps_total", "eps_ec", "eps_pe", "eps_pa", "eps_bar")


def _compose(N, n, entropy_term, delta, leak, pa_term):
    return n / N * (entropy_term + delta - leak) + pa_term


def _pe_weight(protocol: ProtocolSpec, model: YieldKind) -> int:
    model = YieldKind(model)
    if model is YieldKind.PER_BASIS and protocol.family is Family.D_PLUS_ONE_BASES:
        return protocol.dimension
    return 1


def _q_from_p(protocol, p):
    return 1.0 - (protocol.n_bases - 1) * p


def yields(N: float, q: float, protocol: ProtocolSpec, model=YieldKind.PAPER) -> YieldModel:
    """Split N signals into key (``n = N q**2``) and estimation (``m``) rounds.

    ``q`` is the probability with which each party picks the key basis; the
    remaining ``1 - q`` is spread evenly over the other bases.
    """
    model = YieldKind(model)
    if not N > 0:
        raise DomainError(f"N must be positive, got {N}")
    if not 0 < q < 1:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    p = (1.0 - q) / (protocol.n_bases - 1)
    if not p < 1.0 / (protocol.n_bases - 1):
        raise DomainError(f"q={q} leaves no probability for the estimation bases")
    m = N * _pe_weight(protocol, model) * p * p
    n = N * q * q
    return YieldModel(N, q, p, n, m, model)


def delta_correction(n, eps_bar, protocol: ProtocolSpec):
    """Finite-size correction to the von Neumann entropy (non-positive).

    Qubit protocols use the coefficient 7, the general-dimension formulas
    ``2 log2 d + 3``.
    """
    n = np.asarray(n, dtype=float)
    eps_bar = np.asarray(eps_bar, dtype=float)
    if np.any(~(n > 0)):
        raise DomainError(f"n must be positive, got {n}")
    if np.any(~(eps_bar > 0)) or np.any(eps_bar >= 1):
        raise DomainError(f"eps_bar must lie in (0, 1), got {eps_bar}")
    if protocol.qudit:
        coeff = 2.0 * math.log2(protocol.dimension) + 3.0
    else:
        coeff = 7.0
    out = -coeff * np.sqrt(np.log2(2.0 / eps_bar) / n)
    return float(out) if out.ndim == 0 else out


def _evaluate(bound, protocol, Q, N, eps_pe, eps_pa, eps_bar, q, model, leak_factor, leak_at):
    """Vectorized rate evaluation; every argument after ``N`` may be an array."""
    q = np.asarray(q, dtype=float)
    p = (1.0 - q) / (protocol.n_bases - 1)
    m = N * _pe_weight(protocol, model) * p * p
    n = N * q * q
    xi = np.asarray(scheme_xi(protocol, eps_pe, m))
    # the estimate bounds half the absolute error-rate deviation by xi
    q_sat = protocol.q_saturation
    q_raw = Q + 2.0 * xi
    q_eff = np.minimum(q_raw, q_sat)
    if bound is Bound.VON_NEUMANN:
        ent = np.asarray(entropy.vn_entropy(protocol, q_eff))
        delta = np.asarray(delta_correction(n, eps_bar, protocol))
    else:
        ent = np.asarray(entropy.min_entropy_from_pguess(entropy.pguess(protocol, q_eff)))
        delta = np.zeros_like(ent)
    q_leak = q_eff if leak_at is LeakAt.WORST_CASE else np.full_like(q_eff, Q)
    leak = np.asarray(entropy.leak_ec(protocol, q_leak, leak_factor))
    pa = 2.0 / N * np.log2(2.0 * np.asarray(eps_pa, dtype=float))
    rate = _compose(N, n, ent, delta, leak, pa)
    return dict(rate=rate, n=n, m=m, entropy_term=ent, delta=delta, leak=leak,
                pa_term=pa, q_eff=q_eff, xi=xi, clamped=q_raw >= q_sat)


def _check_common(protocol, Q, N, leak_factor):
    if not 0 <= Q < protocol.q_saturation:
        raise DomainError(f"Q must lie in [0, {protocol.q_saturation}), got {Q}")
    if not (N > 0 and math.isfinite(N)):
        raise DomainError(f"N must be positive and finite, got {N}")
    if not leak_factor > 0:
        raise DomainError(f"leak factor must be positive, got {leak_factor}")


def key_rate(bound, protocol: ProtocolSpec, Q: float, N: float, budget: SecurityBudget,
             q: float, model=YieldKind.PAPER, *, leak_factor: float = DEFAULT_LEAK_FACTOR,
             leak_at=LeakAt.WORST_CASE) -> RateBreakdown:
    """Secret-key rate per signal for one parameter choice.

    The entropy term is evaluated at the worst error rate compatible with the
    estimation statistics. For the von Neumann bound the finite-size
    correction ``delta`` is added; the min-entropy bound uses the
    single-copy min-entropy directly and has ``delta = 0``.
    """
    bound = Bound(bound)
    model = YieldKind(model)
    leak_at = LeakAt(leak_at)
    _check_common(protocol, Q, N, leak_factor)
    ym = yields(N, q, protocol, model)
    if not ym.m > 0:
        raise DomainError("no signals left for parameter estimation")
    r = _evaluate(bound, protocol, Q, N, budget.eps_pe, budget.eps_pa, budget.eps_bar,
                  q, model, leak_factor, leak_at)
    # recomposition must reproduce r["rate"] exactly, so store the evaluated terms
    return RateBreakdown(
        rate=float(r["rate"]), N=float(N), n=float(r["n"]), m=float(r["m"]),
        entropy_term=float(r["entropy_term"]), delta=float(r["delta"]),
        leak=float(r["leak"]), pa_term=float(r["pa_term"]), Q=float(Q),
        q_eff=float(r["q_eff"]), xi=float(r["xi"]), q_key=float(q), budget=budget,
        bound=bound.value, protocol=protocol.name, dimension=protocol.dimension,
        pe_scheme=protocol.pe_scheme.value, clamped=bool(r["clamped"]),
        yield_model=model.value, leak_at=leak_at.value,
    )


@dataclass(frozen=True)
class OptimizerSettings:
    """Deterministic grid search with local refinement.

    The budget is parametrized by log10 weights of ``eps_pe`` and ``eps_bar``
    relative to ``eps_pa``; the basis choice by ``log10 p``.
    """

    points: int = 15
    refinements: int = 3
    shrink: float = 4.0
    log_weight_range: tuple[float, float] = (-4.0, 4.0)
    min_fraction: float = 1e-3 / 3


@dataclass(frozen=True)
class OptimizationResult:
    best: RateBreakdown
    params: dict = field(default_factory=dict)

    def __iter__(self):
        yield self.best
        yield self.params


def _p_range(protocol, N, model):
    p_min = 1.0 / math.sqrt(N * _pe_weight(protocol, model))
    p_max = 1.0 / protocol.n_bases
    return p_min, p_max


def optimize_rate(bound, protocol: ProtocolSpec, Q: float, N: float,
                  eps_total: float = DEFAULT_EPS, eps_ec: float = DEFAULT_EPS_EC,
                  model=YieldKind.PAPER, *, leak_factor: float = DEFAULT_LEAK_FACTOR,
                  leak_at=LeakAt.WORST_CASE,
                  settings: OptimizerSettings = OptimizerSettings()) -> OptimizationResult:
    """Maximize the key rate over ``eps_pe``, ``eps_pa``, ``eps_bar`` and ``q``.

    A 15-point grid per dimension is followed by refinement passes that
    shrink every range 4x around the incumbent. Ties go to the lowest grid
    index, so the result is reproducible bit for bit.

    Returns
    -------
    OptimizationResult
        Unpacks as ``(best, params)``.
    """
    bound = Bound(bound)
    model = YieldKind(model)
    leak_at = LeakAt(leak_at)
    _check_common(protocol, Q, N, leak_factor)
    rest = eps_total - eps_ec
    if not (eps_ec > 0 and rest > 0):
        raise BudgetError(f"need 0 < eps_ec < eps_total, got {eps_ec}, {eps_total}")
    p_min, p_max = _p_range(protocol, N, model)
    if p_min > p_max:
        raise DomainError(f"N={N} is too small to reserve any estimation rounds")

    lo0 = np.array([settings.log_weight_range[0], settings.log_weight_range[0], math.log10(p_min)])
    hi0 = np.array([settings.log_weight_range[1], settings.log_weight_range[1], math.log10(p_max)])
    lo, hi = lo0.copy(), hi0.copy()
    best_x = None
    best_rate = -np.inf
    for _ in range(settings.refinements + 1):
        axes = [np.linspace(lo[i], hi[i], settings.points) for i in range(3)]
        a_pe, a_bar, lp = np.meshgrid(*axes, indexing="ij")
        w_pe = 10.0**a_pe
        w_bar = 10.0**a_bar
        total_w = w_pe + w_bar + 1.0
        f_pe = w_pe / total_w
        f_bar = w_bar / total_w
        eps_pe = rest * f_pe
        eps_bar = rest * f_bar
        eps_pa = rest - eps_pe - eps_bar
        p = 10.0**lp
        q = _q_from_p(protocol, p)
        r = _evaluate(bound, protocol, Q, N, eps_pe, eps_pa, eps_bar, q, model,
                      leak_factor, leak_at)["rate"]
        floor = settings.min_fraction * rest
        feasible = (eps_pe >= floor) & (eps_bar >= floor) & (eps_pa >= floor)
        r = np.where(feasible & np.isfinite(r), r, -np.inf)
        k = int(np.argmax(r))  # first maximum on ties
        if r.flat[k] > best_rate:
            best_rate = float(r.flat[k])
            best_x = np.array([a_pe.flat[k], a_bar.flat[k], lp.flat[k]])
        half = (hi - lo) / settings.shrink / 2.0
        lo = np.maximum(best_x - half, lo0)
        hi = np.minimum(best_x + half, hi0)

    w_pe, w_bar = 10.0 ** best_x[0], 10.0 ** best_x[1]
    total_w = w_pe + w_bar + 1.0
    budget = SecurityBudget.from_fractions(eps_total, eps_ec, w_pe / total_w, w_bar / total_w)
    q = float(_q_from_p(protocol, 10.0 ** best_x[2]))
    best = key_rate(bound, protocol, Q, N, budget, q, model,
                    leak_factor=leak_factor, leak_at=leak_at)
    params = dict(eps_pe=budget.eps_pe, eps_pa=budget.eps_pa, eps_bar=budget.eps_bar, q=q)
    return OptimizationResult(best, params)


def find_threshold_n0(bound, protocol: ProtocolSpec, Q: float,
                      eps_total: float = DEFAULT_EPS, eps_ec: float = DEFAULT_EPS_EC,
                      model=YieldKind.PAPER, *, leak_factor: float = DEFAULT_LEAK_FACTOR,
                      leak_at=LeakAt.WORST_CASE, n_start: float = 1e3,
                      n_ceiling: float = 1e16, rel_width: float = 1e-3,
                      settings: OptimizerSettings = OptimizerSettings()):
    """Smallest number of signals with a positive optimized key rate.

    Brackets upward from ``n_start`` by doubling, then bisects in log N
    until the bracket is ``rel_width`` wide.

    Returns
    -------
    N0 : float
    N0_scaled : float
        ``N0 * log2(d)``, the number of qubit-equivalent signals.
    """
    def positive(N):
        res = optimize_rate(bound, protocol, Q, N, eps_total, eps_ec, model,
                            leak_factor=leak_factor, leak_at=leak_at, settings=settings)
        return res.best.rate > 0

    hi = float(n_start)
    if positive(hi):
        lo = hi / 2.0
        while lo >= 16.0 and positive(lo):
            hi, lo = lo, lo / 2.0
    else:
        lo = hi
        while True:
            hi = lo * 2.0
            if hi > n_ceiling:
                raise ThresholdNotFoundError(
                    f"no positive {Bound(bound).value} rate for {protocol.name} at Q={Q} "
                    f"below N={n_ceiling:g}"
                )
            if positive(hi):
                break
            lo = hi
    log_lo, log_hi = math.log(lo), math.log(hi)
    while log_hi - log_lo > math.log1p(rel_width):
        mid = 0.5 * (log_lo + log_hi)
        if positive(math.exp(mid)):
            log_hi = mid
        else:
            log_lo = mid
    n0 = math.exp(log_hi)
    return n0, n0 * math.log2(protocol.dimension)
