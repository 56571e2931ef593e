"""Protocol and channel data model.

A protocol is either the two-basis (BB84-like) qubit protocol or a
(d+1)-basis protocol in prime dimension d. The (d+1)-basis family at d=2
is the six-state protocol; it can be evaluated either with the qubit
closed forms or with the general-dimension ones (``qudit=True``), which
differ in the finite-size correction coefficient.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DomainError

__all__ = [
    "Family",
    "PeScheme",
    "ProtocolSpec",
    "ChannelModel",
    "is_prime",
]


class Family(str, enum.Enum):
    TWO_BASES = "two-bases"
    D_PLUS_ONE_BASES = "d-plus-one-bases"


class PeScheme(str, enum.Enum):
    """Parameter-estimation scheme.

    IPOVM estimates every parameter with its own two-outcome POVM, CPOVM
    uses one common POVM for all of them.
    """

    IPOVM = "ipovm"
    CPOVM = "cpovm"


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


@dataclass(frozen=True)
class ProtocolSpec:
    """Protocol family, dimension and parameter-estimation scheme.

    Parameters
    ----------
    family : Family
        Two-basis (BB84) or (d+1)-basis protocol.
    dimension : int
        Prime dimension of each subsystem. Two-basis protocols are qubit-only.
    pe_scheme : PeScheme
        Parameter-estimation scheme, IPOVM or CPOVM.
    qudit : bool
        Use the general-dimension closed forms. Forced on for ``dimension > 2``.
    """

    family: Family = Family.TWO_BASES
    dimension: int = 2
    pe_scheme: PeScheme = PeScheme.CPOVM
    qudit: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "pe_scheme", PeScheme(self.pe_scheme))
        d = self.dimension
        if isinstance(d, bool) or int(d) != d:
            raise DomainError(f"dimension must be an integer, got {d!r}")
        d = int(d)
        object.__setattr__(self, "dimension", d)
        if d < 2:
            raise DomainError(f"dimension must be >= 2, got {d}")
        if not is_prime(d):
            raise DomainError(f"dimension must be prime, got {d}")
        if self.family is Family.TWO_BASES:
            if d != 2:
                raise DomainError("two-basis protocols are defined for d=2 only")
            if self.qudit:
                raise DomainError("two-basis protocols have no qudit formulas")
        elif d > 2:
            object.__setattr__(self, "qudit", True)

    @classmethod
    def bb84(cls, pe_scheme="cpovm") -> "ProtocolSpec":
        return cls(Family.TWO_BASES, 2, pe_scheme)

    @classmethod
    def six_state(cls, pe_scheme="cpovm") -> "ProtocolSpec":
        return cls(Family.D_PLUS_ONE_BASES, 2, pe_scheme)

    @classmethod
    def d_bases(cls, dimension: int, pe_scheme="cpovm") -> "ProtocolSpec":
        return cls(Family.D_PLUS_ONE_BASES, dimension, pe_scheme, qudit=True)

    @property
    def n_bases(self) -> int:
        """Number of measurement bases (2 or d+1)."""
        if self.family is Family.TWO_BASES:
            return 2
        return self.dimension + 1

    @property
    def name(self) -> str:
        if self.family is Family.TWO_BASES:
            return "bb84"
        if not self.qudit:
            return "six-state"
        return "d-bases"

    @property
    def q_saturation(self) -> float:
        """Error rate at which every implemented entropy bound reaches zero."""
        if self.family is Family.TWO_BASES:
            return 0.5
        return (self.dimension - 1) / self.dimension

    def with_scheme(self, pe_scheme) -> "ProtocolSpec":
        return ProtocolSpec(self.family, self.dimension, pe_scheme, self.qudit)


@dataclass(frozen=True)
class ChannelModel:
    """Bell-diagonal channel coefficients induced by an error rate.

    ``lam`` is the d x d array of Bell-diagonal weights, indexed as
    ``lam[j, k]``. For qubits ``lam`` is ordered (Phi+, Phi-, Psi+, Psi-)
    row-major. ``u`` and ``v`` are the free parameters of the BB84
    parametrization and are ``nan`` for the symmetrized d-dimensional state.
    """

    q_err: float
    dimension: int
    lam: np.ndarray = field(repr=False)
    beta0: float
    beta1: float
    u: float = float("nan")
    v: float = float("nan")

    def __post_init__(self):
        lam = np.asarray(self.lam, dtype=float)
        d = self.dimension
        if lam.shape != (d, d):
            raise DomainError(f"lambda must have shape ({d}, {d}), got {lam.shape}")
        if np.any(lam < 0):
            raise DomainError("Bell-diagonal weights must be non-negative")
        if abs(lam.sum() - 1.0) > 1e-12:
            raise DomainError(f"Bell-diagonal weights sum to {lam.sum()!r}, not 1")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @classmethod
    def symmetric(cls, q_err: float, dimension: int) -> "ChannelModel":
        """Depolarized state of the (d+1)-basis protocol."""
        d = int(dimension)
        if not 0 <= q_err < 1:
            raise DomainError(f"error rate must lie in [0, 1), got {q_err}")
        beta0 = 1.0 - q_err
        beta1 = q_err / (d - 1)
        lam = np.full((d, d), beta1 / d)
        lam[0, 0] = 1.0 - (d + 1) / d * (1.0 - beta0)
        return cls(q_err, d, lam, beta0, beta1)

    @classmethod
    def bb84(cls, q_err: float, u: float | None = None, v: float | None = None) -> "ChannelModel":
        """Qubit Bell-diagonal state with equal error rates in both bases.

        Exactly one of ``u``/``v`` fixes the other through
        ``(1-Q) u + Q v = Q``. With neither given, the worst case ``u = v = Q``
        is used.
        """
        Q = float(q_err)
        if not 0 <= Q < 1:
            raise DomainError(f"error rate must lie in [0, 1), got {Q}")
        if u is None and v is None:
            u = v = Q
        elif u is None:
            u = Q * (1.0 - v) / (1.0 - Q)
        elif v is None:
            if Q == 0:
                raise DomainError("v is undetermined at Q=0; pass it explicitly")
            v = (Q - (1.0 - Q) * u) / Q
        if abs((1.0 - Q) * u + Q * v - Q) > 1e-12:
            raise DomainError(f"(u, v) = ({u}, {v}) violates (1-Q)u + Qv = Q")
        for name, val in (("u", u), ("v", v)):
            if not -1e-15 <= val <= 1 + 1e-15:
                raise DomainError(f"{name} must lie in [0, 1], got {val}")
        u = min(max(u, 0.0), 1.0)
        v = min(max(v, 0.0), 1.0)
        lam = np.array([
            [(1 - Q) * (1 - u), (1 - Q) * u],
            [Q * (1 - v), Q * v],
        ])
        return cls(Q, 2, lam, 1.0 - Q, Q, u, v)

    @property
    def e_z(self) -> float:
        return float(self.lam[1, 0] + self.lam[1, 1]) if self.dimension == 2 else float("nan")

    @property
    def e_x(self) -> float:
        return float(self.lam[0, 1] + self.lam[1, 1]) if self.dimension == 2 else float("nan")
