"""Small dense Hermitian matrices and a cyclic Jacobi eigensolver.

The solver works on real symmetric matrices. A complex Hermitian matrix
``A + iB`` is diagonalized through its real embedding
``[[A, -B], [B, A]]``, whose spectrum is that of the original with every
eigenvalue doubled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import ConvergenceError, DomainError

__all__ = [
    "HermitianMatrix",
    "symmetric_eig",
    "jacobi_eig",
    "trace_norm",
    "matrix_function",
    "MAX_DIM",
]

MAX_DIM = 64
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HermitianMatrix:
    """Immutable dense Hermitian matrix of dimension at most ``MAX_DIM``."""

    entries: np.ndarray

    def __post_init__(self):
        m = np.array(self.entries)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {m.shape}")
        if m.shape[0] > MAX_DIM:
            raise DomainError(f"dimension {m.shape[0]} exceeds {MAX_DIM}")
        if not np.all(np.isfinite(m)):
            raise DomainError("matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise DomainError("matrix is not Hermitian")
        if np.iscomplexobj(m) and np.max(np.abs(m.imag), initial=0.0) == 0.0:
            m = m.real
        m = m.astype(complex if np.iscomplexobj(m) else float)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.entries)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def __sub__(self, other):
        return HermitianMatrix(self.entries - np.asarray(other))

    def __add__(self, other):
        return HermitianMatrix(self.entries + np.asarray(other))

    def trace(self) -> float:
        return float(np.trace(self.entries).real)


def _as_hermitian(M) -> HermitianMatrix:
    return M if isinstance(M, HermitianMatrix) else HermitianMatrix(M)


def jacobi_eig(a, tol: float = 1e-13, max_sweeps: int = 100):
    """Cyclic Jacobi diagonalization of a real symmetric matrix.

    Parameters
    ----------
    a : array_like
        Real symmetric matrix.
    tol : float
        Sweeps stop once the off-diagonal Frobenius norm drops below
        ``tol`` times the Frobenius norm of ``a``.
    max_sweeps : int
        Iteration budget.

    Returns
    -------
    w : ndarray
        Eigenvalues, unsorted.
    v : ndarray
        Orthogonal matrix with the eigenvectors as columns.
    sweeps : int
        Number of sweeps performed.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = math.sqrt(float(np.sum(a * a)))
    if n < 2 or scale == 0.0:
        return np.diag(a).copy(), v, 0
    target = tol * scale
    for sweep in range(max_sweeps + 1):
        off = math.sqrt(float(np.sum((a - np.diag(np.diag(a))) ** 2)))
        if off <= target:
            return np.diag(a).copy(), v, sweep
        if sweep == max_sweeps:
            break
        # skip negligible pivots; threshold shrinks with the residual
        skip = 1e-3 * target / n
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                ap = a[:, p].copy()
                aq = a[:, q]
                a[:, p] = c * ap - s * aq
                a[:, q] = s * ap + c * aq
                ap = a[p, :].copy()
                aq = a[q, :]
                a[p, :] = c * ap - s * aq
                a[q, :] = s * ap + c * aq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    raise ConvergenceError(
        f"Jacobi iteration did not converge in {max_sweeps} sweeps (off-norm {off:.3e})"
    )


def symmetric_eig(M, tol: float = 1e-13, max_sweeps: int = 100):
    """Eigendecomposition ``M = V diag(w) V^H`` of a Hermitian matrix.

    Eigenvalues are returned in descending order with orthonormal
    eigenvectors as the columns of ``V``.

    Raises
    ------
    ConvergenceError
        If the Jacobi sweeps exhaust ``max_sweeps``.
    """
    M = _as_hermitian(M)
    m = M.entries
    n = M.dim
    if M.is_real:
        w, v, _ = jacobi_eig(m, tol, max_sweeps)
    else:
        big = np.block([[m.real, -m.imag], [m.imag, m.real]])
        w2, v2, _ = jacobi_eig(big, tol, max_sweeps)
        w, v = _fold_complex(w2, v2, n)
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def _fold_complex(w2, v2, n):
    """Recover an n-dim complex eigenbasis from the 2n-dim real embedding."""
    order = np.argsort(-w2, kind="stable")
    w2 = w2[order]
    v2 = v2[:, order]
    cand = v2[:n, :] + 1j * v2[n:, :]
    # each eigenvalue appears twice; keep a Gram-Schmidt independent half
    vecs = []
    vals = []
    for k in range(2 * n):
        x = cand[:, k].copy()
        for y in vecs:
            x -= y * np.vdot(y, x)
        nrm = np.linalg.norm(x)
        if nrm > 1e-6:
            vecs.append(x / nrm)
            vals.append(w2[k])
        if len(vecs) == n:
            break
    return np.array(vals), np.column_stack(vecs)


def matrix_function(M, func, rcond: float | None = None):
    """Apply ``func`` to the spectrum of a Hermitian matrix.

    Eigenvalues with ``|w| <= rcond * max|w|`` are mapped to 0, which gives
    pseudo-inverse behaviour for negative powers.
    """
    w, v = symmetric_eig(M)
    fw = np.zeros_like(w)
    keep = np.ones_like(w, dtype=bool)
    if rcond is not None:
        keep = np.abs(w) > rcond * max(np.max(np.abs(w)), np.finfo(float).tiny)
    fw[keep] = func(w[keep])
    out = (v * fw) @ v.conj().T
    return out.real if np.isrealobj(v) else out


def trace_norm(M) -> float:
    """Trace norm ``tr sqrt(M^H M)``, the sum of absolute eigenvalues."""
    w, _ = symmetric_eig(M)
    return float(np.sum(np.abs(w)))
