"""
Jacobi Eigen-Solver

Cyclic Jacobi diagonalization for small dense Hermitian matrices.
Used by every verification path (PSD checks, the partial-transpose oracle,
finite-difference Hessians and the convex-roof eigen-decomposition).
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from pairent.errors import ConvergenceError

logger = logging.getLogger(__name__)

OFF_TOL = 1e-12
MAX_SWEEPS = 100
PIVOT_FLOOR = 1e-300


@dataclass(frozen=True)
class EigenResult:
    """Eigenvalues (ascending) and matching eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def _rotate(a: np.ndarray, v: Optional[np.ndarray], p: int, q: int) -> None:
    """Zero a[p, q] in place with a phase-corrected Givens rotation."""
    apq = a[p, q]
    mod = abs(apq)
    if mod < PIVOT_FLOOR:
        return
    phase = apq / mod
    app = a[p, p].real
    aqq = a[q, q].real

    theta = (aqq - app) / (2.0 * mod)
    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    # Phase on column q makes the pivot real, then a real rotation kills it
    u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=a.dtype)
    idx = [p, q]
    a[:, idx] = a[:, idx] @ u
    a[idx, :] = u.conj().T @ a[idx, :]
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real
    if v is not None:
        v[:, idx] = v[:, idx] @ u


def jacobi_eigh(
    matrix: np.ndarray,
    tol: float = OFF_TOL,
    max_sweeps: int = MAX_SWEEPS,
    vectors: bool = True,
) -> EigenResult:
    """
    Diagonalize a Hermitian matrix by cyclic Jacobi sweeps.

    Args:
        matrix: Square Hermitian matrix (real or complex)
        tol: Target off-diagonal Frobenius norm, relative to max(1, ||A||_F)
        max_sweeps: Sweep budget before giving up
        vectors: Whether to accumulate eigenvectors

    Returns:
        EigenResult with ascending eigenvalues

    Raises:
        ConvergenceError: if the off-diagonal norm is still above tolerance
    """
    a = np.array(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex) if vectors else None

    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    sweeps = 0
    while _off_norm(a) >= threshold:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-norm {_off_norm(a):.3e}, n={n})"
            )
        # Only visit pivots that are currently non-zero; sparse blocks finish in one sweep
        rows, cols = np.nonzero(np.triu(np.abs(a) >= PIVOT_FLOOR, k=1))
        for p, q in zip(rows.tolist(), cols.tolist()):
            _rotate(a, v, p, q)
        sweeps += 1

    values = np.real(np.diag(a))
    order = np.argsort(values, kind="stable")
    if sweeps > max_sweeps // 2:
        logger.warning(f"Jacobi needed {sweeps} sweeps for n={n}")
    return EigenResult(
        values=values[order],
        vectors=v[:, order] if v is not None else np.empty((n, 0)),
        sweeps=sweeps,
    )


def eigvalsh(matrix: np.ndarray) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    return jacobi_eigh(matrix, vectors=False).values


def min_eigenvalue(matrix: np.ndarray) -> float:
    return float(eigvalsh(matrix)[0])
