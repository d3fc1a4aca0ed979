"""Small dense linear algebra kernels used by the geometry modules.

Contents:
    symmetrize(S)          -- validate and exactly symmetrize a square matrix
    jacobi_eigh(S)         -- eigendecomposition by cyclic Jacobi rotations
    psd_power(S, p)        -- symmetric PSD fractional matrix power
    det(M)                 -- determinant by partially pivoted elimination
    normalize_det_one(M)   -- rescale to determinant exactly one
    schatten1(M)           -- sum of singular values

The matrices handled here are tiny (ambient dimensions <= 16), so the
kernels favour transparent, verifiable arithmetic over throughput.  The
Jacobi sweep in particular gives eigenvectors orthogonal to machine
precision, which downstream position solvers rely on.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    ConvergenceError,
    DimensionError,
    NotPSDError,
    SingularMatrixError,
)

MAX_SYM_DIM = 16
# Asymmetry beyond this (relative to the largest entry) is a caller bug, not
# roundoff, and is rejected instead of silently averaged away.
SYM_INPUT_TOL = 1e-8
JACOBI_MAX_SWEEPS = 100
JACOBI_TOL_FACTOR = 1e-14
# Eigenvalues in [-PSD_CLAMP, 0) are treated as roundoff zeros; anything
# below -PSD_CLAMP (relative to the spectral scale) is a genuine violation.
PSD_CLAMP = 1e-10


def symmetrize(S: np.ndarray, tol: float = SYM_INPUT_TOL) -> np.ndarray:
    """Return (S + S.T)/2 after checking S is square and nearly symmetric."""
    A = np.asarray(S, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    scale = np.abs(A).max()
    if scale > 0.0 and np.abs(A - A.T).max() > tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    return (A + A.T) / 2.0


def _offdiag_norm(A: np.ndarray) -> float:
    n = A.shape[0]
    iu = np.triu_indices(n, k=1)
    return float(np.sqrt(2.0 * np.sum(A[iu] ** 2)))


def jacobi_eigh(
    S: np.ndarray,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
    tol_factor: float = JACOBI_TOL_FACTOR,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns (w, Q) with eigenvalues w sorted descending and orthonormal
    eigenvector columns Q, so S == Q @ diag(w) @ Q.T up to roundoff.
    Raises ConvergenceError if the off-diagonal norm has not fallen below
    tol_factor * ||S||_F after max_sweeps full sweeps.
    """
    A = symmetrize(S).copy()
    n = A.shape[0]
    if n > MAX_SYM_DIM:
        raise DimensionError(f"symmetric kernels capped at dim {MAX_SYM_DIM}, got {n}")
    Q = np.eye(n)
    fnorm = float(np.sqrt(np.sum(A * A)))
    thresh = tol_factor * fnorm

    for sweep in range(max_sweeps + 1):
        off = _offdiag_norm(A)
        if off <= thresh:
            break
        if sweep == max_sweeps:
            raise ConvergenceError(
                f"jacobi_eigh: off-diagonal {off:.3e} above {thresh:.3e} "
                f"after {max_sweeps} sweeps"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if apq == 0.0:
                    continue
                # Rotation that zeroes A[p,q]; standard stable formulas.
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # A <- J^T A J with J the plane rotation (c, s) at (p, q);
                # this choice of t zeroes the (p, q) entry.
                rot = np.array([[c, s], [-s, c]])
                A[[p, q], :] = rot.T @ A[[p, q], :]
                A[:, [p, q]] = A[:, [p, q]] @ rot
                Q[:, [p, q]] = Q[:, [p, q]] @ rot
                # Pin the zeroed pair exactly; symmetry of A is maintained.
                A[p, q] = 0.0
                A[q, p] = 0.0

    w = np.diag(A).copy()
    order = np.argsort(-w, kind="stable")
    return w[order], Q[:, order]


def psd_power(S: np.ndarray, p: float) -> np.ndarray:
    """Return the symmetric matrix S**p for PSD S.

    Eigenvalues in [-PSD_CLAMP * scale, 0) are clamped to zero; anything more
    negative raises NotPSDError.  Negative powers of a singular matrix raise
    SingularMatrixError.
    """
    w, Q = jacobi_eigh(S)
    scale = max(1.0, float(np.abs(w).max()) if w.size else 1.0)
    if w.min() < -PSD_CLAMP * scale:
        raise NotPSDError(f"matrix has negative eigenvalue {w.min():.3e}")
    w = np.where(w < 0.0, 0.0, w)
    if p < 0.0 and np.any(w == 0.0):
        raise SingularMatrixError("negative power of a singular matrix")
    out = (Q * w**p) @ Q.T
    return (out + out.T) / 2.0


def det(M: np.ndarray) -> float:
    """Determinant via Gaussian elimination with partial pivoting."""
    A = np.array(M, dtype=float, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    sign = 1.0
    value = 1.0
    for k in range(n):
        piv = k + int(np.argmax(np.abs(A[k:, k])))
        if A[piv, k] == 0.0:
            return 0.0
        if piv != k:
            A[[k, piv], :] = A[[piv, k], :]
            sign = -sign
        value *= A[k, k]
        factors = A[k + 1 :, k] / A[k, k]
        A[k + 1 :, k:] -= np.outer(factors, A[k, k:])
    return sign * value


def normalize_det_one(M: np.ndarray) -> np.ndarray:
    """Rescale M so its determinant is one.  Requires det(M) > 0."""
    A = np.asarray(M, dtype=float)
    d = det(A)
    if not np.isfinite(d) or d <= 0.0:
        raise SingularMatrixError(f"cannot normalize matrix with det {d:.3e}")
    n = A.shape[0]
    return A / d ** (1.0 / n)


def schatten1(M: np.ndarray) -> float:
    """Sum of singular values, computed from the spectrum of M.T @ M."""
    A = np.asarray(M, dtype=float)
    w, _ = jacobi_eigh(A.T @ A)
    w = np.where(w < 0.0, 0.0, w)  # roundoff guard; M.T @ M is PSD
    return float(np.sum(np.sqrt(w)))
