"""Dense real linear algebra kernel for small matrices.

All routines operate on plain float64 numpy arrays. The matrices in this
library stay small (a few dozen rows at most), so the factorizations favor
explicit failure modes and reproducibility over raw speed: LU with partial
pivoting for inverses and determinants, cyclic Jacobi for symmetric
eigenproblems, and eigen-based square roots for SPD matrices.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "SingularMatrixError",
    "EigenConvergenceError",
    "as_matrix",
    "as_vector",
    "matmul",
    "det",
    "invert_with_det",
    "sym_eigen",
    "spd_roots",
]

# |pivot| <= LU_PIVOT_RTOL * (max absolute row sum) declares singularity.
LU_PIVOT_RTOL = 1e-12
# Cyclic Jacobi stops when the off-diagonal Frobenius norm drops below
# JACOBI_OFF_RTOL * ||s||_F, and gives up after JACOBI_MAX_SWEEPS sweeps.
JACOBI_OFF_RTOL = 1e-13
JACOBI_MAX_SWEEPS = 100
# SPD square roots require min eigenvalue > SPD_EIG_RTOL * ||s||_F.
SPD_EIG_RTOL = 1e-12
# sym_eigen rejects inputs with ||s - s^T||_F above this (scaled) bound.
SYMMETRY_RTOL = 1e-10


class SingularMatrixError(ValueError):
    """LU elimination found no usable pivot in some column."""

    def __init__(self, pivot_index: int, pivot: float):
        self.pivot_index = int(pivot_index)
        self.pivot = float(pivot)
        super().__init__(
            f"matrix is singular to working precision "
            f"(pivot column {self.pivot_index}, magnitude {self.pivot:.3e})"
        )


class EigenConvergenceError(RuntimeError):
    """Cyclic Jacobi did not reach the off-diagonal target within the sweep limit."""


def as_matrix(a) -> np.ndarray:
    """Coerce to a freshly allocated 2-D float64 array with finite entries."""
    m = np.array(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return m


def as_vector(x) -> np.ndarray:
    """Coerce to a freshly allocated 1-D float64 array with finite entries."""
    v = np.array(x, dtype=float)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got ndim={v.ndim}")
    if not np.isfinite(v).all():
        raise ValueError("vector entries must be finite (no NaN/Inf)")
    return v


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit inner-dimension check."""
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape[1] != bm.shape[0]:
        raise ValueError(
            f"dimension mismatch in product: {am.shape} @ {bm.shape}"
        )
    return am @ bm


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got {m.shape}")


def _lu_decompose(m: np.ndarray):
    """Partial-pivot LU.

    Returns (lu, perm, sign, fail_col) where lu packs unit-lower L below the
    diagonal of U, perm[i] is the original row now at position i, sign is the
    permutation parity, and fail_col is the column where every candidate pivot
    fell below the singularity threshold (None on success).
    """
    lu = m.copy()
    n = lu.shape[0]
    threshold = LU_PIVOT_RTOL * float(np.max(np.sum(np.abs(m), axis=1)))
    perm = np.arange(n)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) <= threshold:
            return lu, perm, sign, k
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
            perm[[k, p]] = perm[[p, k]]
            sign = -sign
        lu[k + 1 :, k] /= lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, perm, sign, None


def det(a) -> float:
    """Determinant via LU; collapses to 0.0 when elimination finds no pivot."""
    m = as_matrix(a)
    _require_square(m)
    lu, _, sign, fail = _lu_decompose(m)
    if fail is not None:
        return 0.0
    return float(sign * np.prod(np.diag(lu)))


def invert_with_det(a) -> tuple[float, np.ndarray]:
    """Determinant (signed pivot product) and inverse of a square matrix.

    Raises SingularMatrixError, carrying the failing pivot column, when the
    best remaining pivot falls below the relative threshold.
    """
    m = as_matrix(a)
    _require_square(m)
    lu, perm, sign, fail = _lu_decompose(m)
    if fail is not None:
        raise SingularMatrixError(fail, float(np.max(np.abs(lu[fail:, fail]))))
    n = m.shape[0]
    d = float(sign * np.prod(np.diag(lu)))
    x = np.eye(n)[perm]
    for k in range(n):  # forward substitution, unit lower triangle
        x[k + 1 :] -= np.outer(lu[k + 1 :, k], x[k])
    for k in range(n - 1, -1, -1):  # back substitution
        x[k] -= lu[k, k + 1 :] @ x[k + 1 :]
        x[k] /= lu[k, k]
    return d, x


def sym_eigen(s) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.

    Returns (q, eigvals) with s = q @ diag(eigvals) @ q.T, q orthogonal and
    eigvals ascending. Inputs that are not symmetric within the scaled
    tolerance are rejected; exceeding the sweep limit raises
    EigenConvergenceError.
    """
    m = as_matrix(s)
    _require_square(m)
    fro = float(np.linalg.norm(m))
    if float(np.linalg.norm(m - m.T)) > SYMMETRY_RTOL * (1.0 + fro):
        raise ValueError("matrix is not symmetric within tolerance")
    a = 0.5 * (m + m.T)
    n = a.shape[0]
    v = np.eye(n)
    target = JACOBI_OFF_RTOL * fro
    # Rotations below this cannot be what keeps the off-norm above target.
    skip = target / (2.0 * n)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = float(np.sqrt(np.sum(np.square(a - np.diag(np.diag(a))))))
        if off <= target:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if abs(apr) <= skip:
                    continue
                tau = (a[r, r] - a[p, p]) / (2.0 * apr)
                t = np.sign(tau) if tau != 0.0 else 1.0
                t /= abs(tau) + np.sqrt(1.0 + tau * tau)
                c = 1.0 / np.sqrt(1.0 + t * t)
                sn = t * c
                gp, gr = a[:, p].copy(), a[:, r].copy()
                a[:, p] = c * gp - sn * gr
                a[:, r] = sn * gp + c * gr
                gp, gr = a[p, :].copy(), a[r, :].copy()
                a[p, :] = c * gp - sn * gr
                a[r, :] = sn * gp + c * gr
                a[p, r] = a[r, p] = 0.0
                gp, gr = v[:, p].copy(), v[:, r].copy()
                v[:, p] = c * gp - sn * gr
                v[:, r] = sn * gp + c * gr
    else:
        raise EigenConvergenceError(
            f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )
    eigvals = np.diag(a).copy()
    order = np.argsort(eigvals, kind="stable")
    return v[:, order], eigvals[order]


def spd_roots(s) -> tuple[np.ndarray, np.ndarray]:
    """Square root and inverse square root of an SPD matrix.

    Rejects inputs whose smallest eigenvalue does not clear the scaled
    positivity threshold, naming that eigenvalue.
    """
    m = as_matrix(s)
    q, w = sym_eigen(m)
    fro = float(np.linalg.norm(m))
    if w[0] <= SPD_EIG_RTOL * fro:
        raise ValueError(
            f"matrix is not positive definite (smallest eigenvalue {w[0]:.6e})"
        )
    r = np.sqrt(w)
    root = (q * r) @ q.T
    inv_root = (q / r) @ q.T
    return 0.5 * (root + root.T), 0.5 * (inv_root + inv_root.T)
