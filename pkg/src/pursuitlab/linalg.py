"""Dense linear algebra for small matrices (a few hundred rows at most).

Everything here is self-contained: least squares goes through Householder QR,
ridge-regularized solves through a Cholesky factorization of the normal
matrix, and Gram eigenvalue extremes through cyclic Jacobi sweeps.  numpy
supplies array storage and vectorized arithmetic only; no LAPACK-backed
factorizations are called.

All functions are pure and validate shapes and finiteness of their inputs.
Tolerances live in :mod:`pursuitlab.constants`.
"""

from __future__ import annotations

import numpy as np

from . import constants
from .errors import (
    DimensionMismatch,
    NonFiniteEntries,
    NotPositiveDefinite,
    RankDeficient,
    SingularMatrix,
)


def as_matrix(a) -> np.ndarray:
    """Validate and return ``a`` as a finite float64 matrix."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionMismatch(f"expected a nonempty 2-d matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise NonFiniteEntries("matrix entries must be finite")
    return a


def as_vector(x) -> np.ndarray:
    """Validate and return ``x`` as a finite float64 vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.shape[0] < 1:
        raise DimensionMismatch(f"expected a nonempty 1-d vector, got shape {x.shape}")
    if not np.isfinite(x).all():
        raise NonFiniteEntries("vector entries must be finite")
    return x


def vec_norm2(x) -> float:
    """Euclidean norm of a vector."""
    x = as_vector(x)
    return float(np.sqrt(x @ x))


def frobenius_norm(a) -> float:
    """Frobenius norm of a matrix."""
    a = as_matrix(a)
    return float(np.sqrt((a * a).sum()))


def inner(x, y) -> float:
    """Euclidean inner product of two equal-length vectors."""
    x, y = as_vector(x), as_vector(y)
    if x.shape != y.shape:
        raise DimensionMismatch(f"inner product needs equal lengths, got {x.shape[0]} and {y.shape[0]}")
    return float(x @ y)


def matvec(a, x) -> np.ndarray:
    """A @ x."""
    a, x = as_matrix(a), as_vector(x)
    if a.shape[1] != x.shape[0]:
        raise DimensionMismatch(f"matvec: {a.shape} @ ({x.shape[0]},)")
    return a @ x


def matvec_transpose(a, y) -> np.ndarray:
    """A.T @ y (the correlation of y with each column of A)."""
    a, y = as_matrix(a), as_vector(y)
    if a.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"matvec_transpose: {a.shape}.T @ ({y.shape[0]},)")
    return a.T @ y


def least_squares(a, y) -> np.ndarray:
    """Unique least-squares solution of min_z ||y - A z||_2 for full-rank A.

    Householder QR with the right-hand side carried as an extra column, then
    back substitution.  The factorization is rejected as rank deficient when
    any |R[j,j]| falls below ``QR_RANK_RTOL`` times the largest diagonal
    magnitude, or when A has more columns than rows.

    Raises
    ------
    DimensionMismatch
        If shapes disagree.
    RankDeficient
        If the rank test fails.
    """
    a, y = as_matrix(a), as_vector(y)
    m, s = a.shape
    if y.shape[0] != m:
        raise DimensionMismatch(f"least_squares: A is {m}x{s} but y has length {y.shape[0]}")
    if m < s:
        raise RankDeficient(f"least_squares: {m}x{s} matrix cannot have full column rank")

    w = np.empty((m, s + 1), dtype=np.float64)
    w[:, :s] = a
    w[:, s] = y
    diag = np.zeros(s, dtype=np.float64)
    for j in range(s):
        x = w[j:, j]
        nx = np.sqrt(x @ x)
        if nx == 0.0:
            continue  # dead column; the rank test below rejects it
        alpha = -nx if x[0] >= 0.0 else nx
        v = x.copy()
        v[0] -= alpha
        v /= np.sqrt(v @ v)
        tail = w[j:, j + 1:]
        tail -= np.outer(2.0 * v, v @ tail)
        diag[j] = alpha
        w[j:, j] = 0.0
        w[j, j] = alpha

    adiag = np.abs(diag)
    dmax = adiag.max()
    if dmax == 0.0 or adiag.min() < constants.QR_RANK_RTOL * dmax:
        raise RankDeficient(f"least_squares: R diagonal below {constants.QR_RANK_RTOL:g} of max")

    z = np.empty(s, dtype=np.float64)
    for i in range(s - 1, -1, -1):
        z[i] = (w[i, s] - w[i, i + 1:s] @ z[i + 1:]) / w[i, i]
    return z


def _cholesky_lower(g: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of a symmetric positive-definite matrix."""
    n = g.shape[0]
    ell = np.zeros_like(g)
    for j in range(n):
        d = g[j, j] - ell[j, :j] @ ell[j, :j]
        if not (d > 0.0 and np.isfinite(d)):
            raise NotPositiveDefinite(f"Cholesky pivot {j} is {d!r}")
        dj = np.sqrt(d)
        ell[j, j] = dj
        if j + 1 < n:
            ell[j + 1:, j] = (g[j + 1:, j] - ell[j + 1:, :j] @ ell[j, :j]) / dj
    return ell


def _solve_lower(ell: np.ndarray, b: np.ndarray) -> np.ndarray:
    x = np.empty_like(b)
    for i in range(b.shape[0]):
        x[i] = (b[i] - ell[i, :i] @ x[:i]) / ell[i, i]
    return x


def _solve_lower_transpose(ell: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = b.shape[0]
    x = np.empty_like(b)
    for i in range(n - 1, -1, -1):
        x[i] = (b[i] - ell[i + 1:, i] @ x[i + 1:]) / ell[i, i]
    return x


def _spd_inverse(g: np.ndarray) -> np.ndarray:
    """Inverse of a symmetric positive-definite matrix via its Cholesky factor."""
    ell = _cholesky_lower(g)
    n = g.shape[0]
    eye = np.eye(n)
    return np.column_stack(
        [_solve_lower_transpose(ell, _solve_lower(ell, eye[:, j])) for j in range(n)]
    )


def solve_tikhonov(a, y, alpha: float) -> np.ndarray:
    """Ridge-regularized estimate (A.T A + alpha I)^-1 A.T y.

    The normal matrix is symmetric positive definite for alpha > 0, so it is
    factored by Cholesky; squaring the condition number is harmless at the
    sizes this package targets.
    """
    a, y = as_matrix(a), as_vector(y)
    if a.shape[0] != y.shape[0]:
        raise DimensionMismatch(f"solve_tikhonov: A is {a.shape[0]}x{a.shape[1]} but y has length {y.shape[0]}")
    if not (alpha > 0.0 and np.isfinite(alpha)):
        raise ValueError("alpha must be a positive finite real")
    g = a.T @ a
    g[np.diag_indices_from(g)] += alpha
    ell = _cholesky_lower(g)
    return _solve_lower_transpose(ell, _solve_lower(ell, a.T @ y))


def _jacobi_eigenvalues(sym: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop when the off-diagonal Frobenius norm drops below
    ``JACOBI_OFF_RTOL`` times the initial Frobenius norm, or after
    ``JACOBI_MAX_SWEEPS`` sweeps.
    """
    a = sym.copy()
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy()
    thresh = constants.JACOBI_OFF_RTOL * np.sqrt((a * a).sum())
    for _ in range(constants.JACOBI_MAX_SWEEPS):
        d = a.diagonal()
        off2 = (a * a).sum() - d @ d
        if off2 <= thresh * thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return a.diagonal().copy()


def gram_eig_extremes(a) -> tuple[float, float]:
    """Smallest and largest eigenvalues of A.T A.

    These are the squared extreme singular values of A; the s x s Gram matrix
    stays small (s <= m) so a Jacobi eigen-solve is accurate and cheap.
    """
    a = as_matrix(a)
    eigs = _jacobi_eigenvalues(a.T @ a)
    return float(eigs.min()), float(eigs.max())


def condition_number(a) -> float:
    """sqrt(lambda_max / lambda_min) of the Gram matrix, i.e. sigma_max/sigma_min."""
    lo, hi = gram_eig_extremes(a)
    if hi <= 0.0 or lo <= constants.COND_SINGULAR_RTOL * hi:
        raise SingularMatrix(f"condition_number: lambda_min={lo:g} below tolerance")
    return float(np.sqrt(hi / lo))
