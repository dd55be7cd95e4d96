"""Dense symmetric linear algebra.

Everything here works on single matrices of shape ``(n, n)`` and on stacks of
shape ``(..., n, n)``; stacks are processed in one vectorised pass, which is
what keeps the batch checks in the test-suite cheap.

The eigensolver is a cyclic Jacobi method with threshold pivoting.  Spectra of
``X Y^{-1}`` are never taken from the non-symmetric product: ``Y`` is factored
as ``L L^T`` and the symmetric matrix ``L^{-1} X L^{-T}`` is diagonalised
instead.
"""
from typing import Callable, NamedTuple

import numpy as np

from .errors import (
    DimensionMismatch,
    DomainError,
    NoConvergence,
    NonPositiveDeterminant,
    NonSymmetric,
    NotPositiveDefinite,
)

SYMMETRY_RTOL = 1e-10
OFFDIAG_RTOL = 1e-14
MAX_SWEEPS = 30
# sweeps during which small off-diagonal entries are skipped
THRESHOLD_SWEEPS = 3


class EigenDecomposition(NamedTuple):
    """Eigenvalues sorted descending and matching unit eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_square(a, name="matrix"):
    """Return ``a`` as a float array of shape ``(..., n, n)`` with ``n >= 2``."""
    a = np.asarray(a, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    if a.shape[-1] < 2:
        raise DimensionMismatch(f"{name} must be at least 2x2, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError(f"{name} has non-finite entries")
    return a


def transpose(a):
    return np.swapaxes(a, -1, -2)


def symmetrize(a):
    return 0.5 * (a + transpose(a))


def check_symmetric(a, name="matrix"):
    """Validate symmetry to a relative Frobenius tolerance and symmetrize."""
    a = as_square(a, name)
    asym = np.linalg.norm(a - transpose(a), axis=(-2, -1))
    scale = np.linalg.norm(a, axis=(-2, -1))
    if np.any(asym > SYMMETRY_RTOL * scale):
        worst = float(np.max(asym / np.where(scale > 0, scale, 1.0)))
        raise NonSymmetric(
            f"{name} is not symmetric (relative asymmetry {worst:.3e} > {SYMMETRY_RTOL:g})"
        )
    return symmetrize(a)


def _offdiag_norm(a):
    n = a.shape[-1]
    off = a * (1.0 - np.eye(n))
    return np.linalg.norm(off, axis=(-2, -1))


def _jacobi(a, with_vectors):
    """Diagonalise a stack ``a`` of shape (b, n, n) in place."""
    b, n, _ = a.shape
    v = np.broadcast_to(np.eye(n), a.shape).copy() if with_vectors else None
    target = OFFDIAG_RTOL * np.linalg.norm(a, axis=(-2, -1))
    iu = np.triu_indices(n, 1)

    for sweep in range(MAX_SWEEPS + 1):
        active = _offdiag_norm(a) > target
        if not active.any():
            break
        if sweep == MAX_SWEEPS:
            raise NoConvergence(
                f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps "
                f"({int(active.sum())} of {b} matrices unfinished)"
            )
        if sweep < THRESHOLD_SWEEPS:
            thresh = 0.2 * np.abs(a[:, iu[0], iu[1]]).sum(axis=1) / n**2
        else:
            thresh = np.zeros(b)

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q].copy()
                app = a[:, p, p].copy()
                aqq = a[:, q, q].copy()
                g = 100.0 * np.abs(apq)
                # entries below the resolution of both diagonal entries are dropped
                negligible = (
                    (sweep > THRESHOLD_SWEEPS)
                    & (np.abs(app) + g == np.abs(app))
                    & (np.abs(aqq) + g == np.abs(aqq))
                )
                if negligible.any():
                    a[negligible, p, q] = 0.0
                    a[negligible, q, p] = 0.0
                    apq[negligible] = 0.0
                rot = active & (np.abs(apq) > thresh) & (apq != 0.0)
                if not rot.any():
                    continue
                safe = np.where(rot, apq, 1.0)
                theta = (aqq - app) / (2.0 * safe)
                t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                t = np.where(rot, t, 0.0)
                c = np.where(rot, c, 1.0)[:, None]
                s = np.where(rot, s, 0.0)[:, None]

                col_p = a[:, :, p].copy()
                col_q = a[:, :, q]
                a[:, :, p] = c * col_p - s * col_q
                a[:, :, q] = s * col_p + c * col_q
                row_p = a[:, p, :].copy()
                row_q = a[:, q, :]
                a[:, p, :] = c * row_p - s * row_q
                a[:, q, :] = s * row_p + c * row_q
                a[:, p, p] = app - t * apq
                a[:, q, q] = aqq + t * apq
                a[:, p, q] = np.where(rot, 0.0, a[:, p, q])
                a[:, q, p] = a[:, p, q]

                if v is not None:
                    vp = v[:, :, p].copy()
                    vq = v[:, :, q]
                    v[:, :, p] = c * vp - s * vq
                    v[:, :, q] = s * vp + c * vq

    return np.diagonal(a, axis1=1, axis2=2).copy(), v


def jacobi_eig(S) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix (or stack) by cyclic Jacobi.

    Parameters
    ----------
    S : array_like, shape (..., n, n)
        Symmetric matrices.  Symmetry is checked to a relative Frobenius
        tolerance of 1e-10.

    Returns
    -------
    EigenDecomposition
        ``eigenvalues`` of shape (..., n), sorted non-increasing, and
        ``eigenvectors`` of shape (..., n, n) whose column ``i`` belongs to
        eigenvalue ``i``.  Each eigenvector is signed so that its first
        entry of largest magnitude is positive.

    Raises
    ------
    NonSymmetric
        If the asymmetry exceeds the tolerance.
    NoConvergence
        If the off-diagonal norm is not below ``1e-14 * ||S||_F`` after
        30 sweeps.
    """
    a = check_symmetric(S)
    shape = a.shape
    n = shape[-1]
    w, v = _jacobi(a.reshape(-1, n, n).copy(), with_vectors=True)

    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    lead = np.argmax(np.abs(v), axis=1)
    sign = np.take_along_axis(v, lead[:, None, :], axis=1)[:, 0, :]
    v = v * np.where(sign < 0, -1.0, 1.0)[:, None, :]
    return EigenDecomposition(w.reshape(shape[:-1]), v.reshape(shape))


def jacobi_eigvals(S):
    """Eigenvalues only, sorted non-increasing; same algorithm as :func:`jacobi_eig`."""
    a = check_symmetric(S)
    shape = a.shape
    n = shape[-1]
    w, _ = _jacobi(a.reshape(-1, n, n).copy(), with_vectors=False)
    return -np.sort(-w, axis=1).reshape(shape[:-1])


def cholesky(S):
    """Lower-triangular ``L`` with positive diagonal and ``L L^T = S``.

    Raises :class:`NotPositiveDefinite` as soon as a pivot is not positive.
    """
    a = check_symmetric(S)
    shape = a.shape
    n = shape[-1]
    a = a.reshape(-1, n, n)
    L = np.zeros_like(a)
    for j in range(n):
        lj = L[:, j, :j]
        d = a[:, j, j] - np.einsum("bk,bk->b", lj, lj)
        if np.any(d <= 0.0):
            raise NotPositiveDefinite(
                f"matrix is not positive-definite (pivot {j} is {float(np.min(d)):.3e})"
            )
        L[:, j, j] = np.sqrt(d)
        if j + 1 < n:
            rest = a[:, j + 1:, j] - np.einsum("bik,bk->bi", L[:, j + 1:, :j], lj)
            L[:, j + 1:, j] = rest / L[:, j, j][:, None]
    return L.reshape(shape)


def lower_inverse(L):
    """Inverse of a lower-triangular stack by forward substitution."""
    L = np.asarray(L, dtype=float)
    n = L.shape[-1]
    Z = np.zeros_like(L)
    for i in range(n):
        row = -np.einsum("...k,...kj->...j", L[..., i, :i], Z[..., :i, :])
        row[..., i] += 1.0
        Z[..., i, :] = row / L[..., i, i][..., None]
    return Z


def _same_shape(X, Y):
    if X.shape[-2:] != Y.shape[-2:]:
        raise DimensionMismatch(
            f"dimension mismatch: {X.shape[-1]}x{X.shape[-1]} vs {Y.shape[-1]}x{Y.shape[-1]}"
        )


def congruence(A, Y):
    """Return the symmetric matrix ``L^{-1} A L^{-T}`` where ``Y = L L^T``.

    Its spectrum is the spectrum of ``A Y^{-1}``; ``A`` only has to be
    symmetric.
    """
    A = check_symmetric(A, "A")
    Y = check_symmetric(Y, "Y")
    _same_shape(A, Y)
    Linv = lower_inverse(cholesky(Y))
    return symmetrize(Linv @ A @ transpose(Linv))


def congruence_spectrum(A, Y):
    """Eigenvalues of ``A Y^{-1}`` (descending) for symmetric ``A``, SPD ``Y``."""
    return jacobi_eigvals(congruence(A, Y))


def relative_eigenvalues(X, Y):
    """Spectrum of ``X Y^{-1}`` for symmetric positive-definite ``X`` and ``Y``.

    Computed as the spectrum of ``L^{-1} X L^{-T}`` with ``Y = L L^T``, so the
    values are real and, for positive-definite ``X``, positive.  Sorted
    descending.
    """
    lam = congruence_spectrum(X, Y)
    if np.any(lam[..., -1] <= 0.0):
        raise NotPositiveDefinite("X is not positive-definite")
    return lam


def sym_apply(S, fn: Callable[[np.ndarray], np.ndarray]):
    """Apply a scalar function to the eigenvalues of a symmetric matrix."""
    w, v = jacobi_eig(S)
    return symmetrize((v * fn(w)[..., None, :]) @ transpose(v))


def sym_exp(A):
    """Matrix exponential of a symmetric matrix."""
    return sym_apply(A, np.exp)


def _require_pd(S, what):
    w, v = jacobi_eig(S)
    if np.any(w[..., -1] <= 0.0):
        raise NotPositiveDefinite(f"{what} needs a positive-definite matrix")
    return w, v


def sym_log(S):
    """Principal logarithm of a symmetric positive-definite matrix."""
    w, v = _require_pd(S, "sym_log")
    return symmetrize((v * np.log(w)[..., None, :]) @ transpose(v))


def sym_power(S, p):
    """``S**p`` for symmetric positive-definite ``S`` and real ``p``."""
    w, v = _require_pd(S, "sym_power")
    return symmetrize((v * w[..., None, :] ** p) @ transpose(v))


def unimodular(M, min_det=1e-12):
    """Scale ``M`` to determinant one; ``det M`` must exceed ``min_det``."""
    M = as_square(M)
    det = np.linalg.det(M)
    if np.any(det <= min_det):
        raise NonPositiveDeterminant(
            f"determinant {float(np.min(det)):.6g} is not positive "
            "(singular or orientation-reversing marking)"
        )
    return M * (det ** (-1.0 / M.shape[-1]))[..., None, None]
