"""Distances and Finsler norms on the space of unimodular forms.

Argument order follows the Lipschitz picture: ``d_thurston(Y, X)`` measures
how much the extremal map from the torus ``Y`` onto the torus ``X`` must
stretch, and equals ``(1/2) log`` of the top eigenvalue of ``X Y^{-1}``.

All distance functions accept single matrices or broadcastable stacks; a
single pair gives a Python float.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidTangent
from .numkernel import check_symmetric, congruence, jacobi_eigvals, relative_eigenvalues
from .space import HomotopyClass

TRACE_TOL = 1e-9
KINDS = ("thurston", "teichmuller")


def _out(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def _pair(X, Y):
    return check_symmetric(X, "X"), check_symmetric(Y, "Y")


def d_thurston(Y, X):
    """Thurston distance from ``Y`` to ``X``: ``(1/2) log lambda_max(X Y^{-1})``.

    This is the log of the Lipschitz constant of the affine map between the
    marked tori, so it is asymmetric once ``n >= 3``.

    >>> round(d_thurston(np.eye(2), np.diag([4.0, 0.25])), 12)
    0.69314718056
    """
    X, Y = _pair(X, Y)
    top = relative_eigenvalues(X, Y)[..., 0]
    return _out(np.maximum(0.5 * np.log(top), 0.0))


def d_teichmuller(X, Y):
    """Teichmüller distance ``(1/2) max |log lambda|`` over the spectrum of ``X Y^{-1}``.

    The bottom of that spectrum is the reciprocal of the top of ``Y X^{-1}``;
    it is read from there so both tails carry top-eigenvalue accuracy.
    """
    X, Y = _pair(X, Y)
    up = np.abs(np.log(relative_eigenvalues(X, Y)[..., 0]))
    down = np.abs(np.log(relative_eigenvalues(Y, X)[..., 0]))
    return _out(0.5 * np.maximum(up, down))


def d_weil_petersson(X, Y):
    """Riemannian distance ``sqrt(sum log(lambda_i)^2)`` over the spectrum of ``X Y^{-1}``."""
    X, Y = _pair(X, Y)
    lam = relative_eigenvalues(X, Y)
    return _out(np.sqrt(np.sum(np.log(lam) ** 2, axis=-1)))


DISTANCES = {
    "thurston": d_thurston,
    "teichmuller": d_teichmuller,
    "wp": d_weil_petersson,
}


@dataclass(frozen=True, eq=False)
class TangentVector:
    """Symmetric ``A`` at base ``Z`` with ``trace(A Z^{-1}) = 0``."""

    Z: np.ndarray
    A: np.ndarray

    def __post_init__(self):
        Z = check_symmetric(self.Z, "base")
        A = check_symmetric(self.A, "tangent")
        if A.shape != Z.shape:
            raise InvalidTangent(f"tangent of shape {A.shape} at base of shape {Z.shape}")
        tr = np.trace(congruence(A, Z), axis1=-2, axis2=-1)
        if np.any(np.abs(tr) > TRACE_TOL):
            raise InvalidTangent(
                f"tangent must satisfy trace(A Z^-1) = 0, got {float(np.max(np.abs(tr))):.3e}"
            )
        object.__setattr__(self, "Z", Z)
        object.__setattr__(self, "A", A)


def tangent_norm(A, Z, kind="thurston"):
    """Finsler norm of symmetric ``A`` at ``Z`` without the trace check.

    ``thurston`` is half the top eigenvalue of ``A Z^{-1}``; ``teichmuller``
    is half its spectral radius.
    """
    if kind not in KINDS:
        raise DomainError(f"unknown norm kind {kind!r}; expected one of {KINDS}")
    lam = jacobi_eigvals(congruence(A, Z))
    if kind == "thurston":
        return _out(0.5 * lam[..., 0])
    return _out(0.5 * np.maximum(lam[..., 0], -lam[..., -1]))


def finsler_norm(t: TangentVector, kind="thurston"):
    return tangent_norm(t.A, t.Z, kind)


def _prefixes(n, R):
    """All integer prefixes in ``[-R, R]^(n-1)``, as one array."""
    axis = np.arange(-R, R + 1, dtype=float)
    if n == 2:
        return axis[:, None]
    grids = np.meshgrid(*([axis] * (n - 1)), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _best_in_chunk(P, X, Y, R):
    """Best ratio ``m X m^T / m Y m^T`` over ``m = (p, x)``, ``p`` in ``P``, ``|x| <= R``.

    For a fixed prefix the ratio is a quotient of two quadratics in ``x``; it
    is monotone between its (at most two) critical points, so the integer
    maximum on ``[-R, R]`` sits at ``+-R`` or beside a critical point.
    """
    Xp, xc, xl = X[:-1, :-1], X[:-1, -1], X[-1, -1]
    Yp, yc, yl = Y[:-1, :-1], Y[:-1, -1], Y[-1, -1]
    a, b, c = xl, 2.0 * P @ xc, np.einsum("ki,ij,kj->k", P, Xp, P)
    d, e, f = yl, 2.0 * P @ yc, np.einsum("ki,ij,kj->k", P, Yp, P)

    qa = a * e - b * d
    qb = 2.0 * (a * f - c * d)
    qc = b * f - c * e
    with np.errstate(divide="ignore", invalid="ignore"):
        disc = np.sqrt(np.maximum(qb * qb - 4.0 * qa * qc, 0.0))
        q = -0.5 * (qb + np.where(qb >= 0, disc, -disc))
        r1 = np.where(qa != 0, q / qa, -qc / qb)
        r2 = qc / q
    roots = np.stack([r1, r2], axis=1)
    roots = np.where(np.isfinite(roots), np.clip(roots, -R, R), 0.0)
    fl = np.floor(roots)
    cand = np.concatenate(
        [fl, fl + 1.0, np.full((len(P), 1), -R), np.full((len(P), 1), R)], axis=1
    )
    cand = np.clip(cand, -R, R)

    num = a * cand**2 + b[:, None] * cand + c[:, None]
    den = d * cand**2 + e[:, None] * cand + f[:, None]
    zero = (cand == 0) & ~P.any(axis=1)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(zero, -np.inf, num / np.where(zero, 1.0, den))
    k = np.argmax(ratio)
    i, j = np.unravel_index(k, ratio.shape)
    return ratio[i, j], np.append(P[i], cand[i, j])


def kappa_search(Y, X, radius, chunk=1 << 16):
    """Largest log length ratio over classes with ``||m||_inf <= radius``.

    Returns ``(value, m)`` where ``value = log(l_X(m) / l_Y(m))`` is maximal
    and ``m`` is a primitive class attaining it.  Prefixes are processed in
    chunks and combined by ``max`` in a fixed order, so the answer does not
    depend on ``chunk``.
    """
    X, Y = _pair(X, Y)
    if X.ndim != 2 or X.shape != Y.shape:
        raise DomainError("kappa needs two forms of the same dimension")
    R = int(radius)
    if R < 1 or R != radius:
        raise DomainError(f"radius must be a positive integer, got {radius!r}")
    n = X.shape[0]
    P = _prefixes(n, R)
    best, arg = -np.inf, None
    for start in range(0, len(P), chunk):
        r, m = _best_in_chunk(P[start:start + chunk], X, Y, R)
        if r > best:
            best, arg = r, m
    # m and -m are the same curve; report the one whose first nonzero entry is positive
    if arg[np.flatnonzero(arg)[0]] < 0:
        arg = -arg
    cls = HomotopyClass(tuple(int(v) for v in arg)).primitive()
    return 0.5 * float(np.log(best)), cls


def kappa_lower_bound(Y, X, radius):
    """Finite-radius approximation of the length-ratio metric; never exceeds ``d_thurston(Y, X)``."""
    return kappa_search(Y, X, radius)[0]

