"""Geodesics ``t -> e^{tX} V`` and their Finsler lengths.

A path from ``V`` to ``U`` is stored through the symmetric generator
``W = log(V^{-1/2} U V^{-1/2})``, so that

    gamma(t)  = V^{1/2} exp(tW) V^{1/2}
    gamma'(t) = V^{1/2} W exp(tW) V^{1/2}

and every product stays symmetric.  Both the Thurston and the Teichmüller
norm of ``gamma'(t)`` at ``gamma(t)`` are constant in ``t``, so these paths
have length equal to the respective distance.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotUnimodular, ParameterOutOfRange
from .metrics import tangent_norm
from .numkernel import check_symmetric, jacobi_eig, symmetrize, transpose
from .space import SpdForm

TRACE_TOL = 1e-9
DEFAULT_STEPS = 4096
# quadrature nodes evaluated per batch
CHUNK = 2048


@dataclass(frozen=True, eq=False)
class GeodesicPath:
    """Geodesic from ``V`` to ``U``; build with :func:`geodesic_path`."""

    V: np.ndarray
    U: np.ndarray
    W: np.ndarray
    V_half: np.ndarray
    # eigendecomposition of W, reused for every exp(tW)
    w: np.ndarray
    P: np.ndarray

    @property
    def n(self):
        return self.V.shape[0]

    def points(self, t):
        """Points at an array of times, shape ``t.shape + (n, n)``; no range check."""
        t = np.asarray(t, dtype=float)
        E = (self.P * np.exp(t[..., None] * self.w)[..., None, :]) @ self.P.T
        return symmetrize(self.V_half @ E @ self.V_half)

    def velocities(self, t):
        t = np.asarray(t, dtype=float)
        scale = self.w * np.exp(t[..., None] * self.w)
        D = (self.P * scale[..., None, :]) @ self.P.T
        return symmetrize(self.V_half @ D @ self.V_half)


def geodesic_path(V, U) -> GeodesicPath:
    """Geodesic between two unimodular forms."""
    V = np.array(SpdForm(V).X)
    U = np.array(SpdForm(U).X)
    if V.shape != U.shape:
        raise DimensionMismatch(f"endpoints of shapes {V.shape} and {U.shape}")
    lam, Q = jacobi_eig(V)
    root = np.sqrt(lam)
    V_half = symmetrize((Q * root) @ Q.T)
    V_ihalf = symmetrize((Q / root) @ Q.T)
    M = symmetrize(V_ihalf @ U @ V_ihalf)
    mu, R = jacobi_eig(M)
    w = np.log(mu)
    if abs(w.sum()) > TRACE_TOL:
        raise NotUnimodular(f"generator has trace {w.sum():.3e}; endpoints differ in determinant")
    W = symmetrize((R * w) @ R.T)
    return GeodesicPath(V, U, W, V_half, w, R)


def geodesic_point(path: GeodesicPath, t) -> SpdForm:
    """``V^{1/2} exp(tW) V^{1/2}`` for ``0 <= t <= 1``."""
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ParameterOutOfRange(f"need 0 <= t <= 1, got t={t!r}")
    return SpdForm(path.points(t))


def _trace_free(A, Z):
    """Remove the component of ``A`` along ``Z`` so that ``trace(A Z^{-1}) = 0``."""
    n = A.shape[-1]
    tr = np.trace(np.linalg.solve(Z, A), axis1=-2, axis2=-1)
    return A - (tr / n)[..., None, None] * Z


def finsler_length(path: GeodesicPath, kind="thurston", steps=DEFAULT_STEPS, a=0.0, b=1.0):
    """Composite-midpoint length of ``gamma`` restricted to ``[a, b]``.

    Parameters
    ----------
    path : GeodesicPath
    kind : {'thurston', 'teichmuller'}
    steps : int
        Number of midpoint nodes.
    a, b : float
        Sub-interval of ``[0, 1]``; the default is the whole path.

    Returns
    -------
    float
        Approximation of the integral of ``|gamma'(t)|`` over ``[a, b]``.
        Nodes are processed in fixed chunks and summed left to right.
    """
    steps = int(steps)
    if steps < 1:
        raise ParameterOutOfRange(f"steps must be positive, got {steps}")
    if not 0.0 <= a <= b <= 1.0:
        raise ParameterOutOfRange(f"need 0 <= a <= b <= 1, got a={a!r}, b={b!r}")
    h = (b - a) / steps
    total = 0.0
    for start in range(0, steps, CHUNK):
        k = np.arange(start, min(start + CHUNK, steps))
        t = a + (k + 0.5) * h
        Z = path.points(t)
        A = _trace_free(path.velocities(t), Z)
        total += float(np.sum(tangent_norm(A, Z, kind)))
    return total * h


__all__ = ["GeodesicPath", "finsler_length", "geodesic_path", "geodesic_point"]
