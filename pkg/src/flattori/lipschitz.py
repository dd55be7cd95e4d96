"""Extremal maps between marked tori.

The affine map in the marked homotopy class is Lipschitz-extremal and
quasiconformally extremal.  For a pair of rectangular 2-tori the module also
builds the explicit infinite family of piecewise-linear maps that share the
extremal Lipschitz constant ``r``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, OutOfDomain, ParameterOutOfRange, SingularBasis
from .numkernel import jacobi_eigvals

AFFINE_RTOL = 1e-12


def operator_norm(M):
    """Largest singular value, ``sqrt(lambda_max(M^T M))``."""
    M = np.asarray(M, dtype=float)
    top = jacobi_eigvals(M.swapaxes(-1, -2) @ M)[..., 0]
    return np.sqrt(np.maximum(top, 0.0))


@dataclass(frozen=True)
class AffineMapReport:
    """Linear lift of the extremal map and its distortion constants.

    ``A`` acts on row vectors, ``x -> x A``.  ``K_outer`` and ``K_inner`` are
    the outer and inner dilatations ``L^n / |det A|`` and ``|det A| / l^n``.
    """

    A: np.ndarray
    lipschitz: float
    lipschitz_inverse: float
    K_inner: float
    K_outer: float
    K: float


def _solve(a, b):
    try:
        return np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularBasis("basis matrix is singular") from exc


def extremal_affine(source, target) -> AffineMapReport:
    """Affine map taking the marked lattice of ``source`` onto that of ``target``.

    With rows as generators, ``v g_src`` must go to ``v g_tgt`` for every
    integer row vector ``v``, so the lift is ``A = g_src^{-1} g_tgt``.
    """
    gs = np.asarray(source, dtype=float)
    gt = np.asarray(target, dtype=float)
    if gs.shape != gt.shape:
        raise DimensionMismatch(f"bases of shapes {gs.shape} and {gt.shape}")
    A = _solve(gs, gt)
    B = _solve(gt, gs)
    n = A.shape[0]
    lip = float(operator_norm(A))
    lip_inv = float(operator_norm(B))
    jac = abs(float(np.linalg.det(A)))
    k_outer = lip**n / jac
    k_inner = jac * lip_inv**n
    return AffineMapReport(A, lip, lip_inv, k_inner, k_outer, max(k_inner, k_outer))


def _window(r, epsilon):
    lo = max(0.0, 1.0 / r - r / 2.0 + epsilon * r)
    hi = min(1.0 / r, r / 2.0 + epsilon * r)
    return lo, hi


@dataclass(frozen=True)
class PiecewiseLinearTorusMap:
    """Map from the unit square onto ``[0, r] x [0, 1/r]``.

    Linear with slope ``r`` in ``x``; in ``y`` it is linear below the
    breakpoint ``1/2 - epsilon`` and linear, with a different slope, above
    it.  Every member has Lipschitz constant ``r``.  ``epsilon = 0``,
    ``delta = 1/(2r)`` gives the affine map ``(x, y) -> (r x, y / r)``, as
    does any ``delta = (1/2 + epsilon) / r``.
    """

    r: float
    epsilon: float
    delta: float

    def __post_init__(self):
        r, eps, delta = float(self.r), float(self.epsilon), float(self.delta)
        if not r > 1.0:
            raise ParameterOutOfRange(f"need r > 1, got r={r!r}")
        if not -0.5 < eps < 0.5:
            raise ParameterOutOfRange(f"need -1/2 < epsilon < 1/2, got epsilon={eps!r}")
        checks = [
            (delta > 0.0, "delta > 0", 0.0),
            (delta > 1.0 / r - r / 2.0 + eps * r, "delta > 1/r - r/2 + epsilon*r", 1.0 / r - r / 2.0 + eps * r),
            (delta < 1.0 / r, "delta < 1/r", 1.0 / r),
            (delta < r / 2.0 + eps * r, "delta < r/2 + epsilon*r", r / 2.0 + eps * r),
        ]
        for ok, text, bound in checks:
            if not ok:
                raise ParameterOutOfRange(f"need {text}: delta={delta!r}, bound={bound!r}")

    @property
    def breakpoint(self):
        return 0.5 - self.epsilon

    @property
    def bottom_slope(self):
        return (1.0 / self.r - self.delta) / (0.5 - self.epsilon)

    @property
    def top_slope(self):
        return self.delta / (0.5 + self.epsilon)

    @property
    def D_bottom(self):
        return np.diag([self.r, self.bottom_slope])

    @property
    def D_top(self):
        return np.diag([self.r, self.top_slope])

    @property
    def blocks(self):
        return [self.D_bottom, self.D_top]

    @property
    def lipschitz(self):
        return float(max(operator_norm(D) for D in self.blocks))

    @property
    def inverse_lipschitz(self):
        return float(max(operator_norm(np.linalg.inv(D)) for D in self.blocks))

    @property
    def is_affine(self):
        """True on the line ``delta = (1/2 + epsilon) / r``, where both slopes are ``1/r``."""
        return abs(self.bottom_slope - self.top_slope) <= AFFINE_RTOL / self.r

    def __call__(self, p):
        return evaluate_plmap(self, p)

    def lift(self, p):
        """Periodic extension to the plane: ``F(x+i, y+j) = F(x, y) + (i r, j / r)``."""
        p = np.asarray(p, dtype=float)
        cell = np.floor(p)
        local = evaluate_plmap(self, p - cell)
        return local + cell * np.array([self.r, 1.0 / self.r])


def nonunique_family_member(r, epsilon, delta) -> PiecewiseLinearTorusMap:
    return PiecewiseLinearTorusMap(r, epsilon, delta)


def family_window(r, epsilon):
    """Open interval of admissible ``delta`` for given ``r`` and ``epsilon``."""
    return _window(float(r), float(epsilon))


def evaluate_plmap(F: PiecewiseLinearTorusMap, p):
    """Evaluate ``F`` at points of the closed unit square (shape ``(..., 2)``)."""
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 2:
        raise DimensionMismatch(f"points must have 2 coordinates, got shape {p.shape}")
    if np.any((p < 0.0) | (p > 1.0)) or not np.all(np.isfinite(p)):
        raise OutOfDomain("points must lie in the unit square [0, 1]^2")
    x, y = p[..., 0], p[..., 1]
    low = y <= F.breakpoint
    y_low = F.bottom_slope * y
    y_high = (1.0 / F.r - F.delta) + F.top_slope * (y - F.breakpoint)
    return np.stack([F.r * x, np.where(low, y_low, y_high)], axis=-1)


@dataclass(frozen=True)
class ProductExtension:
    """``F`` on the first two circle factors, identity on the other ``n - 2``."""

    F: PiecewiseLinearTorusMap
    n: int

    @property
    def blocks(self):
        eye = np.eye(self.n - 2)
        out = []
        for D in self.F.blocks:
            M = np.zeros((self.n, self.n))
            M[:2, :2] = D
            M[2:, 2:] = eye
            out.append(M)
        return out

    @property
    def lipschitz(self):
        return float(max(operator_norm(M) for M in self.blocks))

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        if p.shape[-1] != self.n:
            raise DimensionMismatch(f"points must have {self.n} coordinates")
        if np.any((p < 0.0) | (p > 1.0)):
            raise OutOfDomain(f"points must lie in [0, 1]^{self.n}")
        return np.concatenate([evaluate_plmap(self.F, p[..., :2]), p[..., 2:]], axis=-1)


def product_extend(F: PiecewiseLinearTorusMap, n) -> ProductExtension:
    if int(n) != n or n < 3:
        raise ParameterOutOfRange(f"product extension needs an integer n >= 3, got {n!r}")
    return ProductExtension(F, int(n))


__all__ = [
    "AffineMapReport",
    "PiecewiseLinearTorusMap",
    "ProductExtension",
    "evaluate_plmap",
    "extremal_affine",
    "family_window",
    "nonunique_family_member",
    "operator_norm",
    "product_extend",
]
