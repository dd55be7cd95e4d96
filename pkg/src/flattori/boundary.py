"""Boundary of the space of flat tori.

Boundary points are projective classes of singular positive-semidefinite
forms, normalized to top eigenvalue one.  Each such form ``Q`` is the
transverse measure of a measured flat foliation: the leaves are parallel to
the kernel ``V0``, and on each eigenspace ``Vi`` of ``Q`` the measure of an arc
is ``sqrt(eigenvalue)`` times its Euclidean length.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, DomainError, EmptySequence, ZeroForm
from .numkernel import as_square, check_symmetric, jacobi_eig, jacobi_eigvals, symmetrize
from .space import HomotopyClass, SpdForm, check_special

# relative to the top eigenvalue
CLUSTER_RTOL = 1e-8
EIG_TOL = 1e-10
BASIS_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class BoundaryForm:
    """Singular positive-semidefinite form with top eigenvalue 1."""

    Q: np.ndarray

    def __post_init__(self):
        Q = check_symmetric(self.Q, "boundary form")
        if Q.ndim != 2:
            raise DimensionMismatch("a boundary form is a single matrix")
        lam = jacobi_eigvals(Q)
        if lam[-1] < -EIG_TOL:
            raise DomainError(f"boundary form has negative eigenvalue {lam[-1]:.3e}")
        if abs(lam[0] - 1.0) > EIG_TOL:
            raise DomainError(f"boundary form must have top eigenvalue 1, got {lam[0]:.12g}")
        if lam[-1] > EIG_TOL:
            raise DomainError("boundary form must be singular (it is an interior point)")
        Q = Q.copy()
        Q.setflags(write=False)
        object.__setattr__(self, "Q", Q)

    @classmethod
    def normalized(cls, M):
        """Projective representative of a nonzero singular PSD matrix."""
        return cls(_scale_top(M)[0])

    @property
    def n(self):
        return self.Q.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.Q if dtype is None else self.Q.astype(dtype)


def _scale_top(M):
    M = check_symmetric(M, "form")
    top = jacobi_eigvals(M)[0]
    if top <= EIG_TOL * max(1.0, float(np.abs(M).max())):
        raise ZeroForm("form has no positive eigenvalue")
    return M / top, float(top)


@dataclass(frozen=True, eq=False)
class MeasuredFlatFoliation:
    """Leaf subspace ``V0`` and weighted transverse blocks.

    ``leaf_basis`` is ``(n, k0)`` with ``k0 >= 1``; ``blocks`` is a tuple of
    ``(basis, weight)`` with bases of shape ``(n, ki)`` and weights strictly
    decreasing from 1.  All columns together form an orthonormal basis.
    """

    leaf_basis: np.ndarray
    blocks: tuple = field(default=())

    def __post_init__(self):
        leaf = np.asarray(self.leaf_basis, dtype=float)
        if leaf.ndim != 2 or leaf.shape[1] < 1:
            raise DomainError("leaf subspace must have dimension at least 1")
        n = leaf.shape[0]
        blocks = tuple((np.asarray(B, dtype=float), float(w)) for B, w in self.blocks)
        if not blocks:
            raise DomainError("a foliation needs at least one transverse block")
        weights = [w for _, w in blocks]
        if any(w <= 0 for w in weights) or any(a <= b for a, b in zip(weights, weights[1:])):
            raise DomainError(f"weights must be positive and strictly decreasing, got {weights}")
        if abs(weights[0] - 1.0) > EIG_TOL:
            raise DomainError(f"largest weight must be 1, got {weights[0]!r}")
        for B, _ in blocks:
            if B.ndim != 2 or B.shape[0] != n or B.shape[1] < 1:
                raise DimensionMismatch("block bases must be (n, k) with k >= 1")
        full = np.hstack([leaf] + [B for B, _ in blocks])
        if full.shape[1] != n or np.linalg.norm(full.T @ full - np.eye(n)) > BASIS_TOL:
            raise DomainError("leaf and block bases must form an orthonormal basis")
        object.__setattr__(self, "leaf_basis", leaf)
        object.__setattr__(self, "blocks", blocks)

    @property
    def n(self):
        return self.leaf_basis.shape[0]

    @property
    def weights(self):
        return [w for _, w in self.blocks]


def foliation_from_form(Q) -> MeasuredFlatFoliation:
    """Split ``Q`` into its kernel and eigenvalue clusters.

    Eigenvalues within ``1e-8 * top`` of each other (chained) share a block
    whose weight is the square root of their mean; eigenvalues at most
    ``1e-8 * top`` form the kernel.  ``Q`` may be a :class:`BoundaryForm` or
    any nonzero singular PSD matrix, which is normalized first.
    """
    M = Q.Q if isinstance(Q, BoundaryForm) else _scale_top(Q)[0]
    lam, V = jacobi_eig(M)
    if lam[-1] < -CLUSTER_RTOL:
        raise DomainError(f"form is not positive-semidefinite (eigenvalue {lam[-1]:.3e})")
    kernel = lam <= CLUSTER_RTOL
    if not kernel.any():
        raise DomainError("form is nonsingular; it is an interior point, not a boundary point")

    groups, cur = [], [0]
    for i in range(1, int(np.argmax(kernel))):
        if lam[i - 1] - lam[i] <= CLUSTER_RTOL:
            cur.append(i)
        else:
            groups.append(cur)
            cur = [i]
    groups.append(cur)
    blocks = [(V[:, g], float(np.sqrt(np.mean(lam[g])))) for g in groups]
    top = blocks[0][1]
    blocks = tuple((B, w / top) for B, w in blocks)
    return MeasuredFlatFoliation(V[:, kernel], blocks)


def form_from_foliation(F: MeasuredFlatFoliation) -> BoundaryForm:
    """``sum w_i^2 P_i`` with ``P_i`` the orthogonal projector onto block ``i``."""
    Q = sum(w * w * (B @ B.T) for B, w in F.blocks)
    return BoundaryForm(symmetrize(Q))


def foliation_measure(F: MeasuredFlatFoliation, m):
    """Transverse measure of the class (or real direction vector) ``m``.

    Equals ``sqrt(m Q m^T)``: the component of ``m`` in block ``i`` is
    measured by ``w_i`` times its length and the leaf component is free.
    """
    m = np.asarray(m.m if isinstance(m, HomotopyClass) else m, dtype=float)
    if m.shape[-1] != F.n:
        raise DimensionMismatch(f"vector of length {m.shape[-1]} for a foliation of R^{F.n}")
    sq = sum(w * w * np.sum((m @ B) ** 2, axis=-1) for B, w in F.blocks)
    out = np.sqrt(sq)
    return float(out) if out.ndim == 0 else out


def boundary_scale(g, Q):
    """``(g Q g^T / c, c)`` where ``c`` is the top eigenvalue of ``g Q g^T``."""
    g = as_square(g, "g")
    check_special(g)
    Q = np.asarray(Q.Q if isinstance(Q, BoundaryForm) else Q, dtype=float)
    if g.shape != Q.shape:
        raise DimensionMismatch(f"g of shape {g.shape} acting on form of shape {Q.shape}")
    return _scale_top(symmetrize(g @ Q @ g.T))


def boundary_act(g, Q) -> BoundaryForm:
    """Projective action ``[Q] -> [g Q g^T]``; kernels move by ``m -> m g^{-1}``."""
    return BoundaryForm(boundary_scale(g, Q)[0])


@dataclass(frozen=True)
class Interior:
    form: SpdForm
    kind: str = "interior"


@dataclass(frozen=True)
class Boundary:
    form: BoundaryForm
    kind: str = "boundary"


@dataclass(frozen=True)
class NoLimit:
    spread: float
    kind: str = "none"


def rescaled(seq):
    """Stack of ``X_i / lambda_max(X_i)``."""
    X = check_symmetric(np.asarray([np.asarray(x, dtype=float) for x in seq]), "sequence")
    return X / jacobi_eigvals(X)[:, 0][:, None, None]


def sequence_limit(seq, window=3, tol=1e-8):
    """Detect the limit of a sequence of forms in the compactified space.

    Terms are rescaled by the reciprocal of their top eigenvalue.  If the
    last ``window`` rescaled terms are pairwise within ``tol`` in Frobenius
    norm the final one is classified: positive-definite beyond ``tol`` gives
    an :class:`Interior` point (scaled back to determinant 1), otherwise
    eigenvalues at most ``tol`` are set to zero and a :class:`Boundary`
    point is returned.  Anything else gives :class:`NoLimit`, carrying the
    largest pairwise distance of the window.
    """
    seq = list(seq)
    if not seq:
        raise EmptySequence("sequence is empty")
    window = int(window)
    if window < 2:
        raise DomainError(f"window must be at least 2, got {window}")
    if len(seq) < window:
        raise DomainError(f"sequence has {len(seq)} terms, fewer than window={window}")
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")

    tail = rescaled(seq[-window:])
    diff = tail[:, None] - tail[None, :]
    spread = float(np.max(np.linalg.norm(diff, axis=(-2, -1))))
    if spread > tol:
        return NoLimit(spread)

    lam, V = jacobi_eig(tail[-1])
    if lam[-1] > tol:
        n = len(lam)
        det = float(np.prod(lam))
        return Interior(SpdForm(tail[-1] * det ** (-1.0 / n)))
    lam = np.where(lam <= tol, 0.0, lam)
    Q = symmetrize((V * lam) @ V.T)
    return Boundary(BoundaryForm.normalized(Q))


__all__ = [
    "Boundary",
    "BoundaryForm",
    "Interior",
    "MeasuredFlatFoliation",
    "NoLimit",
    "boundary_act",
    "boundary_scale",
    "foliation_from_form",
    "foliation_measure",
    "form_from_foliation",
    "rescaled",
    "sequence_limit",
]
