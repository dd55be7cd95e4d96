"""Points of the Teichmüller space of unit-volume flat n-tori.

A point is represented two ways:

* a :class:`MarkedBasis`, a determinant-one matrix ``g`` whose *rows* are the
  ordered generators of the lattice, so lattice vectors are ``v @ g`` for
  integer row vectors ``v``;
* an :class:`SpdForm`, the Gram matrix ``X = g g^T``, which is the flat
  metric pulled back to the square torus.

``SL(n, R)`` acts on forms by congruence, ``g . X = g X g^T``, and the length
of the closed geodesic in the homotopy class of an integer vector ``m`` is
``sqrt(m X m^T)``.
"""
from dataclasses import dataclass
from functools import reduce
from math import gcd

import numpy as np

from .errors import DimensionMismatch, DomainError, NotUnimodular
from .numkernel import as_square, check_symmetric, cholesky, symmetrize, transpose, unimodular

DET_TOL = 1e-9
# constructors rescale inputs whose determinant is this close to one
DET_RENORMALIZE_TOL = 1e-6


def _renormalized(M, what):
    det = float(np.linalg.det(M))
    if abs(det - 1.0) > DET_RENORMALIZE_TOL:
        raise NotUnimodular(f"{what} must have determinant 1, got {det:.12g}")
    if det != 1.0:
        M = M * det ** (-1.0 / M.shape[-1])
    return M


@dataclass(frozen=True, eq=False)
class MarkedBasis:
    """Marked lattice: determinant-one matrix whose rows generate the lattice."""

    g: np.ndarray

    def __post_init__(self):
        g = as_square(self.g, "basis")
        if g.ndim != 2:
            raise DimensionMismatch("a marked basis is a single matrix")
        g = _renormalized(g.copy(), "marked basis")
        g.setflags(write=False)
        object.__setattr__(self, "g", g)

    @property
    def n(self):
        return self.g.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.g if dtype is None else self.g.astype(dtype)


@dataclass(frozen=True, eq=False)
class SpdForm:
    """Unimodular symmetric positive-definite form ``X = g g^T``."""

    X: np.ndarray

    def __post_init__(self):
        X = check_symmetric(self.X, "form")
        if X.ndim != 2:
            raise DimensionMismatch("a form is a single matrix")
        cholesky(X)
        X = _renormalized(X, "form")
        X.setflags(write=False)
        object.__setattr__(self, "X", X)

    @property
    def n(self):
        return self.X.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.X if dtype is None else self.X.astype(dtype)

    def __repr__(self):
        return f"SpdForm({self.X.tolist()!r})"


@dataclass(frozen=True)
class HomotopyClass:
    """Homotopy class of closed curves on the torus, as a nonzero integer vector.

    The vector is kept as given; :meth:`primitive` divides out the gcd.
    """

    m: tuple

    def __post_init__(self):
        entries = tuple(int(x) for x in self.m)
        if any(int(x) != x for x in self.m):
            raise DomainError(f"homotopy class needs integer entries, got {self.m!r}")
        if not any(entries):
            raise DomainError("homotopy class must be nonzero")
        object.__setattr__(self, "m", entries)

    @property
    def n(self):
        return len(self.m)

    def primitive(self):
        d = reduce(gcd, (abs(x) for x in self.m))
        return HomotopyClass(tuple(x // d for x in self.m))

    def __array__(self, dtype=None, copy=None):
        return np.array(self.m, dtype=float if dtype is None else dtype)


def normalize_volume(M) -> MarkedBasis:
    """Scale a positively oriented basis to unit covolume.

    >>> normalize_volume(np.diag([2.0, 2.0])).g
    array([[1., 0.],
           [0., 1.]])
    """
    M = as_square(M, "basis")
    return MarkedBasis(unimodular(M))


def gram_of(basis: MarkedBasis) -> SpdForm:
    g = np.asarray(basis, dtype=float)
    return SpdForm(symmetrize(g @ g.T))


def act(g, X):
    """Congruence action ``g X g^T`` on arrays (broadcasts over stacks)."""
    g = np.asarray(g, dtype=float)
    X = np.asarray(X, dtype=float)
    if g.shape[-1] != X.shape[-1]:
        raise DimensionMismatch(f"cannot act by {g.shape[-1]}x{g.shape[-1]} on {X.shape[-1]}x{X.shape[-1]}")
    return symmetrize(g @ X @ transpose(g))


def check_special(g, name="g"):
    g = as_square(g, name)
    det = np.linalg.det(g)
    bad = np.abs(det - 1.0) > DET_TOL
    if np.any(bad):
        raise NotUnimodular(f"{name} must have determinant 1, got {float(np.ravel(det)[np.argmax(np.ravel(bad))]):.12g}")
    return g


def group_act(g, X) -> SpdForm:
    """Act on a form by ``g . X = g X g^T`` (``det g = 1``)."""
    g = check_special(g)
    return SpdForm(act(g, np.asarray(X, dtype=float)))


def class_length(X, m):
    """Length ``sqrt(m X m^T)`` of the shortest closed geodesic in class ``m``.

    ``m`` is a :class:`HomotopyClass`, or an array of row vectors of shape
    ``(..., n)`` in which case an array of lengths is returned.
    """
    X = np.asarray(X, dtype=float)
    m = np.asarray(m, dtype=float)
    if m.shape[-1] != X.shape[-1]:
        raise DimensionMismatch(f"class of length {m.shape[-1]} on a {X.shape[-1]}-torus")
    q = np.einsum("...i,...ij,...j->...", m, X, m)
    out = np.sqrt(np.maximum(q, 0.0))
    return float(out) if out.ndim == 0 else out

