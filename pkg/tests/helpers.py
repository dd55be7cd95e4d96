"""Random inputs and independent oracles shared by the tests.

Oracles use numpy/LAPACK routines and plain enumeration so that they share
no code path with the library under test.
"""
import itertools
from functools import reduce
from math import gcd

import numpy as np


def random_traceless(rng, n, scale=1.0, size=None):
    shape = (n, n) if size is None else (size, n, n)
    S = rng.normal(size=shape)
    S = 0.5 * (S + np.swapaxes(S, -1, -2))
    tr = np.trace(S, axis1=-2, axis2=-1)[..., None, None]
    return scale * (S - tr / n * np.eye(n))


def expm_sym(S):
    """Oracle matrix exponential via LAPACK ``eigh``."""
    w, v = np.linalg.eigh(S)
    return (v * np.exp(w)[..., None, :]) @ np.swapaxes(v, -1, -2)


def random_spd(rng, n, scale=0.5, size=None):
    """Unimodular SPD forms ``exp(S)`` with ``S`` traceless."""
    X = expm_sym(random_traceless(rng, n, scale, size))
    return 0.5 * (X + np.swapaxes(X, -1, -2))


def random_sl(rng, n, size=None):
    """Random determinant-one matrices of moderate condition number."""
    if size is not None:
        return np.stack([random_sl(rng, n) for _ in range(size)])
    while True:
        g = np.eye(n) + 0.5 * rng.normal(size=(n, n))
        det = np.linalg.det(g)
        if det > 0.2:
            return g * det ** (-1.0 / n)


def random_psd_singular(rng, n, rank):
    B = rng.normal(size=(n, rank))
    Q = B @ B.T
    return Q / np.linalg.eigvalsh(Q)[-1]


def oracle_d_thurston(Y, X):
    lam = np.linalg.eigvals(X @ np.linalg.inv(Y)).real
    return 0.5 * np.log(lam.max())


def primitive_vectors(n, R):
    for m in itertools.product(range(-R, R + 1), repeat=n):
        if any(m) and reduce(gcd, (abs(v) for v in m)) == 1:
            yield m


def brute_kappa(Y, X, R):
    """Exhaustive maximum of ``log(l_X(m) / l_Y(m))`` over primitive ``m``."""
    M = np.array(list(primitive_vectors(X.shape[0], R)), dtype=float)
    ratio = np.einsum("ki,ij,kj->k", M, X, M) / np.einsum("ki,ij,kj->k", M, Y, M)
    return 0.5 * float(np.log(ratio.max()))


def _odd_sum_vector(rng, n):
    while True:
        a = rng.integers(-3, 4, size=n)
        if a.sum() % 2 == 1:
            return a


class Zigzag:
    """Marking-compatible perturbation ``x -> x A + sum_j h(a_j . u) c_j`` of a linear map.

    ``u = x g_src^{-1}`` are lattice coordinates on the source torus, the
    ``a_j`` are integer vectors with odd coordinate sum and ``h`` is the
    1-periodic zigzag made of ``M`` (even) equal pieces of slope ``+-s``.
    Moving ``u`` by ``(1/M)(1, ..., 1)`` flips the sign of every
    ``h'(a_j . u)``, so the Jacobians at such a pair of points average to
    ``A`` exactly.
    """

    def __init__(self, rng, A, g_src):
        n = A.shape[0]
        self.A = A
        self.ginv = np.linalg.inv(g_src)
        self.M = 2 * int(rng.integers(1, 4))
        terms = int(rng.integers(1, 4))
        self.a = np.array([_odd_sum_vector(rng, n) for _ in range(terms)], dtype=float)
        self.c = rng.normal(scale=0.3, size=(terms, n))
        self.s = rng.uniform(0.1, 1.0)

    def _h(self, t):
        f = (t * self.M) % 2.0
        return self.s / self.M * np.where(f < 1.0, f, 2.0 - f)

    def __call__(self, x):
        u = x @ self.ginv
        return x @ self.A + self._h(u @ self.a.T) @ self.c

    def jacobian(self, u):
        """Jacobians at lattice coordinates ``u`` (shape ``(p, n)``), shape ``(p, n, n)``."""
        phase = np.floor((u @ self.a.T) * self.M).astype(int)
        slope = self.s * np.where(phase % 2 == 0, 1.0, -1.0)
        # J = A + g^{-1} sum_j h'(a_j . u) a_j^T c_j
        return self.A + np.einsum("il,pjl,jk->pik", self.ginv, slope[:, :, None] * self.a[None], self.c)

    def sample_points(self, rng, extra=6):
        u0 = rng.uniform(size=self.A.shape[0])
        return np.vstack([u0, u0 + 1.0 / self.M, rng.uniform(size=(extra, len(u0)))])


def sampled_lipschitz(rng, A, g_src, count, extra=6):
    """Largest sampled singular value for each of ``count`` random perturbations."""
    J = np.stack([z.jacobian(z.sample_points(rng, extra)) for z in (Zigzag(rng, A, g_src) for _ in range(count))])
    return np.linalg.svd(J, compute_uv=False)[..., 0].max(axis=-1)
