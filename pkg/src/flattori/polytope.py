"""Weight polytopes in the trace-zero hyperplane and their gauges.

The Cartan flat of diagonal unimodular forms has tangent space
``{y in R^n : sum(y) = 0}``.  The Thurston and Teichmüller unit balls there
are (up to a factor 2) the negated duals of the weight sets of the standard
and standard-plus-dual representations of ``SL(n, R)``.

Weights are exact: coordinates are :class:`fractions.Fraction`, and
half-space normals are kept as integer vectors over a common denominator.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

import numpy as np

from .errors import DegenerateInput, DimensionMismatch, DomainError

SUM_TOL = 1e-10
REPRESENTATIONS = ("standard", "dual", "sum")


@dataclass(frozen=True)
class FlatVector:
    """Point of the trace-zero hyperplane; entries may be exact fractions."""

    y: tuple

    def __post_init__(self):
        y = tuple(self.y)
        if len(y) < 2:
            raise DimensionMismatch("flat vectors have at least 2 coordinates")
        total = sum(y)
        if abs(total) > SUM_TOL:
            raise DomainError(f"coordinates must sum to 0, got {float(total):.3e}")
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return len(self.y)

    def __neg__(self):
        return FlatVector(tuple(-v for v in self.y))

    def scaled(self, c):
        return FlatVector(tuple(c * v for v in self.y))

    def __array__(self, dtype=None, copy=None):
        return np.array([float(v) for v in self.y], dtype=dtype or float)


def projected_weights(rep, n):
    """Weights ``e_i - (1/n) sum e_j`` (standard), their negatives (dual), or both (sum)."""
    if rep not in REPRESENTATIONS:
        raise DomainError(f"unknown representation {rep!r}; expected one of {REPRESENTATIONS}")
    n = int(n)
    if n < 2:
        raise DimensionMismatch(f"n must be at least 2, got {n}")
    std = [
        FlatVector(tuple(Fraction(int(i == j)) - Fraction(1, n) for j in range(n)))
        for i in range(n)
    ]
    if rep == "standard":
        return std
    dual = [-w for w in std]
    return dual if rep == "dual" else std + dual


def _project(a):
    mean = sum(a) / len(a)
    return tuple(v - mean for v in a)


@dataclass(frozen=True)
class HPolytope:
    """``{y : sum(y) = 0, <a_k, y> <= b_k}``.

    ``normals`` holds integer vectors and ``denominator`` a common positive
    integer, so the actual normals are ``normals[k] / denominator``.
    """

    normals: tuple
    bounds: tuple
    denominator: int = 1

    def __post_init__(self):
        if len(self.normals) != len(self.bounds) or not self.normals:
            raise DomainError("need one bound per normal and at least one constraint")
        n = len(self.normals[0])
        if any(len(a) != n for a in self.normals):
            raise DimensionMismatch("all normals must have the same length")
        if any(not b > 0 for b in self.bounds):
            raise DomainError("all bounds must be positive (origin in the interior)")

    @property
    def n(self):
        return len(self.normals[0])

    @property
    def A(self):
        """Float normals, shape ``(m, n)``."""
        return np.array(self.normals, dtype=float) / self.denominator

    @property
    def b(self):
        return np.array([float(v) for v in self.bounds])

    def constraints(self):
        """Exact ``(normal, bound)`` pairs with fractional normals."""
        return [
            (tuple(Fraction(v, self.denominator) for v in a), Fraction(b))
            for a, b in zip(self.normals, self.bounds)
        ]

    def canonical(self):
        """Set of normals projected to the hyperplane and scaled to bound 1.

        Two polytopes given by the same half-spaces (up to positive scaling
        and adding multiples of ``(1, ..., 1)``) have equal keys.
        """
        return frozenset(tuple(v / b for v in _project(a)) for a, b in self.constraints())

    def simplified(self):
        """Readable constraints ``(coeffs, 1)`` with as few nonzero coefficients as possible.

        On the hyperplane a normal may be shifted by any multiple of the
        all-ones vector; each normal is shifted so that one of its entries
        becomes zero everywhere it occurs, preferring the shift that leaves
        the fewest nonzeros and then a positive leading coefficient.
        """
        out = []
        for a, b in self.constraints():
            best = None
            for c in sorted(set(a)):
                shifted = tuple((v - c) / b for v in a)
                nz = [v for v in shifted if v != 0]
                key = (len(nz), not (nz and nz[0] > 0))
                if best is None or key < best[0]:
                    best = (key, shifted)
            out.append(best[1])
        return out

    def contains(self, y, tol=1e-12):
        return gauge(self, y) <= 1.0 + tol

    def describe(self):
        """Lines ``sum(y) = 0`` then one inequality per distinct constraint."""
        lines = ["sum(y) = 0"]
        seen = set()
        for coeffs in self.simplified():
            if coeffs in seen:
                continue
            seen.add(coeffs)
            terms = []
            for i, c in enumerate(coeffs):
                if c == 0:
                    continue
                mag = abs(c)
                body = f"y{i + 1}" if mag == 1 else f"{mag}*y{i + 1}"
                sign = "-" if c < 0 else "+"
                terms.append((sign, body))
            text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
            text += "".join(f" {s} {t}" for s, t in terms[1:])
            lines.append(f"{text} <= 1")
        return lines


def negated_dual_polytope(vertices) -> HPolytope:
    """``-D°`` for the polytope ``D`` with the given vertices.

    The dual of ``conv(a_i)`` inside the hyperplane is ``{y : <a_i, y> >= -1}``;
    its negative is ``{y : <a_i, y> <= 1}``, one facet per vertex.
    """
    vertices = [v if isinstance(v, FlatVector) else FlatVector(tuple(v)) for v in vertices]
    if not vertices:
        raise DegenerateInput("no vertices")
    n = vertices[0].n
    if any(v.n != n for v in vertices):
        raise DimensionMismatch("vertices have different lengths")
    if np.linalg.matrix_rank(np.array([np.asarray(v) for v in vertices])) < n - 1:
        raise DegenerateInput("vertices do not span the trace-zero hyperplane")
    exact = all(isinstance(x, (int, Fraction)) for v in vertices for x in v.y)
    if exact:
        fr = [[Fraction(x) for x in v.y] for v in vertices]
        den = lcm(*(x.denominator for row in fr for x in row))
        normals = tuple(tuple(int(x * den) for x in row) for row in fr)
        return HPolytope(normals, (1,) * len(vertices), den)
    normals = tuple(tuple(float(x) for x in v.y) for v in vertices)
    return _FloatPolytope(normals, (1.0,) * len(vertices))


@dataclass(frozen=True)
class _FloatPolytope(HPolytope):
    """Polytope with inexact normals; no rational simplification."""

    def constraints(self):
        return [(tuple(a), b) for a, b in zip(self.normals, self.bounds)]


def gauge(P: HPolytope, y):
    """Minkowski gauge ``max(0, max_k <a_k, y> / b_k)``; accepts stacks of points."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != P.n:
        raise DimensionMismatch(f"point of length {y.shape[-1]} for a polytope in R^{P.n}")
    N = np.array(P.normals, dtype=float)
    vals = (y @ N.T) / (P.denominator * P.b)
    out = np.maximum(vals.max(axis=-1), 0.0)
    return float(out) if out.ndim == 0 else out


def unit_ball(rep, n) -> HPolytope:
    """Negated dual of the projected weights of ``rep``."""
    return negated_dual_polytope(projected_weights(rep, n))


__all__ = [
    "FlatVector",
    "HPolytope",
    "REPRESENTATIONS",
    "gauge",
    "negated_dual_polytope",
    "projected_weights",
    "unit_ball",
]
