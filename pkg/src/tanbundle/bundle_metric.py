"""Points and tangent vectors of T(M), the metric g_a and its almost complex structure.

A tangent vector at ``(x, y)`` is stored in the adapted frame: ``h`` holds the
components along ``delta_i = d/dx^i - Gamma^k_ij y^j d/dy^k`` and ``v`` the
components along ``d/dy^i``.  Coordinate components follow from
``dx = h`` and ``dy = v - Gamma(h, y)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .base_geometry import (
    ChartedManifold,
    _check_domain,
    _christoffel,
    _christoffel_margin,
    metric_at,
    nabla_riemann_at,
    orthonormal_frame,
    riemann_at,
)
from .errors import DegenerateInputError, UsageError
from .weights import WeightFunction, eval_weight

HORIZONTAL = "H"
VERTICAL = "V"


@dataclass(frozen=True, eq=False)
class BundlePoint:
    man: ChartedManifold
    x: np.ndarray
    y: np.ndarray
    g: np.ndarray
    gamma: np.ndarray
    t: float
    r: float
    numeric: bool = False

    @property
    def dim(self) -> int:
        return self.man.dim

    @property
    def u_flat(self) -> np.ndarray:
        """g(., u) as a covector."""
        return self.g @ self.y

    @property
    def shift(self) -> np.ndarray:
        """Matrix ``M[k, i] = Gamma^k_ij y^j``: vertical part of d/dx^i."""
        return np.einsum("kij,j->ki", self.gamma, self.y)

    @cached_property
    def riem(self) -> np.ndarray:
        """Base curvature components at x (see base_geometry.riemann_at)."""
        return riemann_at(self.man, self.x, self.numeric).components

    @cached_property
    def nabla_riem(self) -> np.ndarray:
        return nabla_riemann_at(self.man, self.x, self.numeric).components

    def inner(self, X, Y) -> float:
        return float(X @ self.g @ Y)

    def with_u(self, X) -> float:
        return float(self.u_flat @ X)


def make_point(man: ChartedManifold, x, y, numeric: bool = False) -> BundlePoint:
    x = _check_domain(man, x, _christoffel_margin(man, numeric))
    y = np.asarray(y, dtype=float)
    if y.shape != (man.dim,):
        raise ValueError(f"fiber vector must have dimension {man.dim}")
    g = metric_at(man, x)
    t = 0.5 * float(y @ g @ y)
    return BundlePoint(man, x, y, g, _christoffel(man, x, numeric), t, math.sqrt(1.0 + 2.0 * t), numeric)


@dataclass(frozen=True, eq=False)
class TMVector:
    point: BundlePoint
    h: np.ndarray
    v: np.ndarray

    @classmethod
    def from_coords(cls, point: BundlePoint, dx, dy) -> "TMVector":
        dx = np.asarray(dx, dtype=float)
        dy = np.asarray(dy, dtype=float)
        return cls(point, dx.copy(), dy + point.shift @ dx)

    @classmethod
    def from_coord_vector(cls, point: BundlePoint, z) -> "TMVector":
        m = point.dim
        return cls.from_coords(point, z[:m], z[m:])

    def coords(self) -> tuple:
        return self.h.copy(), self.v - self.point.shift @ self.h

    def coord_vector(self) -> np.ndarray:
        dx, dy = self.coords()
        return np.concatenate([dx, dy])

    def adapted(self) -> np.ndarray:
        return np.concatenate([self.h, self.v])

    def _same(self, other):
        if other.point is not self.point:
            raise UsageError("tangent vectors are anchored at different points")

    def __add__(self, other):
        self._same(other)
        return TMVector(self.point, self.h + other.h, self.v + other.v)

    def __sub__(self, other):
        self._same(other)
        return TMVector(self.point, self.h - other.h, self.v - other.v)

    def __neg__(self):
        return TMVector(self.point, -self.h, -self.v)

    def __mul__(self, s):
        return TMVector(self.point, s * self.h, s * self.v)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return TMVector(self.point, self.h / s, self.v / s)


def zero(point: BundlePoint) -> TMVector:
    m = point.dim
    return TMVector(point, np.zeros(m), np.zeros(m))


def lift(point: BundlePoint, X, kind: str) -> TMVector:
    X = np.asarray(X, dtype=float)
    kind = _kind(kind)
    if kind == HORIZONTAL:
        return TMVector(point, X.copy(), np.zeros_like(X))
    return TMVector(point, np.zeros_like(X), X.copy())


def hlift(point, X) -> TMVector:
    return lift(point, X, HORIZONTAL)


def vlift(point, X) -> TMVector:
    return lift(point, X, VERTICAL)


def _kind(kind: str) -> str:
    k = kind.strip().upper()[:1]
    if k not in (HORIZONTAL, VERTICAL):
        raise ValueError(f"lift kind must be horizontal or vertical, got {kind!r}")
    return k


# -------------------------------------------------------------- metric g_a

def vertical_block(point: BundlePoint, a: float) -> np.ndarray:
    uf = point.u_flat
    return a * (point.g + np.outer(uf, uf))


def adapted_metric(point: BundlePoint, w: WeightFunction) -> np.ndarray:
    """g_a in the adapted frame (delta_i, d/dy^i)."""
    a = eval_weight(w, point.t)[0]
    m = point.dim
    out = np.zeros((2 * m, 2 * m))
    out[:m, :m] = point.g
    out[m:, m:] = vertical_block(point, a)
    return out


def g_a_eval(point: BundlePoint, w: WeightFunction, U: TMVector, V: TMVector) -> float:
    if U.point is not point or V.point is not point:
        raise UsageError("vectors must be anchored at the evaluation point")
    a = eval_weight(w, point.t)[0]
    hor = point.inner(U.h, V.h)
    ver = a * (point.inner(U.v, V.v) + point.with_u(U.v) * point.with_u(V.v))
    return hor + ver


def basis_change(point: BundlePoint) -> np.ndarray:
    """Matrix taking coordinate components to adapted components."""
    m = point.dim
    B = np.eye(2 * m)
    B[m:, :m] = point.shift
    return B


def induced_coordinate_metric(point: BundlePoint, w: WeightFunction) -> np.ndarray:
    a = eval_weight(w, point.t)[0]
    return _kernels.induced_metric(point.g, point.gamma, point.y, a)


# ------------------------------------------------- almost complex structure

def adapted_j(point: BundlePoint, w: WeightFunction) -> np.ndarray:
    """J_a acting on stacked adapted components (h, v)."""
    a = eval_weight(w, point.t)[0]
    m = point.dim
    r = point.r
    sa = math.sqrt(a)
    yu = np.outer(point.y, point.u_flat)
    J = np.zeros((2 * m, 2 * m))
    J[:m, m:] = -sa * (np.eye(m) + yu / (1.0 + r))
    J[m:, :m] = (np.eye(m) - yu / (r * (1.0 + r))) / sa
    return J


def apply_J(point: BundlePoint, w: WeightFunction, U: TMVector) -> TMVector:
    a = eval_weight(w, point.t)[0]
    r = point.r
    sa = math.sqrt(a)
    y = point.y
    h = -sa * (U.v + point.with_u(U.v) / (1.0 + r) * y)
    v = (U.h - point.with_u(U.h) / (r * (1.0 + r)) * y) / sa
    return TMVector(point, h, v)


def coordinate_j(point: BundlePoint, w: WeightFunction) -> np.ndarray:
    B = basis_change(point)
    Binv = B.copy()
    Binv[point.dim:, :point.dim] *= -1.0
    return Binv @ adapted_j(point, w) @ B


def kaehler_form(point: BundlePoint, w: WeightFunction, U: TMVector, V: TMVector) -> float:
    return g_a_eval(point, w, U, apply_J(point, w, V))


def coordinate_omega(point: BundlePoint, w: WeightFunction) -> np.ndarray:
    """Omega(d_A, d_B) in coordinates (x, y)."""
    B = basis_change(point)
    return B.T @ adapted_metric(point, w) @ adapted_j(point, w) @ B


# ----------------------------------------------------------------- Lee form

def _lee_half(a, da, r):
    return da / (2.0 * a) - 1.0 / (1.0 + r)


def _lee_full(a, da, r):
    return da / a - 1.0 / (1.0 + r)


def _lee_cg_literal(a, da, r):
    return -(1.0 / r**2 + 1.0 / (1.0 + r))


# Candidate coefficients lambda(t) with omega(X^V) = lambda g(X, u):
#   half        a'/(2a) - 1/(1+r)      (agrees with the finite-difference dOmega)
#   full        a'/a - 1/(1+r)         (general formula in the same shape)
#   cg_literal  -(1/r^2 + 1/(1+r))     (Cheeger-Gromoll special case, a-independent)
LEE_COEFFICIENTS = {
    "half": _lee_half,
    "full": _lee_full,
    "cg_literal": _lee_cg_literal,
}


def lee_coefficient(point: BundlePoint, w: WeightFunction, coefficient: str = "half") -> float:
    a, da, _ = eval_weight(w, point.t)
    return LEE_COEFFICIENTS[coefficient](a, da, point.r)


def lee_form(point: BundlePoint, w: WeightFunction, U: TMVector, coefficient: str = "half") -> float:
    """omega(U); zero on horizontal vectors."""
    return lee_coefficient(point, w, coefficient) * point.with_u(U.v)


def coordinate_lee(point: BundlePoint, w: WeightFunction, coefficient: str = "half") -> np.ndarray:
    lam = lee_coefficient(point, w, coefficient)
    uf = point.u_flat
    return lam * np.concatenate([point.shift.T @ uf, uf])


# ----------------------------------------------------------- adapted frame

def base_frame(point: BundlePoint) -> np.ndarray:
    """g-orthonormal frame of T_xM with e_1 = u/|u|; columns are the vectors."""
    if not point.t > 0:
        raise DegenerateInputError("the adapted frame needs a nonzero fiber vector")
    return orthonormal_frame(point.g, point.y)


def adapted_frame(point: BundlePoint, w: WeightFunction) -> list:
    """E_1..E_m = e_i^H, E_{m+1} = e_1^V/(r sqrt a), E_{m+k} = e_k^V/sqrt a."""
    e = base_frame(point)
    a = eval_weight(w, point.t)[0]
    m = point.dim
    sa = math.sqrt(a)
    frame = [hlift(point, e[:, i]) for i in range(m)]
    frame.append(vlift(point, e[:, 0] / (point.r * sa)))
    frame.extend(vlift(point, e[:, k] / sa) for k in range(1, m))
    return frame
