"""Closed-form connection, curvature, sectional table, Nijenhuis blocks and scalar curvature of (T(M), g_a).

Inputs X, Y, Z are chart components of tangent vectors of M at the base
point; they are read as chart-constant vector fields wherever a derivative
of them is needed (so nabla_X Y = Gamma(X, Y)).  The curvature convention is
the one in ``base_geometry``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .base_geometry import curvature_operator, orthonormal_frame
from .bundle_metric import (
    BundlePoint,
    TMVector,
    adapted_frame,
    base_frame,
    g_a_eval,
    hlift,
    vlift,
    zero,
)
from .errors import DegenerateInputError, UnsupportedOperationError
from .weights import WeightFunction, dL_of, eval_weight, f_coeffs

CONNECTION_CASES = ("HH", "HV", "VH", "VV")
CURVATURE_CASES = ("HHH", "HHV", "HVH", "HVV", "VVH", "VVV")


def _R(point, X, Y, Z):
    return curvature_operator(point.riem, X, Y, Z)


def _nR(point, A, X, Y, Z):
    """(nabla_A R)(X, Y) Z."""
    return np.einsum("aijkl,a,i,j,k->l", point.nabla_riem, A, X, Y, Z)


def _nabla_base(point, X, Y):
    return np.einsum("kij,i,j->k", point.gamma, X, Y)


def _arr(X):
    return np.asarray(X, dtype=float)


# -------------------------------------------------------------- connection

def nabla_tilde(point: BundlePoint, w: WeightFunction, case: str, X, Y) -> TMVector:
    """Levi-Civita connection of g_a on lifts: ``case`` names the kinds of (X, Y)."""
    X, Y = _arr(X), _arr(Y)
    case = case.upper()
    a, da, _ = eval_weight(w, point.t)
    u = point.y
    if case == "HH":
        return hlift(point, _nabla_base(point, X, Y)) - 0.5 * vlift(point, _R(point, X, Y, u))
    if case == "HV":
        return vlift(point, _nabla_base(point, X, Y)) + 0.5 * a * hlift(point, _R(point, u, Y, X))
    if case == "VH":
        return 0.5 * a * hlift(point, _R(point, u, X, Y))
    if case == "VV":
        L = da / (2.0 * a)
        r2 = point.r**2
        gxu = point.with_u(X)
        gyu = point.with_u(Y)
        out = L * (gxu * Y + gyu * X)
        out = out + ((1.0 - L) / r2 * point.inner(X, Y) - L / r2 * gxu * gyu) * u
        return vlift(point, out)
    raise ValueError(f"connection case must be one of {CONNECTION_CASES}, got {case!r}")


# --------------------------------------------------------------- curvature

def curvature_tilde(point: BundlePoint, w: WeightFunction, case: str, X, Y, Z) -> TMVector:
    """R~(X^., Y^.) Z^. for the lift kinds named by ``case`` (e.g. "HVH")."""
    X, Y, Z = _arr(X), _arr(Y), _arr(Z)
    case = case.upper()
    a, da, _ = eval_weight(w, point.t)
    L = da / (2.0 * a)
    r2 = point.r**2
    u = point.y
    R = lambda A, B, C: _R(point, A, B, C)  # noqa: E731
    inner = point.inner
    gu = point.with_u

    if case == "HHH":
        hor = R(X, Y, Z) + 0.25 * a * (
            R(u, R(X, Z, u), Y) - R(u, R(Y, Z, u), X) + 2.0 * R(u, R(X, Y, u), Z)
        )
        ver = 0.5 * _nR(point, Z, X, Y, u)
        return TMVector(point, hor, ver)
    if case == "HHV":
        RXYu = R(X, Y, u)
        ver = (
            R(X, Y, Z)
            + 0.25 * a * (R(Y, R(u, Z, X), u) - R(X, R(u, Z, Y), u))
            + L * gu(Z) * RXYu
            + (1.0 - L) / r2 * inner(RXYu, Z) * u
        )
        hor = 0.5 * a * (_nR(point, X, u, Z, Y) - _nR(point, Y, u, Z, X))
        return TMVector(point, hor, ver)
    if case == "HVH":
        RXZu = R(X, Z, u)
        hor = 0.5 * a * _nR(point, X, u, Y, Z)
        ver = 0.5 * (
            R(X, Z, Y)
            - 0.5 * a * R(X, R(u, Y, Z), u)
            + L * gu(Y) * RXZu
            + (1.0 - L) / r2 * inner(RXZu, Y) * u
        )
        return TMVector(point, hor, ver)
    if case == "HVV":
        hor = (
            -0.5 * a * R(Y, Z, X)
            - 0.25 * a * a * R(u, Y, R(u, Z, X))
            + 0.25 * da * (gu(Z) * R(u, Y, X) - gu(Y) * R(u, Z, X))
        )
        return hlift(point, hor)
    if case == "VVH":
        hor = (
            a * R(X, Y, Z)
            + 0.5 * da * (gu(X) * R(u, Y, Z) - gu(Y) * R(u, X, Z))
            + 0.25 * a * a * (R(u, X, R(u, Y, Z)) - R(u, Y, R(u, X, Z)))
        )
        return hlift(point, hor)
    if case == "VVV":
        f1, f2, f3 = f_coeffs(w, point.t)
        ver = (
            f1 * gu(Z) * (gu(X) * Y - gu(Y) * X)
            + f2 * (inner(X, Z) * Y - inner(Y, Z) * X)
            + f3 * (inner(X, Z) * gu(Y) - inner(Y, Z) * gu(X)) * u
        )
        return vlift(point, ver)
    raise ValueError(f"curvature case must be one of {CURVATURE_CASES}, got {case!r}")


def curvature_on(point: BundlePoint, w: WeightFunction, U: TMVector, V: TMVector, W: TMVector) -> TMVector:
    """R~(U, V) W for arbitrary tangent vectors, expanded over lift kinds."""
    parts = {"H": lambda T: T.h, "V": lambda T: T.v}
    out = zero(point)
    for ku in "HV":
        for kv in "HV":
            for kw in "HV":
                A, B, C = parts[ku](U), parts[kv](V), parts[kw](W)
                if not (A.any() and B.any() and C.any()):
                    continue
                if ku + kv == "VH":
                    out = out - curvature_tilde(point, w, "HV" + kw, B, A, C)
                else:
                    out = out + curvature_tilde(point, w, ku + kv + kw, A, B, C)
    return out


# ----------------------------------------------------------- sectional data

def area_sq(point: BundlePoint, w: WeightFunction, U: TMVector, V: TMVector) -> float:
    return g_a_eval(point, w, U, U) * g_a_eval(point, w, V, V) - g_a_eval(point, w, U, V) ** 2


def sectional_from_curvature(point: BundlePoint, w: WeightFunction, U: TMVector, V: TMVector) -> float:
    q = area_sq(point, w, U, V)
    if q <= 1e-14 * g_a_eval(point, w, U, U) * g_a_eval(point, w, V, V):
        raise DegenerateInputError("degenerate plane")
    return g_a_eval(point, w, curvature_on(point, w, U, V, V), U) / q


@dataclass
class SectionalTable:
    """K~(E_A, E_B) for A < B over the adapted frame (1-based labels)."""

    m: int
    entries: list = field(default_factory=list)  # (pair_class, A, B, value)

    def value(self, A: int, B: int) -> float:
        A, B = min(A, B), max(A, B)
        for _, a, b, val in self.entries:
            if (a, b) == (A, B):
                return val
        raise KeyError((A, B))

    def by_class(self, pair_class: str) -> list:
        return [val for cls, _, _, val in self.entries if cls == pair_class]

    def values(self) -> np.ndarray:
        return np.array([e[3] for e in self.entries])


def pair_class(m: int, A: int, B: int) -> str:
    A, B = min(A, B), max(A, B)
    if B <= m:
        return "HH"
    if A <= m:
        return "H-V1" if B == m + 1 else "H-Vk"
    return "V1-Vk" if A == m + 1 else "Vk-Vl"


def sectional_table(point: BundlePoint, w: WeightFunction) -> SectionalTable:
    e = base_frame(point)
    a = eval_weight(w, point.t)[0]
    _, f2, f3 = f_coeffs(w, point.t)
    m = point.dim
    u = point.y
    g = point.g
    norm2 = lambda V: float(V @ g @ V)  # noqa: E731
    table = SectionalTable(m)
    for A in range(1, 2 * m + 1):
        for B in range(A + 1, 2 * m + 1):
            cls = pair_class(m, A, B)
            if cls == "HH":
                ei, ej = e[:, A - 1], e[:, B - 1]
                K = float(_R(point, ei, ej, ej) @ g @ ei)
                val = K - 0.75 * a * norm2(_R(point, ei, ej, u))
            elif cls == "H-V1":
                val = 0.0
            elif cls == "H-Vk":
                ei, ek = e[:, A - 1], e[:, B - m - 1]
                val = 0.25 * a * norm2(_R(point, u, ek, ei))
            elif cls == "V1-Vk":
                val = -(f2 + 2.0 * point.t * f3) / a
            else:
                val = -f2 / a
            table.entries.append((cls, A, B, val))
    return table


# ----------------------------------------------------------------- Nijenhuis

def nijenhuis_closed(point: BundlePoint, w: WeightFunction, case: str, X, Y) -> TMVector:
    """Horizontal-horizontal and vertical-vertical blocks of the Nijenhuis tensor of J_a."""
    X, Y = _arr(X), _arr(Y)
    case = case.upper()
    a, da, _ = eval_weight(w, point.t)
    r = point.r
    u = point.y
    gu = point.with_u
    if case == "HH":
        coef = (2.0 * a - (1.0 + r) * da) / (2.0 * a * a * r * (1.0 + r))
        return vlift(point, coef * (gu(X) * Y - gu(Y) * X) + _R(point, X, Y, u))
    if case == "VV":
        ver = (
            -a * _R(point, X, Y, u)
            - a / (1.0 + r) * gu(Y) * _R(point, X, u, u)
            + a / (1.0 + r) * gu(X) * _R(point, Y, u, u)
            - (da / (2.0 * a) - 1.0 / (1.0 + r)) * (gu(Y) * X - gu(X) * Y)
        )
        return vlift(point, ver)
    if case in ("HV", "VH"):
        raise UnsupportedOperationError(
            "no closed form for the mixed Nijenhuis block; use oracle.numeric_nijenhuis"
        )
    raise ValueError(f"Nijenhuis case must be HH or VV, got {case!r}")


# ------------------------------------------------------------------ scalar

def rotation_sum(point: BundlePoint, frame: np.ndarray) -> float:
    """sum_{i<j} |R(e_i, e_j) u|^2 over the columns of ``frame``."""
    m = point.dim
    total = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            v = _R(point, frame[:, i], frame[:, j], point.y)
            total += float(v @ point.g @ v)
    return total


def base_scalar(point: BundlePoint, frame: np.ndarray) -> float:
    m = point.dim
    total = 0.0
    for i in range(m):
        for j in range(m):
            if i != j:
                ei, ej = frame[:, i], frame[:, j]
                total += float(_R(point, ei, ej, ej) @ point.g @ ei)
    return total


def scalar_tilde(point: BundlePoint, w: WeightFunction, frame: np.ndarray | None = None) -> float:
    """Scalar curvature of g_a; ``frame`` is any g-orthonormal frame (columns)."""
    if frame is None:
        frame = orthonormal_frame(point.g, point.y if point.t > 0 else None)
    a = eval_weight(w, point.t)[0]
    _, f2, f3 = f_coeffs(w, point.t)
    m = point.dim
    return (
        base_scalar(point, frame)
        - 0.5 * a * rotation_sum(point, frame)
        + (1.0 - m) / a * (m * f2 + 4.0 * point.t * f3)
    )
