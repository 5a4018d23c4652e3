"""Riemannian base manifolds given on a single chart.

Curvature convention: ``R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
nabla_[X,Y] Z`` and ``K(X, Y) = g(R(X, Y)Y, X) / Q(X, Y)``, so the round
sphere has positive sectional curvature.

Space forms are charted conformally, ``g_ij = delta_ij / (1 + c|x|^2/4)^2``.
They carry closed-form Christoffel symbols and curvature; every other metric
goes through the finite-difference path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels, diff
from .errors import DegenerateInputError, DomainError, ModelError


@dataclass(frozen=True)
class TensorValue:
    """Dense components plus per-index variance ("up" or "down")."""

    components: np.ndarray
    variance: tuple
    symmetric: tuple = ()  # index pairs declared symmetric

    @property
    def rank(self) -> int:
        return self.components.ndim

    @property
    def shape(self) -> tuple:
        return self.components.shape

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self.components
        return self.components.astype(dtype)


@dataclass(frozen=True)
class ChartedManifold:
    dim: int
    metric_fn: Callable[[np.ndarray], np.ndarray]
    radius: float = 1.0
    curvature: Optional[float] = None  # set only for space forms
    name: str = "custom"
    christoffel_fn: Optional[Callable] = field(default=None, repr=False)
    riemann_fn: Optional[Callable] = field(default=None, repr=False)
    fd_step: float = diff.FIRST_STEP
    fd_step2: float = diff.SECOND_STEP

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dimension must be positive")

    @property
    def model(self) -> str:
        return "generic" if self.curvature is None else "space_form"

    @property
    def is_space_form(self) -> bool:
        return self.curvature is not None

    def with_steps(self, fd_step=None, fd_step2=None) -> "ChartedManifold":
        from dataclasses import replace

        return replace(
            self,
            fd_step=self.fd_step if fd_step is None else fd_step,
            fd_step2=self.fd_step2 if fd_step2 is None else fd_step2,
        )


# ------------------------------------------------------------------ presets

def space_form(c: float, dim: int = 2) -> ChartedManifold:
    c = float(c)
    radius = 1.0 if c >= 0 else min(1.0, 1.0 / math.sqrt(-c))

    def metric(x):
        phi = 1.0 / (1.0 + 0.25 * c * float(x @ x))
        return phi * phi * np.eye(dim)

    def christoffel(x):
        phi = 1.0 / (1.0 + 0.25 * c * float(x @ x))
        s = -0.5 * c * phi * np.asarray(x, dtype=float)  # gradient of log(phi)
        eye = np.eye(dim)
        return (
            np.einsum("ki,j->kij", eye, s)
            + np.einsum("kj,i->kij", eye, s)
            - np.einsum("ij,k->kij", eye, s)
        )

    def riemann(x):
        g = metric(x)
        eye = np.eye(dim)
        return c * (np.einsum("jk,il->ijkl", g, eye) - np.einsum("ik,jl->ijkl", g, eye))

    if c == 0:
        name = "euclidean"
    elif c > 0:
        name = "sphere"
    else:
        name = "hyperbolic"
    return ChartedManifold(
        dim=dim,
        metric_fn=metric,
        radius=radius,
        curvature=c,
        name=name,
        christoffel_fn=christoffel,
        riemann_fn=riemann,
    )


def euclidean(dim: int = 2) -> ChartedManifold:
    return space_form(0.0, dim)


def sphere(c: float = 1.0, dim: int = 2) -> ChartedManifold:
    if c <= 0:
        raise ValueError("sphere needs c > 0")
    return space_form(c, dim)


def hyperbolic(c: float = -1.0, dim: int = 2) -> ChartedManifold:
    if c >= 0:
        raise ValueError("hyperbolic space needs c < 0")
    return space_form(c, dim)


# --------------------------------------------------------------- evaluation

def _check_domain(man: ChartedManifold, x, margin: float = 0.0) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (man.dim,):
        raise ValueError(f"expected a point of dimension {man.dim}, got shape {x.shape}")
    if not np.linalg.norm(x) + margin < man.radius:
        raise DomainError(
            f"point |x|={np.linalg.norm(x):.6g} with stencil margin {margin:.3g} "
            f"leaves the chart ball of radius {man.radius:.6g}"
        )
    return x


def _metric(man, x):
    g = np.asarray(man.metric_fn(x), dtype=float)
    return 0.5 * (g + g.T)


def metric_at(man: ChartedManifold, x) -> np.ndarray:
    x = _check_domain(man, x)
    raw = np.asarray(man.metric_fn(x), dtype=float)
    if raw.shape != (man.dim, man.dim):
        raise ModelError(f"metric_fn returned shape {raw.shape}")
    if not np.allclose(raw, raw.T, rtol=1e-12, atol=1e-14):
        raise ModelError("metric is not symmetric")
    g = 0.5 * (raw + raw.T)
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        raise ModelError(f"metric is not positive definite at x={x}") from None
    return g


def _christoffel(man, x, numeric=False):
    if man.christoffel_fn is not None and not numeric:
        return np.asarray(man.christoffel_fn(x), dtype=float)
    dg = diff.gradient(lambda z: _metric(man, z), x, man.fd_step)
    return _kernels.christoffel(np.linalg.inv(_metric(man, x)), dg)


def _christoffel_margin(man, numeric):
    if man.christoffel_fn is not None and not numeric:
        return 0.0
    return diff.stencil_reach(man.fd_step)


def _riemann(man, x, numeric=False):
    if man.riemann_fn is not None and not numeric:
        return np.asarray(man.riemann_fn(x), dtype=float)
    dgamma = diff.gradient(lambda z: _christoffel(man, z, numeric), x, man.fd_step2)
    return _kernels.riemann(_christoffel(man, x, numeric), dgamma)


def _riemann_margin(man, numeric):
    if man.riemann_fn is not None and not numeric:
        return 0.0
    return diff.stencil_reach(man.fd_step2) + _christoffel_margin(man, numeric)


def _nabla_riemann(man, x, numeric=False):
    if man.is_space_form and not numeric:
        n = man.dim
        return np.zeros((n, n, n, n, n))
    driem = diff.gradient(lambda z: _riemann(man, z, numeric), x, man.fd_step2)
    return _kernels.nabla_riemann(_riemann(man, x, numeric), driem, _christoffel(man, x, numeric))


def christoffel_at(man: ChartedManifold, x, numeric: bool = False) -> TensorValue:
    """Christoffel symbols ``gamma[k, i, j]``; closed form for presets unless ``numeric``."""
    x = _check_domain(man, x, _christoffel_margin(man, numeric))
    return TensorValue(_christoffel(man, x, numeric), ("up", "down", "down"), ((1, 2),))


def riemann_at(man: ChartedManifold, x, numeric: bool = False, lowered: bool = False) -> TensorValue:
    """Curvature ``riem[i, j, k, l]`` = component ``l`` of ``R(d_i, d_j) d_k``.

    With ``lowered=True`` the last index is lowered with g, giving
    ``g(R(d_i, d_j) d_k, d_l)``.
    """
    x = _check_domain(man, x, _riemann_margin(man, numeric))
    riem = _riemann(man, x, numeric)
    if lowered:
        return TensorValue(riem @ _metric(man, x), ("down",) * 4)
    return TensorValue(riem, ("down", "down", "down", "up"))


def nabla_riemann_at(man: ChartedManifold, x, numeric: bool = False) -> TensorValue:
    margin = 0.0
    if numeric or not man.is_space_form:
        margin = diff.stencil_reach(man.fd_step2) + _riemann_margin(man, numeric)
    x = _check_domain(man, x, margin)
    return TensorValue(_nabla_riemann(man, x, numeric), ("down",) * 4 + ("up",))


def curvature_operator(riem, X, Y, Z) -> np.ndarray:
    """``R(X, Y)Z`` from the component array."""
    return np.einsum("ijkl,i,j,k->l", riem, X, Y, Z)


def sectional_at(man: ChartedManifold, x, X, Y, numeric: bool = False) -> float:
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    g = metric_at(man, x)
    area = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
    if area <= 1e-12 * (X @ g @ X) * (Y @ g @ Y):
        raise DegenerateInputError("X and Y span a degenerate plane")
    riem = riemann_at(man, x, numeric).components
    return float(curvature_operator(riem, X, Y, Y) @ g @ X / area)


def scalar_at(man: ChartedManifold, x, numeric: bool = False) -> float:
    riem = riemann_at(man, x, numeric).components
    return float(_kernels.scalar(riem, np.linalg.inv(metric_at(man, x))))


def orthonormal_frame(g: np.ndarray, first=None) -> np.ndarray:
    """g-orthonormal basis as the columns of an m x m matrix.

    With ``first`` given, column 0 is ``first / |first|`` and the standard basis
    vector most parallel to it is dropped before Gram-Schmidt runs over the
    rest in index order (lowest index wins ties).
    """
    m = g.shape[0]
    eye = np.eye(m)
    cols = []
    candidates = list(range(m))
    if first is not None:
        first = np.asarray(first, dtype=float)
        norm = math.sqrt(first @ g @ first)
        if norm == 0.0:
            raise DegenerateInputError("cannot seed a frame with the zero vector")
        e1 = first / norm
        cols.append(e1)
        residuals = [np.sqrt(max(eye[j] @ g @ eye[j] - (eye[j] @ g @ e1) ** 2, 0.0)) for j in range(m)]
        candidates.pop(int(np.argmin(residuals)))
    for j in candidates:
        v = eye[j].copy()
        for e in cols:
            v -= (v @ g @ e) * e
        # second pass keeps orthogonality at machine precision
        for e in cols:
            v -= (v @ g @ e) * e
        cols.append(v / math.sqrt(v @ g @ v))
    return np.column_stack(cols)
