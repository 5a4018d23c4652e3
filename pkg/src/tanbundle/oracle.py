"""Finite-difference geometry of T(M) in the raw coordinates z = (x, y).

Nothing here uses the lift calculus of ``closed_form``: the metric g_a is
pulled back to coordinates and then differentiated like any other metric.
Christoffel symbols, curvature, dOmega and brackets all come from 4th-order
central differences (``diff.gradient``).
"""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels, diff
from .base_geometry import ChartedManifold, _check_domain, _christoffel, _christoffel_margin, _metric
from .bundle_metric import (
    HORIZONTAL,
    LEE_COEFFICIENTS,
    BundlePoint,
    TMVector,
    _kind,
    coordinate_j,
    coordinate_lee,
    coordinate_omega,
    make_point,
)
from .errors import UsageError
from .weights import WeightFunction, eval_weight

ALGEBRAIC_TOL = 1e-8
FIRST_ORDER_TOL = 1e-4
SECOND_ORDER_TOL = 1e-3


def split(man: ChartedManifold, z):
    z = np.asarray(z, dtype=float)
    return z[: man.dim], z[man.dim:]


def _point(man, w, z, numeric_base=False) -> BundlePoint:
    x, y = split(man, z)
    return make_point(man, x, y, numeric_base)


def induced_metric_at(man: ChartedManifold, w: WeightFunction, z, numeric_base: bool = False) -> np.ndarray:
    x, y = split(man, z)
    g = _metric(man, x)
    t = 0.5 * float(y @ g @ y)
    a = eval_weight(w, t)[0]
    return _kernels.induced_metric(g, _christoffel(man, x, numeric_base), y, a)


def _require(man, z, levels, numeric_base):
    """Check every stencil stays inside the chart; ``levels`` are the step sizes used."""
    x, _ = split(man, z)
    margin = sum(diff.stencil_reach(h) for h in levels) + _christoffel_margin(man, numeric_base)
    _check_domain(man, x, margin)


def numeric_christoffel_2m(man, w, z, numeric_base=False, _checked=False) -> np.ndarray:
    if not _checked:
        _require(man, z, [man.fd_step], numeric_base)
    G = induced_metric_at(man, w, z, numeric_base)
    dG = diff.gradient(lambda s: induced_metric_at(man, w, s, numeric_base), z, man.fd_step)
    return _kernels.christoffel(np.linalg.inv(G), dG)


def numeric_connection(man, w, z, i: int, j: int, numeric_base=False) -> np.ndarray:
    """nabla_{d_i} d_j of the induced metric, as a 2m coordinate vector."""
    return numeric_christoffel_2m(man, w, z, numeric_base)[:, i, j]


def numeric_riemann_2m(man, w, z, numeric_base=False) -> np.ndarray:
    """riem[A, B, C, D] = component D of R(d_A, d_B) d_C for the induced metric."""
    _require(man, z, [man.fd_step, man.fd_step2], numeric_base)
    gamma = numeric_christoffel_2m(man, w, z, numeric_base, _checked=True)
    dgamma = diff.gradient(
        lambda s: numeric_christoffel_2m(man, w, s, numeric_base, _checked=True), z, man.fd_step2
    )
    return _kernels.riemann(gamma, dgamma)


def numeric_scalar_2m(man, w, z, numeric_base=False, riem=None) -> float:
    if riem is None:
        riem = numeric_riemann_2m(man, w, z, numeric_base)
    G = induced_metric_at(man, w, z, numeric_base)
    return float(_kernels.scalar(riem, np.linalg.inv(G)))


# ------------------------------------------------------------------ forms

def omega_field(man, w, z, numeric_base=False) -> np.ndarray:
    return coordinate_omega(_point(man, w, z, numeric_base), w)


def numeric_d_omega(man, w, z, numeric_base=False) -> np.ndarray:
    """(dOmega)_ABC = d_A Omega_BC + d_B Omega_CA + d_C Omega_AB."""
    _require(man, z, [man.fd_step], numeric_base)
    d_form = diff.gradient(lambda s: omega_field(man, w, s, numeric_base), z, man.fd_step)
    return _kernels.cyclic_sum(d_form)


def wedge_omega(man, w, z, coefficient: str = "half", numeric_base=False) -> np.ndarray:
    """(omega ^ Omega)_ABC = omega_A Omega_BC + omega_B Omega_CA + omega_C Omega_AB."""
    point = _point(man, w, z, numeric_base)
    lee = coordinate_lee(point, w, coefficient)
    return _kernels.cyclic_sum(np.einsum("a,bc->abc", lee, coordinate_omega(point, w)))


def numeric_d_lee(man, w, z, coefficient: str = "half", numeric_base=False) -> np.ndarray:
    """(d omega)_AB; the Lee form is closed when this vanishes."""
    _require(man, z, [man.fd_step], numeric_base)
    d = diff.gradient(lambda s: coordinate_lee(_point(man, w, s, numeric_base), w, coefficient), z, man.fd_step)
    return d - d.T


# ----------------------------------------------------- vector-field calculus

def lift_field(man, w, kind: str, X, numeric_base=False):
    """Coordinate components of the lift of the chart-constant field X, as a function of z."""
    X = np.asarray(X, dtype=float)
    kind = _kind(kind)
    m = man.dim

    def field(z):
        if kind == HORIZONTAL:
            x, y = split(man, z)
            shift = np.einsum("kij,j->ki", _christoffel(man, x, numeric_base), y)
            return np.concatenate([X, -shift @ X])
        return np.concatenate([np.zeros(m), X])

    return field


def j_field(man, w, field, numeric_base=False):
    return lambda z: coordinate_j(_point(man, w, z, numeric_base), w) @ field(z)


def bracket(f, g, z, h) -> np.ndarray:
    """Lie bracket [f, g] of coordinate vector fields at z."""
    df = diff.gradient(f, z, h)  # df[A, C] = d_A f^C
    dg = diff.gradient(g, z, h)
    return f(z) @ dg - g(z) @ df


def numeric_covariant(man, w, z, U_field, V_field, numeric_base=False) -> np.ndarray:
    """nabla_U V for coordinate vector fields, using the numeric Christoffels."""
    z = np.asarray(z, dtype=float)
    _require(man, z, [man.fd_step], numeric_base)
    gamma = numeric_christoffel_2m(man, w, z, numeric_base, _checked=True)
    U = U_field(z)
    dV = diff.gradient(V_field, z, man.fd_step)
    return U @ dV + np.einsum("cab,a,b->c", gamma, U, V_field(z))


def numeric_nijenhuis(man, w, z, U_kind, V_kind, X, Y, numeric_base=False) -> np.ndarray:
    """N(U, V) = [JU, JV] - J[JU, V] - J[U, JV] - [U, V] as a 2m coordinate vector."""
    z = np.asarray(z, dtype=float)
    _require(man, z, [man.fd_step], numeric_base)
    h = man.fd_step
    U = lift_field(man, w, U_kind, X, numeric_base)
    V = lift_field(man, w, V_kind, Y, numeric_base)
    JU = j_field(man, w, U, numeric_base)
    JV = j_field(man, w, V, numeric_base)
    J = coordinate_j(_point(man, w, z, numeric_base), w)
    return bracket(JU, JV, z, h) - J @ bracket(JU, V, z, h) - J @ bracket(U, JV, z, h) - bracket(U, V, z, h)


def to_tm(man, w, z, coord_vector, numeric_base=False) -> TMVector:
    return TMVector.from_coord_vector(_point(man, w, z, numeric_base), np.asarray(coord_vector))


# --------------------------------------------------------------- sampling

def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) ^ int(index))


def sample_z(man: ChartedManifold, seed: int, index: int, fiber=(0.1, 2.0), rng=None) -> np.ndarray:
    """Base point in the ball of half the chart radius, fiber vector with |y| in ``fiber``."""
    if rng is None:
        rng = sample_rng(seed, index)
    m = man.dim
    d = rng.normal(size=m)
    x = d / np.linalg.norm(d) * 0.5 * man.radius * rng.uniform() ** (1.0 / m)
    e = rng.normal(size=m)
    y = e / np.linalg.norm(e) * rng.uniform(*fiber)
    return np.concatenate([x, y])


# ------------------------------------------------------------ comparisons

@dataclass
class ComparisonReport:
    subject: str
    samples: int
    max_abs_err: float
    max_rel_err: float
    tolerance: float
    verdict: str
    notes: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return asdict(self)


def compare(subject: str, closed_form_values, oracle_values, tol: float, notes: str = "") -> ComparisonReport:
    """Compare two equal-length lists of arrays sample by sample.

    Each sample's error is measured relative to the oracle's max-norm when
    that norm is at least 1 and absolutely otherwise; the verdict passes when
    the worst such error is within ``tol``.
    """
    if len(closed_form_values) != len(oracle_values):
        raise UsageError("closed-form and oracle sample lists differ in length")
    max_abs = 0.0
    max_rel = 0.0
    worst = 0.0
    for cf, ref in zip(closed_form_values, oracle_values):
        cf = np.atleast_1d(np.asarray(cf, dtype=float))
        ref = np.atleast_1d(np.asarray(ref, dtype=float))
        if cf.shape != ref.shape:
            raise UsageError(f"shape mismatch {cf.shape} vs {ref.shape} in {subject}")
        err = float(np.max(np.abs(cf - ref))) if cf.size else 0.0
        mag = float(np.max(np.abs(ref))) if ref.size else 0.0
        max_abs = max(max_abs, err)
        if mag > 0:
            max_rel = max(max_rel, err / mag)
        worst = max(worst, err / max(mag, 1.0))
    verdict = "pass" if worst <= tol else "fail"
    return ComparisonReport(subject, len(oracle_values), max_abs, max_rel, tol, verdict, notes)
