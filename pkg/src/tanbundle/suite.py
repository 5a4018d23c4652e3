"""The comparison suite behind ``tanbundle check``.

Each sample point is evaluated independently (closed forms next to oracle
values) so the work can be spread over a thread pool; results are always
assembled in sample order, which keeps reports identical for any worker
count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import base_geometry as bg
from . import bundle_metric as bm
from . import closed_form as cf
from . import diff, oracle
from . import weights as wt
from .errors import UsageError
from .expressions import load_manifold, load_weight

BASES = ("euclidean", "sphere", "hyperbolic", "custom")
WEIGHTS = ("cheeger_gromoll", "almost_kaehler", "flat", "integrable", "constant", "custom")
DEFAULT_TOL = {
    "algebraic": oracle.ALGEBRAIC_TOL,
    "first_order": oracle.FIRST_ORDER_TOL,
    "second_order": oracle.SECOND_ORDER_TOL,
}
LEE_FORMULAS = {
    "half": "a'/(2a) - 1/(1+r)",
    "full": "a'/a - 1/(1+r)",
    "cg_literal": "-(1/r^2 + 1/(1+r))",
}


@dataclass
class RunConfig:
    base: str = "euclidean"
    c: float | None = None
    dim: int = 2
    weight: str = "cheeger_gromoll"
    weight_c: float = 0.0
    weight_k: float = 1.0
    points: int = 25
    seed: int = 0
    tol: dict = field(default_factory=dict)
    fd_step: float | None = None
    fd_step2: float | None = None
    workers: int = 1
    metric_file: str | None = None
    weight_file: str | None = None

    def validate(self) -> "RunConfig":
        if self.base not in BASES:
            raise UsageError(f"unknown base {self.base!r}; choose from {', '.join(BASES)}")
        if self.weight not in WEIGHTS:
            raise UsageError(f"unknown weight {self.weight!r}; choose from {', '.join(WEIGHTS)}")
        if self.base != "custom" and self.dim < 2:
            raise UsageError("--dim must be at least 2")
        if self.points < 1:
            raise UsageError("--points must be at least 1")
        if self.workers < 1:
            raise UsageError("--workers must be at least 1")
        c = self.curvature
        if self.base == "sphere" and not c > 0:
            raise UsageError("sphere needs --c > 0")
        if self.base == "hyperbolic" and not c < 0:
            raise UsageError("hyperbolic needs --c < 0")
        if self.base == "euclidean" and self.c not in (None, 0, 0.0):
            raise UsageError("euclidean base has c = 0")
        if self.base == "custom" and not self.metric_file:
            raise UsageError("custom base needs --metric-file")
        if self.weight == "custom" and not self.weight_file:
            raise UsageError("custom weight needs --weight-file")
        if self.weight == "integrable" and (self.weight_c < 0 or self.weight_k <= 0):
            raise UsageError("integrable weight needs --weight-c >= 0 and --weight-k > 0")
        if self.weight == "constant" and self.weight_k <= 0:
            raise UsageError("constant weight needs --weight-k > 0")
        for key, value in self.tol.items():
            if key not in DEFAULT_TOL:
                raise UsageError(f"unknown tolerance class {key!r}")
            if not value > 0:
                raise UsageError("tolerances must be positive")
        for step in (self.fd_step, self.fd_step2):
            if step is not None and not step > 0:
                raise UsageError("finite-difference steps must be positive")
        return self

    @property
    def curvature(self) -> float:
        if self.c is not None:
            return float(self.c)
        return {"euclidean": 0.0, "sphere": 1.0, "hyperbolic": -1.0}.get(self.base, 0.0)

    def manifold(self) -> bg.ChartedManifold:
        if self.base == "custom":
            man = load_manifold(self.metric_file)
        else:
            man = bg.space_form(self.curvature, self.dim)
        return man.with_steps(self.fd_step, self.fd_step2)

    def weight_function(self) -> wt.WeightFunction:
        if self.weight == "custom":
            return load_weight(self.weight_file)
        if self.weight == "integrable":
            return wt.integrable(self.weight_c, self.weight_k)
        if self.weight == "constant":
            return wt.constant(self.weight_k)
        return wt.preset(self.weight)

    def tolerance(self, kind: str) -> float:
        return float(self.tol.get(kind, DEFAULT_TOL[kind]))

    def to_dict(self) -> dict:
        """Everything that affects results; the worker count deliberately does not."""
        man_dim = self.dim
        return {
            "base": self.base,
            "c": self.curvature,
            "dim": man_dim,
            "weight": self.weight,
            "weight_c": self.weight_c,
            "weight_k": self.weight_k,
            "points": self.points,
            "seed": self.seed,
            "tol": {k: self.tolerance(k) for k in DEFAULT_TOL},
            "fd_step": self.fd_step if self.fd_step is not None else diff.FIRST_STEP,
            "fd_step2": self.fd_step2 if self.fd_step2 is not None else diff.SECOND_STEP,
            "metric_file": self.metric_file,
            "weight_file": self.weight_file,
        }


# -------------------------------------------------------------- sampling

def draw(man, seed: int, index: int):
    """(z, X, Y, Z) for one sample; everything comes from the per-sample generator."""
    rng = oracle.sample_rng(seed, index)
    z = oracle.sample_z(man, seed, index, rng=rng)
    X, Y, Z = rng.normal(size=(3, man.dim))
    return z, X, Y, Z


def _orthonormal_pair(point, rng):
    q = bg.orthonormal_frame(point.g, rng.normal(size=point.dim))
    return q[:, 0], q[:, 1]


def _oracle_vector(man, w, z, point, coord_vec):
    return bm.TMVector.from_coord_vector(point, coord_vec).adapted()


def evaluate_sample(man, w, seed: int, index: int) -> dict:
    z, X, Y, Z = draw(man, seed, index)
    point = oracle._point(man, w, z)
    rec = {}

    # connection on lifts of chart-constant fields
    closed, numeric = [], []
    for case in cf.CONNECTION_CASES:
        U = oracle.lift_field(man, w, case[0], X)
        V = oracle.lift_field(man, w, case[1], Y)
        closed.append(cf.nabla_tilde(point, w, case, X, Y).adapted())
        numeric.append(_oracle_vector(man, w, z, point, oracle.numeric_covariant(man, w, z, U, V)))
    rec["connection"] = (np.concatenate(closed), np.concatenate(numeric))

    riem = oracle.numeric_riemann_2m(man, w, z)
    rec["max_curvature_component"] = float(np.abs(riem).max())
    closed, numeric = [], []
    for case in cf.CURVATURE_CASES:
        lifts = [bm.lift(point, V, k) for V, k in zip((X, Y, Z), case)]
        coords = [L.coord_vector() for L in lifts]
        closed.append(cf.curvature_tilde(point, w, case, X, Y, Z).adapted())
        numeric.append(_oracle_vector(man, w, z, point, np.einsum("abcd,a,b,c->d", riem, *coords)))
    rec["curvature"] = (np.concatenate(closed), np.concatenate(numeric))

    G = bm.induced_coordinate_metric(point, w)
    frame = bm.adapted_frame(point, w)
    table = cf.sectional_table(point, w)
    num_k, tensor_k = [], []
    for _, A, B, _ in table.entries:
        U = frame[A - 1].coord_vector()
        V = frame[B - 1].coord_vector()
        q = (U @ G @ U) * (V @ G @ V) - (U @ G @ V) ** 2
        num_k.append(np.einsum("abcd,a,b,c->d", riem, U, V, V) @ G @ U / q)
        tensor_k.append(cf.sectional_from_curvature(point, w, frame[A - 1], frame[B - 1]))
    rec["sectional_table"] = (table.values(), np.array(num_k))
    rec["sectional_consistency"] = (table.values(), np.array(tensor_k))

    rec["scalar"] = (
        np.array([cf.scalar_tilde(point, w)]),
        np.array([oracle.numeric_scalar_2m(man, w, z, riem=riem)]),
    )

    d_omega = oracle.numeric_d_omega(man, w, z)
    rec["max_d_omega"] = float(np.abs(d_omega).max())
    rec["d_omega"] = d_omega
    for name in bm.LEE_COEFFICIENTS:
        rec["lee:" + name] = (oracle.wedge_omega(man, w, z, name).ravel(), d_omega.ravel())

    for case in ("HH", "VV"):
        rec["nij:" + case] = (
            cf.nijenhuis_closed(point, w, case, X, Y).adapted(),
            _oracle_vector(man, w, z, point, oracle.numeric_nijenhuis(man, w, z, case[0], case[1], X, Y)),
        )
    rec["nij_hv_norm"] = float(np.abs(oracle.numeric_nijenhuis(man, w, z, "H", "V", X, Y)).max())

    rec["algebraic"] = algebraic_residuals(point, w, X, Y, oracle.sample_rng(seed, index))
    return rec


def algebraic_residuals(point, w, X, Y, rng) -> np.ndarray:
    """Residuals of identities that hold exactly (J^2 = -1, compatibility, frame, parallelogram areas)."""
    m = point.dim
    a = wt.eval_weight(w, point.t)[0]
    U = bm.TMVector(point, X, Y)
    V = bm.TMVector(point, rng.normal(size=m), rng.normal(size=m))
    res = []
    JJU = bm.apply_J(point, w, bm.apply_J(point, w, U))
    res.extend((JJU + U).adapted())
    res.append(
        bm.g_a_eval(point, w, bm.apply_J(point, w, U), bm.apply_J(point, w, V)) - bm.g_a_eval(point, w, U, V)
    )
    frame = bm.adapted_frame(point, w)
    gram = np.array([[bm.g_a_eval(point, w, E, F) for F in frame] for E in frame])
    res.extend((gram - np.eye(2 * m)).ravel())
    e1, e2 = _orthonormal_pair(point, rng)
    gx, gy = point.with_u(e1), point.with_u(e2)
    res.append(cf.area_sq(point, w, bm.hlift(point, e1), bm.hlift(point, e2)) - 1.0)
    res.append(cf.area_sq(point, w, bm.hlift(point, e1), bm.vlift(point, e2)) - a * (1.0 + gy * gy))
    res.append(cf.area_sq(point, w, bm.vlift(point, e1), bm.vlift(point, e2)) - a * a * (1.0 + gx * gx + gy * gy))
    for i in range(m):
        res.append(cf.sectional_from_curvature(point, w, frame[i], frame[m]))
    return np.array(res)


def evaluate(man, w, seed: int, points: int, workers: int = 1) -> list:
    indices = range(points)
    if workers == 1:
        return [evaluate_sample(man, w, seed, i) for i in indices]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda i: evaluate_sample(man, w, seed, i), indices))


# ---------------------------------------------------------- calibrations

def nijenhuis_scale(closed, numeric) -> float:
    """Least-squares factor k with numeric ~ k * closed."""
    closed = np.asarray(closed)
    den = float(closed @ closed)
    return float(np.asarray(numeric) @ closed / den) if den > 0 else float("nan")


def calibrate(dim: int, seed: int) -> dict:
    """Fix conventions on the hand-checkable case: Euclidean base, constant weight."""
    man = bg.euclidean(dim)
    w = wt.constant(1.0)
    z, X, Y, _ = draw(man, seed, 0)
    closed = cf.nijenhuis_closed(oracle._point(man, w, z), w, "HH", X, Y).adapted()
    point = oracle._point(man, w, z)
    numeric = _oracle_vector(man, w, z, point, oracle.numeric_nijenhuis(man, w, z, "H", "H", X, Y))
    d_omega = oracle.numeric_d_omega(man, w, z).ravel()
    wedge = oracle.wedge_omega(man, w, z, "full").ravel()
    return {
        "nijenhuis_constant": round(nijenhuis_scale(closed, numeric), 6),
        "wedge_ratio": round(float(d_omega @ wedge / (wedge @ wedge)), 6),
    }


# ------------------------------------------------------------ the check

def _pairs(records, key):
    return [r[key][0] for r in records], [r[key][1] for r in records]


def run_check(cfg: RunConfig) -> dict:
    cfg.validate()
    man = cfg.manifold()
    w = cfg.weight_function()
    records = evaluate(man, w, cfg.seed, cfg.points, cfg.workers)
    cal = calibrate(man.dim, cfg.seed)
    kappa = cal["nijenhuis_constant"]
    t_alg = cfg.tolerance("algebraic")
    t1 = cfg.tolerance("first_order")
    t2 = cfg.tolerance("second_order")

    reports = []
    max_r = max(r["max_curvature_component"] for r in records)
    reports.append(oracle.compare("connection", *_pairs(records, "connection"), t1))
    reports.append(
        oracle.compare(
            "curvature", *_pairs(records, "curvature"), t2,
            notes=f"max |numeric curvature component| = {max_r:.3e}",
        )
    )
    reports.append(oracle.compare("sectional_table", *_pairs(records, "sectional_table"), t2))
    reports.append(oracle.compare("sectional_consistency", *_pairs(records, "sectional_consistency"), t_alg))
    reports.append(oracle.compare("scalar", *_pairs(records, "scalar"), t2))

    candidates = {}
    for name in bm.LEE_COEFFICIENTS:
        rep = oracle.compare("lee:" + name, *_pairs(records, "lee:" + name), t1)
        candidates[name] = rep
    summary = "; ".join(
        f"{name} [{LEE_FORMULAS[name]}]: {rep.verdict} (max err {rep.max_abs_err:.2e})"
        for name, rep in candidates.items()
    )
    lee = candidates["half"]
    lee.subject = "lee_form"
    lee.notes = "dOmega = omega ^ Omega; candidates: " + summary
    reports.append(lee)

    for case in ("HH", "VV"):
        closed, numeric = _pairs(records, "nij:" + case)
        ratios = [nijenhuis_scale(c, n) for c, n in zip(closed, numeric) if np.abs(c).max() > 1e-6]
        spread = (max(ratios) - min(ratios)) / abs(np.mean(ratios)) if ratios else 0.0
        rep = oracle.compare("nijenhuis_" + case.lower(), [kappa * c for c in closed], numeric, t1)
        rep.notes = f"scaled by calibrated constant {kappa}; per-sample ratio spread {spread:.2e}"
        reports.append(rep)

    residuals = [r["algebraic"] for r in records]
    reports.append(oracle.compare("algebraic_invariants", residuals, [np.zeros_like(v) for v in residuals], t_alg))

    # structural checks that only apply to particular configurations
    if man.is_space_form and man.curvature == 0 and w.name == "flat":
        riem_max = [np.array([r["max_curvature_component"]]) for r in records]
        reports.append(
            oracle.compare("flatness", riem_max, [np.zeros(1)] * len(records), t1,
                           notes="numeric curvature of the induced metric must vanish")
        )
    if w.name == "almost_kaehler":
        d_max = [np.array([r["max_d_omega"]]) for r in records]
        reports.append(
            oracle.compare("almost_kaehler", d_max, [np.zeros(1)] * len(records), t1,
                           notes="numeric dOmega must vanish for this weight")
        )
    if w.name == "integrable" and man.is_space_form and math.isclose(man.curvature, w.params[0]):
        norms = [np.concatenate([r["nij:HH"][1], r["nij:VV"][1]]) for r in records]
        hv = max(r["nij_hv_norm"] for r in records)
        reports.append(
            oracle.compare("integrability_necessary", norms, [np.zeros_like(n) for n in norms], t2,
                           notes=f"numeric HH and VV Nijenhuis blocks vanish; max |N(H,V)| = {hv:.3e} (reported only)")
        )

    verdict = "pass" if all(r.passed for r in reports) else "fail"
    half_ok = candidates["half"].passed
    return {
        "config": cfg.to_dict(),
        "conventions": {
            "omega_coefficient": LEE_FORMULAS["half"] if half_ok else "unresolved",
            "omega_candidates": {name: rep.verdict for name, rep in candidates.items()},
            "nijenhuis_constant": kappa,
            "nijenhuis_definition": "[JU,JV] - J[JU,V] - J[U,JV] - [U,V]",
            "curvature_sign": "R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z; K = g(R(X,Y)Y,X)/Q",
            "exterior_convention": (
                "(dW)_ABC = d_A W_BC + d_B W_CA + d_C W_AB; (w^W)_ABC = w_A W_BC + w_B W_CA + w_C W_AB; "
                f"calibration ratio {cal['wedge_ratio']}"
            ),
        },
        "comparisons": [r.to_dict() for r in reports],
        "verdict": verdict,
    }
