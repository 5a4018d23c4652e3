"""Acceptance criteria, one test (or a small group) per criterion.

Each test records its outcome so the terminal summary prints one pass/fail
line per criterion (see conftest.py).  Run directly with

    python3 -m pytest tests/test_acceptance.py -v
"""
from functools import lru_cache

import numpy as np
import pytest

from tanbundle import base_geometry as bg
from tanbundle import bundle_metric as bm
from tanbundle import cli
from tanbundle import closed_form as cf
from tanbundle import oracle, suite
from tanbundle import weights as wt

from conftest import ACCEPTANCE, BASES, WEIGHTS

SEED = 42
POINTS = 25
T_GRID = np.linspace(0.0, 5.0, 100)


def record(number, label, passed, detail):
    ACCEPTANCE.setdefault(number, []).append((label, bool(passed), detail))
    return passed


@lru_cache(maxsize=None)
def records(base, weight, m=2, points=POINTS):
    return tuple(suite.evaluate(BASES[base](m), WEIGHTS[weight](), SEED, points))


# 1 --------------------------------------------------------------- flatness

def test_criterion_1_flatness():
    man, w = bg.euclidean(2), wt.flat()
    recs = records("euclidean", "flat")
    numeric_max = max(r["max_curvature_component"] for r in recs)
    closed_max = 0.0
    table_max = 0.0
    for i in range(POINTS):
        z, X, Y, Z = suite.draw(man, SEED, i)
        p = oracle._point(man, w, z)
        for case in cf.CURVATURE_CASES:
            closed_max = max(closed_max, np.abs(cf.curvature_tilde(p, w, case, X, Y, Z).adapted()).max())
        table_max = max(table_max, np.abs(cf.sectional_table(p, w).values()).max())
    # F1..F3 of this weight cancel only to rounding, so "exact" means machine precision
    ok = numeric_max <= 1e-4 and closed_max <= 1e-14 and table_max <= 1e-14
    record(1, "Euclidean base, flat weight, 25 points",
           ok, f"numeric max |R| = {numeric_max:.2e}, closed max = {closed_max:.1e}, table max = {table_max:.1e}")
    assert ok


# 2 ---------------------------------------------------------- almost Kaehler

def test_criterion_2a_almost_kaehler_weight_closes_omega():
    d_max = max(r["max_d_omega"] for r in records("euclidean", "almost_kaehler"))
    ok = d_max <= 1e-4
    record(2, "almost_kaehler weight: max |dOmega| <= 1e-4", ok, f"max |dOmega| = {d_max:.3e}")
    assert ok, f"dOmega does not vanish for the almost_kaehler weight (max component {d_max:.3e})"


def test_criterion_2b_cheeger_gromoll_not_almost_kaehler():
    d_max = max(r["max_d_omega"] for r in records("euclidean", "cheeger_gromoll"))
    ok = d_max > 1e-2
    record(2, "cheeger_gromoll weight: some |dOmega| > 1e-2", ok, f"max |dOmega| = {d_max:.3e}")
    assert ok


# 3 -------------------------------------------------------- Lee form identity

@pytest.mark.parametrize("weight", ["constant", "cheeger_gromoll"])
def test_criterion_3_lee_identity(weight):
    recs = records("euclidean", weight)
    errs = {}
    for cand in ("cg_literal", "full", "half"):
        errs[cand] = max(np.abs(r["lee:" + cand][0] - r["lee:" + cand][1]).max() for r in recs)
    matching = [c for c in ("cg_literal", "full") if errs[c] <= 1e-3]
    ok = len(matching) == 1
    record(3, f"{weight}: exactly one literal coefficient matches",
           ok, f"matching = {matching}; errors " + ", ".join(f"{k}={v:.1e}" for k, v in errs.items()))
    assert ok


# 4 ------------------------------------------------------ oracle equivalence

@pytest.mark.parametrize("base", list(BASES))
@pytest.mark.parametrize("weight", list(WEIGHTS))
def test_criterion_4_oracle_equivalence(base, weight):
    recs = records(base, weight)
    worst = {}
    ok = True
    for key in ("connection", "curvature", "sectional_table", "scalar"):
        rep = oracle.compare(key, *suite._pairs(recs, key), 1e-3)
        worst[key] = rep.max_abs_err
        ok = ok and rep.passed
    record(4, f"{base} x {weight}", ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert ok


# 5 -------------------------------------------------------- Kaehler obstruction

def test_criterion_5_obstruction():
    ak = [wt.kaehler_obstruction(wt.almost_kaehler(), t) for t in T_GRID]
    ok_ak = wt.spread(ak) > 0.1
    record(5, "almost_kaehler obstruction varies", ok_ak, f"spread = {wt.spread(ak):.4f}")
    ok_all = ok_ak
    for c, k in [(0.0, 1.0), (1.0, 1.0), (1.0, 2.0)]:
        vals = [wt.kaehler_obstruction(wt.integrable(c, k), t) for t in T_GRID]
        ok = wt.spread(vals) <= 1e-8 and abs(np.mean(vals) - c) <= 1e-8
        record(5, f"integrable({c:g},{k:g}) obstruction == c", ok,
               f"spread = {wt.spread(vals):.1e}, mean - c = {np.mean(vals) - c:.1e}")
        ok_all = ok_all and ok
    assert ok_all


# 6 ---------------------------------------------------------------- Nijenhuis

@pytest.mark.parametrize("base,weight", [("euclidean", "constant"), ("sphere", "cheeger_gromoll"),
                                         ("hyperbolic", "almost_kaehler")])
def test_criterion_6_nijenhuis_proportionality(base, weight):
    recs = records(base, weight)
    ok = True
    details = []
    for case in ("HH", "VV"):
        ratios = [suite.nijenhuis_scale(c, n) for c, n in zip(*suite._pairs(recs, "nij:" + case))
                  if np.abs(c).max() > 1e-6]
        spread = (max(ratios) - min(ratios)) / abs(np.mean(ratios))
        ok = ok and len(ratios) == POINTS and spread <= 1e-3
        details.append(f"{case} constant {np.mean(ratios):.6f} spread {spread:.1e}")
    record(6, f"{base} x {weight}: one global constant", ok, "; ".join(details))
    assert ok


def test_criterion_6_integrable_on_unit_sphere():
    man, w = bg.sphere(1.0, 2), wt.integrable(1.0, 1.0)
    worst = 0.0
    hv = 0.0
    for i in range(POINTS):
        z, X, Y, _ = suite.draw(man, SEED, i)
        for case in ("HH", "VV"):
            worst = max(worst, np.abs(oracle.numeric_nijenhuis(man, w, z, case[0], case[1], X, Y)).max())
        hv = max(hv, np.abs(oracle.numeric_nijenhuis(man, w, z, "H", "V", X, Y)).max())
    ok = worst <= 1e-3
    record(6, "sphere(1) x integrable(1,1): HH, VV vanish", ok,
           f"max |N| = {worst:.1e} (mixed block, reported only: {hv:.1e})")
    assert ok


# 7 ------------------------------------------------------------ scalar relation

@pytest.mark.parametrize("m", [2, 3])
def test_criterion_7_scalar_relation(m):
    points = POINTS if m == 2 else 5
    ok = True
    worst = 0.0
    for base in BASES:
        for weight in WEIGHTS:
            rep = oracle.compare("scalar", *suite._pairs(records(base, weight, m, points), "scalar"), 1e-3)
            worst = max(worst, rep.max_abs_err)
            ok = ok and rep.passed
    record(7, f"all 12 preset pairs, m = {m}, {points} points", ok, f"max error {worst:.1e}")
    assert ok


def test_criterion_7_hand_value():
    man, w = bg.euclidean(2), wt.constant(1.0)
    z = np.array([0.1, -0.05, 0.0, 0.0])
    numeric = oracle.numeric_scalar_2m(man, w, z)
    closed = cf.scalar_tilde(oracle._point(man, w, z), w)
    ok = abs(numeric - 2.0) <= 1e-3 and abs(closed - 2.0) <= 1e-3
    record(7, "Euclidean x constant(1), t = 0: scalar = 2", ok, f"oracle {numeric:.6f}, closed {closed:.6f}")
    assert ok


# 8 ------------------------------------------------------------ scalar ODE

def test_criterion_8_scalar_ode():
    flat = [wt.scal_ode_lhs(wt.flat(), 0.0, 2, t) for t in T_GRID]
    cg = [wt.scal_ode_lhs(wt.cheeger_gromoll(), 1.0, 2, t) for t in T_GRID]
    man = bg.euclidean(2)
    oracle_scal = [oracle.numeric_scalar_2m(man, wt.flat(), oracle.sample_z(man, SEED, i)) for i in range(5)]
    ok_flat = wt.spread(flat) <= 1e-8
    ok_cg = wt.spread(cg) > 0.01
    ok_val = max(abs(s - flat[0]) for s in oracle_scal) <= 1e-3
    record(8, "flat, c = 0, m = 2: constant", ok_flat, f"spread {wt.spread(flat):.1e}")
    record(8, "cheeger_gromoll, c = 1, m = 2: not constant", ok_cg, f"spread {wt.spread(cg):.3f}")
    record(8, "flat constant equals oracle scalar", ok_val,
           f"constant {flat[0]:.2e}, oracle max |scal| {max(map(abs, oracle_scal)):.1e}")
    assert ok_flat and ok_cg and ok_val


# 9 ------------------------------------------------------- algebraic invariants

@pytest.mark.parametrize("m", [2, 3])
def test_criterion_9_algebraic_invariants(m):
    worst = 0.0
    for base in BASES:
        man = BASES[base](m)
        for weight in WEIGHTS:
            w = WEIGHTS[weight]()
            for i in range(100):
                z, X, Y, _ = suite.draw(man, SEED, i)
                p = oracle._point(man, w, z)
                res = suite.algebraic_residuals(p, w, X, Y, oracle.sample_rng(SEED, i))
                worst = max(worst, np.abs(res).max())
                if m >= 3:
                    e = bg.orthonormal_frame(p.g, p.y)
                    X1, Y1 = e[:, 1], e[:, 2]
                    a = wt.eval_weight(w, p.t)[0]
                    q = [cf.area_sq(p, w, bm.hlift(p, X1), bm.hlift(p, Y1)) - 1.0,
                         cf.area_sq(p, w, bm.hlift(p, X1), bm.vlift(p, Y1)) - a,
                         cf.area_sq(p, w, bm.vlift(p, X1), bm.vlift(p, Y1)) - a * a]
                    worst = max(worst, max(map(abs, q)))
    ok = worst <= 1e-10
    record(9, f"m = {m}: 3 bases x 4 weights x 100 samples", ok, f"max residual {worst:.1e}")
    assert ok


# 10 ------------------------------------------------------------- determinism

def test_criterion_10_determinism(tmp_path):
    outs = []
    for workers in (1, 4):
        target = tmp_path / f"report_{workers}.json"
        code = cli.main(["check", "--base", "sphere", "--c", "1", "--weight", "cheeger_gromoll",
                         "--points", str(POINTS), "--seed", str(SEED), "--output", "json",
                         "--workers", str(workers), "--out", str(target)])
        assert code == 0
        outs.append(target.read_bytes())
    ok = outs[0] == outs[1]
    record(10, "check JSON with 1 and 4 workers", ok, f"{len(outs[0])} bytes, identical = {ok}")
    assert ok
