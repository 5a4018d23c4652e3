"""Command-line front end: ``tanbundle check | sectional | sweep``.

Exit codes: 0 when everything passes, 1 on a numerical failure, 2 on a
usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import bundle_metric as bm
from . import closed_form as cf
from . import oracle
from . import weights as wt
from .errors import TanBundleError
from .suite import BASES, DEFAULT_TOL, WEIGHTS, RunConfig, run_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
SWEEP_COLUMNS = ["t", "r", "a", "a_prime", "L", "F1", "F2", "F3", "K_v1vk", "K_vkvl", "scal_tilde", "ode_lhs"]
SECTIONAL_COLUMNS = ["pair_class", "A", "B", "closed_form", "oracle", "abs_err"]


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(message)


def fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _vector(text, dim, name):
    try:
        vals = [float(s) for s in text.split(",")]
    except ValueError:
        raise _Usage(f"--{name} must be a comma-separated list of numbers") from None
    if len(vals) != dim:
        raise _Usage(f"--{name} needs {dim} components")
    return np.array(vals)


def _tol(items):
    out = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        try:
            if sep:
                out[key.strip()] = float(value)
            else:
                v = float(key)
                out.update({k: v for k in DEFAULT_TOL})
        except ValueError:
            raise _Usage(f"bad --tol value {item!r}") from None
    return out


def _seed(args):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TANBUNDLE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise _Usage("TANBUNDLE_SEED must be an integer") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--base", choices=BASES, default="euclidean")
    common.add_argument("--metric-file", help="metric file for --base custom")
    common.add_argument("--c", type=float, default=None, help="space-form curvature")
    common.add_argument("--dim", type=int, default=2)
    common.add_argument("--weight", choices=WEIGHTS, default="cheeger_gromoll")
    common.add_argument("--weight-file", help="weight file for --weight custom")
    common.add_argument("--weight-c", type=float, default=0.0)
    common.add_argument("--weight-k", type=float, default=1.0)
    common.add_argument("--points", type=int, default=25)
    common.add_argument("--seed", type=int, default=None, help="falls back to $TANBUNDLE_SEED, then 0")
    common.add_argument(
        "--tol", action="append", metavar="[CLASS=]VALUE",
        help="override a tolerance class (algebraic, first_order, second_order) or all of them",
    )
    common.add_argument("--fd-step", type=float, default=None)
    common.add_argument("--fd-step2", type=float, default=None)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--output", choices=("text", "json", "csv"), default=None)
    common.add_argument("--out", help="write the document here instead of stdout")

    parser = _Parser(prog="tanbundle", description="Cheeger-Gromoll type metrics on tangent bundles")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check", parents=[common], help="run the closed-form vs oracle suite")
    sec = sub.add_parser("sectional", parents=[common], help="sectional curvatures over the adapted frame")
    sec.add_argument("--x", default=None, help="base point, comma separated (default origin)")
    sec.add_argument("--y", default=None, help="fiber vector, comma separated (default e1)")
    sw = sub.add_parser("sweep", parents=[common], help="weight data and scalar curvature over a t grid")
    sw.add_argument("--t-max", type=float, default=5.0)
    sw.add_argument("--steps", type=int, default=101)
    return parser


def config_from_args(args) -> RunConfig:
    return RunConfig(
        base=args.base,
        c=args.c,
        dim=args.dim,
        weight=args.weight,
        weight_c=args.weight_c,
        weight_k=args.weight_k,
        points=args.points,
        seed=_seed(args),
        tol=_tol(args.tol),
        fd_step=args.fd_step,
        fd_step2=args.fd_step2,
        workers=args.workers,
        metric_file=args.metric_file,
        weight_file=args.weight_file,
    ).validate()


# ------------------------------------------------------------- commands

def failing_subjects(doc) -> list:
    return [c["subject"] for c in doc["comparisons"] if c["verdict"] != "pass"]


def cmd_check(cfg: RunConfig, output: str = "text") -> tuple:
    doc = run_check(cfg)
    code = EXIT_OK if doc["verdict"] == "pass" else EXIT_FAIL
    if code == EXIT_FAIL:
        print("failing subjects: " + ", ".join(failing_subjects(doc)), file=sys.stderr)
    if output == "json":
        return code, _json(doc)
    rows = [
        (c["subject"], c["samples"], c["max_abs_err"], c["max_rel_err"], c["tolerance"], c["verdict"])
        for c in doc["comparisons"]
    ]
    if output == "csv":
        return code, _csv(["subject", "samples", "max_abs_err", "max_rel_err", "tolerance", "verdict"], rows)
    lines = [f"{'subject':<26}{'n':>4}  {'max_abs_err':>11}  {'tol':>8}  verdict"]
    for subj, n, err, _, tol, verdict in rows:
        lines.append(f"{subj:<26}{n:>4}  {err:>11.3e}  {tol:>8.1e}  {verdict}")
    for c in doc["comparisons"]:
        if c["notes"]:
            lines.append(f"  {c['subject']}: {c['notes']}")
    conv = doc["conventions"]
    lines.append(f"omega coefficient: {conv['omega_coefficient']}")
    lines.append(f"Nijenhuis constant: {conv['nijenhuis_constant']}")
    lines.append(f"verdict: {doc['verdict']}")
    return code, "\n".join(lines) + "\n"


def sectional_rows(cfg: RunConfig, x, y) -> list:
    man = cfg.manifold()
    w = cfg.weight_function()
    z = np.concatenate([x, y])
    point = oracle._point(man, w, z)
    if not point.t > 0:
        raise _Usage("--y must be nonzero")
    table = cf.sectional_table(point, w)
    riem = oracle.numeric_riemann_2m(man, w, z)
    G = bm.induced_coordinate_metric(point, w)
    frame = bm.adapted_frame(point, w)
    rows = []
    for cls, A, B, val in table.entries:
        U, V = frame[A - 1].coord_vector(), frame[B - 1].coord_vector()
        q = (U @ G @ U) * (V @ G @ V) - (U @ G @ V) ** 2
        num = float(np.einsum("abcd,a,b,c->d", riem, U, V, V) @ G @ U / q)
        rows.append((cls, A, B, float(val), num, abs(val - num)))
    return rows


def cmd_sectional(cfg: RunConfig, x, y, output: str = "text") -> tuple:
    rows = sectional_rows(cfg, x, y)
    tol = cfg.tolerance("second_order")
    ok = all(err <= tol * max(1.0, abs(num)) for *_, num, err in rows)
    code = EXIT_OK if ok else EXIT_FAIL
    if output == "csv":
        return code, _csv(SECTIONAL_COLUMNS, rows)
    if output == "json":
        doc = {"config": cfg.to_dict(), "x": list(map(float, x)), "y": list(map(float, y)),
               "rows": [dict(zip(SECTIONAL_COLUMNS, r)) for r in rows]}
        return code, _json(doc)
    lines = [f"{'class':<7}{'A':>3}{'B':>3}  {'closed_form':>14}  {'oracle':>14}  {'abs_err':>9}"]
    for cls, A, B, val, num, err in rows:
        lines.append(f"{cls:<7}{A:>3}{B:>3}  {val:>14.8f}  {num:>14.8f}  {err:>9.2e}")
    return code, "\n".join(lines) + "\n"


def diagonal_fiber(g: np.ndarray, t: float) -> np.ndarray:
    """y = s(1, ..., 1) with g(y, y) = 2t."""
    ones = np.ones(len(g))
    return math.sqrt(2.0 * t / float(ones @ g @ ones)) * ones


def sweep_rows(cfg: RunConfig, t_max: float, steps: int) -> list:
    man = cfg.manifold()
    w = cfg.weight_function()
    x = np.zeros(man.dim)
    g = bm.metric_at(man, x)
    rows = []
    for t in np.linspace(0.0, t_max, steps):
        t = float(t)
        a, da, _ = wt.eval_weight(w, t)
        f1, f2, f3 = wt.f_coeffs(w, t)
        point = bm.make_point(man, x, diagonal_fiber(g, t))
        rows.append((
            t, wt.r_of(t), a, da, wt.L_of(w, t), f1, f2, f3,
            -(f2 + 2.0 * t * f3) / a, -f2 / a,
            cf.scalar_tilde(point, w),
            wt.scal_ode_lhs(w, cfg.curvature, man.dim, t),
        ))
    return rows


def cmd_sweep(cfg: RunConfig, t_max: float, steps: int, output: str = "csv") -> tuple:
    if not (t_max > 0 and math.isfinite(t_max)):
        raise _Usage("--t-max must be positive")
    if steps < 2:
        raise _Usage("--steps must be at least 2")
    rows = sweep_rows(cfg, t_max, steps)
    if output == "json":
        return EXIT_OK, _json({"config": cfg.to_dict(), "rows": [dict(zip(SWEEP_COLUMNS, r)) for r in rows]})
    if output == "text":
        lines = ["".join(f"{c:>13}" for c in SWEEP_COLUMNS)]
        lines += ["".join(f"{v:>13.5g}" for v in r) for r in rows]
        return EXIT_OK, "\n".join(lines) + "\n"
    return EXIT_OK, _csv(SWEEP_COLUMNS, rows)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = config_from_args(args)
        if args.command == "check":
            code, text = cmd_check(cfg, args.output or "text")
        elif args.command == "sectional":
            m = cfg.manifold().dim
            x = _vector(args.x, m, "x") if args.x else np.zeros(m)
            y = _vector(args.y, m, "y") if args.y else np.eye(m)[0]
            code, text = cmd_sectional(cfg, x, y, args.output or "text")
        else:
            code, text = cmd_sweep(cfg, args.t_max, args.steps, args.output or "csv")
    except _Usage as exc:
        print(f"tanbundle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TanBundleError, ValueError, OSError) as exc:
        print(f"tanbundle: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
