"""Custom metrics and weights read from small text files.

Grammar: numbers, identifiers ``x1..xm`` (metric files) or ``t`` (weight
files), ``pi``, the operators ``+ - * / ^`` and the functions ``exp``,
``sqrt``, ``sin``, ``cos``.  Anything else is rejected before sympy sees
the text.

Metric file::

    # hyperbolic half-plane shifted into the unit ball
    dim = 2
    radius = 0.9
    g11 = 1/(2 + x2)^2
    g22 = 1/(2 + x2)^2

Unlisted off-diagonal entries are zero; ``gji`` mirrors ``gij``.

Weight file::

    a = 1/(1 + t)
"""
from __future__ import annotations

import ast
import re
from pathlib import Path

import numpy as np
import sympy

from .base_geometry import ChartedManifold
from .weights import WeightFunction

FUNCTIONS = {"exp", "sqrt", "sin", "cos"}
_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_UNARY = (ast.UAdd, ast.USub)


class ExpressionError(ValueError):
    pass


def _validate(node, names):
    if isinstance(node, ast.Expression):
        return _validate(node.body, names)
    if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
        _validate(node.left, names)
        _validate(node.right, names)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, _UNARY):
        _validate(node.operand, names)
    elif isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        pass
    elif isinstance(node, ast.Name) and (node.id in names or node.id == "pi"):
        pass
    elif (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in FUNCTIONS
        and len(node.args) == 1
        and not node.keywords
    ):
        _validate(node.args[0], names)
    else:
        raise ExpressionError(f"unsupported syntax: {ast.dump(node)[:60]}")


def parse_expression(text: str, names) -> sympy.Expr:
    source = text.strip().replace("^", "**")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
    _validate(tree, set(names))
    symbols = {n: sympy.Symbol(n, real=True) for n in names}
    symbols.update({f: getattr(sympy, f) for f in FUNCTIONS})
    symbols["pi"] = sympy.pi
    return sympy.sympify(source, locals=symbols)


def _assignments(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ExpressionError(f"line {lineno}: expected 'name = expression'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def weight_from_text(text: str, name: str = "custom") -> WeightFunction:
    entries = _assignments(text)
    if "a" not in entries:
        raise ExpressionError("weight file must define 'a = ...'")
    t = sympy.Symbol("t", real=True)
    expr = parse_expression(entries["a"], ["t"])
    funcs = [sympy.lambdify(t, e, "math") for e in (expr, sympy.diff(expr, t), sympy.diff(expr, t, 2))]

    def derivs(tv):
        return tuple(float(f(tv)) for f in funcs)

    return WeightFunction(name, derivs, (entries["a"],))


def manifold_from_text(text: str, name: str = "custom") -> ChartedManifold:
    entries = _assignments(text)
    try:
        dim = int(entries.pop("dim"))
    except KeyError:
        raise ExpressionError("metric file must define 'dim = m'") from None
    radius = float(entries.pop("radius", "1"))
    names = [f"x{i + 1}" for i in range(dim)]
    symbols = [sympy.Symbol(n, real=True) for n in names]
    pattern = re.compile(r"g(\d)(\d)$")
    table = [[sympy.Integer(0)] * dim for _ in range(dim)]
    seen = set()
    for key, value in entries.items():
        match = pattern.match(key)
        if not match:
            raise ExpressionError(f"unknown entry {key!r}")
        i, j = int(match.group(1)) - 1, int(match.group(2)) - 1
        if not (0 <= i < dim and 0 <= j < dim):
            raise ExpressionError(f"entry {key!r} outside a {dim}x{dim} metric")
        if (j, i) in seen and (i, j) not in seen:
            raise ExpressionError(f"both {key!r} and its transpose given")
        expr = parse_expression(value, names)
        table[i][j] = table[j][i] = expr
        seen.add((i, j))
    for i in range(dim):
        if (i, i) not in seen:
            raise ExpressionError(f"diagonal entry g{i + 1}{i + 1} missing")
    fn = sympy.lambdify([symbols], sympy.Matrix(table), "numpy")

    def metric(x):
        return np.array(fn(np.asarray(x, dtype=float)), dtype=float).reshape(dim, dim)

    return ChartedManifold(dim=dim, metric_fn=metric, radius=radius, name=name)


def load_weight(path) -> WeightFunction:
    p = Path(path)
    return weight_from_text(p.read_text(), p.stem)


def load_manifold(path) -> ChartedManifold:
    p = Path(path)
    return manifold_from_text(p.read_text(), p.stem)
