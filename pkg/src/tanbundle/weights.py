"""The weight family a(t) scaling the vertical part of the bundle metric.

``t`` is the energy density of the fiber vector and ``r = sqrt(1 + 2t)``.
Presets supply a, a' and a'' in closed form; finite differences are kept
for tests only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, WeightValidityError


@dataclass(frozen=True)
class WeightFunction:
    name: str
    derivs: Callable[[float], tuple] = field(repr=False)  # t -> (a, a', a'')
    params: tuple = ()

    def __call__(self, t: float) -> tuple:
        return eval_weight(self, t)


def eval_weight(w: WeightFunction, t: float) -> tuple:
    """Return ``(a, a', a'')`` at energy density ``t``."""
    t = float(t)
    if t < 0 or not math.isfinite(t):
        raise DomainError(f"energy density must be finite and >= 0, got {t}")
    a, da, d2a = (float(v) for v in w.derivs(t))
    if not a > 0:
        raise WeightValidityError(f"weight {w.name} is not positive at t={t}: a={a}")
    return a, da, d2a


def r_of(t: float) -> float:
    return math.sqrt(1.0 + 2.0 * t)


# ------------------------------------------------------------------ presets

def cheeger_gromoll() -> WeightFunction:
    def derivs(t):
        s = 1.0 + 2.0 * t
        return 1.0 / s, -2.0 / s**2, 8.0 / s**3

    return WeightFunction("cheeger_gromoll", derivs)


def almost_kaehler() -> WeightFunction:
    """a = 2 e^(r-1) / (1 + r), the solution of a'/a = 1/(1+r) with a(0) = 1."""

    def derivs(t):
        r = r_of(t)
        a = 2.0 * math.exp(r - 1.0) / (1.0 + r)
        return a, a / (1.0 + r), a * (r - 1.0) / (r * (1.0 + r) ** 2)

    return WeightFunction("almost_kaehler", derivs)


def flat() -> WeightFunction:
    """a = 4 e^(2(r-1)) / (1 + r)^2, normalised to a(0) = 1."""

    def derivs(t):
        r = r_of(t)
        a = 4.0 * math.exp(2.0 * (r - 1.0)) / (1.0 + r) ** 2
        return a, 2.0 * a / (1.0 + r), a * (4.0 * r - 2.0) / (r * (1.0 + r) ** 2)

    return WeightFunction("flat", derivs)


def integrable(c: float, k: float) -> WeightFunction:
    """a(r) = e^(2r) / ((1+r)(c e^(2r)(r-1) + k(1+r))), c >= 0, k > 0."""
    c = float(c)
    k = float(k)
    if c < 0:
        raise ValueError("integrable weight needs c >= 0")
    if k <= 0:
        raise ValueError("integrable weight needs k > 0")

    def derivs(t):
        r = r_of(t)
        e2 = math.exp(2.0 * r)
        den = c * e2 * (r - 1.0) + k * (1.0 + r)
        den_r = c * e2 * (2.0 * r - 1.0) + k
        den_rr = 4.0 * c * r * e2
        a = e2 / ((1.0 + r) * den)
        # logarithmic derivative in r and its r-derivative
        ell = 2.0 - 1.0 / (1.0 + r) - den_r / den
        ell_r = 1.0 / (1.0 + r) ** 2 - (den_rr * den - den_r**2) / den**2
        da = a * ell / r  # dt = r dr
        d2a = a * (ell**2 + ell_r - ell / r) / r**2
        return a, da, d2a

    return WeightFunction("integrable", derivs, (c, k))


def constant(k: float = 1.0) -> WeightFunction:
    k = float(k)
    if k <= 0:
        raise WeightValidityError("constant weight must be positive")
    return WeightFunction("constant", lambda t: (k, 0.0, 0.0), (k,))


PRESETS = {
    "cheeger_gromoll": cheeger_gromoll,
    "almost_kaehler": almost_kaehler,
    "flat": flat,
    "integrable": integrable,
    "constant": constant,
}


def preset(name: str, **params) -> WeightFunction:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown weight preset {name!r}; choose from {sorted(PRESETS)}") from None
    return factory(**params)


# ---------------------------------------------------------- derived scalars

def L_of(w: WeightFunction, t: float) -> float:
    a, da, _ = eval_weight(w, t)
    return da / (2.0 * a)


def dL_of(w: WeightFunction, t: float) -> float:
    a, da, d2a = eval_weight(w, t)
    return d2a / (2.0 * a) - da * da / (2.0 * a * a)


def f_coeffs(w: WeightFunction, t: float) -> tuple:
    """(F1, F2, F3) of the vertical curvature block."""
    L = L_of(w, t)
    dL = dL_of(w, t)
    r2 = 1.0 + 2.0 * t
    f1 = dL + L * (1.0 - L) / r2
    f2 = L * L - (1.0 - L) ** 2 / r2
    f3 = (dL - L * L) / r2 + (1.0 - L) / r2**2
    return f1, f2, f3


def almost_kaehler_residual(w: WeightFunction, t: float) -> float:
    """a'/a - 1/(1+r); vanishes identically for the almost_kaehler preset."""
    a, da, _ = eval_weight(w, t)
    return da / a - 1.0 / (1.0 + r_of(t))


def kaehler_obstruction(w: WeightFunction, t: float) -> float:
    """(2a - (1+r)a') / (2 a^2 r (1+r)).

    This must equal the base's constant curvature for the horizontal Nijenhuis
    block to vanish, so a Kähler structure needs it constant in t.
    """
    a, da, _ = eval_weight(w, t)
    r = r_of(t)
    return (2.0 * a - (1.0 + r) * da) / (2.0 * a * a * r * (1.0 + r))


def scal_ode_lhs(w: WeightFunction, c: float, m: int, t: float) -> float:
    """Left-hand side of the constant-scalar-curvature ODE over a space form M(c)."""
    a, da, d2a = eval_weight(w, t)
    s = 1.0 + 2.0 * t
    cc = (c + 2.0 * c * t) ** 2
    inner = (
        -2.0 * (m + 2.0 * (m - 2.0) * t) * a**2
        - 4.0 * t * cc * a**3
        + 6.0 * t * cc * a**4
        + (m - 6.0) * t * s * da**2
        + 2.0 * a * ((m + 2.0 * (m - 1.0) * t) * da + 2.0 * t * s * d2a)
    )
    return -inner / (2.0 * s**2 * a**3)


def spread(values) -> float:
    values = np.asarray(values, dtype=float)
    return float(values.max() - values.min())
