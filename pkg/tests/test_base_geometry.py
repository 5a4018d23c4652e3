import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tanbundle import base_geometry as bg
from tanbundle import diff
from tanbundle.errors import DegenerateInputError, DomainError, ModelError

from conftest import BASES


def _inside(rng, man, frac=0.5):
    d = rng.normal(size=man.dim)
    return d / np.linalg.norm(d) * frac * man.radius * rng.uniform()


def test_euclidean_metric_is_identity():
    np.testing.assert_array_equal(bg.metric_at(bg.euclidean(2), [0.3, -0.2]), np.eye(2))


def test_sphere_metric_values():
    man = bg.sphere(1.0, 2)
    np.testing.assert_allclose(bg.metric_at(man, [0.0, 0.0]), np.eye(2))
    # |x|^2 = 4 needs a wider chart than the preset offers
    wide = bg.ChartedManifold(2, man.metric_fn, radius=3.0)
    np.testing.assert_allclose(bg.metric_at(wide, [2.0, 0.0]), 0.25 * np.eye(2))


def test_outside_chart_raises():
    with pytest.raises(DomainError):
        bg.metric_at(bg.sphere(1.0, 2), [1.5, 0.0])


def test_indefinite_metric_is_a_model_error():
    bad = bg.ChartedManifold(2, lambda x: np.diag([1.0, -1.0]))
    with pytest.raises(ModelError):
        bg.metric_at(bad, [0.0, 0.0])


@pytest.mark.parametrize("c,radius", [(0.0, 1.0), (2.0, 1.0), (-0.5, 1.0), (-4.0, 0.5)])
def test_chart_radius(c, radius):
    assert bg.space_form(c, 2).radius == pytest.approx(radius)


def test_preset_validation():
    with pytest.raises(ValueError):
        bg.sphere(-1.0)
    with pytest.raises(ValueError):
        bg.hyperbolic(1.0)


@pytest.mark.parametrize("name", list(BASES))
@pytest.mark.parametrize("m", [2, 3])
def test_closed_christoffel_matches_numeric(rng, name, m):
    man = BASES[name](m)
    for _ in range(5):
        x = _inside(rng, man)
        closed = bg.christoffel_at(man, x).components
        numeric = bg.christoffel_at(man, x, numeric=True).components
        np.testing.assert_allclose(closed, numeric, atol=1e-8)
        np.testing.assert_allclose(closed, closed.transpose(0, 2, 1), atol=0)


def test_christoffel_vanishes_at_origin_of_sphere_chart():
    gam = bg.christoffel_at(bg.sphere(1.0, 2), [0.0, 0.0], numeric=True).components
    assert np.abs(gam).max() < 1e-10


@pytest.mark.parametrize("name", list(BASES))
def test_closed_riemann_matches_numeric(rng, name):
    man = BASES[name](3)
    x = _inside(rng, man)
    np.testing.assert_allclose(
        bg.riemann_at(man, x).components, bg.riemann_at(man, x, numeric=True).components, atol=1e-6
    )


@pytest.mark.parametrize("c", [1.0, -1.0, 0.5, 2.0])
def test_space_form_identity_numeric(rng, c):
    man = bg.space_form(c, 3)
    x = _inside(rng, man)
    g = bg.metric_at(man, x)
    riem = bg.riemann_at(man, x, numeric=True).components
    X, Y, Z = rng.normal(size=(3, 3))
    lhs = bg.curvature_operator(riem, X, Y, Z)
    rhs = c * ((Y @ g @ Z) * X - (X @ g @ Z) * Y)
    np.testing.assert_allclose(lhs, rhs, atol=1e-6)


@pytest.mark.parametrize("c", [1.0, -1.0])
def test_sectional_equals_c(rng, c):
    man = bg.space_form(c, 2)
    for _ in range(5):
        x = _inside(rng, man)
        X, Y = rng.normal(size=(2, 2))
        assert bg.sectional_at(man, x, X, Y) == pytest.approx(c, abs=1e-12)
        assert bg.sectional_at(man, x, X, Y, numeric=True) == pytest.approx(c, abs=1e-6)


@given(st.floats(0.1, 10.0), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3), st.floats(-3, 3))
@settings(max_examples=40, deadline=None)
def test_sectional_scale_invariant(s, a, b, c_, d):
    X, Y = np.array([a, b]), np.array([c_, d])
    if abs(a * d - b * c_) < 1e-3:
        return
    man = bg.sphere(1.0, 2)
    x = np.array([0.2, -0.1])
    assert bg.sectional_at(man, x, s * X, Y) == pytest.approx(bg.sectional_at(man, x, X, Y), rel=1e-10)


def test_sectional_degenerate_plane():
    with pytest.raises(DegenerateInputError):
        bg.sectional_at(bg.sphere(1.0, 2), [0.1, 0.1], [1.0, 2.0], [2.0, 4.0])


def test_euclidean_tensors_vanish():
    man = bg.euclidean(2)
    assert not bg.riemann_at(man, [0.1, 0.2]).components.any()
    assert not bg.nabla_riemann_at(man, [0.1, 0.2]).components.any()
    assert bg.sectional_at(man, [0.0, 0.0], [1, 0], [0, 1]) == 0.0


def test_space_form_nabla_riemann_is_zero_even_numerically(rng):
    man = bg.sphere(1.0, 2)
    x = _inside(rng, man, 0.3)
    assert not bg.nabla_riemann_at(man, x).components.any()
    assert np.abs(bg.nabla_riemann_at(man, x, numeric=True).components).max() < 1e-4


def _generic():
    def metric(x):
        return np.array([[1.0 + x[0] ** 2, 0.3 * x[0] * x[1]], [0.3 * x[0] * x[1], math.exp(x[0]) + x[1] ** 2]])

    return bg.ChartedManifold(2, metric, radius=1.0, name="generic")


def test_generic_metric_bianchi_identities():
    man = _generic()
    x = np.array([0.2, -0.1])
    riem = bg.riemann_at(man, x).components
    # antisymmetry and first Bianchi
    np.testing.assert_allclose(riem, -riem.transpose(1, 0, 2, 3), atol=1e-9)
    bianchi1 = riem + riem.transpose(1, 2, 0, 3) + riem.transpose(2, 0, 1, 3)
    assert np.abs(bianchi1).max() < 1e-6
    # second Bianchi: cyclic over (a, i, j)
    nr = bg.nabla_riemann_at(man, x).components
    bianchi2 = nr + nr.transpose(1, 2, 0, 3, 4) + nr.transpose(2, 0, 1, 3, 4)
    assert np.abs(bianchi2).max() < 1e-3
    lowered = bg.riemann_at(man, x, lowered=True).components
    assert lowered.shape == (2, 2, 2, 2)


def test_metric_compatibility():
    man = _generic()
    x = np.array([0.1, 0.25])
    gamma = bg.christoffel_at(man, x).components
    g = bg.metric_at(man, x)
    dg = diff.gradient(lambda s: bg.metric_at(man, s), x)
    # nabla_c g_ab = d_c g_ab - Gamma^k_ca g_kb - Gamma^k_cb g_ak
    nabla_g = dg - np.einsum("kca,kb->cab", gamma, g) - np.einsum("kcb,ak->cab", gamma, g)
    assert np.abs(nabla_g).max() < 1e-8


def test_generic_has_no_closed_forms():
    man = _generic()
    assert man.model == "generic" and not man.is_space_form
    assert bg.sphere(1.0).model == "space_form"


def test_tensor_value_metadata():
    tv = bg.christoffel_at(bg.sphere(1.0, 3), [0.1, 0.0, 0.2])
    assert tv.rank == 3 and tv.shape == (3, 3, 3)
    assert np.asarray(tv).shape == (3, 3, 3)


def test_domain_margin_enforced_for_numeric_stencils():
    man = bg.sphere(1.0, 2)
    with pytest.raises(DomainError):
        bg.riemann_at(man, [0.9995, 0.0], numeric=True)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_orthonormal_frame(rng, m):
    A = rng.normal(size=(m, m))
    g = A @ A.T + m * np.eye(m)
    first = rng.normal(size=m)
    e = bg.orthonormal_frame(g, first)
    np.testing.assert_allclose(e.T @ g @ e, np.eye(m), atol=1e-12)
    np.testing.assert_allclose(e[:, 0], first / math.sqrt(first @ g @ first))
    np.testing.assert_allclose(bg.orthonormal_frame(g, first), e, atol=0)
