from __future__ import annotations

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loxoforge.ambient import AmbientSpace
from loxoforge.catalog import build_catalog_surface
from loxoforge.errors import (BadParams, DomainViolation, InconsistentConstants, NearSingularOrbit,
                              WrongCurvatureClass)
from loxoforge.lox import (LoxodromeSpec, arc_length, clairaut_quantity, closed_form_v, fit_closed_form,
                           geodesic_residual, integrand, trace)
from loxoforge.surface import InvariantSurface, closed_form_profile


@pytest.fixture(scope="module")
def sphere():
    return build_catalog_surface("sphere")


def test_spec_validation():
    with pytest.raises(BadParams):
        LoxodromeSpec(0.0)
    with pytest.raises(BadParams):
        LoxodromeSpec(np.pi)
    with pytest.raises(BadParams):
        LoxodromeSpec(1.0, "sideways")
    with pytest.raises(BadParams):
        LoxodromeSpec(1.0, grid=1)


def test_integrand_examples(sphere):
    assert integrand(sphere, LoxodromeSpec(np.pi / 2), 1.1) == 0.0
    assert integrand(sphere, LoxodromeSpec(np.pi / 4), np.pi / 2) == pytest.approx(1.0)


def test_helicoidal_integrand_matches_closed_formula():
    surf = build_catalog_surface("twisted_sphere")
    u = np.random.default_rng(0).uniform(0.3, 2.8, 20)
    r, rp, a = np.sin(u), np.cos(u), 1.0
    for branch, sign in (("plus", 1), ("minus", -1)):
        spec = LoxodromeSpec(np.pi / 5, branch)
        ref = (-a * np.sqrt(1 - rp**2) / (r * np.sqrt(a * a + r * r))
               + sign / np.tan(np.pi / 5) / np.sqrt(a * a + r * r))
        assert np.max(np.abs(integrand(surf, spec, u) - ref)) <= 1e-10


def test_sphere_trace_value(sphere):
    tr = trace(sphere, LoxodromeSpec(np.pi / 4, "plus", np.pi / 2, 0.0, 11), 2.0)
    assert tr.v[-1] == pytest.approx(float(mpmath.log(mpmath.tan(1))), abs=1e-10)
    assert tr.monotone


def test_pseudosphere_trace_value():
    surf = build_catalog_surface("pseudosphere")
    tr = trace(surf, LoxodromeSpec(np.pi / 4, "plus", 0.0, 1.0, 11), 1.0, eps_dom=0.0)
    assert tr.v[-1] == pytest.approx(np.e, abs=1e-10)


@pytest.mark.parametrize("sid", ["sphere", "funnel", "circular_cylinder", "minimal_graph"])
def test_meridian_keeps_v0(sid):
    surf = build_catalog_surface(sid)
    lo, hi = surf.trace_range
    tr = trace(surf, LoxodromeSpec(np.pi / 2, "plus", lo, 0.3, 41), hi)
    assert np.all(tr.v == 0.3)


def test_trace_fields(sphere):
    spec = LoxodromeSpec(np.pi / 3, "minus", 0.5, 0.2, 21)
    tr = trace(sphere, spec, 2.5)
    np.testing.assert_allclose(tr.s, (tr.u - 0.5) / np.sin(np.pi / 3))
    np.testing.assert_allclose(tr.points, sphere.psi(tr.u, tr.v))
    assert tr.v[0] == 0.2 and len(tr) == 21 and not tr.diverging
    # traces may run backwards in u
    back = trace(sphere, LoxodromeSpec(np.pi / 3, "minus", 2.5, 0.0, 21), 0.5)
    assert back.v[-1] == pytest.approx(-(tr.v[-1] - 0.2), abs=1e-10)


def test_domain_and_singular_orbit_errors(sphere):
    with pytest.raises(DomainViolation):
        trace(sphere, LoxodromeSpec(np.pi / 4, "plus", 0.0, 0.0, 5), 1.0)
    with pytest.raises(NearSingularOrbit):
        trace(sphere, LoxodromeSpec(np.pi / 4, "plus", 1e-12, 0.0, 5), 1.0, eps_dom=0.0)


def test_diverging_flag():
    sphere = build_catalog_surface("sphere")
    tr = trace(sphere, LoxodromeSpec(0.002, "plus", np.pi / 2, 0.0, 11), 1e-3, eps_dom=1e-3)
    assert tr.diverging


def test_arc_length_examples():
    assert arc_length(0.0, 1.0, np.pi / 6) == pytest.approx(2.0)
    assert arc_length(0.0, 1.0, np.pi / 2) == 1.0


@settings(max_examples=25, deadline=None)
@given(st.floats(0.1, np.pi - 0.1), st.floats(-2.0, 2.0))
def test_branch_symmetry_on_F_zero_surfaces(theta0, v0):
    surf = build_catalog_surface("sphere")
    plus = trace(surf, LoxodromeSpec(theta0, "plus", 0.3, v0, 31), 2.8)
    minus = trace(surf, LoxodromeSpec(theta0, "minus", 0.3, v0, 31), 2.8)
    assert np.max(np.abs((plus.v - v0) + (minus.v - v0))) <= 1e-10


@pytest.mark.parametrize("branch, sign", [("plus", 1.0), ("minus", -1.0)])
def test_helicoidal_catenoid_closed_form(branch, sign):
    surf = build_catalog_surface("helicoidal_catenoid")
    th = np.pi / 6

    def ref(u):
        return np.sqrt(2) * (1 + sign / np.tan(th)) * np.arctan(u / np.sqrt(2)) - np.arctan(u)

    tr = trace(surf, LoxodromeSpec(th, branch, -3.0, ref(-3.0), 301), 3.0)
    assert np.max(np.abs(tr.v - ref(tr.u))) <= 1e-8


def test_clairaut_quantity_examples(sphere):
    cyl = build_catalog_surface("circular_cylinder")
    q = clairaut_quantity(cyl, trace(cyl, LoxodromeSpec(np.pi / 4, "plus", -1, 0, 11), 1))
    assert np.ptp(q) == 0.0
    q = clairaut_quantity(sphere, trace(sphere, LoxodromeSpec(np.pi / 4, "plus", 0.5, 0, 11), 2.5))
    assert np.ptp(q) > 0.1
    q = clairaut_quantity(sphere, trace(sphere, LoxodromeSpec(np.pi / 2, "plus", 0.5, 0, 11), 2.5))
    assert np.all(q == 0.0)


def test_geodesic_residual_examples(sphere):
    funnel = build_catalog_surface("funnel")
    tr = trace(funnel, LoxodromeSpec(np.pi / 2, "plus", -2.5, 0, 201), 2.5)
    assert geodesic_residual(funnel, tr) <= 1e-6
    cyl = build_catalog_surface("circular_cylinder")
    for theta0 in (np.pi / 8, np.pi / 4, 2.0):
        tr = trace(cyl, LoxodromeSpec(theta0, "plus", -2, 0, 101), 2)
        assert geodesic_residual(cyl, tr) <= 1e-6
    tr = trace(sphere, LoxodromeSpec(np.pi / 4, "plus", 0.5, 0, 201), 2.5)
    assert geodesic_residual(sphere, tr) > 1e-3


def test_helix_on_unrolled_cylinder_is_straight():
    cyl = build_catalog_surface("circular_cylinder")
    tr = trace(cyl, LoxodromeSpec(np.pi / 5, "plus", -2, 0, 51), 2)
    # unrolled coordinates (arc along the circle, height) are (v, u)
    slope = np.diff(tr.v) / np.diff(tr.u)
    assert np.ptp(slope) <= 1e-12
    assert slope[0] == pytest.approx(1 / np.tan(np.pi / 5))


# -- closed forms ---------------------------------------------------------------------
def _rotational(omega, d_omega, dd_omega, xi2, dxi2, domain):
    space = AmbientSpace.euclidean_helicoidal(0.0)
    prof = closed_form_profile(domain, omega, xi2, d_omega, dxi2)
    return InvariantSurface("synthetic", space, prof, omega_u=d_omega, omega_uu=dd_omega,
                            horizontal=True, trace_range=(domain[0] + 0.1, domain[1] - 0.1))


@pytest.mark.parametrize(
    "sid, kind, case",
    [("sphere", "positive", "a>0"), ("circular_cylinder", "flat", "a=0"), ("cone", "flat", "a!=0"),
     ("cosh_rotational", "negative", "a>0"), ("pseudosphere", "negative", "a=0")],
)
@pytest.mark.parametrize("branch", ["plus", "minus"])
def test_closed_forms_match_quadrature(sid, kind, case, branch):
    surf = build_catalog_surface(sid)
    lo, hi = surf.trace_range
    th = np.pi / 5
    cf = fit_closed_form(surf, kind, th, branch, u0=lo, v0=0.3)
    assert cf.case == case
    tr = trace(surf, LoxodromeSpec(th, branch, lo, 0.3, 201), hi)
    assert np.max(np.abs(tr.v - closed_form_v(cf, surf, th, tr.u))) <= 1e-7


def test_negative_curvature_a_below_zero():
    # omega = sinh u has omega^2 - omega_u^2 = -1
    surf = _rotational(np.sinh, np.cosh, np.sinh, lambda u: np.zeros_like(u), lambda u: np.zeros_like(u),
                       (0.2, 2.0))
    cf = fit_closed_form(surf, "negative", np.pi / 3, "plus", u0=0.3, v0=0.0)
    assert cf.case == "a<0"
    u = np.linspace(0.3, 1.9, 40)
    tr_v = [float(mpmath.quad(lambda t: mpmath.cot(mpmath.pi / 3) / mpmath.sinh(t), [0.3, x])) for x in u]
    assert np.max(np.abs(closed_form_v(cf, surf, np.pi / 3, u) - tr_v)) <= 1e-10


def test_sphere_closed_form_equals_log_tan(sphere):
    th = np.pi / 7
    cf = fit_closed_form(sphere, "positive", th, "plus", u0=np.pi / 2, v0=0.0)
    u = np.linspace(0.3, 2.8, 20)
    assert np.max(np.abs(closed_form_v(cf, sphere, th, u) - np.log(np.tan(u / 2)) / np.tan(th))) <= 1e-12


def test_flat_a_zero_is_linear():
    cyl = build_catalog_surface("circular_cylinder")
    cf = fit_closed_form(cyl, "flat", np.pi / 3, "minus", u0=0.0, v0=1.0)
    u = np.linspace(-2, 2, 9)
    np.testing.assert_allclose(closed_form_v(cf, cyl, np.pi / 3, u), 1.0 - u / np.tan(np.pi / 3))


def test_negative_a_zero_example():
    # omega = e^u, K = -1: v = -/+ cot(theta0) e^{-u} + b
    surf = _rotational(np.exp, np.exp, np.exp, lambda u: np.zeros_like(u), lambda u: np.zeros_like(u),
                       (-1.0, 1.0))
    cf = fit_closed_form(surf, "negative", np.pi / 4, "plus", u0=0.0, v0=0.0)
    u = np.linspace(-0.8, 0.8, 9)
    np.testing.assert_allclose(closed_form_v(cf, surf, np.pi / 4, u), 1.0 - np.exp(-u), atol=1e-14)


def test_closed_form_errors(sphere):
    with pytest.raises(WrongCurvatureClass):
        fit_closed_form(sphere, "negative", np.pi / 4)
    # K = 1 profile whose first integral is off by a non-constant term
    wobbly = _rotational(lambda u: np.sin(u) + 1e-4 * u**3, lambda u: np.cos(u) + 3e-4 * u**2,
                         lambda u: -np.sin(u), lambda u: np.zeros_like(u), lambda u: np.zeros_like(u),
                         (0.2, 2.8))
    with pytest.raises((InconsistentConstants, WrongCurvatureClass)):
        fit_closed_form(wobbly, "positive", np.pi / 4)
    with pytest.raises(BadParams):
        fit_closed_form(sphere, "elliptic", np.pi / 4)
