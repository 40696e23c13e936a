import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hetcycle.chart_model import (CurveFamily, ParamPoint, SurfaceFamily, critical_point,
                                  surface_jet)
from hetcycle.geometry import (ContactClass, CurveJet, GapJet, NonTangentDirectionError,
                               RegularityError, contact_class, curvature, curve_jet, gap_jet,
                               graph_gap_jet, normal_curvature, quadratic_by_curvature)
from hetcycle.inclination import iterate_strand
from hetcycle.poly import MPoly
from oracles import central_diff, central_diff2, normal_section_curvature, surface_value


def curve_from_t(xc, yc, zc):
    """Curve whose components are polynomials in t given as coefficient lists."""
    mk = lambda cs: MPoly.from_terms(3, [((0, 0, k), c) for k, c in enumerate(cs)])  # noqa: E731
    return CurveFamily.unchecked(x_of_t=mk(xc), y_of_t=mk(yc), z_of_t=mk(zc))


def quad_surface(a, b, c, d, u=0.5, v=0.4, higher=()):
    return SurfaceFamily.unchecked(center_u=u, center_v=v, coeff_a=a, coeff_b=b, coeff_c=c,
                                   coeff_d=d, higher_order=higher)


P0 = ParamPoint()


# -- curve_jet ----------------------------------------------------------------

def test_jet_of_straight_strand():
    j = curve_jet(curve_from_t([0, 1], [0.3], [0.5]), P0, 0.0)
    assert np.array_equal(j.point, [0, 0.3, 0.5])
    assert np.array_equal(j.first, [1, 0, 0])
    assert np.array_equal(j.second, [0, 0, 0])


def test_jet_of_parabola():
    j = curve_jet(curve_from_t([0, 1], [0, 0, 1], [0]), P0, 1.0)
    assert np.array_equal(j.first, [1, 2, 0])
    assert np.array_equal(j.second, [0, 2, 0])


def test_jet_matches_finite_differences(elliptic_family):
    # synthesized components have degree <= 3 in t, so the second difference
    # at step 1e-3 has no truncation error and little round-off
    _, curve = elliptic_family
    p = ParamPoint(0.02, -0.03)
    for t in (-0.6, 0.0, 0.35):
        j = curve_jet(curve, p, t)
        pos = lambda s: curve.point(p, s)  # noqa: E731
        assert np.allclose(j.first, central_diff(pos, t, 1e-5), atol=1e-8, rtol=0)
        assert np.allclose(j.second, central_diff2(pos, t, 1e-3), atol=1e-8, rtol=0)


# -- curvature ----------------------------------------------------------------

def test_circle_curvature():
    assert curvature(CurveJet([2, 0, 0], [0, 2, 0], [-2, 0, 0])) == pytest.approx(0.5)


def test_line_curvature_is_zero():
    assert curvature(CurveJet([0, 0, 0], [1, 2, 3], [0, 0, 0])) == 0.0


def test_cross_product_curvature():
    assert curvature(CurveJet([0, 0, 0], [1, 0, 0], [0, 3, 4])) == pytest.approx(5.0)


def test_zero_velocity_rejected():
    with pytest.raises(RegularityError):
        curvature(CurveJet([0, 0, 0], [0, 0, 0], [1, 0, 0]))


cub = st.lists(st.floats(-2, 2, allow_nan=False), min_size=4, max_size=4)


@given(cub, cub, cub, st.floats(-0.45, 0.45))
@settings(max_examples=100, deadline=None)
def test_curvature_invariant_under_doubling_speed(xc, yc, zc, t):
    c = curve_from_t(xc, yc, zc)
    j = curve_jet(c, P0, t)
    assume(np.linalg.norm(j.first) > 1e-2)
    doubled = curve_from_t(*[[v * 2**k for k, v in enumerate(cs)] for cs in (xc, yc, zc)])
    j2 = curve_jet(doubled, P0, t / 2)
    assert curvature(j2) == pytest.approx(curvature(j), rel=1e-12, abs=1e-12)


# -- normal_curvature ---------------------------------------------------------

def test_bowl_normal_curvature_at_critical_point():
    surf = quad_surface(0.0, -1.0, 0.0, -1.0)
    assert normal_curvature(surf, P0, (0.5, 0.4), (1, 0, 0)) == pytest.approx(-1.0, abs=1e-15)


def test_saddle_asymptotic_direction_is_flat():
    surf = quad_surface(0.0, 1.0, 0.0, -1.0)
    w = np.array([1.0, 1.0, 0.0]) / math.sqrt(2)
    assert abs(normal_curvature(surf, P0, (0.5, 0.4), w)) < 1e-15


unit = st.floats(-1.5, 1.5, allow_nan=False)


@given(unit, unit, unit)
@settings(max_examples=100, deadline=None)
def test_asymptotic_directions_of_any_saddle_are_flat(b, c, d):
    assume(abs(b) > 1e-2 and b * d - c * c < -1e-2)
    surf = quad_surface(0.0, b, c, d, higher=(((3, 0), 0.05), ((1, 2), -0.03)))
    u, v = critical_point(surf, P0)
    disc = math.sqrt(c * c - b * d)
    for xi in ((-c + disc) / b, (-c - disc) / b):
        w = np.array([xi, 1.0, 0.0])
        w /= np.linalg.norm(w)
        assert abs(normal_curvature(surf, P0, (u, v), w)) < 1e-10


def test_off_critical_normal_curvature_matches_section_sampling():
    surf = quad_surface(0.02, -1.3, 0.2, -0.8, higher=(((3, 0), 0.05), ((1, 2), -0.04)))
    base = (0.62, 0.31)
    _, grad, _ = surface_jet(surf, P0, *base)
    for dx, dy in [(1.0, 0.0), (0.3, 1.0), (-0.7, 0.5)]:
        w = np.array([dx, dy, grad @ [dx, dy]])
        got = normal_curvature(surf, P0, base, w)
        ref = normal_section_curvature(surf, 0.0, 0.0, base, w)
        assert got == pytest.approx(ref, abs=1e-6)


def test_non_tangent_direction_rejected():
    surf = quad_surface(0.0, -1.0, 0.0, -1.0)
    with pytest.raises(NonTangentDirectionError):
        normal_curvature(surf, P0, (0.6, 0.4), (1.0, 0.0, 0.0))


# -- gap_jet ------------------------------------------------------------------

def test_strand_on_surface_has_zero_gap():
    surf = quad_surface(0.0, -1.0, 0.0, -1.0)
    # z = -(t - 0.5)^2 / 2 along y = v
    c = curve_from_t([0, 1], [0.4], [-0.125, 0.5, -0.5])
    for t in np.linspace(0.2, 0.8, 7):
        g = gap_jet(c, surf, P0, float(t))
        assert abs(g.value) < 1e-15 and abs(g.slope) < 1e-15 and abs(g.bend) < 1e-15


def test_horizontal_strand_over_bowl():
    # surface z = mu0 - (x - u)^2 at y = v; gap is surface minus strand
    mu0, h = 0.25, 0.09
    surf = quad_surface(MPoly.affine(0.0, 1.0, 0.0), -2.0, 0.0, -1.0)
    c = curve_from_t([0, 1], [0.4], [h])
    g = gap_jet(c, surf, ParamPoint(mu0, 0.0), 0.5)
    assert g.value == pytest.approx(mu0 - h, abs=1e-15)
    assert g.slope == 0.0
    assert g.bend == -2.0


def test_gap_slope_matches_finite_difference(elliptic_family):
    surf, _ = elliptic_family
    curve = curve_from_t([0, 1], [0.45, 0.1, -0.2], [0.1, 0.05, 0.3, -0.1])
    p = ParamPoint(0.01, 0.02)
    for t in (0.3, 0.4, 0.5):
        g = gap_jet(curve, surf, p, t)

        def value(s):
            x, y, z = curve.point(p, s)
            return surface_value(surf, p.mu, p.nu, x, y) - z
        assert g.slope == pytest.approx(central_diff(value, t), abs=1e-8)
        assert g.value == pytest.approx(value(t), abs=1e-14)


def test_gap_of_iterate_equals_gap_of_closed_form_curve(spectrum, elliptic_family):
    surf, curve = elliptic_family
    p = ParamPoint(0.01, 0.0)
    s = iterate_strand(spectrum, curve, p, 6)
    # the closed-form iterate as an ordinary curve family in t alone
    closed = curve_from_t([0, 1], list(s.y_poly.coef), list(s.z_poly.coef))
    for t in (-0.3, 0.1, 0.4):
        a = graph_gap_jet(surf, p, s.jet(t), check_domain=False)
        b = graph_gap_jet(surf, p, curve_jet(closed, p, t), check_domain=False)
        assert a.value == pytest.approx(b.value, abs=1e-12)
        assert a.slope == pytest.approx(b.slope, abs=1e-12)
        assert a.bend == pytest.approx(b.bend, abs=1e-12)


# -- contact classification ---------------------------------------------------

@pytest.mark.parametrize("g,cls", [
    (GapJet(0.0, 0.0, 2.0), ContactClass.QUADRATIC_TANGENCY),
    (GapJet(0.0, 1.0, 0.0), ContactClass.TRANSVERSE),
    (GapJet(1e-12, 1e-12, 1e-12), ContactClass.DEGENERATE_TANGENCY),
    (GapJet(0.3, 0.0, 2.0), ContactClass.NO_CONTACT),
])
def test_contact_class(g, cls):
    assert contact_class(g, tol=1e-9) is cls


@pytest.mark.parametrize("ck,sk,expected", [(0.01, 1.0, True), (1.0, 1.0, False),
                                            (0.0, -0.5, True)])
def test_quadratic_by_curvature(ck, sk, expected):
    assert quadratic_by_curvature(ck, sk) is expected


@pytest.mark.parametrize("run", ["elliptic_run", "hyperbolic_run"])
def test_curvature_criterion_agrees_with_contact_class_on_cascade(run, request):
    result, _ = request.getfixturevalue(run)
    assert result.records
    for r in result.records:
        if r.curvature_criterion:
            assert abs(r.gap.bend) > 0
            assert r.contact is ContactClass.QUADRATIC_TANGENCY
