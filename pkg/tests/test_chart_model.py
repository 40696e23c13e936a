import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hetcycle.chart_model import (
    MU, NU, ChartDomain, CrossingBelowChartError, CrossingOffAxisError, CrossingUnfoldingError,
    CurveFamily, DegenerateHessianError, DomainError, FlatXDirectionError, IrregularCrossingError,
    NotTangentError, OnStrongAxisError, ParamPoint, SaddleSpectrum, SpectrumError, SurfaceFamily,
    TangencyType, TangencyUnfoldingError, check_generic_conditions, classify, critical_point,
    evaluate_surface, surface_jet, surface_param_partial, synthesize_family)
from hetcycle.poly import MPoly
from oracles import grad_norm_fd, grid_refined_critical_point, surface_value


def bowl(**over):
    kw = dict(center_u=0.5, center_v=0.4, coeff_a=MPoly.affine(0.0, 1.0, 0.0),
              coeff_b=-1.0, coeff_c=0.0, coeff_d=-1.0)
    kw.update(over)
    return SurfaceFamily(**kw)


def strand(**over):
    kw = dict(x_of_t=MPoly.var(3, 2), y_of_t=MPoly.var(3, NU, 0.5), z_of_t=MPoly.const(3, 0.4))
    kw.update(over)
    return CurveFamily(**kw)


# -- evaluate_surface ---------------------------------------------------------

def test_evaluate_at_center_of_pure_quadratic():
    z, g, H = evaluate_surface(bowl(), ParamPoint(), 0.5, 0.4)
    assert z == 0.0
    assert np.array_equal(g, [0.0, 0.0])
    assert np.array_equal(H, [[-1.0, 0.0], [0.0, -1.0]])


def test_evaluate_off_center_against_direct_formula():
    surf = bowl()
    z, g, _ = evaluate_surface(surf, ParamPoint(), 0.6, 0.4)
    assert z == pytest.approx(-0.005, abs=1e-15)
    assert g == pytest.approx([-0.1, 0.0], abs=1e-15)
    assert z == pytest.approx(surface_value(surf, 0.0, 0.0, 0.6, 0.4), abs=1e-15)


def test_constant_term_follows_mu():
    z, _, _ = evaluate_surface(bowl(), ParamPoint(0.25, 0.0), 0.5, 0.4)
    assert z == 0.25


def test_evaluate_rejects_points_outside_domain():
    surf = bowl(domain=(0.0, 1.0, 0.0, 1.0))
    with pytest.raises(DomainError):
        evaluate_surface(surf, ParamPoint(), 1.5, 0.4)


def test_surface_jet_matches_direct_formula_with_cubic_terms(elliptic_family):
    surf, _ = elliptic_family
    p = ParamPoint(0.03, -0.02)
    for x, y in [(0.35, 0.4), (0.5, 0.55), (0.42, 0.31)]:
        z, _, _ = surface_jet(surf, p, x, y)
        assert z == pytest.approx(surface_value(surf, p.mu, p.nu, x, y), abs=1e-14)


@pytest.mark.parametrize("index", [MU, NU])
def test_param_partial_matches_finite_difference(elliptic_family, index):
    surf, _ = elliptic_family
    x, y, mu, nu, h = 0.41, 0.47, 0.02, -0.01, 1e-6
    shift = (h, 0.0) if index == MU else (0.0, h)
    fd = (surface_value(surf, mu + shift[0], nu + shift[1], x, y)
          - surface_value(surf, mu - shift[0], nu - shift[1], x, y)) / (2 * h)
    exact = surface_param_partial(surf, ParamPoint(mu, nu), x, y, index)
    assert exact == pytest.approx(fd, abs=1e-9)


# -- critical_point -----------------------------------------------------------

def test_critical_point_of_pure_quadratic_is_stored_center():
    assert critical_point(bowl(), ParamPoint()) == (0.5, 0.4)


def test_critical_point_with_cubic_term_matches_grid_refinement():
    surf = bowl(higher_order=(((3, 0), 0.1),), coeff_c=0.2)
    p = ParamPoint(0.01, 0.02)
    u, v = critical_point(surf, p)
    ou, ov = grid_refined_critical_point(surf, p.mu, p.nu, (0.52, 0.38))
    assert abs(u - ou) < 1e-10 and abs(v - ov) < 1e-10


def test_critical_point_tracks_moving_center():
    surf = bowl(center_u=MPoly.affine(0.5, 1.0, 0.0))
    u, v = critical_point(surf, ParamPoint(0.1, 0.0))
    assert u == pytest.approx(0.6, abs=1e-15) and v == 0.4


@pytest.mark.parametrize("seed", range(10))
def test_critical_point_gradient_vanishes_on_generator_output(spectrum, seed):
    for kind in TangencyType:
        surf, curve = synthesize_family(kind, spectrum, seed)
        for mu, nu in [(0.0, 0.0), (0.05, -0.03), (-0.08, 0.06)]:
            u, v = critical_point(surf, ParamPoint(mu, nu))
            _, g, _ = evaluate_surface(surf, ParamPoint(mu, nu), u, v)
            assert np.linalg.norm(g) < 1e-12
            assert grad_norm_fd(surf, mu, nu, u, v) < 1e-8


# -- classify -----------------------------------------------------------------

@pytest.mark.parametrize("b,c,d,kind", [
    (-1.0, 0.0, -1.0, TangencyType.ELLIPTIC),
    (1.0, 0.0, -1.0, TangencyType.HYPERBOLIC),
    (2.0, 3.0, 4.0, TangencyType.HYPERBOLIC),
])
def test_classify_examples(b, c, d, kind):
    assert classify(bowl(coeff_b=b, coeff_c=c, coeff_d=d)) is kind


unit = st.floats(-1, 1, allow_nan=False)


@given(unit, unit, unit, unit, unit, unit)
@settings(max_examples=200, deadline=None)
def test_classify_stable_under_small_perturbation(b, c, d, db, dc, dd):
    det = b * d - c * c
    assume(abs(b) > 1e-3 and abs(det) > 1e-3)
    surf = bowl(coeff_b=b, coeff_c=c, coeff_d=d)
    eps = 0.1 * abs(det) * 0.999
    pert = bowl(coeff_b=b + eps * db, coeff_c=c + eps * dc, coeff_d=d + eps * dd)
    assert classify(pert) is classify(surf)


# -- constructor rejections ---------------------------------------------------

SURFACE_VIOLATIONS = {
    "degenerate hessian": (dict(coeff_b=1.0, coeff_c=1.0, coeff_d=1.0), DegenerateHessianError),
    "b vanishes": (dict(coeff_b=0.0, coeff_c=1.0), FlatXDirectionError),
    "eta0 vanishes": (dict(coeff_a=MPoly.affine(0.0, 0.0, 1.0)), TangencyUnfoldingError),
    "v0 vanishes": (dict(center_v=0.0), OnStrongAxisError),
    "not tangent": (dict(coeff_a=MPoly.affine(0.1, 1.0, 0.0)), NotTangentError),
    "center outside": (dict(domain=(0.6, 1.0, 0.0, 1.0)), DomainError),
}

CURVE_VIOLATIONS = {
    "x flat": (dict(x_of_t=MPoly.from_terms(3, [((0, 0, 2), 1.0)])), IrregularCrossingError),
    "crossing below": (dict(z_of_t=MPoly.const(3, -0.2)), CrossingBelowChartError),
    "crossing off axis": (dict(y_of_t=MPoly.affine(0.1, 0.0, 0.5, 0.0)), CrossingOffAxisError),
    "no unfolding": (dict(y_of_t=MPoly.var(3, MU, 0.5)), CrossingUnfoldingError),
}


@pytest.mark.parametrize("name", sorted(SURFACE_VIOLATIONS))
def test_surface_rejects_each_violation(name):
    over, err = SURFACE_VIOLATIONS[name]
    with pytest.raises(err):
        bowl(**over)


@pytest.mark.parametrize("name", sorted(CURVE_VIOLATIONS))
def test_curve_rejects_each_violation(name):
    over, err = CURVE_VIOLATIONS[name]
    with pytest.raises(err):
        strand(**over)


def test_rejections_are_distinct_types():
    errs = [e for _, e in SURFACE_VIOLATIONS.values()] + [e for _, e in CURVE_VIOLATIONS.values()]
    assert len(set(errs)) == len(errs)


@pytest.mark.parametrize("abg", [(2, 3, 0.5), (4, 2, 1.5), (4, 0.5, 0.2), (4, 2, 0.0)])
def test_spectrum_ordering_enforced(abg):
    with pytest.raises(SpectrumError):
        SaddleSpectrum(*abg)


def test_chart_domain_rejects_outside_points():
    dom = ChartDomain(1.0)
    assert dom.contains((0.5, -0.5, 0.9))
    with pytest.raises(DomainError):
        dom.require((0.5, 1.2, 0.0))


# -- generic-condition checker ------------------------------------------------

def test_checker_passes_synthesized_elliptic(spectrum, elliptic_family):
    assert check_generic_conditions(spectrum, *elliptic_family).passed()


def test_checker_flags_zero_v0(spectrum):
    surf = SurfaceFamily.unchecked(center_u=0.5, center_v=0.0, coeff_a=MPoly.affine(0, 1, 0),
                                   coeff_b=-1.0, coeff_c=0.0, coeff_d=-1.0)
    rep = check_generic_conditions(spectrum, surf, strand())
    assert not rep.passed("C4")
    assert rep.entry("v0").witness == 0.0
    assert {e.condition for e in rep.failures()} == {"C4"}


def test_checker_flags_spectrum_order():
    rep = check_generic_conditions(SaddleSpectrum.unchecked(2, 3, 0.5), bowl(), strand())
    assert not rep.passed("C1")
    assert rep.passed("C2") and rep.passed("C3") and rep.passed("C4")


def test_report_document_shape(spectrum, elliptic_family):
    doc = check_generic_conditions(spectrum, *elliptic_family).as_dict()
    assert doc["all_passed"] is True
    assert {e["condition"] for e in doc["entries"]} == {"C1", "C2", "C3", "C4"}


# -- generator ----------------------------------------------------------------

def test_generator_types(spectrum, hyperbolic_family):
    surf, _ = hyperbolic_family
    b, c, d = (surf.taylor(ParamPoint())[k] for k in (1, 2, 3))
    assert b * d - c * c < 0
    assert classify(surf) is TangencyType.HYPERBOLIC


def test_generator_is_deterministic(spectrum):
    for kind in TangencyType:
        assert synthesize_family(kind, spectrum, 7) == synthesize_family(kind, spectrum, 7)
        assert synthesize_family(kind, spectrum, 7) != synthesize_family(kind, spectrum, 8)


def test_hundred_consecutive_seeds_pass_checker(spectrum):
    for kind in TangencyType:
        for seed in range(100):
            surf, curve = synthesize_family(kind, spectrum, seed)
            rep = check_generic_conditions(spectrum, surf, curve)
            assert rep.passed(), (kind, seed, rep.failures())
            assert classify(surf) is kind


def test_generator_honours_b_sign(spectrum):
    surf, _ = synthesize_family(TangencyType.ELLIPTIC, spectrum, 3, b_sign=1)
    assert surf.taylor(ParamPoint())[1] > 0
