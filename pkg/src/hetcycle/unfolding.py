"""Generic-unfolding diagnostics for cascade tangencies and for the quasi-transverse point.

At a tangency the stable sheet is locally a graph ``y = g_nu(x, z)``; the
tangency unfolds generically when the strand's y-velocity in ``nu`` differs from
the graph's, ``margin = |d y_m/d nu - d g/d nu| > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cascade import CascadeResult, GapContext, TangencyRecord
from .chart_model import (ChartError, CurveFamily, ParamPoint, SaddleSpectrum, SurfaceFamily,
                          surface_jet, surface_param_partial)
from .inclination import crossing_y, strand_nu_velocity
from .solvers import SolverError, newton


class ImplicitGraphError(ChartError):
    """``df/dy`` is too small to write the sheet as ``y = g(x, z)``."""


class QuasiTransverseViolation(ChartError):
    """Fitted ``d(0)`` vanishes: the crossing does not unfold generically."""

    def __init__(self, message: str, d0: float, residual: float):
        super().__init__(message)
        self.d0 = d0
        self.residual = residual


@dataclass
class UnfoldingDiagnostic:
    m: int
    curve_speed: float
    graph_speed: float
    margin: float
    gap_nu_speed: float
    growth_ratio: float | None = None
    verified: bool = True


def resolve_graph_y(surf: SurfaceFamily, mu0: float, nu: float, x: float, z: float,
                    y_guess: float | None = None) -> float:
    p = ParamPoint(mu0, nu)
    y0 = surf.center_v(mu0, nu) if y_guess is None else y_guess
    try:
        return newton(lambda y: surface_jet(surf, p, x, y)[0] - z,
                      lambda y: surface_jet(surf, p, x, y)[1][1], y0)
    except SolverError as exc:
        raise ImplicitGraphError(f"cannot solve f(x, y) = z for y: {exc}") from exc


def graph_nu_slope(surf: SurfaceFamily, mu0: float, nu: float, x: float, z: float,
                   y_guess: float | None = None, tol: float = 1e-10) -> float:
    """``d g/d nu`` for the local graph ``y = g_nu(x, z)`` of the sheet."""
    y = resolve_graph_y(surf, mu0, nu, x, z, y_guess)
    p = ParamPoint(mu0, nu)
    fy = surface_jet(surf, p, x, y)[1][1]
    if abs(fy) <= tol:
        raise ImplicitGraphError(f"|df/dy| = {abs(fy):.3e} at ({x}, {y})")
    return -surface_param_partial(surf, p, x, y) / fy


def curve_nu_speed(spectrum: SaddleSpectrum, curve: CurveFamily, mu0: float, m: int,
                   nu: float, x_hat: float) -> float:
    """``d y_m/d nu`` at ``(nu, x_hat)``, including the ``n beta^(n-1) d beta/d nu`` term."""
    n = m - curve.m0
    if n < 0:
        raise ValueError("m must be >= m0")
    return strand_nu_velocity(spectrum, curve, ParamPoint(mu0, nu), n, x_hat)[0]


def verify_unfolding(record: TangencyRecord, spectrum: SaddleSpectrum, surf: SurfaceFamily,
                     curve: CurveFamily, mu0: float, tol: float = 1e-9) -> UnfoldingDiagnostic:
    x, y, z = record.tau_m
    cs = curve_nu_speed(spectrum, curve, mu0, record.m, record.nu_m, x)
    gs = graph_nu_slope(surf, mu0, record.nu_m, x, z, y_guess=y)
    ctx = GapContext(spectrum, surf, curve, mu0, record.m - curve.m0)
    margin = abs(cs - gs)
    return UnfoldingDiagnostic(record.m, cs, gs, margin, ctx.nu_speed(record.nu_m, x),
                               verified=margin > tol)


@dataclass
class UnfoldingSummary:
    diagnostics: list[UnfoldingDiagnostic]
    c0: float
    growth_ok: bool
    margins_increasing: bool


def unfold_cascade(result: CascadeResult, spectrum: SaddleSpectrum, tol: float = 1e-9,
                   growth_tol: float = 0.10) -> UnfoldingSummary:
    """Diagnose every accepted record; fills ``unfolding_margin`` in place."""
    diags = []
    prev = None
    for rec in result.accepted:
        dg = verify_unfolding(rec, spectrum, result.surface, result.curve, result.mu0, tol)
        if prev is not None and prev.m == rec.m - 1 and prev.margin > 0:
            dg.growth_ratio = dg.margin / prev.margin
        rec.unfolding_margin = dg.margin
        if not dg.verified:
            rec.note = (rec.note + "; " if rec.note else "") + "unfolding margin below tolerance"
        diags.append(dg)
        prev = dg
    beta = spectrum.beta
    c0 = 0.5 * min((d.margin / beta ** (d.m - result.curve.m0) for d in diags), default=0.0)
    ratios = [d.growth_ratio for d in diags if d.growth_ratio is not None]
    growth_ok = bool(ratios) and all(abs(r - beta) <= growth_tol * beta for r in ratios)
    increasing = all(b.margin > a.margin for a, b in zip(diags, diags[1:]))
    result.invariants["margin_positive"] = bool(diags) and all(d.verified for d in diags)
    result.invariants["margin_increasing"] = increasing
    return UnfoldingSummary(diags, c0, growth_ok, increasing)


def quasi_transverse_distance_law(curve: CurveFamily, mu: float, nu_grid, degree: int = 4,
                                  tol: float = 1e-6) -> tuple[float, float]:
    """Fit ``dist(s_nu, z-axis) = |nu| d(nu)`` on ``nu_grid``; returns ``(d(0), residual)``.

    The crossing lies on ``x = 0``, so the distance is ``|y|``; ``d`` is fitted as
    a polynomial to ``y(nu)/nu`` (the sign is constant near 0).
    """
    nus = np.asarray([n for n in nu_grid if n != 0.0], dtype=float)
    dist = np.array([abs(crossing_y(curve, ParamPoint(mu, nu))) for nu in nus])
    signed = np.array([crossing_y(curve, ParamPoint(mu, nu)) for nu in nus]) / nus
    deg = min(degree, len(nus) - 1)
    fit = np.polynomial.Polynomial.fit(nus, signed, deg).convert()
    d0 = abs(float(fit(0.0)))
    residual = float(np.max(np.abs(np.abs(nus) * np.abs(fit(nus)) - dist)))
    if d0 <= tol or not math.isfinite(d0):
        raise QuasiTransverseViolation(f"d(0) = {d0:.3e} <= {tol}", d0, residual)
    return d0, residual
