"""Parameter-plane reparametrization and closed-form iteration of unstable strands.

Inside the chart the map is linear, so the ``n``-th image of the base strand
written as a graph over x is obtained exactly by rescaling polynomial
coefficients: ``l_m(t) = (t, beta^n y0(t / alpha^n), gamma^n z0(t / alpha^n))``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import minimize_scalar

from .chart_model import (NU, T, ChartError, CurveFamily, DomainError, ParamPoint,
                          SaddleSpectrum, SurfaceFamily, crossing_parameter,
                          crossing_y_nu_derivative)
from .geometry import CurveJet, curvature
from .poly import MPoly
from .solvers import SolverError, poly_abs_max, poly_range, safe_newton


class ImplicitFunctionError(ChartError):
    """``dy/dnu`` at the crossing is too small to solve for ``nu~(mu)``."""


class FitResidualError(ChartError):
    """The polynomial fit of ``nu~`` does not reproduce the crossing condition."""


class NotGraphError(ChartError):
    """The strand's x-component is not affine in t, so it has no polynomial graph form."""


class DomainOverflowError(DomainError):
    """The iterated strand leaves ``D(delta)``; ``max_admissible_n`` is the last n that fits."""

    def __init__(self, message: str, max_admissible_n: int):
        super().__init__(message)
        self.max_admissible_n = max_admissible_n


# ---------------------------------------------------------------------------
# crossing and the new parameters


def yz_crossing(curve: CurveFamily, p: ParamPoint) -> tuple[float, np.ndarray]:
    t_star = crossing_parameter(curve, p)
    return t_star, curve.point(p, t_star)


def crossing_y(curve: CurveFamily, p: ParamPoint) -> float:
    t_star = crossing_parameter(curve, p)
    return curve.y_of_t(p.mu, p.nu, t_star)


def solve_nu_tilde(curve: CurveFamily, mu: float, tol: float = 1e-6,
                   residual_tol: float = 1e-12) -> float:
    """``nu~(mu)`` with ``y(mu, nu~) = 0`` at the yz-crossing; Newton with bisection fallback."""
    slope0 = crossing_y_nu_derivative(curve, ParamPoint(mu, 0.0))
    if abs(slope0) <= tol:
        raise ImplicitFunctionError(f"|dy/dnu| = {abs(slope0):.3e} <= {tol} at mu = {mu}")
    g = lambda nu: crossing_y(curve, ParamPoint(mu, nu))  # noqa: E731
    dg = lambda nu: crossing_y_nu_derivative(curve, ParamPoint(mu, nu))  # noqa: E731
    nu = 0.0
    for _ in range(50):
        val = g(nu)
        if abs(val) < residual_tol:
            return nu
        d = dg(nu)
        if d == 0.0:
            break
        step = val / d
        nu -= step
        if abs(nu) > curve.param_radius * 10:
            break
        if abs(step) < 1e-17:
            if abs(g(nu)) < residual_tol:
                return nu
            break
    # bisection fallback on a widening bracket around the linear guess
    guess = -g(0.0) / slope0
    width = max(abs(guess), 1e-8)
    for _ in range(40):
        lo, hi = guess - width, guess + width
        if g(lo) * g(hi) <= 0:
            try:
                return safe_newton(g, dg, lo, hi)
            except SolverError as exc:
                raise ImplicitFunctionError(str(exc)) from exc
        width *= 2
    raise ImplicitFunctionError(f"no root of the crossing height near mu = {mu}")


@dataclass(frozen=True)
class Reparametrization:
    curve: CurveFamily
    surface: SurfaceFamily
    nu_tilde: Polynomial
    mu_grid: np.ndarray
    fit_residual: float


def reparametrize(curve: CurveFamily, surf: SurfaceFamily, mu_grid=None, degree: int = 3,
                  tol: float = 1e-10, slope_tol: float = 1e-3) -> Reparametrization:
    """Shift ``nu`` by a polynomial fit of ``nu~(mu)`` so the crossing stays on the z-axis at ``nu = 0``.

    The returned families use the new parameters ``(mu, nu - nu~(mu))`` under
    the old names.
    """
    if mu_grid is None:
        rho = 0.5 * curve.param_radius
        mu_grid = np.linspace(-rho, rho, 4 * degree + 5)
    mu_grid = np.asarray(mu_grid, dtype=float)
    samples = np.array([solve_nu_tilde(curve, m) for m in mu_grid])
    if np.all(samples == 0.0):
        return Reparametrization(curve, surf, Polynomial([0.0]), mu_grid, 0.0)
    fit = Polynomial.fit(mu_grid, samples, degree).convert()
    fit_res = float(np.max(np.abs(fit(mu_grid) - samples)))
    rep = MPoly.var(2, NU)
    for k, c in enumerate(fit.coef):
        rep = rep + MPoly.from_terms(2, [((k, 0), c)])
    new_curve = curve.substitute_nu(rep)
    new_surf = surf.substitute_nu(rep)
    worst = 0.0
    for m in mu_grid:
        p = ParamPoint(m, 0.0)
        worst = max(worst, abs(crossing_y(new_curve, p)))
        slope = crossing_y_nu_derivative(new_curve, p)
        if abs(slope) <= slope_tol:
            raise FitResidualError(f"unfolding derivative {slope:.3e} too small at mu = {m}")
    if worst > tol:
        raise FitResidualError(f"crossing y residual {worst:.3e} exceeds {tol}")
    return Reparametrization(new_curve, new_surf, fit, mu_grid, fit_res)


# ---------------------------------------------------------------------------
# graph form and iteration


def graph_form(curve: CurveFamily, p: ParamPoint) -> tuple[Polynomial, Polynomial, float, float]:
    """Base strand as a graph ``X -> (Y0(X), Z0(X))`` plus the affine map ``x = p0 + q t``."""
    if not curve.is_x_affine():
        raise NotGraphError("x(t) must be affine in t for the graph normalization")
    fixed = (p.mu, p.nu, 0.0)
    xpoly = curve.x_of_t.univariate(T, fixed)
    coef = np.pad(xpoly.coef, (0, 2 - len(xpoly.coef)))
    p0, q = float(coef[0]), float(coef[1])
    if q == 0.0:
        raise NotGraphError("dx/dt = 0")
    t_of_x = Polynomial([-p0 / q, 1.0 / q])
    Y0 = curve.y_of_t.univariate(T, fixed)(t_of_x)
    Z0 = curve.z_of_t.univariate(T, fixed)(t_of_x)
    return Y0, Z0, p0, q


def graph_nu_derivative(curve: CurveFamily, p: ParamPoint, X: float,
                        index: int = NU) -> tuple[float, float]:
    """``(d Y0/d nu, d Z0/d nu)`` at fixed abscissa ``X`` (or ``d/d mu`` with ``index=0``)."""
    if not curve.is_x_affine():
        raise NotGraphError("x(t) must be affine in t for the graph normalization")
    xs = curve.x_of_t
    q = xs.deriv(T)(p.mu, p.nu, 0.0)
    t = (X - xs(p.mu, p.nu, 0.0)) / q
    args = (p.mu, p.nu, t)
    # x(t) = p0 + q t  =>  dt/dnu at fixed x = -(dp0/dnu + t dq/dnu)/q
    dt = -(xs.deriv(index)(*args)) / q
    out = []
    for comp in (curve.y_of_t, curve.z_of_t):
        out.append(comp.deriv(index)(*args) + comp.deriv(T)(*args) * dt)
    return out[0], out[1]


@dataclass(frozen=True)
class IteratedStrand:
    """Graph ``t -> (t, y(t), z(t))`` of ``l_m`` with ``n = m - m0`` at fixed parameters."""

    n: int
    base: CurveFamily
    param: ParamPoint
    alpha: float
    beta: float
    gamma: float
    y_poly: Polynomial
    z_poly: Polynomial
    delta: float = 1.0

    @property
    def m(self) -> int:
        return self.base.m0 + self.n

    def jet(self, t: float) -> CurveJet:
        dy, dz = self.y_poly.deriv(), self.z_poly.deriv()
        return CurveJet(
            point=[t, self.y_poly(t), self.z_poly(t)],
            first=[1.0, dy(t), dz(t)],
            second=[0.0, dy.deriv()(t), dz.deriv()(t)],
        )

    def advance(self, k: int) -> "IteratedStrand":
        """Apply ``k`` more chart iterations (semigroup step)."""
        return replace(self, n=self.n + k,
                       y_poly=_scale(self.y_poly, self.alpha, self.beta, k),
                       z_poly=_scale(self.z_poly, self.alpha, self.gamma, k))

    def y_range(self) -> tuple[float, float]:
        return poly_range(self.y_poly, -self.delta, self.delta)

    def z_range(self) -> tuple[float, float]:
        return poly_range(self.z_poly, -self.delta, self.delta)

    def inside_chart(self) -> bool:
        """Whether the strand over the open interval ``(-delta, delta)`` stays in ``D(delta)``.

        Ranges are taken on the closure, so touching the boundary at ``t = +-delta`` is allowed.
        """
        d = self.delta
        ylo, yhi = self.y_range()
        zlo, zhi = self.z_range()
        return -d <= ylo and yhi <= d and -d <= zlo and zhi <= d


def _scale(poly: Polynomial, alpha: float, factor: float, n: int) -> Polynomial:
    k = np.arange(len(poly.coef))
    return Polynomial(poly.coef * factor**n * alpha ** (-(n * k).astype(float)))


def iterate_strand(spectrum: SaddleSpectrum, curve: CurveFamily, p: ParamPoint, n: int,
                   delta: float = 1.0, check: bool = True) -> IteratedStrand:
    """Closed-form ``l_m`` for ``m = m0 + n`` at parameters ``p``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    alpha, beta, gamma = spectrum.at(p.nu)
    Y0, Z0, _, _ = graph_form(curve, p)
    strand = IteratedStrand(n, curve, p, alpha, beta, gamma,
                            _scale(Y0, alpha, beta, n), _scale(Z0, alpha, gamma, n), delta)
    if check and not strand.inside_chart():
        last = -1
        for k in range(n):
            if replace(strand, y_poly=_scale(Y0, alpha, beta, k),
                       z_poly=_scale(Z0, alpha, gamma, k)).inside_chart():
                last = k
        raise DomainOverflowError(
            f"l_m with n = {n} leaves D({delta}) at {p}; last admissible n = {last}", last)
    return strand


def max_admissible_n(spectrum: SaddleSpectrum, curve: CurveFamily, p: ParamPoint,
                     delta: float = 1.0, n_cap: int = 200) -> int:
    """Largest ``n <= n_cap`` such that every ``l_{m0+k}``, ``k <= n``, lies in ``D(delta)``."""
    base = iterate_strand(spectrum, curve, p, 0, delta, check=False)
    last = -1
    s = base
    for k in range(n_cap + 1):
        if not s.inside_chart():
            break
        last = k
        s = s.advance(1)
    return last


# ---------------------------------------------------------------------------
# C^2 convergence diagnostics


@dataclass(frozen=True)
class C2Deviation:
    sup_y: float
    sup_z: float
    sup_dy: float
    sup_dz: float
    sup_d2y: float
    sup_d2z: float

    def as_tuple(self) -> tuple[float, ...]:
        return (self.sup_y, self.sup_z, self.sup_dy, self.sup_dz, self.sup_d2y, self.sup_d2z)


def c2_deviation(s: IteratedStrand) -> C2Deviation:
    lo, hi = -s.delta, s.delta
    sup = lambda poly: poly_abs_max(poly, lo, hi)[0]  # noqa: E731
    y, z = s.y_poly, s.z_poly
    return C2Deviation(sup(y), sup(z), sup(y.deriv()), sup(z.deriv()),
                       sup(y.deriv(2)), sup(z.deriv(2)))


def _strand_curvature(s: IteratedStrand, t: float) -> float:
    return curvature(s.jet(t))


def _sampled_curvature(s: IteratedStrand, ts: np.ndarray) -> np.ndarray:
    # velocity (1, y', z') and acceleration (0, y'', z'')
    dy, dz = s.y_poly.deriv()(ts), s.z_poly.deriv()(ts)
    ddy, ddz = s.y_poly.deriv(2)(ts), s.z_poly.deriv(2)(ts)
    cross = np.sqrt((dy * ddz - dz * ddy) ** 2 + ddz**2 + ddy**2)
    return cross / (1.0 + dy**2 + dz**2) ** 1.5


def max_curvature(s: IteratedStrand, samples: int = 2001) -> float:
    """Dense sample of the curvature on ``[-delta, delta]`` followed by a bounded polish."""
    ts = np.linspace(-s.delta, s.delta, samples)
    vals = _sampled_curvature(s, ts)
    k = int(np.argmax(vals))
    best = float(vals[k])
    if best == 0.0:
        return 0.0
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, samples - 1)]
    res = minimize_scalar(lambda t: -_strand_curvature(s, t), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-13})
    return max(best, float(-res.fun))


def curvature_threshold(spectrum: SaddleSpectrum, curve: CurveFamily, p: ParamPoint,
                        eps: float, n_max: int = 60, delta: float = 1.0) -> int | None:
    """Smallest ``m_hat`` such that ``max_curvature(l_m) < eps`` for every ``m`` in ``[m_hat, m0 + n_max]``."""
    s = iterate_strand(spectrum, curve, p, 0, delta, check=False)
    kappas = []
    for _ in range(n_max + 1):
        kappas.append(max_curvature(s))
        s = s.advance(1)
    n_hat = None
    for n in range(n_max, -1, -1):
        if kappas[n] < eps:
            n_hat = n
        else:
            break
    return None if n_hat is None else curve.m0 + n_hat


def convergence_table(spectrum: SaddleSpectrum, curve: CurveFamily, p: ParamPoint,
                      n_values, delta: float = 1.0) -> list[dict]:
    """One row per n: sup norms, max curvature and the closed-form scaling predictions.

    Rows stop at the first n whose strand leaves the chart; the last row then
    carries ``note = "domain_overflow"``.
    """
    rows = []
    alpha, beta, gamma = spectrum.at(p.nu)
    dev0 = c2_deviation(iterate_strand(spectrum, curve, p, 0, delta, check=False))
    for n in n_values:
        try:
            s = iterate_strand(spectrum, curve, p, n, delta)
        except DomainOverflowError:
            rows.append({"n": n, "note": "domain_overflow"})
            break
        dev = c2_deviation(s)
        rows.append({
            "n": n,
            "m": curve.m0 + n,
            "sup_y": dev.sup_y, "sup_z": dev.sup_z,
            "sup_dy": dev.sup_dy, "sup_dz": dev.sup_dz,
            "sup_d2y": dev.sup_d2y, "sup_d2z": dev.sup_d2z,
            "max_curvature": max_curvature(s),
            "pred_sup_dy": dev0.sup_dy * (beta / alpha) ** n,
            "pred_sup_dz": dev0.sup_dz * (gamma / alpha) ** n,
            "pred_sup_d2y": dev0.sup_d2y * (beta / alpha**2) ** n,
            "pred_sup_d2z": dev0.sup_d2z * (gamma / alpha**2) ** n,
            "note": "",
        })
    return rows


def strand_nu_velocity(spectrum: SaddleSpectrum, curve: CurveFamily, p: ParamPoint, n: int,
                       t: float) -> tuple[float, float]:
    """Exact ``(d y_m/d nu, d z_m/d nu)`` at fixed chart abscissa ``t``.

    Differentiates ``beta(nu)^n Y0(nu, alpha(nu)^-n t)`` (and the gamma analogue)
    including the terms produced by a nu-dependent spectrum.
    """
    alpha, beta, gamma = spectrum.at(p.nu)
    da, db, dg = spectrum.dalpha_dnu, spectrum.dbeta_dnu, spectrum.dgamma_dnu
    X = t * alpha ** (-n)
    dX = -n * alpha ** (-n - 1) * da * t
    Y0, Z0, _, _ = graph_form(curve, p)
    dY0, dZ0 = graph_nu_derivative(curve, p, X)
    out = []
    for lam, dlam, G, dG in ((beta, db, Y0, dY0), (gamma, dg, Z0, dZ0)):
        growth = n * lam ** (n - 1) * dlam * G(X) if n > 0 else 0.0
        out.append(growth + lam**n * (dG + G.deriv()(X) * dX))
    return out[0], out[1]
