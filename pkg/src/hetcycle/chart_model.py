"""Chart-level data model: the saddle spectrum, the two-parameter germ families
living in the linearizing box ``D(delta) = (-delta, delta)^3`` around the saddle
``q``, the generic-condition checker and a seeded fixture generator.

Chart conventions: ``q`` is the origin, the local stable manifold of ``q`` is
the z-axis, its local unstable manifold is ``{z = 0}`` and the strong unstable
direction is the x-axis.  Surface germs are graphs ``z = f_{mu,nu}(x, y)``
written in Taylor form around their critical point; curve germs are polynomial
in ``(mu, nu, t)``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as P

from .poly import MPoly, shifted_monomial_grid
from .solvers import SolverError, safe_newton

EXACT_TOL = 1e-12
DEFAULT_TOL = 1e-6

MU, NU, T = 0, 1, 2


class ChartError(ValueError):
    """Base class for rejected chart data."""


class SpectrumError(ChartError):
    """Eigenvalues violate ``0 < gamma < 1 < beta < alpha``."""


class DomainError(ChartError):
    """Evaluation requested outside the admissible domain."""


class NondegeneracyError(ChartError):
    """Critical point continuation failed (singular or divergent Newton)."""


class DegenerateHessianError(NondegeneracyError):
    """``b d - c^2`` vanishes at the bifurcation point."""


class FlatXDirectionError(ChartError):
    """``b(0,0) = 0``: the x-direction second derivative vanishes."""


class TangencyUnfoldingError(ChartError):
    """``d a / d mu`` vanishes at the origin: the tangency does not unfold in mu."""


class OnStrongAxisError(ChartError):
    """``v0 = 0``: the tangency point sits on the strong unstable axis."""


class NotTangentError(ChartError):
    """``a(0,0) != 0``: the sheet is not tangent to ``{z = 0}`` at the bifurcation."""


class IrregularCrossingError(ChartError):
    """``dx/dt`` vanishes somewhere on the parameter box."""


class CrossingNotFoundError(ChartError):
    """The strand never meets the yz-plane on its parameter interval."""


class CrossingBelowChartError(ChartError):
    """The yz-plane crossing is not in the upper half space."""


class CrossingOffAxisError(ChartError):
    """The crossing at the bifurcation point is not on the z-axis."""


class CrossingUnfoldingError(ChartError):
    """The crossing's y-coordinate does not move with nu."""


# ---------------------------------------------------------------------------
# small value types


@dataclass(frozen=True)
class SaddleSpectrum:
    """Eigenvalues of the linear chart map ``(x, y, z) -> (alpha x, beta y, gamma z)``.

    The optional ``d*_dnu`` slopes let the spectrum move affinely with ``nu``;
    they default to zero (constant spectrum).
    """

    alpha: float
    beta: float
    gamma: float
    dalpha_dnu: float = 0.0
    dbeta_dnu: float = 0.0
    dgamma_dnu: float = 0.0

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0 < self.beta < self.alpha):
            raise SpectrumError(
                f"need 0 < gamma < 1 < beta < alpha, got "
                f"({self.alpha}, {self.beta}, {self.gamma})"
            )

    @classmethod
    def unchecked(cls, alpha, beta, gamma, dalpha_dnu=0.0, dbeta_dnu=0.0, dgamma_dnu=0.0):
        obj = object.__new__(cls)
        for k, v in dict(alpha=alpha, beta=beta, gamma=gamma, dalpha_dnu=dalpha_dnu,
                         dbeta_dnu=dbeta_dnu, dgamma_dnu=dgamma_dnu).items():
            object.__setattr__(obj, k, float(v))
        return obj

    def ordering_margin(self) -> float:
        return min(self.gamma, 1.0 - self.gamma, self.beta - 1.0, self.alpha - self.beta)

    def at(self, nu: float) -> tuple[float, float, float]:
        return (self.alpha + self.dalpha_dnu * nu,
                self.beta + self.dbeta_dnu * nu,
                self.gamma + self.dgamma_dnu * nu)

    @property
    def is_constant(self) -> bool:
        return self.dalpha_dnu == 0.0 and self.dbeta_dnu == 0.0 and self.dgamma_dnu == 0.0


@dataclass(frozen=True)
class ChartDomain:
    delta: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise DomainError(f"chart half-width must be positive, got {self.delta}")

    def contains(self, point: Sequence[float]) -> bool:
        return all(abs(c) < self.delta for c in point)

    def require(self, point: Sequence[float]) -> None:
        if not self.contains(point):
            raise DomainError(f"point {tuple(point)} outside D({self.delta})")


@dataclass(frozen=True)
class ParamPoint:
    mu: float = 0.0
    nu: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.nu)):
            raise ValueError("parameters must be finite")


class TangencyType(enum.Enum):
    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"


# ---------------------------------------------------------------------------
# surface germs


def _as_param_poly(p, name: str) -> MPoly:
    if isinstance(p, MPoly):
        if p.nvars != 2:
            raise ValueError(f"{name} must be a polynomial in (mu, nu)")
        return p
    return MPoly.const(2, float(p))


@dataclass(frozen=True)
class SurfaceFamily:
    """Stable-sheet germ ``Sigma(mu, nu) = graph f_{mu,nu}`` over the rectangle ``domain``.

    ``f = a + b X^2/2 + c X Y + d Y^2/2 + sum h_ij X^i Y^j`` with
    ``X = x - u(mu,nu)``, ``Y = y - v(mu,nu)``; every ``h_ij`` has ``i + j >= 3``
    and is parameter independent.  ``domain`` is ``(x_lo, x_hi, y_lo, y_hi)``.
    """

    center_u: MPoly
    center_v: MPoly
    coeff_a: MPoly
    coeff_b: MPoly
    coeff_c: MPoly
    coeff_d: MPoly
    higher_order: tuple = ()
    domain: tuple = (-1.0, 1.0, -1.0, 1.0)

    def __post_init__(self):
        self._normalize()
        self._validate()

    @classmethod
    def unchecked(cls, **kwargs) -> "SurfaceFamily":
        """Build without the genericity invariants (structure is still checked)."""
        obj = object.__new__(cls)
        defaults = dict(higher_order=(), domain=(-1.0, 1.0, -1.0, 1.0))
        defaults.update(kwargs)
        for k, v in defaults.items():
            object.__setattr__(obj, k, v)
        obj._normalize()
        return obj

    def _normalize(self):
        for name in ("center_u", "center_v", "coeff_a", "coeff_b", "coeff_c", "coeff_d"):
            object.__setattr__(self, name, _as_param_poly(getattr(self, name), name))
        ho = []
        for (i, j), c in self.higher_order:
            if i < 0 or j < 0 or i + j < 3:
                raise ValueError(f"higher-order monomial ({i},{j}) must have degree >= 3")
            ho.append(((int(i), int(j)), float(c)))
        object.__setattr__(self, "higher_order", tuple(sorted(ho)))
        dom = tuple(float(v) for v in self.domain)
        if len(dom) != 4 or not (dom[0] < dom[1] and dom[2] < dom[3]):
            raise ValueError(f"domain must be (x_lo, x_hi, y_lo, y_hi), got {self.domain}")
        object.__setattr__(self, "domain", dom)

    def _validate(self):
        a, b, c, d, u, v = self.taylor(ParamPoint())
        if abs(b * d - c * c) <= EXACT_TOL:
            raise DegenerateHessianError(f"b d - c^2 = {b * d - c * c} at the origin")
        if abs(b) <= EXACT_TOL:
            raise FlatXDirectionError("b(0,0) = 0")
        if abs(self.coeff_a.deriv(MU)(0.0, 0.0)) <= EXACT_TOL:
            raise TangencyUnfoldingError("d a/d mu (0,0) = 0")
        if abs(v) <= EXACT_TOL:
            raise OnStrongAxisError("v0 = 0")
        if abs(a) > EXACT_TOL:
            raise NotTangentError(f"a(0,0) = {a}, expected 0")
        if not self.in_domain(u, v):
            raise DomainError(f"center ({u}, {v}) outside the surface domain {self.domain}")

    # -- evaluation helpers ---------------------------------------------

    def taylor(self, p: ParamPoint) -> tuple[float, float, float, float, float, float]:
        m, n = p.mu, p.nu
        return (self.coeff_a(m, n), self.coeff_b(m, n), self.coeff_c(m, n),
                self.coeff_d(m, n), self.center_u(m, n), self.center_v(m, n))

    def in_domain(self, x: float, y: float) -> bool:
        x0, x1, y0, y1 = self.domain
        return x0 <= x <= x1 and y0 <= y <= y1

    def xy_coefficients(self, p: ParamPoint) -> np.ndarray:
        """Power-basis coefficient array ``C[i, j]`` of ``x^i y^j`` at fixed parameters."""
        return _xy_coefficients(self, p.mu, p.nu)

    def eta0(self) -> float:
        return self.coeff_a.deriv(MU)(0.0, 0.0)

    def substitute_nu(self, replacement: MPoly) -> "SurfaceFamily":
        """Return the family with ``nu`` replaced by ``replacement(mu, nu)``."""
        sub = {name: getattr(self, name).substitute(NU, replacement)
               for name in ("center_u", "center_v", "coeff_a", "coeff_b", "coeff_c", "coeff_d")}
        return SurfaceFamily.unchecked(higher_order=self.higher_order, domain=self.domain, **sub)


@functools.lru_cache(maxsize=4096)
def _xy_coefficients(family: SurfaceFamily, mu: float, nu: float) -> np.ndarray:
    a, b, c, d, u, v = family.taylor(ParamPoint(mu, nu))
    coeffs = {(0, 0): a, (2, 0): 0.5 * b, (1, 1): c, (0, 2): 0.5 * d}
    for ij, h in family.higher_order:
        coeffs[ij] = coeffs.get(ij, 0.0) + h
    arr = shifted_monomial_grid(coeffs, u, v)
    arr.setflags(write=False)
    return arr


def _derivative_arrays(C: np.ndarray):
    Cx = P.polyder(C, 1, axis=0)
    Cy = P.polyder(C, 1, axis=1)
    return Cx, Cy, P.polyder(Cx, 1, axis=0), P.polyder(Cx, 1, axis=1), P.polyder(Cy, 1, axis=1)


def surface_jet(family: SurfaceFamily, p: ParamPoint, x: float, y: float):
    """Value, gradient and Hessian of ``f_{mu,nu}`` at ``(x, y)`` (no domain check)."""
    C = family.xy_coefficients(p)
    Cx, Cy, Cxx, Cxy, Cyy = _derivative_arrays(C)
    z = P.polyval2d(x, y, C)
    grad = np.array([P.polyval2d(x, y, Cx), P.polyval2d(x, y, Cy)])
    hxy = P.polyval2d(x, y, Cxy)
    hess = np.array([[P.polyval2d(x, y, Cxx), hxy], [hxy, P.polyval2d(x, y, Cyy)]])
    return float(z), grad, hess


def evaluate_surface(family: SurfaceFamily, p: ParamPoint, x: float, y: float):
    """``(z, gradient, hessian)`` of the sheet at ``(x, y)``; raises outside ``O``."""
    if not family.in_domain(x, y):
        raise DomainError(f"({x}, {y}) outside surface domain {family.domain}")
    return surface_jet(family, p, x, y)


def surface_param_partial(family: SurfaceFamily, p: ParamPoint, x: float, y: float,
                          index: int = NU) -> float:
    """Exact ``d f_{mu,nu}(x, y) / d mu`` (``index=0``) or ``/ d nu`` (``index=1``) at fixed ``(x, y)``."""
    m, n = p.mu, p.nu
    u, v = family.center_u(m, n), family.center_v(m, n)
    X, Y = x - u, y - v
    _, grad, _ = surface_jet(family, p, x, y)
    da = family.coeff_a.deriv(index)(m, n)
    db = family.coeff_b.deriv(index)(m, n)
    dc = family.coeff_c.deriv(index)(m, n)
    dd = family.coeff_d.deriv(index)(m, n)
    du = family.center_u.deriv(index)(m, n)
    dv = family.center_v.deriv(index)(m, n)
    return (da + 0.5 * db * X * X + dc * X * Y + 0.5 * dd * Y * Y
            - grad[0] * du - grad[1] * dv)


def critical_point(family: SurfaceFamily, p: ParamPoint, tol: float = 1e-12,
                   maxiter: int = 50) -> tuple[float, float]:
    """Newton on the gradient from the stored center."""
    _, _, _, _, u, v = family.taylor(p)
    xy = np.array([u, v])
    for _ in range(maxiter):
        _, grad, hess = surface_jet(family, p, *xy)
        if np.linalg.norm(grad) < tol:
            return float(xy[0]), float(xy[1])
        if abs(np.linalg.det(hess)) <= EXACT_TOL:
            raise NondegeneracyError(f"singular Hessian at {tuple(xy)}")
        xy = xy - np.linalg.solve(hess, grad)
        if not np.all(np.isfinite(xy)):
            break
    raise NondegeneracyError("critical-point Newton iteration diverged")


def hessian_det(family: SurfaceFamily, p: ParamPoint | None = None) -> float:
    _, b, c, d, _, _ = family.taylor(p or ParamPoint())
    return b * d - c * c


def classify(family: SurfaceFamily, tol: float = EXACT_TOL) -> TangencyType:
    det = hessian_det(family)
    if abs(det) <= tol:
        raise DegenerateHessianError(f"|det H| = {abs(det):.3e} <= {tol}")
    return TangencyType.ELLIPTIC if det > 0 else TangencyType.HYPERBOLIC


# ---------------------------------------------------------------------------
# curve germs


def _as_curve_poly(p, name: str) -> MPoly:
    if isinstance(p, MPoly):
        if p.nvars != 3:
            raise ValueError(f"{name} must be a polynomial in (mu, nu, t)")
        return p
    return MPoly.const(3, float(p))


@dataclass(frozen=True)
class CurveFamily:
    """Unstable strand ``l(mu, nu, t) = (x, y, z)`` through the quasi-transverse point.

    ``param_radius`` sets the box ``|mu|, |nu| <= param_radius`` on which
    ``dx/dt`` must stay away from zero.
    """

    x_of_t: MPoly
    y_of_t: MPoly
    z_of_t: MPoly
    m0: int = 0
    t_range: tuple = (-1.0, 1.0)
    param_radius: float = 0.1

    def __post_init__(self):
        self._normalize()
        self._validate()

    @classmethod
    def unchecked(cls, **kwargs) -> "CurveFamily":
        obj = object.__new__(cls)
        defaults = dict(m0=0, t_range=(-1.0, 1.0), param_radius=0.1)
        defaults.update(kwargs)
        for k, v in defaults.items():
            object.__setattr__(obj, k, v)
        obj._normalize()
        return obj

    def _normalize(self):
        for name in ("x_of_t", "y_of_t", "z_of_t"):
            object.__setattr__(self, name, _as_curve_poly(getattr(self, name), name))
        if int(self.m0) < 0:
            raise ValueError("m0 must be >= 0")
        object.__setattr__(self, "m0", int(self.m0))
        tr = tuple(float(v) for v in self.t_range)
        if len(tr) != 2 or not tr[0] < tr[1]:
            raise ValueError(f"bad t_range {self.t_range}")
        object.__setattr__(self, "t_range", tr)
        object.__setattr__(self, "param_radius", float(self.param_radius))

    def _validate(self):
        if min_abs_dxdt(self) <= EXACT_TOL:
            raise IrregularCrossingError("dx/dt vanishes on the parameter box")
        origin = ParamPoint()
        try:
            t_star = crossing_parameter(self, origin)
        except CrossingNotFoundError:
            raise
        _, y, z = self.point(origin, t_star)
        if z <= 0:
            raise CrossingBelowChartError(f"crossing height z = {z} <= 0")
        if abs(y) > EXACT_TOL:
            raise CrossingOffAxisError(f"crossing y = {y} at the bifurcation point")
        if abs(crossing_y_nu_derivative(self, origin)) <= EXACT_TOL:
            raise CrossingUnfoldingError("d y / d nu = 0 at the crossing")

    def point(self, p: ParamPoint, t: float) -> np.ndarray:
        return np.array([self.x_of_t(p.mu, p.nu, t), self.y_of_t(p.mu, p.nu, t),
                         self.z_of_t(p.mu, p.nu, t)])

    def is_x_affine(self) -> bool:
        return self.x_of_t.degree_in(T) <= 1

    def substitute_nu(self, replacement: MPoly) -> "CurveFamily":
        """Family with ``nu`` replaced by ``replacement(mu, nu)`` (a polynomial in two variables)."""
        rep3 = MPoly.from_terms(3, [((e[0], e[1], 0), c) for e, c in replacement.terms])
        return CurveFamily.unchecked(
            x_of_t=self.x_of_t.substitute(NU, rep3),
            y_of_t=self.y_of_t.substitute(NU, rep3),
            z_of_t=self.z_of_t.substitute(NU, rep3),
            m0=self.m0, t_range=self.t_range, param_radius=self.param_radius,
        )


def min_abs_dxdt(curve: CurveFamily, samples: int = 9, tsamples: int = 41) -> float:
    """Smallest ``|dx/dt|`` on a grid over the parameter box and ``t_range``."""
    dx = curve.x_of_t.deriv(T)
    r = curve.param_radius
    grid = np.linspace(-r, r, samples)
    ts = np.linspace(*curve.t_range, tsamples)
    best = math.inf
    for m in grid:
        for n in grid:
            poly = dx.univariate(T, (m, n, 0.0))
            best = min(best, float(np.min(np.abs(poly(ts)))))
            if dx.degree_in(T) >= 2:
                for rt in poly.deriv().roots():
                    if abs(rt.imag) < 1e-12 and curve.t_range[0] <= rt.real <= curve.t_range[1]:
                        best = min(best, abs(poly(rt.real)))
    return best


def crossing_parameter(curve: CurveFamily, p: ParamPoint, tol: float = 1e-15) -> float:
    """Parameter ``t*`` with ``x(mu, nu, t*) = 0`` by safeguarded Newton on ``t_range``."""
    xt = curve.x_of_t.univariate(T, (p.mu, p.nu, 0.0))
    dxt = xt.deriv()
    lo, hi = curve.t_range
    ts = np.linspace(lo, hi, 65)
    vals = xt(ts)
    for i in range(len(ts) - 1):
        if vals[i] == 0.0:
            return float(ts[i])
        if vals[i] * vals[i + 1] < 0:
            try:
                return safe_newton(xt, dxt, ts[i], ts[i + 1], tol=tol)
            except SolverError as exc:
                raise CrossingNotFoundError(str(exc)) from exc
    if vals[-1] == 0.0:
        return float(ts[-1])
    raise CrossingNotFoundError(f"x(t) has no sign change on {curve.t_range} at {p}")


def crossing_y_nu_derivative(curve: CurveFamily, p: ParamPoint, index: int = NU) -> float:
    """Total derivative of the crossing's y-coordinate along ``mu`` or ``nu``."""
    t = crossing_parameter(curve, p)
    args = (p.mu, p.nu, t)
    x_t = curve.x_of_t.deriv(T)(*args)
    dt = -curve.x_of_t.deriv(index)(*args) / x_t
    return curve.y_of_t.deriv(index)(*args) + curve.y_of_t.deriv(T)(*args) * dt


# ---------------------------------------------------------------------------
# generic conditions


@dataclass(frozen=True)
class ConditionEntry:
    condition: str
    quantity: str
    witness: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class ConditionReport:
    entries: tuple

    def passed(self, condition: str | None = None) -> bool:
        rel = [e for e in self.entries if condition is None or e.condition == condition]
        return all(e.passed for e in rel)

    def entry(self, quantity: str) -> ConditionEntry:
        for e in self.entries:
            if e.quantity == quantity:
                return e
        raise KeyError(quantity)

    def failures(self) -> list[ConditionEntry]:
        return [e for e in self.entries if not e.passed]

    def as_dict(self) -> dict:
        return {
            "all_passed": self.passed(),
            "entries": [
                {"condition": e.condition, "quantity": e.quantity, "witness": e.witness,
                 "tolerance": e.tolerance, "passed": e.passed}
                for e in self.entries
            ],
        }


def _gt(witness: float, tol: float) -> bool:
    return math.isfinite(witness) and abs(witness) > tol


def check_generic_conditions(spectrum: SaddleSpectrum, surf: SurfaceFamily,
                             curve: CurveFamily, tol: float = DEFAULT_TOL) -> ConditionReport:
    """Measure (C1)-(C4); failures are reported, never raised."""
    entries = []
    margin = spectrum.ordering_margin()
    entries.append(ConditionEntry("C1", "ordering_margin", margin, 0.0, margin > 0))

    eta0 = surf.eta0()
    entries.append(ConditionEntry("C2", "eta0", eta0, tol, _gt(eta0, tol)))

    try:
        dy = crossing_y_nu_derivative(curve, ParamPoint())
    except (CrossingNotFoundError, ZeroDivisionError):
        dy = math.nan
    entries.append(ConditionEntry("C3", "dy_dnu", dy, tol, _gt(dy, tol)))

    a, b, c, d, u, v = surf.taylor(ParamPoint())
    entries.append(ConditionEntry("C4", "v0", v, tol, _gt(v, tol)))
    dxdt = min_abs_dxdt(curve)
    entries.append(ConditionEntry("C4", "min_abs_dxdt", dxdt, tol, _gt(dxdt, tol)))
    entries.append(ConditionEntry("C4", "b00", b, tol, _gt(b, tol)))
    return ConditionReport(tuple(entries))


# ---------------------------------------------------------------------------
# fixture generator


def synthesize_family(kind: TangencyType, spectrum: SaddleSpectrum, seed: int,
                      b_sign: int | None = None) -> tuple[SurfaceFamily, CurveFamily]:
    """Deterministic generic family of the requested type.

    Safe ranges: ``u0 in [0.3, 0.5]``, ``v0 in [0.35, 0.5]``, ``|b|, |d| in [1, 2]``,
    ``eta0 in [0.6, 1.2]``, cubic coefficients in ``[-0.05, 0.05]``, parameter
    slopes of ``b, c, d, u, v`` in ``[-0.2, 0.2]``.  The surface domain is the
    square of half-width 0.25 around ``(u0, v0)``, so it stays off the x-axis.
    The strand crosses ``x = 0`` at ``t = 0`` with height in ``[0.3, 0.5]`` and
    ``dy/dnu in [0.5, 1]``.  ``b_sign`` overrides the default sign of ``b(0,0)``
    (negative for elliptic, positive for hyperbolic).
    """
    rng = np.random.default_rng(seed)
    U = rng.uniform
    u0, v0 = U(0.3, 0.5), U(0.35, 0.5)
    if kind is TangencyType.ELLIPTIC:
        sb = -1 if b_sign is None else int(np.sign(b_sign))
        b0 = sb * U(1.0, 2.0)
        d0 = sb * U(1.0, 2.0)
        c0 = U(-0.3, 0.3) * math.sqrt(b0 * d0)
    else:
        sb = 1 if b_sign is None else int(np.sign(b_sign))
        b0 = sb * U(1.0, 2.0)
        d0 = -sb * U(1.0, 2.0)
        c0 = U(-0.5, 0.5)
    eta0 = U(0.6, 1.2)
    slope = lambda: U(-0.2, 0.2)  # noqa: E731
    surf = SurfaceFamily(
        center_u=MPoly.affine(u0, slope(), slope()),
        center_v=MPoly.affine(v0, slope(), slope()),
        coeff_a=MPoly.affine(0.0, eta0, U(-0.3, 0.3)),
        coeff_b=MPoly.affine(b0, slope(), slope()),
        coeff_c=MPoly.affine(c0, slope(), slope()),
        coeff_d=MPoly.affine(d0, slope(), slope()),
        higher_order=tuple(((i, 3 - i), U(-0.05, 0.05)) for i in range(4)),
        domain=(u0 - 0.25, u0 + 0.25, v0 - 0.25, v0 + 0.25),
    )
    x1 = U(1.0, 1.3)
    curve = CurveFamily(
        x_of_t=MPoly.from_terms(3, [((0, 0, 1), x1), ((1, 0, 0), U(-0.05, 0.05)),
                                    ((0, 1, 0), U(-0.05, 0.05))]),
        y_of_t=MPoly.from_terms(3, [((1, 0, 0), U(-0.1, 0.1)), ((0, 1, 0), U(0.5, 1.0)),
                                    ((0, 0, 1), U(-0.3, 0.3)), ((0, 0, 2), U(-0.3, 0.3)),
                                    ((0, 1, 1), U(-0.1, 0.1))]),
        z_of_t=MPoly.from_terms(3, [((0, 0, 0), U(0.3, 0.5)), ((0, 0, 1), U(-0.1, 0.1)),
                                    ((0, 0, 2), U(-0.1, 0.1)), ((0, 1, 0), U(-0.1, 0.1)),
                                    ((1, 0, 0), U(-0.1, 0.1))]),
        m0=0,
    )
    return surf, curve
