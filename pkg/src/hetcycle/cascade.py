"""Tangency cascade: for each iterate ``l_m`` find the parameter ``nu_m`` at which
the strand touches the stable sheet, and certify the contact as quadratic.

The existence argument is a separation of y-projections between the strand and
the strip ``A_nu = Sigma(mu0, nu) ∩ {0 <= z <= h0}``; numerically it becomes a
halving search for a bracket ``[0, nu_bar_m]`` followed by a sign-change scan of
the extremal gap ``G(nu) = ext_t Delta(nu, t)`` and a Newton polish.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .chart_model import (ChartError, CurveFamily, DomainError, ParamPoint, SaddleSpectrum,
                          SurfaceFamily, TangencyType, classify,
                          surface_jet, surface_param_partial)
from .geometry import (ContactClass, GapJet, contact_class, curvature, graph_gap_jet,
                       normal_curvature, quadratic_by_curvature)
from .inclination import (DomainOverflowError, IteratedStrand, iterate_strand, reparametrize,
                          strand_nu_velocity)
from .solvers import SolverError

log = logging.getLogger(__name__)


class EmptyStripError(ChartError):
    """The strip hypothesis fails: the sheet does not cut ``{z = 0}`` as required."""


class BracketError(ChartError):
    """No separating bracket ``[0, nu_bar_m]`` was found."""


class BracketPreconditionError(BracketError):
    """Strand and strip y-projections already overlap at ``nu = 0``."""


class TangencySolveError(SolverError):
    pass


@dataclass(frozen=True)
class CascadeConfig:
    mu0: float
    m_min: int
    m_max: int
    h0: float | None = None
    nu_bar: float | None = None
    solve_tol: float = 1e-10
    contact_tol: float = 1e-9
    bend_tol: float = 1e-6
    scan_points: int = 200
    t_samples: int = 801
    delta: float = 1.0
    reparametrize: bool = True

    def __post_init__(self):
        if self.m_max < self.m_min:
            raise ValueError("m_max < m_min")
        if self.h0 is not None and not 0 < self.h0 < self.delta:
            raise ValueError(f"h0 must lie in (0, delta), got {self.h0}")
        if self.nu_bar is not None and self.nu_bar == 0:
            raise ValueError("nu_bar must be nonzero")


class StripVariant(enum.Enum):
    ANNULUS = "annulus"
    TWO_RECTANGLES = "two_rectangles"


@dataclass(frozen=True)
class StripDescription:
    variant: StripVariant
    y_extent: tuple[float, float]
    z_extent: tuple[float, float]
    components: tuple[tuple[float, float], ...]
    edge_level: float


@dataclass
class TangencyRecord:
    m: int
    n: int
    nu_m: float
    t_m: float
    tau_m: tuple[float, float, float]
    gap: GapJet
    curve_kappa: float
    surface_kappa: float
    surface_kappa_x: float
    contact: ContactClass
    curvature_criterion: bool
    nu_bar_m: float
    multiplicity: int = 1
    strand_height: float = math.nan
    height_hypothesis: bool = True
    unfolding_margin: float | None = None
    accepted: bool = False
    note: str = ""

    @property
    def gap_bend(self) -> float:
        return self.gap.bend


# ---------------------------------------------------------------------------
# sign law and strips


def required_mu_sign(kind: TangencyType, b00: float, eta0: float) -> int:
    """Sign of ``mu0`` for which the strip has the required shape."""
    if b00 == 0 or eta0 == 0:
        raise ValueError("b00 and eta0 must be nonzero")
    s = int(np.sign(b00) * np.sign(eta0))
    return -s if kind is TangencyType.ELLIPTIC else s


def level_tangent_points(surf: SurfaceFamily, p: ParamPoint, level: float,
                         tol: float = 1e-14) -> list[tuple[float, float]]:
    """Points of ``{f = level}`` where the level curve is parallel to the x-axis (``f_x = 0``).

    These extremize y on the level set; seeds come from the quadratic part,
    Newton on ``(f - level, f_x)`` absorbs the higher-order terms.
    """
    a, b, c, d, u, v = surf.taylor(p)
    det = b * d - c * c
    sq = 2.0 * (level - a) * b / det
    if sq <= 0:
        return []
    pts = []
    for Y in (-math.sqrt(sq), math.sqrt(sq)):
        xy = np.array([u - c / b * Y, v + Y])
        ok = False
        for _ in range(60):
            f, g, h = surface_jet(surf, p, *xy)
            F = np.array([f - level, g[0]])
            J = np.array([[g[0], g[1]], [h[0, 0], h[0, 1]]])
            try:
                step = np.linalg.solve(J, F)
            except np.linalg.LinAlgError:
                break
            xy = xy - step
            if np.max(np.abs(step)) < tol:
                ok = True
                break
        if ok:
            pts.append((float(xy[0]), float(xy[1])))
    return sorted(pts, key=lambda q: q[1])


def strip(surf: SurfaceFamily, p: ParamPoint, h0: float) -> StripDescription:
    """Shape and y-extent of ``Sigma(p) ∩ {0 <= z <= h0}`` inside the domain ``O``."""
    a, b, c, d, u, v = surf.taylor(p)
    det = b * d - c * c
    elliptic = det > 0
    crosses = a * b < 0 if elliptic else a * b > 0
    if not crosses:
        raise EmptyStripError(
            f"a*b = {a * b:.3e} at {p}: the sheet has no "
            f"{'cap crossing z = 0' if elliptic else 'separating band'}; wrong sign of mu0")
    if not elliptic and b > 0 and h0 >= a:
        raise EmptyStripError(f"h0 = {h0} >= a = {a}: the two strip components merge")
    edge = h0 if b > 0 else 0.0
    pts = level_tangent_points(surf, p, edge)
    if len(pts) != 2:
        raise EmptyStripError(f"level {edge} has no x-parallel points at {p}")
    _, _, ylo, yhi = surf.domain
    lo_edge, hi_edge = pts[0][1], pts[1][1]
    if elliptic:
        comp = (max(lo_edge, ylo), min(hi_edge, yhi))
        if comp[0] >= comp[1]:
            raise EmptyStripError("annulus lies outside the surface domain")
        return StripDescription(StripVariant.ANNULUS, comp, (0.0, h0), (comp,), edge)
    comps = []
    if lo_edge > ylo:
        comps.append((ylo, min(lo_edge, yhi)))
    if hi_edge < yhi:
        comps.append((max(hi_edge, ylo), yhi))
    if not comps:
        raise EmptyStripError("both strip components lie outside the surface domain")
    return StripDescription(StripVariant.TWO_RECTANGLES, (comps[0][0], comps[-1][1]),
                            (0.0, h0), tuple(comps), edge)


# ---------------------------------------------------------------------------
# bracketing


def _separation(strand_range, comp, upward: bool) -> str:
    lo, hi = strand_range
    if upward:
        return "past" if lo > comp[1] else ("before" if hi < comp[0] else "overlap")
    return "past" if hi < comp[0] else ("before" if lo > comp[1] else "overlap")


def bracket_nu(strand_range: Callable[[float], tuple[float, float]],
               strip_at: Callable[[float], StripDescription],
               nu_bar: float, max_halvings: int = 80) -> tuple[float, float]:
    """Bracket ``(0, nu_bar_m)``: separated below the strip at 0, separated past it at ``nu_bar_m``.

    ``nu_bar_m`` is the smallest ``nu_bar / 2^k`` that still has the strand past
    the strip; if one halving jumps from a chart overflow straight into overlap,
    the gap is bisected.  ``strand_range`` may raise ``DomainOverflowError``.
    Tries ``-nu_bar`` when the given sign never separates.
    """
    y0 = strand_range(0.0)
    s0 = strip_at(0.0)
    mid0 = 0.5 * (y0[0] + y0[1])
    upward = mid0 < s0.components[0][0]
    if not upward and mid0 <= s0.components[-1][1]:
        raise BracketPreconditionError(
            f"strand y-range {y0} overlaps the strip components {s0.components} at nu = 0")
    k_comp = 0 if upward else -1
    comp0 = s0.components[k_comp]
    if _separation(y0, comp0, upward) != "before":
        raise BracketPreconditionError(
            f"strand y-range {y0} overlaps the strip y-range {comp0} at nu = 0")

    def state(nu: float) -> str:
        try:
            rng = strand_range(nu)
            comp = strip_at(nu).components[k_comp]
        except (DomainOverflowError, EmptyStripError):
            return "overflow"
        return _separation(rng, comp, upward)

    tried = []
    for sgn in (1.0, -1.0):
        nb = sgn * nu_bar
        best = None
        prev_overflow = None
        for _ in range(max_halvings):
            st = state(nb)
            tried.append((nb, st))
            if st == "past":
                best = nb
            elif st == "overflow":
                prev_overflow = nb
            else:
                if best is None and prev_overflow is not None and st == "overlap":
                    best = _bisect_gap(state, nb, prev_overflow)
                break
            nb *= 0.5
        if best is not None:
            return (0.0, best)
    raise BracketError(f"no separating nu_bar found; states tried: {tried[-6:]}")


def _bisect_gap(state, inside: float, over: float, iters: int = 100) -> float | None:
    for _ in range(iters):
        mid = 0.5 * (inside + over)
        st = state(mid)
        if st == "past":
            return mid
        if st == "overflow":
            over = mid
        else:
            inside = mid
    return None


# ---------------------------------------------------------------------------
# solving one tangency


@dataclass
class GapContext:
    """Everything needed to evaluate ``Delta(nu, t) = f_{mu0,nu}(t, y_m(nu,t)) - z_m(nu,t)``."""

    spectrum: SaddleSpectrum
    surf: SurfaceFamily
    curve: CurveFamily
    mu0: float
    n: int
    delta: float = 1.0
    t_samples: int = 801
    bend_sign: float = 0.0

    def strand(self, nu: float) -> IteratedStrand:
        return iterate_strand(self.spectrum, self.curve, ParamPoint(self.mu0, nu), self.n,
                              self.delta, check=False)

    def sign(self, nu: float) -> float:
        b = self.surf.coeff_b(self.mu0, nu)
        return 1.0 if b > 0 else -1.0

    def gap_samples(self, nu: float, strand: IteratedStrand, ts: np.ndarray) -> np.ndarray:
        C = self.surf.xy_coefficients(ParamPoint(self.mu0, nu))
        return P.polyval2d(ts, strand.y_poly(ts), C) - strand.z_poly(ts)

    def gap_jet(self, nu: float, strand: IteratedStrand, t: float) -> GapJet:
        return graph_gap_jet(self.surf, ParamPoint(self.mu0, nu), strand.jet(t), check_domain=False)

    def extremum(self, nu: float) -> tuple[float, float]:
        """``(t*, Delta(nu, t*))`` at the interior extremum of the gap in t."""
        s = self.strand(nu)
        ts = np.linspace(-self.delta, self.delta, self.t_samples)
        vals = self.gap_samples(nu, s, ts)
        sg = self.sign(nu)
        k = int(np.argmin(vals) if sg > 0 else np.argmax(vals))
        t = float(ts[k])
        for _ in range(60):
            g = self.gap_jet(nu, s, t)
            if g.bend == 0.0:
                break
            step = g.slope / g.bend
            t -= step
            if abs(step) < 1e-15:
                break
        g = self.gap_jet(nu, s, t)
        return t, g.value

    def nu_speed(self, nu: float, t: float) -> float:
        """``d Delta / d nu`` at fixed t (exact chain rule)."""
        p = ParamPoint(self.mu0, nu)
        s = self.strand(nu)
        y = float(s.y_poly(t))
        dy, dz = strand_nu_velocity(self.spectrum, self.curve, p, self.n, t)
        _, grad, _ = surface_jet(self.surf, p, t, y)
        return surface_param_partial(self.surf, p, t, y) + grad[1] * dy - dz


def solve_tangency(ctx: GapContext, m: int, bracket: tuple[float, float],
                   scan_points: int = 200, solve_tol: float = 1e-10,
                   contact_tol: float = 1e-9, bend_tol: float = 1e-6) -> TangencyRecord:
    """Solve ``Delta = d Delta/dt = 0`` for ``(nu_m, t_m)`` inside ``bracket``.

    Extremal-gap scan plus Brent on ``G(nu)``, then Newton with ``G' = Delta_nu``
    (valid because ``Delta_t = 0`` at the extremum).
    """
    lo, hi = bracket
    grid = np.linspace(lo, hi, scan_points + 1)
    G = np.array([ctx.extremum(nu)[1] for nu in grid])
    zeros = [i for i in range(scan_points + 1) if abs(G[i]) <= solve_tol]
    flips = [i for i in range(scan_points) if G[i] * G[i + 1] < 0]
    if not zeros and not flips:
        raise TangencySolveError(
            f"extremal gap keeps one sign on [{lo:.3e}, {hi:.3e}] "
            f"(G = {G[0]:.3e} .. {G[-1]:.3e})", list(zip(grid, G)))
    zero_runs = sum(1 for i in zeros if i - 1 not in zeros)
    multiplicity = len(flips) + zero_runs
    if multiplicity > 1:
        log.info("m=%d: %d roots of the extremal gap; taking the one nearest 0", m, multiplicity)
    # nearest to nu = 0; a grid point with |G| below tolerance counts as a root
    i = min(zeros + flips, key=lambda j: abs(grid[j]))
    Gf = lambda nu: ctx.extremum(nu)[1]  # noqa: E731
    if i in zeros:
        nu = float(grid[i])
        a_, b_ = grid[max(i - 1, 0)], grid[min(i + 1, scan_points)]
    else:
        a_, b_ = grid[i], grid[i + 1]
        nu = brentq(Gf, a_, b_, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=400)
    for _ in range(3):
        t, g = ctx.extremum(nu)
        if g == 0.0:
            break
        d = ctx.nu_speed(nu, t)
        if d == 0.0:
            break
        cand = nu - g / d
        if not min(a_, b_) <= cand <= max(a_, b_):
            break
        gc = ctx.extremum(cand)[1]
        if abs(gc) >= abs(g):
            break
        nu = cand
    t, _ = ctx.extremum(nu)
    s = ctx.strand(nu)
    jet = s.jet(t)
    gap = ctx.gap_jet(nu, s, t)
    if abs(gap.value) > solve_tol or abs(gap.slope) > solve_tol:
        raise TangencySolveError(
            f"residuals |Delta| = {abs(gap.value):.3e}, |Delta_t| = {abs(gap.slope):.3e}")
    p = ParamPoint(ctx.mu0, nu)
    x, y, z = jet.point
    note = ""
    if not ctx.surf.in_domain(x, y):
        raise DomainError(f"tangency point ({x:.4g}, {y:.4g}) lies outside the surface domain")
    ck = curvature(jet)
    sk = normal_curvature(ctx.surf, p, (x, y), jet.first)
    _, grad, _ = surface_jet(ctx.surf, p, x, y)
    skx = normal_curvature(ctx.surf, p, (x, y), (1.0, 0.0, grad[0]))
    cc = contact_class(gap, contact_tol, bend_tol)
    crit = quadratic_by_curvature(ck, sk)
    if cc is ContactClass.QUADRATIC_TANGENCY and not crit:
        note = "curvature criterion inconclusive"
    inside = min(lo, hi) < nu < max(lo, hi)
    rec = TangencyRecord(
        m=m, n=ctx.n, nu_m=float(nu), t_m=float(t), tau_m=(float(x), float(y), float(z)),
        gap=gap, curve_kappa=ck, surface_kappa=sk, surface_kappa_x=skx, contact=cc,
        curvature_criterion=crit, nu_bar_m=hi if abs(hi) > abs(lo) else lo,
        multiplicity=multiplicity, note=note,
    )
    rec.accepted = cc is ContactClass.QUADRATIC_TANGENCY and inside
    if cc is ContactClass.DEGENERATE_TANGENCY:
        rec.note = "degenerate contact"
    return rec


# ---------------------------------------------------------------------------
# the cascade


@dataclass
class CascadeFailure:
    m: int
    kind: str
    message: str


@dataclass
class CascadeResult:
    records: list[TangencyRecord]
    failures: list[CascadeFailure]
    kind: TangencyType
    mu0: float
    h0: float
    nu_bar: float
    required_sign: int
    kappa0: float
    surface: SurfaceFamily
    curve: CurveFamily
    invariants: dict = field(default_factory=dict)
    fitted_log_rate: float | None = None

    @property
    def accepted(self) -> list[TangencyRecord]:
        return [r for r in self.records if r.accepted]


def default_h0(surf: SurfaceFamily, mu0: float) -> float:
    return 0.5 * abs(surf.coeff_a(mu0, 0.0))


def kappa0_reference(surf: SurfaceFamily, mu0: float) -> float:
    """``|normal curvature|`` along ``(1,0,0)`` at the lower x-parallel point of ``{f = 0}`` at ``nu = 0``."""
    p = ParamPoint(mu0, 0.0)
    pts = level_tangent_points(surf, p, 0.0)
    if not pts:
        return math.nan
    x, y = pts[0]
    _, grad, _ = surface_jet(surf, p, x, y)
    if not surf.in_domain(x, y):
        return math.nan
    return abs(normal_curvature(surf, p, (x, y), (1.0, 0.0, grad[0])))


def _strand_range(ctx: GapContext, nu: float) -> tuple[float, float]:
    s = iterate_strand(ctx.spectrum, ctx.curve, ParamPoint(ctx.mu0, nu), ctx.n, ctx.delta)
    return s.y_range()


def default_nu_bar(spectrum: SaddleSpectrum, curve: CurveFamily, surf: SurfaceFamily,
                   mu0: float, n: int, delta: float = 1.0) -> float:
    """Largest ``|nu| <= 1`` keeping ``l_{m0+n, nu}`` inside the chart, signed toward the strip."""
    ctx = GapContext(spectrum, surf, curve, mu0, n, delta)
    s0 = ctx.strand(0.0)
    y_mid = 0.5 * sum(s0.y_range())
    v = surf.center_v(mu0, 0.0)
    dy, _ = strand_nu_velocity(spectrum, curve, ParamPoint(mu0, 0.0), n, 0.0)
    sgn = float(np.sign(v - y_mid) * np.sign(dy)) or 1.0

    def inside(nu):
        return iterate_strand(spectrum, curve, ParamPoint(mu0, nu), n, delta, check=False).inside_chart()

    if inside(sgn):
        return sgn
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if inside(sgn * mid):
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15:
            break
    return sgn * lo


def run_cascade(spectrum: SaddleSpectrum, surf: SurfaceFamily, curve: CurveFamily,
                cfg: CascadeConfig) -> CascadeResult:
    """One record attempt per ``m`` in ``[m_min, m_max]``; per-m failures are collected, not raised."""
    kind = classify(surf)
    a, b00, c, d, u, v = surf.taylor(ParamPoint())
    req = required_mu_sign(kind, b00, surf.eta0())
    if cfg.reparametrize:
        rp = reparametrize(curve, surf)
        curve, surf = rp.curve, rp.surface
    h0 = cfg.h0 if cfg.h0 is not None else default_h0(surf, cfg.mu0)
    n_min = cfg.m_min - curve.m0
    if n_min < 0:
        raise ValueError("m_min must be >= m0")
    nu_bar = cfg.nu_bar
    if nu_bar is None:
        nu_bar = default_nu_bar(spectrum, curve, surf, cfg.mu0, n_min, cfg.delta)
    records, failures = [], []
    for m in range(cfg.m_min, cfg.m_max + 1):
        n = m - curve.m0
        ctx = GapContext(spectrum, surf, curve, cfg.mu0, n, cfg.delta, cfg.t_samples)
        try:
            bracket = bracket_nu(lambda nu: _strand_range(ctx, nu),
                                 lambda nu: strip(surf, ParamPoint(cfg.mu0, nu), h0),
                                 abs(nu_bar) * (1 if nu_bar > 0 else -1))
            rec = solve_tangency(ctx, m, bracket, cfg.scan_points, cfg.solve_tol,
                                 cfg.contact_tol, cfg.bend_tol)
        except (ChartError, SolverError) as exc:
            failures.append(CascadeFailure(m, type(exc).__name__, str(exc)))
            log.info("m=%d failed: %s", m, exc)
            continue
        height = float(ctx.strand(0.0).z_poly(0.0))
        rec.strand_height = height
        rec.height_hypothesis = height < h0 / 2
        records.append(rec)
    result = CascadeResult(records, failures, kind, cfg.mu0, h0, nu_bar, req,
                           kappa0_reference(surf, cfg.mu0), surf, curve)
    result.invariants = cascade_invariants(result)
    acc = result.accepted
    if len(acc) >= 2:
        ns = np.array([r.n for r in acc], dtype=float)
        result.fitted_log_rate = float(np.polyfit(ns, np.log(np.abs([r.nu_m for r in acc])), 1)[0])
    return result


def cascade_invariants(result: CascadeResult) -> dict[str, bool]:
    acc = result.accepted
    inv = {
        "has_records": bool(acc),
        "all_quadratic": all(r.contact is ContactClass.QUADRATIC_TANGENCY for r in acc),
        "curvature_criterion": all(r.curvature_criterion for r in acc),
        "nu_in_bracket": all(0 < r.nu_m / r.nu_bar_m < 1 for r in acc),
    }
    mono = True
    for r1, r2 in zip(acc, acc[1:]):
        if not (np.sign(r1.nu_m) == np.sign(r2.nu_m) and abs(r2.nu_m) < abs(r1.nu_m)):
            mono = False
    inv["nu_monotone"] = mono
    if result.kind is TangencyType.HYPERBOLIC and acc:
        inv["x_curvature_bound"] = all(abs(r.surface_kappa_x) > 0.5 * result.kappa0 for r in acc)
    return inv


def with_margin(rec: TangencyRecord, margin: float) -> TangencyRecord:
    return replace(rec, unfolding_margin=margin)
