"""Curve jets, curvatures and curve-surface contact classification in the Euclidean chart."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .chart_model import (CurveFamily, DomainError, ParamPoint, SurfaceFamily, T,
                          evaluate_surface, surface_jet)


class RegularityError(ValueError):
    """The curve jet has zero velocity."""


class NonTangentDirectionError(ValueError):
    """A direction passed as tangent to the graph is not tangent to it."""


@dataclass(frozen=True)
class CurveJet:
    point: np.ndarray
    first: np.ndarray
    second: np.ndarray

    def __post_init__(self):
        for name in ("point", "first", "second"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))


@dataclass(frozen=True)
class GapJet:
    """Surface-minus-curve height ``f(x(t), y(t)) - z(t)`` and two t-derivatives."""

    value: float
    slope: float
    bend: float


class ContactClass(enum.Enum):
    NO_CONTACT = "no_contact"
    TRANSVERSE = "transverse"
    QUADRATIC_TANGENCY = "quadratic_tangency"
    DEGENERATE_TANGENCY = "degenerate_tangency"


def curve_jet(curve: CurveFamily, p: ParamPoint, t: float) -> CurveJet:
    lo, hi = curve.t_range
    if not lo <= t <= hi:
        raise DomainError(f"t = {t} outside strand interval {curve.t_range}")
    args = (p.mu, p.nu, t)
    comps = (curve.x_of_t, curve.y_of_t, curve.z_of_t)
    return CurveJet(
        point=[c(*args) for c in comps],
        first=[c.deriv(T)(*args) for c in comps],
        second=[c.deriv(T, 2)(*args) for c in comps],
    )


def curvature(jet: CurveJet) -> float:
    speed = np.linalg.norm(jet.first)
    if speed == 0.0:
        raise RegularityError("zero tangent vector")
    return float(np.linalg.norm(np.cross(jet.first, jet.second)) / speed**3)


def normal_curvature(surf: SurfaceFamily, p: ParamPoint, base, direction,
                     tol: float = 1e-8) -> float:
    """Signed normal curvature of the graph along a tangent ``direction``.

    The sign is taken against the upward normal ``(-f_x, -f_y, 1)``.
    """
    x, y = base
    _, grad, hess = evaluate_surface(surf, p, x, y)
    w = np.asarray(direction, dtype=float)
    norm_w = np.linalg.norm(w)
    if norm_w == 0.0:
        raise NonTangentDirectionError("zero direction")
    if abs(w[2] - grad @ w[:2]) > tol * norm_w:
        raise NonTangentDirectionError(
            f"direction {tuple(w)} is not tangent to the graph at {tuple(base)}")
    second = w[:2] @ hess @ w[:2] / np.sqrt(1.0 + grad @ grad)
    return float(second / (w @ w))


def graph_gap_jet(surf: SurfaceFamily, p: ParamPoint, jet: CurveJet,
                  check_domain: bool = True) -> GapJet:
    x, y, z = jet.point
    if check_domain and not surf.in_domain(x, y):
        raise DomainError(f"curve point ({x}, {y}) left the surface domain {surf.domain}")
    f, grad, hess = surface_jet(surf, p, x, y)
    v1, v2 = jet.first[:2], jet.second[:2]
    return GapJet(
        value=float(f - z),
        slope=float(grad @ v1 - jet.first[2]),
        bend=float(v1 @ hess @ v1 + grad @ v2 - jet.second[2]),
    )


def gap_jet(curve: CurveFamily, surf: SurfaceFamily, p: ParamPoint, t: float) -> GapJet:
    return graph_gap_jet(surf, p, curve_jet(curve, p, t))


def contact_class(g: GapJet, tol: float = 1e-9, bend_tol: float = 1e-6) -> ContactClass:
    if abs(g.value) >= tol:
        return ContactClass.NO_CONTACT
    if abs(g.slope) >= tol:
        return ContactClass.TRANSVERSE
    if abs(g.bend) >= bend_tol:
        return ContactClass.QUADRATIC_TANGENCY
    return ContactClass.DEGENERATE_TANGENCY


def quadratic_by_curvature(curve_kappa: float, surface_normal_kappa: float) -> bool:
    """Sufficient test: a curve flatter than the sheet in its own direction has quadratic contact.

    ``False`` means inconclusive, not degenerate.
    """
    return curve_kappa < abs(surface_normal_kappa)
