"""Small deterministic root finders used throughout the chart computations."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np


class SolverError(RuntimeError):
    """A root finder failed to converge; ``trace`` holds the iterate history."""

    def __init__(self, message: str, trace: list | None = None):
        super().__init__(message)
        self.trace = trace or []


def safe_newton(
    f: Callable[[float], float],
    df: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-14,
    maxiter: int = 200,
) -> float:
    """Newton's method kept inside a sign-change bracket, bisecting when a step leaves it."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise SolverError(f"no sign change on [{lo}, {hi}]: f={flo:.3e}, {fhi:.3e}")
    if flo > 0:
        lo, hi = hi, lo
    x = 0.5 * (lo + hi)
    trace = []
    for _ in range(maxiter):
        fx = f(x)
        trace.append((x, fx))
        if fx == 0.0:
            return x
        if fx < 0:
            lo = x
        else:
            hi = x
        d = df(x)
        step_ok = d != 0.0 and math.isfinite(d)
        if step_ok:
            xn = x - fx / d
            if not (min(lo, hi) < xn < max(lo, hi)):
                step_ok = False
        if not step_ok:
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= tol * max(1.0, abs(x)):
            return xn
        x = xn
    raise SolverError("safeguarded Newton did not converge", trace)


def newton(
    f: Callable[[float], float],
    df: Callable[[float], float],
    x0: float,
    tol: float = 1e-14,
    maxiter: int = 60,
) -> float:
    x = x0
    trace = []
    for _ in range(maxiter):
        fx = f(x)
        d = df(x)
        trace.append((x, fx, d))
        if d == 0.0 or not math.isfinite(d):
            raise SolverError("zero derivative in Newton iteration", trace)
        step = fx / d
        x -= step
        if abs(step) <= tol * max(1.0, abs(x)):
            return x
    raise SolverError("Newton did not converge", trace)


def newton_system(
    F: Callable[[np.ndarray], np.ndarray],
    J: Callable[[np.ndarray], np.ndarray],
    x0,
    tol: float = 1e-14,
    maxiter: int = 60,
) -> np.ndarray:
    x = np.asarray(x0, dtype=float).copy()
    trace = []
    for _ in range(maxiter):
        r = F(x)
        trace.append((x.copy(), r.copy()))
        try:
            step = np.linalg.solve(J(x), r)
        except np.linalg.LinAlgError as exc:
            raise SolverError(f"singular Jacobian: {exc}", trace) from exc
        x = x - step
        if np.max(np.abs(step)) <= tol * max(1.0, float(np.max(np.abs(x)))):
            return x
    raise SolverError("Newton system did not converge", trace)


def poly_abs_max(p: np.polynomial.Polynomial, lo: float, hi: float) -> tuple[float, float]:
    """Sup of ``|p|`` on ``[lo, hi]`` and its location, by critical-point enumeration."""
    cands = [lo, hi]
    dp = p.deriv()
    if dp.degree() > 0 or np.any(dp.coef != 0):
        for r in dp.roots():
            if abs(r.imag) < 1e-12 and lo <= r.real <= hi:
                cands.append(float(r.real))
    vals = [abs(p(c)) for c in cands]
    k = int(np.argmax(vals))
    return float(vals[k]), cands[k]


def poly_range(p: np.polynomial.Polynomial, lo: float, hi: float) -> tuple[float, float]:
    """Exact ``(min, max)`` of a real polynomial on ``[lo, hi]``."""
    cands = [lo, hi]
    dp = p.deriv()
    if np.any(dp.coef != 0):
        for r in dp.roots():
            if abs(r.imag) < 1e-12 and lo <= r.real <= hi:
                cands.append(float(r.real))
    vals = [float(p(c)) for c in cands]
    return min(vals), max(vals)
