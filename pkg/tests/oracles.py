"""Independent reference computations used by the tests.

None of these touch the package's derivative code: they evaluate the germs
from their defining formulas and differentiate numerically or search by brute force.
"""

from __future__ import annotations

import numpy as np


def surface_value(surf, mu, nu, x, y):
    """Direct evaluation of a + b X^2/2 + c X Y + d Y^2/2 + sum h_ij X^i Y^j."""
    X = x - surf.center_u(mu, nu)
    Y = y - surf.center_v(mu, nu)
    val = (surf.coeff_a(mu, nu) + 0.5 * surf.coeff_b(mu, nu) * X * X
           + surf.coeff_c(mu, nu) * X * Y + 0.5 * surf.coeff_d(mu, nu) * Y * Y)
    for (i, j), h in surf.higher_order:
        val = val + h * X**i * Y**j
    return val


def central_diff(fn, x, h=1e-5):
    return (fn(x + h) - fn(x - h)) / (2 * h)


def central_diff2(fn, x, h=1e-4):
    return (fn(x + h) - 2 * fn(x) + fn(x - h)) / (h * h)


def grad_norm_fd(surf, mu, nu, x, y, h=1e-6):
    f = lambda a, b: surface_value(surf, mu, nu, a, b)  # noqa: E731
    gx = (f(x + h, y) - f(x - h, y)) / (2 * h)
    gy = (f(x, y + h) - f(x, y - h)) / (2 * h)
    return np.hypot(gx, gy)


def grid_refined_critical_point(surf, mu, nu, center, half=0.05, levels=(1e-4, 1e-8, 1e-12)):
    """Minimize |grad f| by repeated grid search around ``center``.

    The gradient is evaluated exactly from the defining formula by complex-step
    differentiation, so the oracle does not share code with the package.
    """
    def grad(x, y):
        hs = 1e-30
        gx = surface_value(surf, mu, nu, x + 1j * hs, y).imag / hs
        gy = surface_value(surf, mu, nu, x, y + 1j * hs).imag / hs
        return np.hypot(gx, gy)

    cx, cy = center
    span = half
    for res in levels:
        while span > 20 * res:
            xs = np.linspace(cx - span, cx + span, 41)
            ys = np.linspace(cy - span, cy + span, 41)
            X, Y = np.meshgrid(xs, ys)
            G = grad(X, Y)
            k = np.unravel_index(np.argmin(G), G.shape)
            cx, cy = X[k], Y[k]
            span = span / 10
    return float(cx), float(cy)


def normal_section_curvature(surf, mu, nu, base, direction, h=1e-4):
    """Curvature of the normal section sampled from the height function.

    Parametrize the normal plane spanned by the unit tangent ``e`` and the unit
    upward normal ``N``; the section is ``base3 + s e + w(s) N`` with
    ``w(0) = w'(0) = 0``.  ``w(s)`` is found by 1D bisection on the surface
    equation and ``w''(0)`` by a centered second difference.
    """
    x0, y0 = base
    z0 = surface_value(surf, mu, nu, x0, y0)
    p0 = np.array([x0, y0, z0])
    hs = 1e-30
    fx = surface_value(surf, mu, nu, x0 + 1j * hs, y0).imag / hs
    fy = surface_value(surf, mu, nu, x0, y0 + 1j * hs).imag / hs
    N = np.array([-fx, -fy, 1.0])
    N /= np.linalg.norm(N)
    e = np.asarray(direction, dtype=float)
    e /= np.linalg.norm(e)

    def w(s):
        def resid(wv):
            q = p0 + s * e + wv * N
            return surface_value(surf, mu, nu, q[0], q[1]) - q[2]
        lo, hi = -0.01, 0.01
        rlo = resid(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            rm = resid(mid)
            if (rm > 0) == (rlo > 0):
                lo, rlo = mid, rm
            else:
                hi = mid
        return 0.5 * (lo + hi)

    return (w(h) - 2 * w(0.0) + w(-h)) / (h * h)
