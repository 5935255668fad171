"""Shared numerical routines: quadrature, root finding, stencils.

Everything here is deterministic and pure; tolerances follow the package-wide
convention (quadrature 1e-11 absolute+relative, roots to 1e-13 absolute).
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError

QUAD_TOL = 1e-11
ROOT_XTOL = 1e-13
_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol_abs: float = QUAD_TOL,
    tol_rel: float = QUAD_TOL,
    max_depth: int = 60,
) -> float:
    """Integrate ``f`` over [a, b] by recursive adaptive Simpson subdivision.

    The local acceptance test combines absolute and relative tolerances;
    accepted panels use the standard Richardson correction term.
    """
    if a == b:
        return 0.0
    if a > b:
        return -adaptive_simpson(f, b, a, tol_abs, tol_rel, max_depth)

    def simpson(x0, x2, f0, f1, f2):
        return (x2 - x0) / 6.0 * (f0 + 4.0 * f1 + f2)

    def recurse(x0, x2, f0, f1, f2, whole, tol, depth):
        xm = 0.5 * (x0 + x2)
        xl = 0.5 * (x0 + xm)
        xr = 0.5 * (xm + x2)
        fl = f(xl)
        fr = f(xr)
        left = simpson(x0, xm, f0, fl, f1)
        right = simpson(xm, x2, f1, fr, f2)
        err = left + right - whole
        if depth >= max_depth or abs(err) <= 15.0 * max(tol, tol_rel * abs(left + right)):
            return left + right + err / 15.0
        return recurse(x0, xm, f0, fl, f1, left, 0.5 * tol, depth + 1) + recurse(
            xm, x2, f1, fr, f2, right, 0.5 * tol, depth + 1
        )

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = simpson(a, b, fa, fm, fb)
    return recurse(a, b, fa, fm, fb, whole, tol_abs, 0)


def composite_simpson(y: np.ndarray, h: float) -> float:
    """Composite Simpson on uniformly spaced samples (odd count required)."""
    n = len(y) - 1
    if n < 2 or n % 2 != 0:
        raise DomainError("composite Simpson needs an even number of intervals")
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def bracket_root(
    f: Callable[[float], float],
    t0: float = 0.0,
    step: float = 1e-3,
    t_max: float = 1e6,
) -> tuple[float, float]:
    """Find a sign change of ``f`` by a doubling scan starting at ``t0``.

    Returns (lo, hi) with f(lo) and f(hi) of opposite (or zero) sign.
    """
    lo = t0
    flo = f(lo)
    if flo == 0.0:
        return lo, lo
    h = step
    while True:
        hi = lo + h
        if hi > t_max:
            raise ConvergenceError(f"no sign change found in [{t0}, {t_max}]")
        fhi = f(hi)
        if flo * fhi <= 0.0:
            return lo, hi
        lo, flo = hi, fhi
        h *= 2.0


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    xtol: float = ROOT_XTOL,
) -> float:
    """Bisection to absolute width ``xtol``; endpoints must bracket a root."""
    flo = f(lo)
    if flo == 0.0:
        return lo
    fhi = f(hi)
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise DomainError("bisect_root endpoints do not bracket a sign change")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def golden_max(
    f: Callable[[float], float],
    a: float,
    b: float,
    xtol: float = 1e-10,
) -> tuple[float, float]:
    """Golden-section search for a maximum of a unimodal ``f`` on [a, b]."""
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > xtol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    xm = 0.5 * (a + b)
    return xm, f(xm)


# 7-point Gauss-Legendre nodes/weights on [-1, 1]; used for cumulative
# integrals of smooth model profiles where per-cell accuracy ~ h^14 makes the
# scan error negligible next to the tolerances in play.
_GL7_X = np.array(
    [
        -0.9491079123427585,
        -0.7415311855993945,
        -0.4058451513773972,
        0.0,
        0.4058451513773972,
        0.7415311855993945,
        0.9491079123427585,
    ]
)
_GL7_W = np.array(
    [
        0.1294849661688697,
        0.2797053914892766,
        0.3818300505051189,
        0.4179591836734694,
        0.3818300505051189,
        0.2797053914892766,
        0.1294849661688697,
    ]
)


def gauss7(f_vec: Callable[[np.ndarray], np.ndarray], a: float, b: float) -> float:
    """7-point Gauss-Legendre integral of a vectorized integrand on [a, b]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * float(np.dot(_GL7_W, f_vec(mid + half * _GL7_X)))


def cumulative_gauss7(
    f_vec: Callable[[np.ndarray], np.ndarray], grid: np.ndarray
) -> np.ndarray:
    """Cumulative integral of ``f_vec`` at the points of ``grid``.

    Vectorized over all cells at once; returns an array aligned with ``grid``
    whose first entry is 0.
    """
    a = grid[:-1]
    b = grid[1:]
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    # nodes: shape (cells, 7)
    nodes = mid[:, None] + half[:, None] * _GL7_X[None, :]
    vals = f_vec(nodes.ravel()).reshape(nodes.shape)
    cell = half * (vals @ _GL7_W)
    out = np.empty(len(grid))
    out[0] = 0.0
    np.cumsum(cell, out=out[1:])
    return out


def stencil_d1(y: np.ndarray, h: float) -> np.ndarray:
    """First derivative of uniform samples by 5-point stencils.

    Central in the interior, one-sided 5-point formulas at the two points
    nearest each end. Needs at least 5 samples.
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < 5:
        raise DomainError("need at least 5 samples for 5-point stencils")
    d = np.empty(n)
    d[2:-2] = (y[:-4] - 8.0 * y[1:-3] + 8.0 * y[3:-1] - y[4:]) / (12.0 * h)
    fwd = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / (12.0 * h)
    semi = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / (12.0 * h)
    d[0] = fwd @ y[:5]
    d[1] = semi @ y[:5]
    d[-1] = -(fwd @ y[-5:][::-1])
    d[-2] = -(semi @ y[-5:][::-1])
    return d


def stencil_d2(y: np.ndarray, h: float) -> np.ndarray:
    """Second derivative of uniform samples by 5-point stencils."""
    y = np.asarray(y, dtype=float)
    n = len(y)
    if n < 5:
        raise DomainError("need at least 5 samples for 5-point stencils")
    d = np.empty(n)
    d[2:-2] = (-y[:-4] + 16.0 * y[1:-3] - 30.0 * y[2:-2] + 16.0 * y[3:-1] - y[4:]) / (
        12.0 * h * h
    )
    fwd = np.array([35.0, -104.0, 114.0, -56.0, 11.0]) / (12.0 * h * h)
    semi = np.array([11.0, -20.0, 6.0, 4.0, -1.0]) / (12.0 * h * h)
    d[0] = fwd @ y[:5]
    d[1] = semi @ y[:5]
    d[-1] = fwd @ y[-5:][::-1]
    d[-2] = semi @ y[-5:][::-1]
    return d
