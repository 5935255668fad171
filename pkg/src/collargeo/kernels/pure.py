"""Pure-Python twin of the compiled shooting kernels.

Algorithm, constants and status codes here must match ``_core.pyx`` exactly:
the kernel parity tests and the benchmark compare the two implementations
directly. Hot-loop code deliberately sticks to scalar ``math`` calls.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND_NAME = "pure"

KIND_CONST = 0
KIND_MODEL = 1
KIND_TABLE = 2

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_MAX_STEPS = 2
STATUS_BAD_DENSITY = 3

_MAX_STEPS = 5_000_000

# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 0.2, 0.3, 0.8, 8.0 / 9.0
_A21 = 0.2
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
)
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_A71, _A73, _A74, _A75, _A76 = (
    35.0 / 384.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
)
# error weights: 5th-order minus embedded 4th-order coefficients
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


class Density:
    """Parameter pack for one of the three density kinds."""

    __slots__ = ("kind", "scale", "c", "nexp", "kappa", "lam", "x", "y", "d", "x0", "h", "n")

    def __init__(self, kind, scale, c, nexp, kappa, lam, x, y, d):
        self.kind = int(kind)
        self.scale = float(scale)
        self.c = float(c)
        self.nexp = float(nexp)
        self.kappa = float(kappa)
        self.lam = float(lam)
        if x is None:
            self.x = self.y = self.d = None
            self.x0 = 0.0
            self.h = 1.0
            self.n = 0
        else:
            self.x = [float(v) for v in np.asarray(x, dtype=float)]
            self.y = [float(v) for v in np.asarray(y, dtype=float)]
            self.d = [float(v) for v in np.asarray(d, dtype=float)]
            self.n = len(self.x)
            self.x0 = self.x[0]
            self.h = (self.x[-1] - self.x[0]) / (self.n - 1)


def make_density(kind, scale=1.0, c=1.0, nexp=1.0, kappa=0.0, lam=0.0, x=None, y=None, d=None):
    return Density(kind, scale, c, nexp, kappa, lam, x, y, d)


def s_pair(kappa: float, lam: float, t: float) -> tuple[float, float]:
    """Scalar comparison profile and derivative.

    Same branch structure as the vectorized version in ``models``: power
    series near kappa*t^2 = 0, exponential form for kappa < 0 with
    |lam| <= sqrt(-kappa) (cancellation-free), trig/hyperbolic otherwise.
    """
    if kappa < 0.0:
        a = math.sqrt(-kappa)
        if abs(lam) <= a * (1.0 + 4e-16):
            coef_p = 0.5 * (1.0 - lam / a)
            coef_m = 0.5 * (1.0 + lam / a)
            if abs(lam - a) <= 4e-16 * a:
                coef_p = 0.0
                coef_m = 1.0
            em = math.exp(-a * t)
            if coef_p == 0.0:
                return coef_m * em, -a * coef_m * em
            ep = math.exp(a * t)
            return coef_p * ep + coef_m * em, a * (coef_p * ep - coef_m * em)
    z = kappa * t * t
    if abs(z) < 1e-8:
        sk = t * (1.0 - z / 6.0 * (1.0 - z / 20.0 * (1.0 - z / 42.0)))
        ck = 1.0 - z / 2.0 * (1.0 - z / 12.0 * (1.0 - z / 30.0))
    elif kappa > 0.0:
        rk = math.sqrt(kappa)
        sk = math.sin(rk * t) / rk
        ck = math.cos(rk * t)
    else:
        rk = math.sqrt(-kappa)
        sk = math.sinh(rk * t) / rk
        ck = math.cosh(rk * t)
    return ck - lam * sk, -kappa * sk - lam * ck


def density_value(dens: Density, t: float) -> float:
    if dens.kind == KIND_CONST:
        return dens.scale * dens.c
    if dens.kind == KIND_MODEL:
        s, _ = s_pair(dens.kappa, dens.lam, t)
        if s <= 0.0:
            return 0.0
        return dens.scale * s**dens.nexp
    # cubic Hermite on a uniform table
    i = int((t - dens.x0) / dens.h)
    if i < 0:
        i = 0
    elif i > dens.n - 2:
        i = dens.n - 2
    dx = dens.x[i + 1] - dens.x[i]
    s = (t - dens.x[i]) / dx
    s2 = s * s
    omu = 1.0 - s
    h00 = (1.0 + 2.0 * s) * omu * omu
    h10 = s * omu * omu
    h01 = s2 * (3.0 - 2.0 * s)
    h11 = s2 * (s - 1.0)
    return dens.scale * (
        h00 * dens.y[i] + h10 * dx * dens.d[i] + h01 * dens.y[i + 1] + h11 * dx * dens.d[i + 1]
    )


def _rhs(p: float, mu: float, dens: Density, t: float, u: float, v: float):
    """Derivative of (u, v); returns (du, dv, ok)."""
    a = density_value(dens, t)
    if not (a > 0.0):
        return 0.0, 0.0, False
    w = v / a
    if p == 2.0:
        return w, -mu * a * u, True
    du = math.copysign(abs(w) ** (1.0 / (p - 1.0)), w)
    dv = -mu * a * math.copysign(abs(u) ** (p - 1.0), u)
    return du, dv, True


def _hermite(theta, q0, m0, q1, m1):
    omu = 1.0 - theta
    h00 = (1.0 + 2.0 * theta) * omu * omu
    h10 = theta * omu * omu
    h01 = theta * theta * (3.0 - 2.0 * theta)
    h11 = theta * theta * (theta - 1.0)
    return h00 * q0 + h10 * m0 + h01 * q1 + h11 * m1


def shoot(
    p: float,
    mu: float,
    t_end: float,
    dens: Density,
    rtol: float,
    atol: float,
    stop_at_crossing: int = 0,
    n_samples: int = 0,
):
    """Integrate the first-order shooting system from t=0 to t_end.

    State is (u, v) = (phi, density * |phi'|^(p-2) phi'), started from
    (0, density(0)), i.e. phi'(0) = 1. Reports the first sign change of v
    (equivalently of phi'); with ``stop_at_crossing`` the integration halts
    there. With ``n_samples > 0`` steps are clamped so the solution is
    recorded on the uniform grid of that many points.

    Returns (phi_end, dphi_end, first_crit, status, nsteps, ts, us, dus)
    where first_crit is NaN if phi' never changes sign and the last three
    entries are None unless sampling was requested.
    """
    a0 = density_value(dens, 0.0)
    if not (a0 > 0.0):
        return 0.0, 0.0, math.nan, STATUS_BAD_DENSITY, 0, None, None, None

    u = 0.0
    v = a0
    t = 0.0
    first_crit = math.nan
    status = STATUS_OK
    nsteps = 0

    ts = us = dus = None
    sample_idx = 0
    sample_dt = 0.0
    if n_samples > 1:
        ts = np.linspace(0.0, t_end, n_samples)
        us = np.empty(n_samples)
        dus = np.empty(n_samples)
        sample_dt = t_end / (n_samples - 1)
        du0, _, _ = _rhs(p, mu, dens, 0.0, u, v)
        us[0] = 0.0
        dus[0] = du0
        sample_idx = 1

    k1u, k1v, ok = _rhs(p, mu, dens, t, u, v)
    if not ok:
        return 0.0, 0.0, math.nan, STATUS_BAD_DENSITY, 0, ts, us, dus

    h = t_end / 64.0
    h_min = 1e-14 * t_end
    rejected = False
    finished = False

    while not finished:
        if nsteps >= _MAX_STEPS:
            status = STATUS_MAX_STEPS
            break
        forced_sample = -1
        if t + h >= t_end:
            h = t_end - t
            finished = True
        if sample_idx and sample_idx < n_samples:
            t_next = ts[sample_idx]
            if t + h >= t_next - 1e-15 * t_end:
                h = t_next - t
                forced_sample = sample_idx
                finished = False
                if sample_idx == n_samples - 1:
                    finished = True

        t2 = t + _C2 * h
        u2 = u + h * _A21 * k1u
        v2 = v + h * _A21 * k1v
        k2u, k2v, ok = _rhs(p, mu, dens, t2, u2, v2)
        if ok:
            t3 = t + _C3 * h
            u3 = u + h * (_A31 * k1u + _A32 * k2u)
            v3 = v + h * (_A31 * k1v + _A32 * k2v)
            k3u, k3v, ok = _rhs(p, mu, dens, t3, u3, v3)
        if ok:
            t4 = t + _C4 * h
            u4 = u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u)
            v4 = v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v)
            k4u, k4v, ok = _rhs(p, mu, dens, t4, u4, v4)
        if ok:
            t5 = t + _C5 * h
            u5 = u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u)
            v5 = v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v)
            k5u, k5v, ok = _rhs(p, mu, dens, t5, u5, v5)
        if ok:
            t6 = t + h
            u6 = u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u + _A64 * k4u + _A65 * k5u)
            v6 = v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v)
            k6u, k6v, ok = _rhs(p, mu, dens, t6, u6, v6)
        if ok:
            t7 = t + h
            u7 = u + h * (_A71 * k1u + _A73 * k3u + _A74 * k4u + _A75 * k5u + _A76 * k6u)
            v7 = v + h * (_A71 * k1v + _A73 * k3v + _A74 * k4v + _A75 * k5v + _A76 * k6v)
            k7u, k7v, ok = _rhs(p, mu, dens, t7, u7, v7)
        if not ok:
            status = STATUS_BAD_DENSITY
            break

        eu = h * (_E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u + _E6 * k6u + _E7 * k7u)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v)
        scu = atol + rtol * max(abs(u), abs(u7))
        scv = atol + rtol * max(abs(v), abs(v7))
        err = math.sqrt(0.5 * ((eu / scu) ** 2 + (ev / scv) ** 2))
        nsteps += 1

        if err <= 1.0:
            if v > 0.0 >= v7 and math.isnan(first_crit):
                # localize the sign change of v with a cubic Hermite model
                m0 = h * k1v
                m1 = h * k7v
                lo_th, hi_th = 0.0, 1.0
                for _ in range(80):
                    mid = 0.5 * (lo_th + hi_th)
                    if _hermite(mid, v, m0, v7, m1) > 0.0:
                        lo_th = mid
                    else:
                        hi_th = mid
                theta = 0.5 * (lo_th + hi_th)
                first_crit = t + theta * h
                if stop_at_crossing:
                    uc = _hermite(theta, u, h * k1u, u7, h * k7u)
                    return uc, 0.0, first_crit, STATUS_OK, nsteps, ts, us, dus
            t_new = t + h
            if forced_sample >= 0:
                t_new = ts[forced_sample]
            u, v = u7, v7
            k1u, k1v = k7u, k7v
            t = t_new
            if forced_sample >= 0:
                du, _, _ = _rhs(p, mu, dens, t, u, v)
                us[forced_sample] = u
                dus[forced_sample] = du
                sample_idx = forced_sample + 1
            if err == 0.0:
                factor = _MAX_FACTOR
            else:
                factor = min(_MAX_FACTOR, max(_MIN_FACTOR, _SAFETY * err ** -0.2))
            if rejected:
                factor = min(factor, 1.0)
            h = h * factor
            rejected = False
        else:
            finished = False
            rejected = True
            h = h * max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            if h < h_min:
                status = STATUS_STEP_UNDERFLOW
                break

    du_end, _, ok = _rhs(p, mu, dens, min(t, t_end), u, v)
    if not ok:
        du_end = math.nan
    return u, du_end, first_crit, status, nsteps, ts, us, dus
