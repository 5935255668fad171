# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shooting kernels.

Twin of ``pure.py``: same density kinds, same Dormand-Prince 5(4) scheme,
same step controller constants, same status codes. Any semantic change here
must be mirrored there (the parity tests compare the two).
"""

import math

import numpy as np

from libc.math cimport (NAN, copysign, exp as cexp, fabs, isnan, pow as cpow,
                        sin, cos, sinh, cosh, sqrt)

BACKEND_NAME = "compiled"

KIND_CONST = 0
KIND_MODEL = 1
KIND_TABLE = 2

cdef int _KCONST = 0
cdef int _KMODEL = 1

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1
STATUS_MAX_STEPS = 2
STATUS_BAD_DENSITY = 3

cdef int MAX_STEPS = 5000000

# Dormand-Prince 5(4) tableau; expressions kept identical to the pure twin so
# both backends see bit-identical constants.
cdef double C2 = 0.2
cdef double C3 = 0.3
cdef double C4 = 0.8
cdef double C5 = 8.0 / 9.0
cdef double A21 = 0.2
cdef double A31 = 3.0 / 40.0
cdef double A32 = 9.0 / 40.0
cdef double A41 = 44.0 / 45.0
cdef double A42 = -56.0 / 15.0
cdef double A43 = 32.0 / 9.0
cdef double A51 = 19372.0 / 6561.0
cdef double A52 = -25360.0 / 2187.0
cdef double A53 = 64448.0 / 6561.0
cdef double A54 = -212.0 / 729.0
cdef double A61 = 9017.0 / 3168.0
cdef double A62 = -355.0 / 33.0
cdef double A63 = 46732.0 / 5247.0
cdef double A64 = 49.0 / 176.0
cdef double A65 = -5103.0 / 18656.0
cdef double A71 = 35.0 / 384.0
cdef double A73 = 500.0 / 1113.0
cdef double A74 = 125.0 / 192.0
cdef double A75 = -2187.0 / 6784.0
cdef double A76 = 11.0 / 84.0
cdef double E1 = 71.0 / 57600.0
cdef double E3 = -71.0 / 16695.0
cdef double E4 = 71.0 / 1920.0
cdef double E5 = -17253.0 / 339200.0
cdef double E6 = 22.0 / 525.0
cdef double E7 = -1.0 / 40.0
cdef double SAFETY = 0.9
cdef double MIN_FACTOR = 0.2
cdef double MAX_FACTOR = 10.0


cdef class Density:
    cdef public int kind
    cdef public double scale, c, nexp, kappa, lam, x0, h
    cdef public int n
    cdef double[::1] x, y, d

    def __init__(self, kind, scale, c, nexp, kappa, lam, x, y, d):
        self.kind = kind
        self.scale = scale
        self.c = c
        self.nexp = nexp
        self.kappa = kappa
        self.lam = lam
        if x is None:
            self.x = self.y = self.d = None
            self.x0 = 0.0
            self.h = 1.0
            self.n = 0
        else:
            self.x = np.ascontiguousarray(x, dtype=np.float64)
            self.y = np.ascontiguousarray(y, dtype=np.float64)
            self.d = np.ascontiguousarray(d, dtype=np.float64)
            self.n = self.x.shape[0]
            self.x0 = self.x[0]
            self.h = (self.x[self.n - 1] - self.x[0]) / (self.n - 1)


def make_density(kind, scale=1.0, c=1.0, nexp=1.0, kappa=0.0, lam=0.0, x=None, y=None, d=None):
    return Density(kind, scale, c, nexp, kappa, lam, x, y, d)


cdef inline void _s_pair_c(double kappa, double lam, double t,
                           double* s_out, double* ds_out) noexcept nogil:
    cdef double z, sk, ck, rk, a, coef_p, coef_m, ep, em
    if kappa < 0.0:
        a = sqrt(-kappa)
        if fabs(lam) <= a * (1.0 + 4e-16):
            coef_p = 0.5 * (1.0 - lam / a)
            coef_m = 0.5 * (1.0 + lam / a)
            if fabs(lam - a) <= 4e-16 * a:
                coef_p = 0.0
                coef_m = 1.0
            em = cexp(-a * t)
            if coef_p == 0.0:
                s_out[0] = coef_m * em
                ds_out[0] = -a * coef_m * em
                return
            ep = cexp(a * t)
            s_out[0] = coef_p * ep + coef_m * em
            ds_out[0] = a * (coef_p * ep - coef_m * em)
            return
    z = kappa * t * t
    if fabs(z) < 1e-8:
        sk = t * (1.0 - z / 6.0 * (1.0 - z / 20.0 * (1.0 - z / 42.0)))
        ck = 1.0 - z / 2.0 * (1.0 - z / 12.0 * (1.0 - z / 30.0))
    elif kappa > 0.0:
        rk = sqrt(kappa)
        sk = sin(rk * t) / rk
        ck = cos(rk * t)
    else:
        rk = sqrt(-kappa)
        sk = sinh(rk * t) / rk
        ck = cosh(rk * t)
    s_out[0] = ck - lam * sk
    ds_out[0] = -kappa * sk - lam * ck


def s_pair(double kappa, double lam, double t):
    cdef double s, ds
    _s_pair_c(kappa, lam, t, &s, &ds)
    return s, ds


cdef inline double _density_c(Density dens, double t) noexcept nogil:
    cdef double s, ds, dx, u, u2, omu, h00, h10, h01, h11
    cdef int i
    if dens.kind == _KCONST:
        return dens.scale * dens.c
    if dens.kind == _KMODEL:
        _s_pair_c(dens.kappa, dens.lam, t, &s, &ds)
        if s <= 0.0:
            return 0.0
        return dens.scale * cpow(s, dens.nexp)
    i = <int>((t - dens.x0) / dens.h)
    if i < 0:
        i = 0
    elif i > dens.n - 2:
        i = dens.n - 2
    dx = dens.x[i + 1] - dens.x[i]
    u = (t - dens.x[i]) / dx
    u2 = u * u
    omu = 1.0 - u
    h00 = (1.0 + 2.0 * u) * omu * omu
    h10 = u * omu * omu
    h01 = u2 * (3.0 - 2.0 * u)
    h11 = u2 * (u - 1.0)
    return dens.scale * (h00 * dens.y[i] + h10 * dx * dens.d[i]
                         + h01 * dens.y[i + 1] + h11 * dx * dens.d[i + 1])


def density_value(Density dens, double t):
    return _density_c(dens, t)


cdef inline bint _rhs_c(double p, double mu, Density dens, double t,
                        double u, double v, double* du, double* dv) noexcept nogil:
    cdef double a = _density_c(dens, t)
    cdef double w
    if not (a > 0.0):
        return False
    w = v / a
    if p == 2.0:
        du[0] = w
        dv[0] = -mu * a * u
    else:
        du[0] = copysign(cpow(fabs(w), 1.0 / (p - 1.0)), w)
        dv[0] = -mu * a * copysign(cpow(fabs(u), p - 1.0), u)
    return True


cdef inline double _hermite_c(double theta, double q0, double m0,
                              double q1, double m1) noexcept nogil:
    cdef double omu = 1.0 - theta
    cdef double h00 = (1.0 + 2.0 * theta) * omu * omu
    cdef double h10 = theta * omu * omu
    cdef double h01 = theta * theta * (3.0 - 2.0 * theta)
    cdef double h11 = theta * theta * (theta - 1.0)
    return h00 * q0 + h10 * m0 + h01 * q1 + h11 * m1


def shoot(double p, double mu, double t_end, Density dens, double rtol,
          double atol, int stop_at_crossing=0, int n_samples=0):
    """See the pure twin for the contract; signatures are identical."""
    cdef double a0 = _density_c(dens, 0.0)
    cdef double u, v, t, first_crit, h, h_min, err, factor
    cdef double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v, k6u, k6v, k7u, k7v
    cdef double u2, v2, u3, v3, u4, v4, u5, v5, u6, v6, u7, v7
    cdef double eu, ev, scu, scv, m0, m1, lo_th, hi_th, mid, theta, uc
    cdef double t_new, t_next, du_end, du0, dv0
    cdef int status, nsteps, sample_idx, forced_sample, i
    cdef bint rejected, finished, ok
    cdef double[::1] ts_v = None, us_v = None, dus_v = None

    if not (a0 > 0.0):
        return 0.0, 0.0, NAN, STATUS_BAD_DENSITY, 0, None, None, None

    u = 0.0
    v = a0
    t = 0.0
    first_crit = NAN
    status = STATUS_OK
    nsteps = 0

    ts = us = dus = None
    sample_idx = 0
    if n_samples > 1:
        ts = np.linspace(0.0, t_end, n_samples)
        us = np.empty(n_samples)
        dus = np.empty(n_samples)
        ts_v = ts
        us_v = us
        dus_v = dus
        _rhs_c(p, mu, dens, 0.0, u, v, &du0, &dv0)
        us_v[0] = 0.0
        dus_v[0] = du0
        sample_idx = 1

    ok = _rhs_c(p, mu, dens, t, u, v, &k1u, &k1v)
    if not ok:
        return 0.0, 0.0, NAN, STATUS_BAD_DENSITY, 0, ts, us, dus

    h = t_end / 64.0
    h_min = 1e-14 * t_end
    rejected = False
    finished = False

    while not finished:
        if nsteps >= MAX_STEPS:
            status = STATUS_MAX_STEPS
            break
        forced_sample = -1
        if t + h >= t_end:
            h = t_end - t
            finished = True
        if sample_idx and sample_idx < n_samples:
            t_next = ts_v[sample_idx]
            if t + h >= t_next - 1e-15 * t_end:
                h = t_next - t
                forced_sample = sample_idx
                finished = False
                if sample_idx == n_samples - 1:
                    finished = True

        ok = _rhs_c(p, mu, dens, t + C2 * h, u + h * A21 * k1u, v + h * A21 * k1v, &k2u, &k2v)
        if ok:
            u3 = u + h * (A31 * k1u + A32 * k2u)
            v3 = v + h * (A31 * k1v + A32 * k2v)
            ok = _rhs_c(p, mu, dens, t + C3 * h, u3, v3, &k3u, &k3v)
        if ok:
            u4 = u + h * (A41 * k1u + A42 * k2u + A43 * k3u)
            v4 = v + h * (A41 * k1v + A42 * k2v + A43 * k3v)
            ok = _rhs_c(p, mu, dens, t + C4 * h, u4, v4, &k4u, &k4v)
        if ok:
            u5 = u + h * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u)
            v5 = v + h * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v)
            ok = _rhs_c(p, mu, dens, t + C5 * h, u5, v5, &k5u, &k5v)
        if ok:
            u6 = u + h * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u)
            v6 = v + h * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v)
            ok = _rhs_c(p, mu, dens, t + h, u6, v6, &k6u, &k6v)
        if ok:
            u7 = u + h * (A71 * k1u + A73 * k3u + A74 * k4u + A75 * k5u + A76 * k6u)
            v7 = v + h * (A71 * k1v + A73 * k3v + A74 * k4v + A75 * k5v + A76 * k6v)
            ok = _rhs_c(p, mu, dens, t + h, u7, v7, &k7u, &k7v)
        if not ok:
            status = STATUS_BAD_DENSITY
            break

        eu = h * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * k7u)
        ev = h * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v + E7 * k7v)
        scu = atol + rtol * max(fabs(u), fabs(u7))
        scv = atol + rtol * max(fabs(v), fabs(v7))
        err = sqrt(0.5 * ((eu / scu) * (eu / scu) + (ev / scv) * (ev / scv)))
        nsteps += 1

        if err <= 1.0:
            if v > 0.0 >= v7 and isnan(first_crit):
                m0 = h * k1v
                m1 = h * k7v
                lo_th = 0.0
                hi_th = 1.0
                for i in range(80):
                    mid = 0.5 * (lo_th + hi_th)
                    if _hermite_c(mid, v, m0, v7, m1) > 0.0:
                        lo_th = mid
                    else:
                        hi_th = mid
                theta = 0.5 * (lo_th + hi_th)
                first_crit = t + theta * h
                if stop_at_crossing:
                    uc = _hermite_c(theta, u, h * k1u, u7, h * k7u)
                    return uc, 0.0, first_crit, STATUS_OK, nsteps, ts, us, dus
            t_new = t + h
            if forced_sample >= 0:
                t_new = ts_v[forced_sample]
            u = u7
            v = v7
            k1u = k7u
            k1v = k7v
            t = t_new
            if forced_sample >= 0:
                _rhs_c(p, mu, dens, t, u, v, &du0, &dv0)
                us_v[forced_sample] = u
                dus_v[forced_sample] = du0
                sample_idx = forced_sample + 1
            if err == 0.0:
                factor = MAX_FACTOR
            else:
                factor = min(MAX_FACTOR, max(MIN_FACTOR, SAFETY * cpow(err, -0.2)))
            if rejected:
                factor = min(factor, 1.0)
            h = h * factor
            rejected = False
        else:
            finished = False
            rejected = True
            h = h * max(MIN_FACTOR, SAFETY * cpow(err, -0.2))
            if h < h_min:
                status = STATUS_STEP_UNDERFLOW
                break

    ok = _rhs_c(p, mu, dens, min(t, t_end), u, v, &du_end, &dv0)
    if not ok:
        du_end = NAN
    return u, du_end, first_crit, status, nsteps, ts, us, dus
