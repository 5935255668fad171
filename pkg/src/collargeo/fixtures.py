"""Seeded generators of admissible non-model collars.

Two families, both gate-passing by construction:

* warp family (N = n, constant weight): w = s_kappa_lambda * (1 - eps * eta)
  where eta(0) = eta'(0) = 0 and (s^2 eta')' >= 0, which keeps the radial
  curvature above its bound for any eps in (0, 1/eta(L)); the fiber Einstein
  constant is then raised until the fiber direction clears the bound too.
* weight family (N = inf, product warp): a convex increasing radial weight
  with f'(0) = 0 over a flat product collar.

Generators are deterministic in the seed; the seed is recorded in the
returned metadata so reports can cite it.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.interpolate import PchipInterpolator

from . import manifolds as mf
from .models import s_kappa_lambda
from .numerics import cumulative_gauss7
from .profiles import ConstantProfile, ExprProfile, Profile

# (kappa, lam, L) regimes: splitting, flat ball, round ball, hyperbolic cylinder
WARP_REGIMES = (
    (-1.0, 1.0, 2.0),
    (0.0, 1.0, 0.8),
    (1.0, 0.0, 1.2),
    (-1.0, 0.5, 1.5),
)


class PerturbedWarpProfile(Profile):
    """w = s * (1 - eps * eta) with eta' = rho / s^2 for a nonnegative,
    nondecreasing rho vanishing quadratically at 0.

    eta itself comes from a cached cumulative integral (monotone-cubically
    interpolated on a fine grid); eta' and eta'' are closed forms, so the
    curvature formulas see exact first and second derivatives up to the
    interpolation error of eta alone, which only enters multiplied by eps.
    """

    def __init__(self, kappa: float, lam: float, L: float, coeffs, amplitude: float):
        self.kappa = float(kappa)
        self.lam = float(lam)
        self.L = float(L)
        self.c0, self.c1, self.c2 = (float(c) for c in coeffs)
        grid = np.linspace(0.0, L, 4097)
        eta_vals = cumulative_gauss7(self._eta_d1, grid)
        self._eta = PchipInterpolator(grid, eta_vals)
        eta_end = float(eta_vals[-1])
        self.eps = amplitude / eta_end
        self.amplitude = amplitude

    def _rho(self, t):
        t = np.asarray(t, dtype=float)
        return t * t * (self.c0 + self.c1 * t + self.c2 * t * t)

    def _rho_d1(self, t):
        t = np.asarray(t, dtype=float)
        return 2.0 * self.c0 * t + 3.0 * self.c1 * t * t + 4.0 * self.c2 * t * t * t

    def _eta_d1(self, t):
        s, _ = s_kappa_lambda(self.kappa, self.lam, t)
        return self._rho(t) / (s * s)

    def _eta_d2(self, t):
        s, ds = s_kappa_lambda(self.kappa, self.lam, t)
        return (self._rho_d1(t) * s - 2.0 * self._rho(t) * ds) / (s * s * s)

    def value(self, t):
        s, _ = s_kappa_lambda(self.kappa, self.lam, t)
        out = s * (1.0 - self.eps * self._eta(np.asarray(t, dtype=float)))
        return float(out) if np.ndim(out) == 0 else out

    def d1(self, t):
        s, ds = s_kappa_lambda(self.kappa, self.lam, t)
        g = 1.0 - self.eps * self._eta(np.asarray(t, dtype=float))
        out = ds * g - self.eps * s * self._eta_d1(t)
        return float(out) if np.ndim(out) == 0 else out

    def d2(self, t):
        s, ds = s_kappa_lambda(self.kappa, self.lam, t)
        g = 1.0 - self.eps * self._eta(np.asarray(t, dtype=float))
        out = -self.kappa * s * g - 2.0 * self.eps * ds * self._eta_d1(t) - self.eps * s * self._eta_d2(t)
        return float(out) if np.ndim(out) == 0 else out


def perturbed_warp_collar(seed: int) -> tuple[mf.WarpedManifold, dict]:
    """Gate-passing collar with N = n, zero weight, and strictly sub-model
    warping. Returns the manifold and metadata (seed, regime, hypotheses)."""
    rng = np.random.default_rng(seed)
    kappa, lam, L = WARP_REGIMES[int(rng.integers(len(WARP_REGIMES)))]
    n = int(rng.integers(2, 5))
    coeffs = rng.uniform(0.2, 1.0, size=3)
    amplitude = float(rng.uniform(0.05, 0.3))
    w = PerturbedWarpProfile(kappa, lam, L, coeffs, amplitude)

    ts = np.linspace(0.0, L, 1025)
    w_vals = np.asarray(w.value(ts))
    w_d1 = np.asarray(w.d1(ts))
    w_d2 = np.asarray(w.d2(ts))
    if n >= 3:
        # smallest Einstein constant clearing the fiber bound, plus slack
        needed = ((n - 1.0) * kappa + w_d2 / w_vals) * w_vals**2 / (n - 2.0) + w_d1**2
        kappa_f = float(np.max(needed)) + 0.1
    else:
        kappa_f = kappa + lam * lam
    fiber = mf.FiberSpec(dim=n - 1, einstein_constant=kappa_f, total_volume=1.0)
    M = mf.build(n, fiber, L, w, ConstantProfile(0.0))
    meta = {
        "seed": seed,
        "family": "warp",
        "n": n,
        "N": float(n),
        "kappa": kappa,
        "lam": lam,
        "L": L,
        "amplitude": amplitude,
        "fiber_einstein": kappa_f,
    }
    return M, meta


def convex_weight_collar(seed: int) -> tuple[mf.WarpedManifold, dict]:
    """Gate-passing product collar with a convex increasing radial weight
    (the N = inf hypotheses with zero bounds)."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    L = float(rng.uniform(0.8, 2.0))
    a = float(rng.uniform(0.1, 1.0))
    b = float(rng.uniform(0.0, 0.4))
    c = float(rng.uniform(0.0, 0.5))
    d = float(rng.uniform(0.5, 1.5))
    f = ExprProfile(f"{a}*t^2 + {b}*t^4 + {c}*(cosh({d}*t) - 1)")
    fiber = mf.FiberSpec(dim=n - 1, einstein_constant=0.0, total_volume=1.0)
    M = mf.build(n, fiber, L, ConstantProfile(1.0), f)
    meta = {
        "seed": seed,
        "family": "weight",
        "n": n,
        "N": math.inf,
        "kappa": 0.0,
        "lam": 0.0,
        "L": L,
    }
    return M, meta


def random_table_density(seed: int, D: float = 1.0, n_samples: int = 4097):
    """Seeded smooth positive density on [0, D] as a sampled table."""
    from .densities import DensityProfile

    rng = np.random.default_rng(seed)
    c1 = float(rng.uniform(-1.0, 1.0))
    c2 = float(rng.uniform(-1.0, 1.0))
    c3 = float(rng.uniform(-0.8, 0.8))
    w1 = float(rng.uniform(1.0, 6.0))
    phase = float(rng.uniform(0.0, 2.0 * math.pi))

    def fn(ts):
        ts = np.asarray(ts, dtype=float)
        return np.exp(c1 * np.sin(w1 * ts + phase) + c2 * ts + c3 * ts * ts)

    return DensityProfile.from_callable(fn, D, n_samples)
