"""Radial warped-product collars [0, L] x_w F with a radial weight f.

The fiber F never appears as a concrete metric: only its dimension, Einstein
constant and total volume enter any formula in scope. The coordinate t is the
distance to the t = 0 boundary slice by construction; admissibility of L
(no focal point before L) is certified by the caller and recorded as an
assumption on every curvature report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .densities import DensityProfile
from .errors import DomainError
from .models import c_bar
from .numerics import adaptive_simpson
from .profiles import ConstantProfile, Profile, RigidityWeightProfile, WarpProfile

__all__ = [
    "FiberSpec",
    "WarpedManifold",
    "CurvatureReport",
    "build",
    "make_rigidity_model",
    "make_product",
    "theta_f",
    "theta_f_log_derivative",
    "ricci",
    "hessian_weight",
    "bakry_emery_ricci",
    "weighted_mean_curvature",
    "curvature_margin",
    "collar_volume",
    "boundary_measure",
    "annulus_quantities",
    "radial_density",
]

ASSUMPTIONS = (
    "radial and fiber directions are extremal for the block-diagonal curvature",
    "t equals the boundary distance on [0, L] (collar length user-certified)",
)


@dataclass(frozen=True)
class FiberSpec:
    """Abstract Einstein fiber: dimension, Einstein constant, total volume."""

    dim: int
    einstein_constant: float
    total_volume: float

    def __post_init__(self):
        if self.dim < 1:
            raise DomainError(f"fiber dimension must be >= 1, got {self.dim}")
        if not (self.total_volume > 0):
            raise DomainError(f"fiber volume must be positive, got {self.total_volume}")


@dataclass
class WarpedManifold:
    n: int
    fiber: FiberSpec
    L: float
    w: Profile
    f: Profile
    second_boundary: bool = False
    model_hint: dict | None = None
    _f_constant: bool | None = field(default=None, repr=False, compare=False)

    def f_is_constant(self) -> bool:
        if self._f_constant is None:
            ts = np.linspace(0.0, self.L, 33)
            scale = 1.0 + float(np.max(np.abs(self.f.value(ts))))
            self._f_constant = float(np.max(np.abs(self.f.d1(ts)))) <= 1e-12 * scale
        return self._f_constant


def build(
    n: int,
    fiber: FiberSpec,
    L: float,
    w_profile: Profile,
    f_profile: Profile,
    second_boundary: bool = False,
    model_hint: dict | None = None,
) -> WarpedManifold:
    """Validate and assemble a warped collar.

    Rejects dimension mismatches, nonpositive warping on [0, L), and profiles
    that cannot produce two derivatives.
    """
    if n < 2:
        raise DomainError(f"dimension n must be >= 2, got {n}")
    if fiber.dim != n - 1:
        raise DomainError(f"dimension mismatch: fiber dim {fiber.dim} != n-1 = {n - 1}")
    if not (L > 0) or not math.isfinite(L):
        raise DomainError(f"collar length must be positive and finite, got {L}")
    ts = np.linspace(0.0, L, 2049)
    w_vals = np.asarray(w_profile.value(ts), dtype=float)
    if not (w_vals[0] > 0) or np.any(w_vals[:-1] <= 0.0) or w_vals[-1] < -1e-14:
        raise DomainError("warping profile must be positive on [0, L)")
    for prof, name in ((w_profile, "w"), (f_profile, "f")):
        for attr in ("value", "d1", "d2"):
            v = getattr(prof, attr)(0.5 * L)
            if not math.isfinite(float(v)):
                raise DomainError(f"profile {name}.{attr} not evaluable at L/2")
    return WarpedManifold(
        n=n,
        fiber=fiber,
        L=L,
        w=w_profile,
        f=f_profile,
        second_boundary=second_boundary,
        model_hint=model_hint,
    )


def make_rigidity_model(
    n: int,
    N: float,
    kappa: float,
    lam: float,
    L: float,
    f0: float = 0.0,
    fiber_volume: float = 1.0,
) -> WarpedManifold:
    """Equality-case collar: w equals the comparison profile and the weight
    is f0 - (N - n) log w.

    The fiber Einstein constant is the unique value making the fiber
    Bakry-Emery curvature match the radial one exactly, namely
    (N - 2)(kappa + lam^2)/(n - 2); for n = 2 there is no intrinsic fiber
    curvature and the stored value is inert.
    """
    if not (2 <= n):
        raise DomainError(f"n must be >= 2, got {n}")
    if not (n <= N < math.inf):
        raise DomainError(f"N must be finite with N >= n, got N={N}, n={n}")
    cb = c_bar(kappa, lam)
    if L >= cb:
        raise DomainError(f"L={L} must be smaller than the truncation radius {cb}")
    kappa_f = kappa + lam * lam if n == 2 else (N - 2.0) * (kappa + lam * lam) / (n - 2.0)
    m = N - n
    weight: Profile
    weight = ConstantProfile(f0) if m == 0 else RigidityWeightProfile(kappa, lam, m, f0)
    return build(
        n,
        FiberSpec(dim=n - 1, einstein_constant=kappa_f, total_volume=fiber_volume),
        L,
        WarpProfile(kappa, lam),
        weight,
        model_hint={"N": float(N), "kappa": float(kappa), "lam": float(lam), "f0": float(f0)},
    )


def make_product(n: int, L: float, fiber: FiberSpec | None = None) -> WarpedManifold:
    """Unweighted product collar: w = 1, f = 0, flat fiber by default."""
    if fiber is None:
        fiber = FiberSpec(dim=n - 1, einstein_constant=0.0, total_volume=1.0)
    return build(n, fiber, L, ConstantProfile(1.0), ConstantProfile(0.0))


def _check_range(M: WarpedManifold, t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if np.any(t < -1e-15) or np.any(t > M.L * (1 + 1e-15)):
        raise DomainError(f"t must lie in [0, {M.L}]")
    return t


def theta_f(M: WarpedManifold, t):
    """Weighted Jacobian of the boundary's normal exponential map:
    exp(-f(t)) (w(t)/w(0))^(n-1)."""
    t = _check_range(M, t)
    w0 = float(M.w.value(0.0))
    out = np.exp(-np.asarray(M.f.value(t))) * (np.asarray(M.w.value(t)) / w0) ** (M.n - 1)
    return float(out) if np.ndim(out) == 0 else out


def theta_f_log_derivative(M: WarpedManifold, t):
    """(log theta_f)' = (n-1) w'/w - f'."""
    t = _check_range(M, t)
    out = (M.n - 1) * np.asarray(M.w.d1(t)) / np.asarray(M.w.value(t)) - np.asarray(M.f.d1(t))
    return float(out) if np.ndim(out) == 0 else out


def ricci(M: WarpedManifold, t, direction: str):
    """Unweighted Ricci curvature of a unit radial or fiber direction."""
    t = _check_range(M, t)
    w = np.asarray(M.w.value(t))
    w2 = np.asarray(M.w.d2(t))
    if direction == "radial":
        out = -(M.n - 1) * w2 / w
    elif direction == "fiber":
        w1 = np.asarray(M.w.d1(t))
        kf = M.fiber.einstein_constant
        out = -w2 / w + (M.n - 2) * (kf - w1 * w1) / (w * w)
    else:
        raise DomainError(f"direction must be 'radial' or 'fiber', got {direction!r}")
    return float(out) if np.ndim(out) == 0 else out


def hessian_weight(M: WarpedManifold, t, direction: str):
    """Hessian of the radial weight on a unit radial or fiber direction."""
    t = _check_range(M, t)
    if direction == "radial":
        out = np.asarray(M.f.d2(t))
    elif direction == "fiber":
        out = np.asarray(M.f.d1(t)) * np.asarray(M.w.d1(t)) / np.asarray(M.w.value(t))
    else:
        raise DomainError(f"direction must be 'radial' or 'fiber', got {direction!r}")
    return float(out) if np.ndim(out) == 0 else out


def bakry_emery_ricci(M: WarpedManifold, N: float, t, direction: str):
    """Bakry-Emery curvature Ric + Hess f - (df x df)/(N - n) on a unit
    radial or fiber direction.

    N = inf drops the gradient-square term; N = n requires a constant weight
    (the term is then absent as well). The gradient term vanishes on fiber
    directions because the weight is radial.
    """
    if N != math.inf and N < M.n:
        raise DomainError(f"N must satisfy N >= n or N = inf, got {N}")
    if N == M.n and not M.f_is_constant():
        raise DomainError("N = n requires a constant weight")
    base = ricci(M, t, direction) + hessian_weight(M, t, direction)
    if direction == "radial" and N != math.inf and N > M.n:
        f1 = np.asarray(M.f.d1(np.asarray(t, dtype=float)))
        base = base - f1 * f1 / (N - M.n)
    return float(base) if np.ndim(base) == 0 else base


def weighted_mean_curvature(M: WarpedManifold, boundary: str = "zero") -> float:
    """Weighted mean curvature of a boundary slice for its inner normal.

    At t = 0 the inner normal is +d/dt: H_f = -(n-1) w'(0)/w(0) + f'(0).
    At t = L (only when the collar has a second boundary) the inner normal
    flips: H_f = +(n-1) w'(L)/w(L) - f'(L).
    """
    if boundary == "zero":
        t = 0.0
        sign = 1.0
    elif boundary == "L":
        if not M.second_boundary:
            raise DomainError("manifold has no second boundary at t = L")
        t = M.L
        sign = -1.0
    else:
        raise DomainError(f"boundary must be 'zero' or 'L', got {boundary!r}")
    value = -(M.n - 1) * float(M.w.d1(t)) / float(M.w.value(t)) + float(M.f.d1(t))
    return sign * value


@dataclass
class CurvatureReport:
    ts: np.ndarray
    radial_samples: np.ndarray
    fiber_samples: np.ndarray
    margin: float
    h_f_0: float
    h_f_L: float | None
    assumptions: tuple[str, ...] = ASSUMPTIONS


def curvature_margin(M: WarpedManifold, N: float, kappa: float, grid: int = 256) -> CurvatureReport:
    """Sample both directions on an interior grid and report the worst slack
    against the curvature hypothesis (N-1) * kappa.

    For N = inf the hypothesis bound is the unweighted 0, so kappa must be 0.
    """
    if grid < 64:
        raise DomainError(f"grid must be >= 64, got {grid}")
    if N == math.inf:
        if kappa != 0.0:
            raise DomainError("N = inf comparisons require kappa = 0")
        bound = 0.0
    else:
        bound = (N - 1.0) * kappa
    ts = np.linspace(0.0, M.L, grid + 2)[1:-1]
    radial = np.asarray(bakry_emery_ricci(M, N, ts, "radial"))
    fiber = np.asarray(bakry_emery_ricci(M, N, ts, "fiber"))
    margin = float(min(radial.min(), fiber.min()) - bound)
    h_f_l = weighted_mean_curvature(M, "L") if M.second_boundary else None
    return CurvatureReport(
        ts=ts,
        radial_samples=radial,
        fiber_samples=fiber,
        margin=margin,
        h_f_0=weighted_mean_curvature(M, "zero"),
        h_f_L=h_f_l,
    )


def _weighted_area_density(M: WarpedManifold):
    n1 = M.n - 1

    def dens(t: float) -> float:
        return math.exp(-float(M.f.value(t))) * float(M.w.value(t)) ** n1

    return dens


def collar_volume(M: WarpedManifold, r: float) -> float:
    """Weighted volume of the collar of depth r about the t = 0 boundary."""
    if r < 0 or r > M.L * (1 + 1e-12):
        raise DomainError(f"r must lie in [0, {M.L}], got {r}")
    if r == 0:
        return 0.0
    dens = _weighted_area_density(M)
    return M.fiber.total_volume * adaptive_simpson(dens, 0.0, min(r, M.L))


def boundary_measure(M: WarpedManifold) -> float:
    """Weighted area of the t = 0 boundary slice."""
    return (
        M.fiber.total_volume
        * math.exp(-float(M.f.value(0.0)))
        * float(M.w.value(0.0)) ** (M.n - 1)
    )


def annulus_quantities(M: WarpedManifold, a: float, b: float) -> tuple[float, float, float, float]:
    """Volume, boundary area and depth range of the slab (a, b) x F."""
    if not (0 < a < b <= M.L * (1 + 1e-12)):
        raise DomainError(f"need 0 < a < b <= L, got a={a}, b={b}, L={M.L}")
    dens = _weighted_area_density(M)
    volume = M.fiber.total_volume * adaptive_simpson(dens, a, min(b, M.L))
    area = M.fiber.total_volume * (dens(a) + dens(min(b, M.L)))
    return volume, area, a, b


def radial_density(M: WarpedManifold, n_samples: int = 4097) -> DensityProfile:
    """Density of the weighted measure per unit fiber volume: exp(-f) w^(n-1).

    Rigidity models return the comparison-profile density exactly (the log
    weight cancels into the power); constant profiles collapse to a constant
    density; everything else is sampled to a table.
    """
    if M.model_hint is not None:
        hint = M.model_hint
        return DensityProfile.model(
            hint["N"], hint["kappa"], hint["lam"], scale=math.exp(-hint["f0"])
        )
    if isinstance(M.w, ConstantProfile) and isinstance(M.f, ConstantProfile):
        return DensityProfile.constant(math.exp(-M.f.c) * M.w.c ** (M.n - 1))

    def fn(ts):
        return np.exp(-np.asarray(M.f.value(ts))) * np.asarray(M.w.value(ts)) ** (M.n - 1)

    return DensityProfile.from_callable(fn, M.L, n_samples)
