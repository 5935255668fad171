"""Scalar model functions of the constant-curvature comparison spaces.

The central object is the comparison profile ``s_kappa_lambda``: the solution
of phi'' + kappa*phi = 0 with phi(0) = 1, phi'(0) = -lambda. Its first zero
(when one exists) is the model inscribed radius; the first zero of its
derivative (when one exists) is the critical radius of the cylinder-type
model. Everything else here (classification, comparison volume profile,
tail-volume constants, eigenvalue lower bounds) is built from that profile.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import adaptive_simpson, cumulative_gauss7, gauss7, golden_max

__all__ = [
    "CurvatureClass",
    "ModelParams",
    "sc_kappa",
    "s_kappa_lambda",
    "ball_condition",
    "model_condition",
    "flat_degenerate",
    "classify",
    "first_zero",
    "c_bar",
    "ball_radius",
    "model_critical",
    "collar_model_volume",
    "kasue_constant",
    "dirichlet_p2_lower_bound",
]

# switch to power series below this value of |kappa * t^2| to avoid
# cancellation in sin(x)/x and cos(x) as kappa -> 0
_SERIES_CUTOFF = 1e-8


class CurvatureClass(enum.Enum):
    """Which of the profile or its derivative vanishes first (if either)."""

    BALL = "Ball"
    MODEL = "Model"
    NEITHER = "Neither"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


@dataclass(frozen=True)
class ModelParams:
    """Curvature hypotheses bundle: dimension n, effective dimension N
    (``math.inf`` allowed), sectional bound kappa and mean-curvature bound
    lambda (``lam``)."""

    n: int
    N: float
    kappa: float
    lam: float

    def __post_init__(self):
        if self.n < 2:
            raise DomainError(f"dimension n must be >= 2, got {self.n}")
        if not (self.N == math.inf or self.N >= self.n):
            raise DomainError(f"N must lie in [n, inf], got N={self.N} with n={self.n}")

    @property
    def n_infinite(self) -> bool:
        return self.N == math.inf


def sc_kappa(kappa: float, t):
    """Auxiliary pair (s_kappa, c_kappa) with s(0)=0, s'(0)=1, c=s'.

    Vectorized over ``t``. Near kappa*t^2 = 0 both are evaluated by their
    power series in z = kappa*t^2 (valid for either sign of kappa).
    """
    t = np.asarray(t, dtype=float)
    z = kappa * t * t
    small = np.abs(z) < _SERIES_CUTOFF
    s = np.empty_like(t)
    c = np.empty_like(t)
    if small.any():
        zs = z[small]
        ts = t[small]
        s[small] = ts * (1.0 - zs / 6.0 * (1.0 - zs / 20.0 * (1.0 - zs / 42.0)))
        c[small] = 1.0 - zs / 2.0 * (1.0 - zs / 12.0 * (1.0 - zs / 30.0))
    big = ~small
    if big.any():
        tb = t[big]
        if kappa > 0:
            rk = math.sqrt(kappa)
            s[big] = np.sin(rk * tb) / rk
            c[big] = np.cos(rk * tb)
        else:
            rk = math.sqrt(-kappa)
            s[big] = np.sinh(rk * tb) / rk
            c[big] = np.cosh(rk * tb)
    if s.ndim == 0:
        return float(s), float(c)
    return s, c


def s_kappa_lambda(kappa: float, lam: float, t):
    """Comparison profile and its derivative at ``t`` (vectorized).

    Equals c_kappa - lam*s_kappa with derivative -kappa*s_kappa - lam*c_kappa;
    total on all finite inputs. For kappa < 0 with |lam| <= sqrt(-kappa) the
    naive hyperbolic combination cancels catastrophically at large t (the
    profile can decay like exp(-sqrt(-kappa) t) while cosh and sinh grow), so
    that regime is evaluated in exponential form instead.
    """
    if kappa < 0:
        a = math.sqrt(-kappa)
        if abs(lam) <= a * (1.0 + 4e-16):
            # both exponential coefficients are nonnegative here, so this
            # form never cancels; the grazing case lam = a is snapped so the
            # decaying exponential comes out exactly
            t = np.asarray(t, dtype=float)
            coef_p = 0.5 * (1.0 - lam / a)
            coef_m = 0.5 * (1.0 + lam / a)
            if abs(lam - a) <= 4e-16 * a:
                coef_p = 0.0
                coef_m = 1.0
            em = np.exp(-a * t)
            if coef_p == 0.0:
                s = coef_m * em
                ds = -a * coef_m * em
            else:
                ep = np.exp(a * t)
                s = coef_p * ep + coef_m * em
                ds = a * (coef_p * ep - coef_m * em)
            if s.ndim == 0:
                return float(s), float(ds)
            return s, ds
    s, c = sc_kappa(kappa, t)
    return c - lam * s, -kappa * s - lam * c


def ball_condition(kappa: float, lam: float) -> bool:
    """True when the profile has a positive zero (geodesic-ball regime)."""
    if kappa > 0:
        return True
    if kappa == 0:
        return lam > 0
    return lam > math.sqrt(-kappa)


def model_condition(kappa: float, lam: float) -> bool:
    """True in the cylinder-type model regime.

    The flat degenerate pair kappa = lam = 0 belongs here even though the
    derivative vanishes identically rather than at an isolated point.
    """
    if kappa > 0:
        return lam < 0
    if kappa == 0:
        return lam == 0
    return 0 < lam < math.sqrt(-kappa)


def flat_degenerate(kappa: float, lam: float) -> bool:
    """The kappa = lambda = 0 subcase: profile identically 1."""
    return kappa == 0 and lam == 0


def classify(kappa: float, lam: float) -> CurvatureClass:
    """Mutually exclusive classification of the (kappa, lambda) regime.

    Where both the zero of the profile and the zero of its derivative exist
    (kappa > 0 with lam < 0), the derivative vanishes first and the pair is
    classified as MODEL; BALL is the regime where the profile vanishes first.
    """
    if model_condition(kappa, lam):
        return CurvatureClass.MODEL
    if ball_condition(kappa, lam):
        return CurvatureClass.BALL
    return CurvatureClass.NEITHER


def first_zero(kappa: float, lam: float) -> float | None:
    """First positive zero of the profile, in closed form.

    None when the profile never vanishes. Closed forms: arctan branch for
    kappa > 0, affine root for kappa = 0, artanh for kappa < 0.
    """
    if kappa > 0:
        rk = math.sqrt(kappa)
        # zero of cos(x) - (lam/rk) sin(x): tan(x) = rk/lam
        if lam == 0.0:
            x = math.pi / 2.0
        elif lam > 0:
            x = math.atan(rk / lam)
        else:
            x = math.atan(rk / lam) + math.pi
        return x / rk
    if kappa == 0:
        return 1.0 / lam if lam > 0 else None
    a = math.sqrt(-kappa)
    if lam > a:
        return math.atanh(a / lam) / a
    return None


def c_bar(kappa: float, lam: float) -> float:
    """Truncation radius: the first zero when the ball-condition holds,
    +inf otherwise."""
    z = first_zero(kappa, lam)
    return math.inf if z is None else z


def ball_radius(kappa: float, lam: float) -> float | None:
    """Inscribed radius of the ball model; None unless classify() is BALL."""
    if classify(kappa, lam) is not CurvatureClass.BALL:
        return None
    return first_zero(kappa, lam)


def model_critical(kappa: float, lam: float) -> float | None:
    """First positive zero of the profile derivative; None unless MODEL.

    For the flat degenerate pair (0, 0) the derivative vanishes identically,
    there is no isolated first zero, and None is returned; callers should
    consult :func:`flat_degenerate` and substitute the manifold's own
    inscribed radius.
    """
    if classify(kappa, lam) is not CurvatureClass.MODEL:
        return None
    if flat_degenerate(kappa, lam):
        return None
    if kappa > 0:
        rk = math.sqrt(kappa)
        return math.atan(-lam / rk) / rk
    a = math.sqrt(-kappa)
    return math.atanh(lam / a) / a


def _profile_power(kappa: float, lam: float, exponent: float):
    def f(t):
        s, _ = s_kappa_lambda(kappa, lam, np.asarray(t, dtype=float))
        return np.power(np.maximum(s, 0.0), exponent)

    return f


def collar_model_volume(N: float, kappa: float, lam: float, r: float) -> float:
    """Comparison volume profile: integral of the truncated profile^(N-1).

    The profile is truncated to zero past its first zero, so the result is
    constant for r beyond the truncation radius.
    """
    if not (N >= 2):
        raise DomainError(f"N must be >= 2, got {N}")
    if not math.isfinite(N):
        raise DomainError("N must be finite; use r itself for the N=inf profile")
    if r < 0 or not math.isfinite(r):
        raise DomainError(f"radius must be finite and nonnegative, got {r}")
    if r == 0.0:
        return 0.0
    upper = min(r, c_bar(kappa, lam))
    if flat_degenerate(kappa, lam):
        return upper
    integrand = _profile_power(kappa, lam, N - 1.0)
    return adaptive_simpson(lambda t: float(integrand(t)), 0.0, upper)


def _kasue_closed_applicable(kappa: float, lam: float) -> bool:
    return kappa < 0 and lam > 0 and abs(lam - math.sqrt(-kappa)) <= 1e-12 * lam


def _kasue_closed(N: float, lam: float, D: float) -> float:
    g = (N - 1.0) * lam
    if math.isinf(D):
        return 1.0 / g
    return (1.0 - math.exp(-g * D)) / g


def _kasue_scan(N: float, kappa: float, lam: float, D: float, points: int = 4096) -> float:
    dens = _profile_power(kappa, lam, N - 1.0)
    grid = np.linspace(0.0, D, points + 1)
    cum = cumulative_gauss7(dens, grid)
    total = cum[-1]
    denom = dens(grid[:-1])
    ratios = (total - cum[:-1]) / denom
    i = int(np.argmax(ratios))

    def g(t: float) -> float:
        j = min(int(t / D * points), points - 1)
        tail = total - (cum[j] + gauss7(dens, grid[j], t))
        return tail / float(dens(t))

    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, points - 1)]
    _, val = golden_max(g, lo, hi, xtol=1e-9 * max(D, 1.0))
    return max(val, float(ratios[i]))


def kasue_constant(
    N: float, kappa: float, lam: float, D: float, method: str = "auto"
) -> float:
    """Supremum over t in [0, D) of (tail volume past t) / profile^(N-1)(t).

    D = inf is admissible only in the regime kappa < 0, lam = sqrt(-kappa),
    where the constant has the closed form (1 - exp(-(N-1)*lam*D))/((N-1)*lam).
    ``method`` selects "closed" (closed form, error if inapplicable), "scan"
    (4096-point scan plus golden-section refinement), or "auto" (closed form
    where applicable, cross-checked against the scan).
    """
    if not (2.0 <= N < math.inf):
        raise DomainError(f"N must be a finite real >= 2, got {N}")
    if method not in ("auto", "scan", "closed"):
        raise DomainError(f"unknown method {method!r}")
    closed_ok = _kasue_closed_applicable(kappa, lam)
    if math.isinf(D):
        if not closed_ok:
            raise DomainError(
                "D=inf admissible only for kappa < 0 with lam = sqrt(-kappa)"
            )
        return _kasue_closed(N, lam, D)
    if D <= 0:
        raise DomainError(f"D must be positive, got {D}")
    cb = c_bar(kappa, lam)
    if D > cb * (1.0 + 1e-12):
        raise DomainError(f"D={D} exceeds the truncation radius {cb}")
    D = min(D, cb)
    if method == "closed" or (method == "auto" and closed_ok):
        if not closed_ok:
            raise DomainError("closed form requires kappa < 0 with lam = sqrt(-kappa)")
        value = _kasue_closed(N, lam, D)
        if method == "auto":
            scanned = _kasue_scan(N, kappa, lam, D)
            if abs(scanned - value) > 1e-6 * abs(value):
                raise DomainError(
                    f"closed form {value} and scan {scanned} disagree beyond 1e-6"
                )
        return value
    return _kasue_scan(N, kappa, lam, D)


def dirichlet_p2_lower_bound(N: float, kappa: float, lam: float, D: float) -> float:
    """Computable strict lower bound for the p=2 model eigenvalue.

    Evaluates 1 / (4 * max_t [tail integral of profile^(N-1) past t] *
    [integral of profile^(1-N) up to t]) by a cumulative scan with
    golden-section refinement of the winning cell.
    """
    if not (2.0 <= N < math.inf):
        raise DomainError(f"N must be a finite real >= 2, got {N}")
    if D <= 0 or not math.isfinite(D):
        raise DomainError(f"D must be positive and finite, got {D}")
    cb = c_bar(kappa, lam)
    if D > cb * (1.0 + 1e-12):
        raise DomainError(f"D={D} exceeds the truncation radius {cb}")
    D = min(D, cb)
    grow = _profile_power(kappa, lam, N - 1.0)
    decay = _profile_power(kappa, lam, 1.0 - N)
    points = 4096
    grid = np.linspace(0.0, D, points + 1)
    cum_grow = cumulative_gauss7(grow, grid)
    cum_decay = cumulative_gauss7(decay, grid)
    total = cum_grow[-1]
    prod = (total - cum_grow) * cum_decay
    i = int(np.argmax(prod))

    def g(t: float) -> float:
        j = min(int(t / D * points), points - 1)
        tail = total - (cum_grow[j] + gauss7(grow, grid[j], t))
        acc = cum_decay[j] + gauss7(decay, grid[j], t)
        return tail * acc

    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, points)]
    _, val = golden_max(g, lo, hi, xtol=1e-9 * max(D, 1.0))
    best = max(val, float(prod[i]))
    return 1.0 / (4.0 * best)
