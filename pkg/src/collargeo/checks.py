"""Executable verification of the comparison inequalities.

Every check follows the same discipline: first certify the curvature and
mean-curvature hypotheses numerically (the gate), and only then measure the
slack in the asserted conclusion. A check whose gate fails reports
"not-applicable" rather than pass or fail, so an inequality violated on an
inadmissible collar is never miscounted.

Margins are signed slacks (negative = violated): gates are absolute
(1e-9 default tolerance), conclusions are relative to the comparison side
(1e-8 default) except rate-type bounds which are absolute.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import manifolds as mf
from .eigen import ENDPOINT_SHRINK, free_eigenvalue, model_eigenvalue, principal_eigenvalue
from .errors import DomainError
from .models import (
    CurvatureClass,
    c_bar,
    classify,
    collar_model_volume,
    dirichlet_p2_lower_bound,
    first_zero,
    kasue_constant,
    s_kappa_lambda,
)
from .numerics import cumulative_gauss7, gauss7, golden_max

GATE_TOL = 1e-9
CONCLUSION_TOL = 1e-8

STATUS_PASS = "pass"
STATUS_FAIL = "fail"
STATUS_NOT_APPLICABLE = "not-applicable"


@dataclass
class VerificationReport:
    check_name: str
    params: dict
    hypothesis_margin: float
    conclusion_margin: float
    status: str
    tolerance: float
    gate_tolerance: float
    samples: int
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == STATUS_PASS

    @property
    def failed(self) -> bool:
        return self.status == STATUS_FAIL

    def to_record(self) -> dict:
        return {
            "check": self.check_name,
            "params": self.params,
            "hypothesis_margin": self.hypothesis_margin,
            "conclusion_margin": self.conclusion_margin,
            "status": self.status,
            "pass": self.passed,
            "tolerance": self.tolerance,
            "gate_tolerance": self.gate_tolerance,
            "samples": self.samples,
            "details": self.details,
        }


def _finish(
    name: str,
    params: dict,
    hyp_margin: float,
    margin: float,
    applicable: bool,
    tol: float,
    gate_tol: float,
    samples: int,
    details: dict,
) -> VerificationReport:
    if not applicable:
        status = STATUS_NOT_APPLICABLE
    elif margin >= -tol:
        status = STATUS_PASS
    else:
        status = STATUS_FAIL
    return VerificationReport(
        check_name=name,
        params=params,
        hypothesis_margin=hyp_margin,
        conclusion_margin=margin,
        status=status,
        tolerance=tol,
        gate_tolerance=gate_tol,
        samples=samples,
        details=details,
    )


def hypothesis_gate(
    M: mf.WarpedManifold, N: float, kappa: float, lam: float, grid: int = 256
) -> tuple[float, mf.CurvatureReport]:
    """Worst slack over the curvature bound and the mean-curvature bound.

    For N = inf the comparison hypotheses are the unweighted ones, so kappa
    and lambda must both be zero.
    """
    if N == math.inf and lam != 0.0:
        raise DomainError("N = inf comparisons require lambda = 0")
    report = mf.curvature_margin(M, N, kappa, grid=grid)
    h_bound = 0.0 if N == math.inf else (N - 1.0) * lam
    h_margin = report.h_f_0 - h_bound
    if M.second_boundary and report.h_f_L is not None:
        h_margin = min(h_margin, report.h_f_L - h_bound)
    return min(report.margin, h_margin), report


def _model_volume(N: float, kappa: float, lam: float, r: float) -> float:
    return r if N == math.inf else collar_model_volume(N, kappa, lam, r)


def check_theta_comparison(
    M: mf.WarpedManifold,
    N: float,
    kappa: float,
    lam: float,
    grid: int = 1024,
    tolerance: float = CONCLUSION_TOL,
    gate_tol: float = GATE_TOL,
) -> VerificationReport:
    """Jacobian comparison along normal geodesics.

    Finite N: the log-derivative of theta_f stays below (N-1) s'/s, and
    theta_f itself below theta_f(0) s^(N-1). N = inf: theta_f is
    nonincreasing.
    """
    params = {"N": N, "kappa": kappa, "lam": lam, "grid": grid, "L": M.L}
    hyp, _ = hypothesis_gate(M, N, kappa, lam)
    details: dict = {}
    if N == math.inf:
        ts = np.linspace(0.0, M.L, grid + 1)[1:]
        dtheta = np.asarray(mf.theta_f(M, ts)) * np.asarray(mf.theta_f_log_derivative(M, ts))
        margin = float(np.min(-dtheta))
        details["min_minus_dtheta"] = margin
    else:
        t_hi = min(M.L, c_bar(kappa, lam) * (1.0 - 1e-9))
        ts = np.linspace(0.0, t_hi, grid + 1)[1:]
        s, ds = s_kappa_lambda(kappa, lam, ts)
        rate_margin = float(np.min((N - 1.0) * ds / s - np.asarray(mf.theta_f_log_derivative(M, ts))))
        rhs = math.exp(-float(M.f.value(0.0))) * s ** (N - 1.0)
        value_margin = float(np.min((rhs - np.asarray(mf.theta_f(M, ts))) / rhs))
        margin = min(rate_margin, value_margin)
        details["rate_margin"] = rate_margin
        details["value_margin"] = value_margin
    return _finish(
        "theta_comparison", params, hyp, margin, hyp >= -gate_tol, tolerance, gate_tol, len(ts), details
    )


def check_heintze_karcher(
    M: mf.WarpedManifold,
    N: float,
    kappa: float,
    lam: float,
    r_grid=None,
    tolerance: float = CONCLUSION_TOL,
    gate_tol: float = GATE_TOL,
) -> VerificationReport:
    """Absolute collar volume bound: weighted collar volume at depth r stays
    below the comparison volume times the boundary measure."""
    if r_grid is None:
        r_grid = np.linspace(M.L / 8.0, M.L, 8)
    r_grid = np.asarray(r_grid, dtype=float)
    params = {"N": N, "kappa": kappa, "lam": lam, "L": M.L}
    hyp, _ = hypothesis_gate(M, N, kappa, lam)
    area = mf.boundary_measure(M)
    margins = []
    for r in r_grid:
        lhs = mf.collar_volume(M, float(r))
        rhs = _model_volume(N, kappa, lam, float(r)) * area
        margins.append((rhs - lhs) / rhs)
    margin = float(min(margins))
    return _finish(
        "heintze_karcher",
        params,
        hyp,
        margin,
        hyp >= -gate_tol,
        tolerance,
        gate_tol,
        len(r_grid),
        {"r_grid": [float(r) for r in r_grid], "margins": [float(m) for m in margins]},
    )


def check_bishop_gromov(
    M: mf.WarpedManifold,
    N: float,
    kappa: float,
    lam: float,
    pairs=None,
    ratio_grid: int = 17,
    tolerance: float = CONCLUSION_TOL,
    gate_tol: float = GATE_TOL,
) -> VerificationReport:
    """Relative collar volume bound: volume ratios are dominated by the
    comparison-volume ratios, and volume/comparison-volume is nonincreasing."""
    L = M.L
    if pairs is None:
        pairs = [(L / 4.0, L / 2.0), (L / 2.0, L), (L / 4.0, L)]
    params = {"N": N, "kappa": kappa, "lam": lam, "L": L}
    hyp, _ = hypothesis_gate(M, N, kappa, lam)
    margins = []
    for r, R in pairs:
        if not (0 < r < R <= L * (1 + 1e-12)):
            raise DomainError(f"need 0 < r < R <= L, got ({r}, {R})")
        lhs = mf.collar_volume(M, R) / mf.collar_volume(M, r)
        rhs = _model_volume(N, kappa, lam, R) / _model_volume(N, kappa, lam, r)
        margins.append((rhs - lhs) / rhs)
    rs = np.linspace(L / ratio_grid, L, ratio_grid)
    ratios = np.array(
        [mf.collar_volume(M, float(r)) / _model_volume(N, kappa, lam, float(r)) for r in rs]
    )
    monotone = float(np.min((ratios[:-1] - ratios[1:]) / ratios[:-1]))
    margin = min(float(min(margins)), monotone)
    details = {
        "pair_margins": [float(m) for m in margins],
        "monotonicity_margin": monotone,
    }
    return _finish(
        "bishop_gromov",
        params,
        hyp,
        margin,
        hyp >= -gate_tol,
        tolerance,
        gate_tol,
        len(pairs) + len(rs),
        details,
    )


def check_inscribed_radius(
    M: mf.WarpedManifold,
    kappa: float,
    lam: float,
    N: float,
    tolerance: float = CONCLUSION_TOL,
    gate_tol: float = GATE_TOL,
) -> VerificationReport:
    """Collar depth bound in the geodesic-ball regime: L <= first zero of the
    comparison profile. Not applicable outside that regime."""
    params = {"N": N, "kappa": kappa, "lam": lam, "L": M.L}
    details: dict = {"class": classify(kappa, lam).value}
    if classify(kappa, lam) is not CurvatureClass.BALL:
        return _finish(
            "inscribed_radius", params, 0.0, 0.0, False, tolerance, gate_tol, 0, details
        )
    hyp, _ = hypothesis_gate(M, N, kappa, lam)
    radius = first_zero(kappa, lam)
    margin = (radius - M.L) / radius
    w0 = float(M.w.value(0.0))
    details["ball_radius"] = radius
    details["theta_end_unweighted"] = (float(M.w.value(M.L)) / w0) ** (M.n - 1)
    return _finish(
        "inscribed_radius", params, hyp, margin, hyp >= -gate_tol, tolerance, gate_tol, 1, details
    )


def check_eigenvalue_bound(
    M: mf.WarpedManifold,
    p: float,
    N: float,
    kappa: float,
    lam: float,
    tolerance: float = CONCLUSION_TOL,
    gate_tol: float = GATE_TOL,
) -> VerificationReport:
    """Radial eigenvalue dominance: the principal eigenvalue of the collar's
    radial density is at least the model eigenvalue at the same depth.

    Radial trial functions bound the manifold eigenvalue from above, so this
    is the numerically checkable consequence of the eigenvalue comparison;
    for rigidity models the two densities coincide and so do the values.
    """
    D = M.L
    params = {"p": p, "N": N, "kappa": kappa, "lam": lam, "D": D}
    cb = c_bar(kappa, lam)
    if D > cb * (1.0 + 1e-12):
        raise DomainError(f"collar depth {D} exceeds the truncation radius {cb}")
    hyp, _ = hypothesis_gate(M, N, kappa, lam)
    density = mf.radial_density(M)
    shrink = ENDPOINT_SHRINK if density(D) <= 1e-12 * density(0.0) else 0.0
    radial = principal_eigenvalue(p, density, D, endpoint_shrink=shrink)
    model = model_eigenvalue(p, N, kappa, lam, D)
    margin = (radial.mu - model.mu) / model.mu
    details = {
        "mu_radial": radial.mu,
        "mu_model": model.mu,
        "radial_residual": radial.endpoint_residual,
        "model_residual": model.endpoint_residual,
    }
    return _finish(
        "eigenvalue_bound",
        params,
        hyp,
        margin,
        hyp >= -gate_tol,
        tolerance,
        gate_tol,
        2,
        details,
    )


def check_kasue_eigen_bounds(
    p: float,
    N: float,
    kappa: float,
    lam: float,
    D: float,
    tolerance: float = CONCLUSION_TOL,
    gate_tol: float = GATE_TOL,
) -> VerificationReport:
    """Consistency of the explicit lower bounds with the model eigenvalue.

    Finite N: mu_model >= (p * tail-volume constant)^-p, and for p = 2 the
    strict quadratic-form bound as well. N = inf: the constant-density
    eigenvalue dominates (p D)^-p.
    """
    params = {"p": p, "N": N, "kappa": kappa, "lam": lam, "D": D}
    details: dict = {}
    if N == math.inf:
        mu = free_eigenvalue(p, D).mu
        bound = (p * D) ** -p
        margin = (mu - bound) / mu
        details.update({"mu_model": mu, "depth_bound": bound})
        samples = 1
    else:
        mu = model_eigenvalue(p, N, kappa, lam, D).mu
        constant = kasue_constant(N, kappa, lam, D)
        bound = (p * constant) ** -p
        margin = (mu - bound) / mu
        details.update({"mu_model": mu, "tail_constant": constant, "tail_bound": bound})
        samples = 1
        if p == 2.0:
            strict = dirichlet_p2_lower_bound(N, kappa, lam, D)
            strict_margin = (mu - strict) / mu
            details["quadratic_bound"] = strict
            details["quadratic_margin"] = strict_margin
            margin = min(margin, strict_margin)
            samples = 2
    return _finish(
        "kasue_eigen_bounds", params, 0.0, margin, True, tolerance, gate_tol, samples, details
    )


def check_spectrum_limit(
    p: float,
    N: float,
    lam: float,
    D_grid=None,
    tolerance: float = 1e-6,
    gate_tol: float = GATE_TOL,
) -> VerificationReport:
    """Noncompact limit of the tail-constant bound in the regime
    kappa = -lambda^2.

    The tail constant is nondecreasing in D, so (p * constant)^-p decreases
    to its limit ((N-1) lambda / p)^p; at the largest D supplied the bound
    must have converged to that limit within tolerance.
    """
    if not (lam > 0):
        raise DomainError(f"lambda must be positive, got {lam}")
    if D_grid is None:
        D_grid = np.linspace(2.0, 40.0, 20)
    D_grid = np.asarray(D_grid, dtype=float)
    kappa = -lam * lam
    params = {"p": p, "N": N, "lam": lam, "kappa": kappa, "D": float(D_grid[-1])}
    constants = np.array([kasue_constant(N, kappa, lam, float(D)) for D in D_grid])
    bounds = (p * constants) ** -p
    limit = ((N - 1.0) * lam / p) ** p
    deviation = abs(bounds[-1] - limit) / limit
    monotone = float(np.min(np.diff(constants)) / constants[-1]) if len(constants) > 1 else 0.0
    margin = min(-deviation, monotone)
    details = {
        "limit": limit,
        "bound_at_Dmax": float(bounds[-1]),
        "deviation": deviation,
        "constant_monotonicity": monotone,
    }
    return _finish(
        "spectrum_limit", params, 0.0, margin, True, tolerance, gate_tol, len(D_grid), details
    )


def _tail_ratio_sup(N: float, kappa: float, lam: float, lo: float, hi: float) -> float:
    """sup over t in (lo, hi) of (integral of profile^(N-1) from t to hi) /
    profile^(N-1)(t), by scan plus golden refinement."""

    def dens(ts):
        s, _ = s_kappa_lambda(kappa, lam, np.asarray(ts, dtype=float))
        return np.power(np.maximum(s, 0.0), N - 1.0)

    points = 2048
    grid = np.linspace(lo, hi, points + 1)
    cum = cumulative_gauss7(dens, grid)
    total = cum[-1]
    ratios = (total - cum[:-1]) / dens(grid[:-1])
    i = int(np.argmax(ratios))

    def g(t: float) -> float:
        j = min(int((t - lo) / (hi - lo) * points), points - 1)
        tail = total - (cum[j] + gauss7(dens, grid[j], t))
        return tail / float(dens(t))

    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, points - 1)]
    _, val = golden_max(g, a, b, xtol=1e-9 * max(hi - lo, 1.0))
    return max(val, float(ratios[i]))


def check_domain_volume_estimate(
    M: mf.WarpedManifold,
    N: float,
    kappa: float,
    lam: float,
    a: float,
    b: float,
    tolerance: float = CONCLUSION_TOL,
    gate_tol: float = GATE_TOL,
) -> VerificationReport:
    """Interior-slab volume bound: weighted slab volume against its weighted
    boundary area times a depth factor (tail-ratio sup for finite N, plain
    depth range for N = inf)."""
    params = {"N": N, "kappa": kappa, "lam": lam, "a": a, "b": b}
    hyp, _ = hypothesis_gate(M, N, kappa, lam)
    volume, area, d1, d2 = mf.annulus_quantities(M, a, b)
    if N == math.inf:
        factor = d2 - d1
    else:
        factor = _tail_ratio_sup(N, kappa, lam, d1, d2)
    rhs = area * factor
    margin = (rhs - volume) / rhs
    details = {"volume": volume, "boundary_area": area, "depth_factor": factor}
    return _finish(
        "domain_volume",
        params,
        hyp,
        margin,
        hyp >= -gate_tol,
        tolerance,
        gate_tol,
        1,
        details,
    )


def check_volume_growth_equality(
    M: mf.WarpedManifold,
    N: float,
    kappa: float,
    lam: float,
    r_grid=None,
    tolerance: float = CONCLUSION_TOL,
    gate_tol: float = GATE_TOL,
) -> VerificationReport:
    """Forward rigidity direction: on the equality-case collar the ratio of
    collar volume to comparison volume equals the boundary measure at every
    depth. Strictly smaller ratios flag a non-model collar."""
    if r_grid is None:
        r_grid = np.array([M.L / 4.0, M.L / 2.0, 3.0 * M.L / 4.0, M.L])
    r_grid = np.asarray(r_grid, dtype=float)
    params = {"N": N, "kappa": kappa, "lam": lam, "L": M.L}
    hyp, _ = hypothesis_gate(M, N, kappa, lam)
    area = mf.boundary_measure(M)
    ratios = np.array(
        [mf.collar_volume(M, float(r)) / _model_volume(N, kappa, lam, float(r)) for r in r_grid]
    )
    deviation = float(np.max(np.abs(ratios / area - 1.0)))
    shortfall = float(np.min(1.0 - ratios / area))
    margin = -deviation
    details = {
        "ratios": [float(x) for x in ratios],
        "boundary_measure": area,
        "max_deviation": deviation,
        "min_shortfall": shortfall,
    }
    return _finish(
        "volume_growth",
        params,
        hyp,
        margin,
        hyp >= -gate_tol,
        tolerance,
        gate_tol,
        len(r_grid),
        details,
    )


# --- suite orchestration ----------------------------------------------------

# name -> (callable, needs_manifold)
CHECKS = {
    "theta_comparison": (check_theta_comparison, True),
    "heintze_karcher": (check_heintze_karcher, True),
    "bishop_gromov": (check_bishop_gromov, True),
    "inscribed_radius": (check_inscribed_radius, True),
    "eigenvalue_bound": (check_eigenvalue_bound, True),
    "kasue_eigen_bounds": (check_kasue_eigen_bounds, False),
    "spectrum_limit": (check_spectrum_limit, False),
    "domain_volume": (check_domain_volume_estimate, True),
    "volume_growth": (check_volume_growth_equality, True),
}


@dataclass
class CheckRequest:
    """One requested check: registry name, optional manifold reference, and
    keyword parameters (including tolerance overrides)."""

    name: str
    manifold: str | None = None
    params: dict = field(default_factory=dict)


def suite_threads() -> int:
    """Suite parallelism, capped by the COLLAR_THREADS environment variable."""
    raw = os.environ.get("COLLAR_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_suite(
    manifold_table: dict[str, mf.WarpedManifold],
    requests: list[CheckRequest],
    threads: int | None = None,
) -> list[VerificationReport]:
    """Run the requested checks; reports come back in declaration order.

    Checks are independent pure computations, so they may run on a thread
    pool; the merge order (and hence the report) is deterministic either way.
    """
    if threads is None:
        threads = suite_threads()

    def run_one(req: CheckRequest) -> VerificationReport:
        if req.name not in CHECKS:
            raise DomainError(
                f"unknown check {req.name!r}; known: {sorted(CHECKS)}"
            )
        fn, needs_manifold = CHECKS[req.name]
        kwargs = dict(req.params)
        if needs_manifold:
            if req.manifold is None:
                raise DomainError(f"check {req.name!r} needs a manifold reference")
            if req.manifold not in manifold_table:
                raise DomainError(f"unknown manifold {req.manifold!r}")
            report = fn(manifold_table[req.manifold], **kwargs)
            report.params = {"manifold": req.manifold, **report.params}
            return report
        return fn(**kwargs)

    if threads <= 1 or len(requests) <= 1:
        return [run_one(r) for r in requests]
    with ThreadPoolExecutor(max_workers=min(threads, len(requests))) as pool:
        return list(pool.map(run_one, requests))
