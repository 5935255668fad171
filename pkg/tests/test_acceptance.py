"""Acceptance criteria: one test per criterion, one printed line each.

Every tolerance is pinned here; run with ``pytest -s tests/test_acceptance.py``
to see the per-criterion lines on a normal pass.
"""

import json
import math
import subprocess
import sys
import time
from importlib import resources

import numpy as np

from collargeo import checks
from collargeo import manifolds as mf
from collargeo.eigen import fd_oracle_p2, free_eigenvalue, model_eigenvalue, principal_eigenvalue
from collargeo.fixtures import convex_weight_collar, perturbed_warp_collar, random_table_density
from collargeo.models import c_bar, dirichlet_p2_lower_bound, kasue_constant, s_kappa_lambda
from collargeo.profiles import ExprProfile

RIGIDITY_CASES = [(3, 3.0, -1.0, 1.0, 2.0), (3, 5.0, -1.0, 1.0, 1.5), (3, 4.0, 0.0, 1.0, 0.5), (4, 4.0, 1.0, 0.0, 1.2)]


def report_line(index: int, name: str, ok: bool, detail: str = ""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance {index}] {name}: {status}{suffix}", flush=True)
    assert ok, f"acceptance criterion {index} failed: {name} {suffix}"


def test_criterion_1_eigenvalue_closed_form():
    start = time.perf_counter()
    worst = 0.0
    for D in (0.5, 1.0, 2.0, 5.0):
        mu = free_eigenvalue(2.0, D).mu
        exact = math.pi**2 / (4.0 * D * D)
        worst = max(worst, abs(mu - exact) / exact)
    elapsed = time.perf_counter() - start
    report_line(
        1,
        "constant-density eigenvalue closed form",
        worst < 1e-8 and elapsed < 1.0,
        f"worst rel err {worst:.2e}, {elapsed:.2f}s",
    )


def test_criterion_2_oracle_equivalence():
    start = time.perf_counter()
    worst = 0.0
    for seed in range(20):
        density = random_table_density(seed)
        mu = principal_eigenvalue(2.0, density, 1.0).mu
        oracle = fd_oracle_p2(density, 1.0, 4000)
        worst = max(worst, abs(mu - oracle) / oracle)
    elapsed = time.perf_counter() - start
    report_line(
        2,
        "shooting vs finite-difference oracle on 20 seeded densities",
        worst < 1e-4 and elapsed < 30.0,
        f"worst rel diff {worst:.2e}, {elapsed:.1f}s",
    )


def test_criterion_3_tail_constant():
    worst = 0.0
    monotone = True
    for n_eff in (2.0, 3.0, 5.0):
        for lam in (0.5, 1.0):
            kappa = -lam * lam
            scans = []
            for depth in (0.5, 1.0, 5.0):
                closed = kasue_constant(n_eff, kappa, lam, depth, method="closed")
                scanned = kasue_constant(n_eff, kappa, lam, depth, method="scan")
                worst = max(worst, abs(scanned - closed) / closed)
                scans.append(scanned)
            monotone &= all(b >= a - 1e-12 for a, b in zip(scans, scans[1:]))
    report_line(
        3,
        "tail-volume constant: scan vs closed form, monotone in depth",
        worst < 1e-6 and monotone,
        f"worst rel err {worst:.2e}",
    )


def test_criterion_4_curvature_vectors():
    M = mf.build(
        3,
        mf.FiberSpec(2, 1.0, 4 * math.pi),
        2.5,
        ExprProfile("cosh(t)"),
        ExprProfile("2*t^2"),
    )
    n = 3
    worst = 0.0
    for l in (0.0, 0.5, 1.0, 2.0):
        expected = {
            ("ricci", "fiber"): (n - 2) * (1 - math.sinh(l) ** 2) / math.cosh(l) ** 2 - 1,
            ("hess", "fiber"): 2 * (n - 1) * l * math.tanh(l),
            ("ricci", "radial"): -(n - 1),
            ("hess", "radial"): 2 * (n - 1),
        }
        worst = max(worst, abs(mf.ricci(M, l, "fiber") - expected[("ricci", "fiber")]))
        worst = max(worst, abs(mf.hessian_weight(M, l, "fiber") - expected[("hess", "fiber")]))
        worst = max(worst, abs(mf.ricci(M, l, "radial") - expected[("ricci", "radial")]))
        worst = max(worst, abs(mf.hessian_weight(M, l, "radial") - expected[("hess", "radial")]))
    h_origin = abs(mf.weighted_mean_curvature(M, "zero"))
    margin = mf.curvature_margin(M, math.inf, 0.0).margin
    report_line(
        4,
        "hyperbolic collar curvature vectors",
        worst < 1e-8 and h_origin < 1e-12 and margin >= -1e-9,
        f"worst abs err {worst:.2e}, |H_f(0)| {h_origin:.1e}, margin {margin:.2e}",
    )


def test_criterion_5_rigidity_equalities():
    worst = 0.0
    for n, N, kappa, lam, L in RIGIDITY_CASES:
        M = mf.make_rigidity_model(n, N, kappa, lam, L)
        ts = np.linspace(0.0, L, 129)
        radial = np.asarray(mf.bakry_emery_ricci(M, N, ts, "radial"))
        scale = max(1.0, abs((N - 1) * kappa))
        worst = max(worst, float(np.max(np.abs(radial - (N - 1) * kappa))) / scale)
        worst = max(worst, abs(mf.weighted_mean_curvature(M, "zero") - (N - 1) * lam) / max(1.0, (N - 1) * abs(lam)))
        s_vals, _ = s_kappa_lambda(kappa, lam, ts)
        theta_err = np.max(np.abs(mf.theta_f(M, ts) - s_vals ** (N - 1)) / s_vals ** (N - 1))
        worst = max(worst, float(theta_err))
        for check_fn, args in [
            (checks.check_heintze_karcher, (M, N, kappa, lam)),
            (checks.check_bishop_gromov, (M, N, kappa, lam)),
            (checks.check_volume_growth_equality, (M, N, kappa, lam)),
            (checks.check_eigenvalue_bound, (M, 2.0, N, kappa, lam)),
        ]:
            result = check_fn(*args)
            assert result.status == checks.STATUS_PASS, result.check_name
            worst = max(worst, abs(result.conclusion_margin))
    report_line(
        5,
        "equality-case collars attain every comparison with equality",
        worst <= 1e-8,
        f"worst |margin| {worst:.2e}",
    )


def test_criterion_6_inequality_suites():
    start = time.perf_counter()
    worst = math.inf
    count = 0
    for seed in range(38):
        M, meta = perturbed_warp_collar(seed)
        N, kappa, lam = meta["N"], meta["kappa"], meta["lam"]
        for result in (
            checks.check_theta_comparison(M, N, kappa, lam),
            checks.check_heintze_karcher(M, N, kappa, lam),
            checks.check_bishop_gromov(M, N, kappa, lam),
            checks.check_eigenvalue_bound(M, 2.0, N, kappa, lam),
        ):
            assert result.status == checks.STATUS_PASS, (seed, result.check_name, result.conclusion_margin)
            worst = min(worst, result.conclusion_margin)
        count += 1
    for seed in range(100, 112):
        M, meta = convex_weight_collar(seed)
        for result in (
            checks.check_theta_comparison(M, math.inf, 0.0, 0.0),
            checks.check_heintze_karcher(M, math.inf, 0.0, 0.0),
            checks.check_bishop_gromov(M, math.inf, 0.0, 0.0),
            checks.check_eigenvalue_bound(M, 2.0, math.inf, 0.0, 0.0),
        ):
            assert result.status == checks.STATUS_PASS, (seed, result.check_name, result.conclusion_margin)
            worst = min(worst, result.conclusion_margin)
        count += 1
    elapsed = time.perf_counter() - start
    report_line(
        6,
        f"inequality suite on {count} seeded admissible collars",
        worst >= -1e-8 and count == 50 and elapsed < 300.0,
        f"worst margin {worst:.2e}, {elapsed:.0f}s",
    )


def test_criterion_7_bound_chain():
    regimes = {(-1.0, 1.0): (0.5, 1.0, 2.0), (0.0, 1.0): (0.3, 0.6, 0.9), (1.0, 0.0): (0.5, 1.0, 1.4)}
    ok = True
    for n_eff in (2.0, 3.0, 5.0):
        for (kappa, lam), depths in regimes.items():
            for depth in depths:
                assert depth <= c_bar(kappa, lam)
                mu = model_eigenvalue(2.0, n_eff, kappa, lam, depth).mu
                tail = (2.0 * kasue_constant(n_eff, kappa, lam, depth)) ** -2.0
                quad = dirichlet_p2_lower_bound(n_eff, kappa, lam, depth)
                ok &= mu >= tail * (1.0 - 1e-12)
                ok &= mu > quad
    limit_report = checks.check_spectrum_limit(2.0, 2.0, 1.0, D_grid=[10.0, 20.0, 40.0], tolerance=1e-6)
    limit_dev = limit_report.details["deviation"]
    report_line(
        7,
        "eigenvalues dominate the explicit bound chain; noncompact limit attained",
        ok and limit_report.status == checks.STATUS_PASS and limit_dev < 1e-6,
        f"limit deviation {limit_dev:.2e}",
    )


def test_criterion_8_cli_end_to_end(tmp_path):
    def run(*args):
        return subprocess.run(
            [sys.executable, "-m", "collargeo.cli", *args], capture_output=True, text=True
        )

    default = str(resources.files("collargeo.data") / "default_suite.toml")
    tampered = str(resources.files("collargeo.data") / "tampered_suite.toml")
    bad = tmp_path / "broken.toml"
    bad.write_text("this is [not toml\n")

    out_default = run("verify", default)
    records = json.loads(out_default.stdout)
    schema_ok = all(
        set(r) == {
            "check", "params", "hypothesis_margin", "conclusion_margin",
            "status", "pass", "tolerance", "gate_tolerance", "samples", "details",
        }
        for r in records
    )
    out_tampered = run("verify", tampered)
    out_bad = run("verify", str(bad))
    ok = (
        out_default.returncode == 0
        and schema_ok
        and len(records) >= 30
        and out_tampered.returncode == 1
        and out_bad.returncode == 2
    )
    report_line(
        8,
        "command-line verify exit codes and report schema",
        ok,
        f"default {out_default.returncode}, tampered {out_tampered.returncode}, malformed {out_bad.returncode}",
    )
