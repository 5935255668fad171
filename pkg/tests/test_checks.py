"""Verification check tests: equality cases, strictness, gating, determinism."""

import math

import numpy as np
import pytest

from collargeo import checks
from collargeo import manifolds as mf
from collargeo.checks import CheckRequest, run_suite
from collargeo.errors import DomainError
from collargeo.fixtures import convex_weight_collar, perturbed_warp_collar

RIGIDITY_CASES = [(3, 3.0, -1.0, 1.0, 2.0), (3, 5.0, -1.0, 1.0, 1.5), (3, 4.0, 0.0, 1.0, 0.5), (4, 4.0, 1.0, 0.0, 1.2)]


class TestEqualityCases:
    @pytest.mark.parametrize("case", RIGIDITY_CASES, ids=str)
    def test_rigidity_models_attain_equality(self, case):
        n, N, kappa, lam, L = case
        M = mf.make_rigidity_model(n, N, kappa, lam, L)
        reports = [
            checks.check_theta_comparison(M, N, kappa, lam),
            checks.check_heintze_karcher(M, N, kappa, lam),
            checks.check_bishop_gromov(M, N, kappa, lam),
            checks.check_eigenvalue_bound(M, 2.0, N, kappa, lam),
            checks.check_volume_growth_equality(M, N, kappa, lam),
        ]
        for report in reports:
            assert report.status == checks.STATUS_PASS, report.check_name
            assert abs(report.conclusion_margin) <= 1e-8, report.check_name

    def test_product_slab_unweighted_equalities(self):
        M = mf.make_product(3, 2.0, mf.FiberSpec(2, 0.0, 4 * math.pi))
        hk = checks.check_heintze_karcher(M, math.inf, 0.0, 0.0)
        bg = checks.check_bishop_gromov(M, math.inf, 0.0, 0.0, pairs=[(1.0, 2.0)])
        vg = checks.check_volume_growth_equality(M, math.inf, 0.0, 0.0)
        eig = checks.check_eigenvalue_bound(M, 2.0, math.inf, 0.0, 0.0)
        for report in (hk, bg, vg, eig):
            assert report.status == checks.STATUS_PASS
            assert abs(report.conclusion_margin) <= 1e-9, report.check_name
        assert eig.details["mu_model"] == pytest.approx(math.pi**2 / 16.0, rel=1e-9)


class TestStrictness:
    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_warp_family_strict_margins(self, seed):
        M, meta = perturbed_warp_collar(seed)
        N, kappa, lam = meta["N"], meta["kappa"], meta["lam"]
        theta = checks.check_theta_comparison(M, N, kappa, lam)
        hk = checks.check_heintze_karcher(M, N, kappa, lam)
        bg = checks.check_bishop_gromov(M, N, kappa, lam)
        assert theta.status == checks.STATUS_PASS
        # strictly positive everywhere; the pointwise minimum sits at the
        # first grid point where the perturbation has barely accumulated
        assert theta.details["value_margin"] > 0.0
        assert theta.details["rate_margin"] > 0.0
        assert hk.conclusion_margin > 1e-10
        assert bg.conclusion_margin > 1e-10

    @pytest.mark.parametrize("seed", [0, 5])
    def test_weight_family(self, seed):
        M, _ = convex_weight_collar(seed)
        theta = checks.check_theta_comparison(M, math.inf, 0.0, 0.0)
        eig = checks.check_eigenvalue_bound(M, 2.0, math.inf, 0.0, 0.0)
        assert theta.status == checks.STATUS_PASS
        assert eig.status == checks.STATUS_PASS
        assert eig.conclusion_margin > 0.0

    def test_volume_growth_detects_non_model(self):
        M, meta = perturbed_warp_collar(0)
        report = checks.check_volume_growth_equality(M, meta["N"], meta["kappa"], meta["lam"])
        assert report.status == checks.STATUS_FAIL  # equality only on the model
        assert report.details["min_shortfall"] > 0.0


class TestGate:
    def test_violated_mean_curvature_is_not_applicable(self):
        M = mf.make_product(3, 1.0)
        report = checks.check_heintze_karcher(M, 3.0, 0.0, 0.5)
        assert report.status == checks.STATUS_NOT_APPLICABLE
        assert report.hypothesis_margin < 0

    def test_violated_curvature_is_not_applicable(self):
        # flat slab tested against a positive curvature bound
        M = mf.make_product(3, 1.0, mf.FiberSpec(2, 1.0, 1.0))
        report = checks.check_theta_comparison(M, 3.0, 0.25, 0.0)
        assert report.status == checks.STATUS_NOT_APPLICABLE

    def test_gate_failure_never_passes(self):
        M = mf.make_product(3, 1.0)
        for fn, args in [
            (checks.check_theta_comparison, (M, 3.0, 0.1, 0.0)),
            (checks.check_heintze_karcher, (M, 3.0, 0.1, 0.0)),
            (checks.check_bishop_gromov, (M, 3.0, 0.1, 0.0)),
            (checks.check_volume_growth_equality, (M, 3.0, 0.1, 0.0)),
        ]:
            report = fn(*args)
            assert report.hypothesis_margin < -report.gate_tolerance
            assert not report.passed


class TestInscribedRadius:
    def test_inside_ball_bound(self):
        M = mf.make_rigidity_model(3, 3.0, 1.0, 0.0, 1.2)
        report = checks.check_inscribed_radius(M, 1.0, 0.0, 3.0)
        assert report.status == checks.STATUS_PASS
        assert report.details["ball_radius"] == pytest.approx(math.pi / 2, rel=1e-14)

    def test_not_applicable_outside_ball_regime(self):
        M = mf.make_rigidity_model(3, 3.0, -1.0, 1.0, 2.0)
        report = checks.check_inscribed_radius(M, -1.0, 1.0, 3.0)
        assert report.status == checks.STATUS_NOT_APPLICABLE

    def test_collar_longer_than_ball_radius_cannot_be_built(self):
        # structural consistency: the warping vanishes before such a depth
        with pytest.raises(DomainError):
            mf.make_rigidity_model(3, 3.0, 1.0, 0.0, 1.6)

    def test_jacobian_collapses_at_full_depth(self):
        depths = [0.8, 0.95, 0.999]
        thetas = []
        for frac in depths:
            M = mf.make_rigidity_model(3, 3.0, 1.0, 0.0, frac * math.pi / 2)
            report = checks.check_inscribed_radius(M, 1.0, 0.0, 3.0)
            assert report.status == checks.STATUS_PASS
            thetas.append(report.details["theta_end_unweighted"])
        assert thetas[2] < thetas[1] < thetas[0]
        assert thetas[2] < 1e-5


class TestBoundChain:
    def test_flat_family_dominates_depth_bound(self):
        report = checks.check_kasue_eigen_bounds(2.0, math.inf, 0.0, 0.0, 1.0)
        assert report.status == checks.STATUS_PASS
        assert report.details["mu_model"] == pytest.approx(math.pi**2 / 4, rel=1e-9)
        assert report.details["depth_bound"] == pytest.approx(0.25, rel=1e-14)

    def test_exponential_regime_tail_bound(self):
        report = checks.check_kasue_eigen_bounds(2.0, 2.0, -1.0, 1.0, 1.0)
        assert report.status == checks.STATUS_PASS
        expected = (2.0 * (1.0 - math.exp(-1.0))) ** -2.0
        assert report.details["tail_bound"] == pytest.approx(expected, rel=1e-12)
        assert report.details["mu_model"] >= expected

    def test_quadratic_bound_is_strict(self):
        report = checks.check_kasue_eigen_bounds(2.0, 3.0, 0.0, 0.0, 1.0)
        assert report.details["quadratic_bound"] == pytest.approx(1.0, rel=1e-8)
        assert report.details["mu_model"] > 1.0
        assert report.details["quadratic_margin"] > 0.0

    def test_spectrum_limit_values(self):
        report = checks.check_spectrum_limit(2.0, 2.0, 1.0, D_grid=np.linspace(4.0, 40.0, 10))
        assert report.status == checks.STATUS_PASS
        assert report.details["limit"] == 0.25
        assert abs(report.details["bound_at_Dmax"] - 0.25) < 1e-10
        assert report.details["constant_monotonicity"] >= -1e-12

    def test_spectrum_limit_general_exponent(self):
        report = checks.check_spectrum_limit(3.0, 4.0, 0.5, D_grid=[20.0, 40.0, 60.0])
        assert report.details["limit"] == pytest.approx(0.125, rel=1e-14)
        assert report.status == checks.STATUS_PASS

    def test_unconverged_depth_fails(self):
        report = checks.check_spectrum_limit(2.0, 2.0, 1.0, D_grid=[1.0, 2.0], tolerance=1e-6)
        assert report.status == checks.STATUS_FAIL


class TestDomainVolume:
    def test_product_slab(self):
        M = mf.make_product(3, 2.0, mf.FiberSpec(2, 0.0, 4 * math.pi))
        report = checks.check_domain_volume_estimate(M, math.inf, 0.0, 0.0, 1.0, 2.0)
        assert report.status == checks.STATUS_PASS
        assert report.details["volume"] == pytest.approx(4 * math.pi, rel=1e-10)
        assert report.details["boundary_area"] == pytest.approx(8 * math.pi, rel=1e-12)
        assert report.details["depth_factor"] == 1.0

    def test_rigidity_slab(self):
        M = mf.make_rigidity_model(3, 3.0, -1.0, 1.0, 2.0, fiber_volume=4 * math.pi)
        report = checks.check_domain_volume_estimate(M, 3.0, -1.0, 1.0, 0.5, 1.0)
        assert report.status == checks.STATUS_PASS
        assert report.conclusion_margin >= 0.0

    def test_rejects_degenerate_range(self):
        M = mf.make_product(3, 2.0)
        with pytest.raises(DomainError):
            checks.check_domain_volume_estimate(M, math.inf, 0.0, 0.0, 1.0, 1.0)


class TestSuite:
    def _table_and_requests(self):
        table = {
            "rig": mf.make_rigidity_model(3, 3.0, -1.0, 1.0, 2.0),
            "slab": mf.make_product(3, 1.0),
        }
        requests = [
            CheckRequest("theta_comparison", "rig", {"N": 3.0, "kappa": -1.0, "lam": 1.0}),
            CheckRequest("kasue_eigen_bounds", None, {"p": 2.0, "N": 3.0, "kappa": -1.0, "lam": 1.0, "D": 1.0}),
            CheckRequest("heintze_karcher", "slab", {"N": math.inf, "kappa": 0.0, "lam": 0.0}),
        ]
        return table, requests

    def test_order_and_determinism(self):
        table, requests = self._table_and_requests()
        first = run_suite(table, requests, threads=1)
        second = run_suite(table, requests, threads=1)
        assert [r.check_name for r in first] == [r.name for r in requests]
        assert [r.to_record() for r in first] == [r.to_record() for r in second]

    def test_threaded_matches_serial(self):
        table, requests = self._table_and_requests()
        serial = run_suite(table, requests, threads=1)
        threaded = run_suite(table, requests, threads=4)
        assert [r.to_record() for r in serial] == [r.to_record() for r in threaded]

    def test_empty_request_list(self):
        assert run_suite({}, [], threads=1) == []

    def test_unknown_check(self):
        with pytest.raises(DomainError, match="unknown check"):
            run_suite({}, [CheckRequest("bogus", None, {})], threads=1)

    def test_missing_manifold(self):
        with pytest.raises(DomainError, match="needs a manifold"):
            run_suite({}, [CheckRequest("theta_comparison", None, {})], threads=1)

    def test_not_applicable_counts_as_success(self):
        table = {"slab": mf.make_product(3, 1.0)}
        requests = [
            CheckRequest("heintze_karcher", "slab", {"N": 3.0, "kappa": 0.0, "lam": 0.5}),
        ]
        reports = run_suite(table, requests, threads=1)
        assert reports[0].status == checks.STATUS_NOT_APPLICABLE
        assert not reports[0].failed


class TestTamperedTolerance:
    def test_zero_tolerance_flags_unconverged_limit(self):
        report = checks.check_spectrum_limit(
            2.0, 2.0, 1.0, D_grid=[5.0, 10.0, 25.0], tolerance=0.0
        )
        assert report.status == checks.STATUS_FAIL
        assert -1e-10 < report.conclusion_margin < 0.0
