"""Warped collar tests: curvature, volumes, densities, equality-case models."""

import math

import numpy as np
import pytest

from collargeo import manifolds as mf
from collargeo.errors import DomainError
from collargeo.models import s_kappa_lambda
from collargeo.profiles import ConstantProfile, ExprProfile, WarpProfile

SPHERE2 = mf.FiberSpec(dim=2, einstein_constant=1.0, total_volume=4 * math.pi)
RIGIDITY_CASES = [(3, 3.0, -1.0, 1.0, 2.0), (3, 5.0, -1.0, 1.0, 1.5), (3, 4.0, 0.0, 1.0, 0.5), (4, 4.0, 1.0, 0.0, 1.2)]


def cosh_weighted(L=2.5):
    return mf.build(3, SPHERE2, L, ExprProfile("cosh(t)"), ExprProfile("2*t^2"))


class TestBuild:
    def test_valid_decaying_collar(self):
        M = mf.build(3, SPHERE2, 2.0, ExprProfile("exp(-t)"), ConstantProfile(0.0))
        assert M.n == 3 and M.L == 2.0

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError, match="mismatch"):
            mf.build(2, SPHERE2, 1.0, ConstantProfile(1.0), ConstantProfile(0.0))

    def test_nonpositive_warping(self):
        with pytest.raises(DomainError, match="positive"):
            mf.build(3, SPHERE2, 2.0, ExprProfile("1 - t"), ConstantProfile(0.0))

    def test_bad_length(self):
        with pytest.raises(DomainError):
            mf.build(3, SPHERE2, 0.0, ConstantProfile(1.0), ConstantProfile(0.0))

    def test_fiber_validation(self):
        with pytest.raises(DomainError):
            mf.FiberSpec(dim=0, einstein_constant=0.0, total_volume=1.0)
        with pytest.raises(DomainError):
            mf.FiberSpec(dim=2, einstein_constant=0.0, total_volume=0.0)


class TestJacobian:
    def test_rigidity_model_value(self):
        M = mf.make_rigidity_model(3, 3.0, -1.0, 1.0, 2.0)
        assert mf.theta_f(M, 1.0) == pytest.approx(math.exp(-2.0), rel=1e-12)

    def test_initial_value_is_weight_factor(self):
        M = mf.make_rigidity_model(3, 4.0, 0.0, 1.0, 0.5, f0=0.7)
        assert mf.theta_f(M, 0.0) == pytest.approx(math.exp(-0.7), rel=1e-14)

    def test_growing_collar(self):
        M = mf.build(3, SPHERE2, 2.0, ExprProfile("cosh(t)"), ConstantProfile(0.0))
        assert mf.theta_f(M, 1.0) == pytest.approx(math.cosh(1.0) ** 2, rel=1e-12)

    def test_out_of_range(self):
        M = cosh_weighted()
        with pytest.raises(DomainError):
            mf.theta_f(M, 3.0)

    def test_log_derivative_identity(self):
        M = cosh_weighted()
        ts = np.linspace(0.1, 2.0, 40)
        h = 1e-5
        fd = (np.log(mf.theta_f(M, ts + h)) - np.log(mf.theta_f(M, ts - h))) / (2 * h)
        np.testing.assert_allclose(mf.theta_f_log_derivative(M, ts), fd, atol=1e-8)


class TestCurvature:
    def test_weighted_radial_at_origin(self):
        M = cosh_weighted()
        assert mf.bakry_emery_ricci(M, math.inf, 0.0, "radial") == pytest.approx(2.0, abs=1e-12)

    def test_weighted_fiber_at_origin(self):
        M = cosh_weighted()
        assert mf.bakry_emery_ricci(M, math.inf, 0.0, "fiber") == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("l", [0.0, 0.5, 1.0, 2.0])
    def test_hyperbolic_cosh_collar_formulas(self, l):
        # closed forms for w = cosh, f = 2 t^2 over a unit 2-sphere fiber
        M = cosh_weighted()
        n = 3
        assert mf.ricci(M, l, "fiber") == pytest.approx(
            (n - 2) * (1 - math.sinh(l) ** 2) / math.cosh(l) ** 2 - 1, abs=1e-8
        )
        assert mf.hessian_weight(M, l, "fiber") == pytest.approx(
            2 * (n - 1) * l * math.tanh(l), abs=1e-8
        )
        assert mf.ricci(M, l, "radial") == pytest.approx(-(n - 1), abs=1e-8)
        assert mf.hessian_weight(M, l, "radial") == pytest.approx(2 * (n - 1), abs=1e-8)

    def test_rigidity_radial_is_exact(self):
        for n, N, kappa, lam, L in RIGIDITY_CASES:
            M = mf.make_rigidity_model(n, N, kappa, lam, L)
            ts = np.linspace(0.0, L, 65)
            values = np.asarray(mf.bakry_emery_ricci(M, N, ts, "radial"))
            np.testing.assert_allclose(values, (N - 1) * kappa, atol=1e-9)

    def test_constant_weight_required_at_critical_dimension(self):
        M = cosh_weighted()
        with pytest.raises(DomainError, match="constant"):
            mf.bakry_emery_ricci(M, 3.0, 1.0, "radial")

    def test_infinite_vs_large_effective_dimension(self):
        M = cosh_weighted()
        near = mf.bakry_emery_ricci(M, 1e12, 1.0, "radial")
        limit = mf.bakry_emery_ricci(M, math.inf, 1.0, "radial")
        assert near == pytest.approx(limit, abs=1e-9)

    def test_direction_validation(self):
        with pytest.raises(DomainError):
            mf.ricci(cosh_weighted(), 1.0, "mixed")


class TestMeanCurvature:
    def test_model_boundary(self):
        for kappa, lam in [(-1.0, 1.0), (0.0, 2.0), (1.0, -0.5)]:
            M = mf.build(
                3,
                mf.FiberSpec(2, kappa + lam * lam, 1.0),
                0.3 if lam > 0 else 1.0,
                WarpProfile(kappa, lam),
                ConstantProfile(0.0),
            )
            assert mf.weighted_mean_curvature(M, "zero") == pytest.approx(2 * lam, abs=1e-13)

    def test_cosh_collar_is_minimal(self):
        assert mf.weighted_mean_curvature(cosh_weighted(), "zero") == 0.0

    def test_rigidity_model_with_log_weight(self):
        M = mf.make_rigidity_model(3, 5.0, -1.0, 1.0, 1.5)
        assert mf.weighted_mean_curvature(M, "zero") == pytest.approx(4.0, abs=1e-12)

    def test_second_boundary_flag(self):
        M = cosh_weighted()
        with pytest.raises(DomainError):
            mf.weighted_mean_curvature(M, "L")
        slab = mf.build(3, SPHERE2, 1.0, ConstantProfile(1.0), ConstantProfile(0.0), True)
        assert mf.weighted_mean_curvature(slab, "L") == 0.0


class TestCurvatureMargin:
    def test_rigidity_margin_vanishes(self):
        for n, N, kappa, lam, L in RIGIDITY_CASES:
            report = mf.curvature_margin(mf.make_rigidity_model(n, N, kappa, lam, L), N, kappa)
            assert abs(report.margin) < 1e-9
            assert report.h_f_0 == pytest.approx((N - 1) * lam, abs=1e-12)

    def test_unweighted_nonnegative_for_cosh_collar(self):
        report = mf.curvature_margin(cosh_weighted(), math.inf, 0.0)
        assert report.margin >= -1e-9

    def test_finite_effective_dimension_fails_for_cosh_collar(self):
        report = mf.curvature_margin(cosh_weighted(), 4.0, 0.0)
        assert report.margin < 0.0

    def test_infinite_dimension_requires_flat_bound(self):
        with pytest.raises(DomainError):
            mf.curvature_margin(cosh_weighted(), math.inf, -1.0)

    def test_reports_assumptions(self):
        report = mf.curvature_margin(cosh_weighted(), math.inf, 0.0)
        assert len(report.assumptions) == 2


class TestVolumes:
    def test_rigidity_collar_volume(self):
        M = mf.make_rigidity_model(3, 3.0, -1.0, 1.0, 2.0, fiber_volume=4 * math.pi)
        expected = 4 * math.pi * (1 - math.exp(-2.0)) / 2.0
        assert mf.collar_volume(M, 1.0) == pytest.approx(expected, rel=1e-10)
        assert mf.collar_volume(M, 0.0) == 0.0

    def test_product_collar_volume(self):
        M = mf.make_product(3, 2.0, SPHERE2)
        assert mf.collar_volume(M, 2.0) == pytest.approx(8 * math.pi, rel=1e-12)

    def test_boundary_measure(self):
        M = mf.make_product(3, 1.0, SPHERE2)
        assert mf.boundary_measure(M) == pytest.approx(4 * math.pi, rel=1e-14)
        weighted = mf.build(3, SPHERE2, 1.0, ConstantProfile(1.0), ConstantProfile(math.log(2.0)))
        assert mf.boundary_measure(weighted) == pytest.approx(2 * math.pi, rel=1e-14)
        wide = mf.build(3, SPHERE2, 1.0, ExprProfile("2*exp(-t)"), ConstantProfile(0.0))
        assert mf.boundary_measure(wide) == pytest.approx(16 * math.pi, rel=1e-14)

    def test_annulus_product(self):
        M = mf.make_product(3, 2.0, SPHERE2)
        volume, area, d1, d2 = mf.annulus_quantities(M, 1.0, 2.0)
        assert volume == pytest.approx(4 * math.pi, rel=1e-11)
        assert area == pytest.approx(8 * math.pi, rel=1e-13)
        assert (d1, d2) == (1.0, 2.0)

    def test_annulus_rigidity(self):
        M = mf.make_rigidity_model(3, 3.0, -1.0, 1.0, 2.0, fiber_volume=4 * math.pi)
        volume, *_ = mf.annulus_quantities(M, 0.5, 1.0)
        assert volume == pytest.approx(2 * math.pi * (math.exp(-1.0) - math.exp(-2.0)), rel=1e-10)

    def test_annulus_additivity(self):
        M = cosh_weighted()
        full = mf.collar_volume(M, 1.4) - mf.collar_volume(M, 0.3)
        part, *_ = mf.annulus_quantities(M, 0.3, 1.4)
        assert part == pytest.approx(full, rel=1e-10)

    def test_annulus_rejects_degenerate_range(self):
        with pytest.raises(DomainError):
            mf.annulus_quantities(cosh_weighted(), 1.0, 1.0)

    def test_collar_volume_monotone(self):
        M = cosh_weighted()
        vols = [mf.collar_volume(M, r) for r in np.linspace(0.1, 2.5, 9)]
        assert all(b > a for a, b in zip(vols, vols[1:]))


class TestRadialDensity:
    def test_rigidity_density_is_model_power(self):
        M = mf.make_rigidity_model(3, 5.0, -1.0, 1.0, 1.5)
        density = mf.radial_density(M)
        assert density.kind == "model"
        ts = np.linspace(0.0, 1.5, 33)
        s, _ = s_kappa_lambda(-1.0, 1.0, ts)
        np.testing.assert_allclose(density(ts), s**4, rtol=1e-13)

    def test_product_density_is_constant(self):
        assert mf.radial_density(mf.make_product(3, 1.0)).kind == "const"

    def test_low_dimension_table(self):
        fiber = mf.FiberSpec(dim=1, einstein_constant=0.0, total_volume=2 * math.pi)
        M = mf.build(2, fiber, 1.2, ExprProfile("cos(t)"), ConstantProfile(0.0))
        density = mf.radial_density(M)
        assert density.kind == "table"
        ts = np.linspace(0.0, 1.2, 17)
        np.testing.assert_allclose(density(ts), np.cos(ts), atol=1e-10)


class TestRigidityModel:
    def test_splitting_case_is_flat_fibered(self):
        M = mf.make_rigidity_model(3, 3.0, -1.0, 1.0, 2.0)
        assert M.fiber.einstein_constant == 0.0
        ts = np.linspace(0.0, 2.0, 9)
        np.testing.assert_allclose(M.w.value(ts), np.exp(-ts), rtol=1e-14)
        assert M.f_is_constant()

    def test_flat_ball_case_weight(self):
        M = mf.make_rigidity_model(3, 4.0, 0.0, 1.0, 0.5)
        ts = np.linspace(0.0, 0.5, 9)
        np.testing.assert_allclose(M.w.value(ts), 1.0 - ts, rtol=1e-14)
        np.testing.assert_allclose(M.f.value(ts), -np.log(1.0 - ts), rtol=1e-13, atol=1e-15)
        # the fiber constant must make the fiber direction attain the bound
        fiber_vals = np.asarray(mf.bakry_emery_ricci(M, 4.0, ts[:-1], "fiber"))
        np.testing.assert_allclose(fiber_vals, 0.0, atol=1e-9)

    def test_rejects_depth_at_truncation(self):
        with pytest.raises(DomainError):
            mf.make_rigidity_model(3, 3.0, 1.0, 0.0, math.pi)

    def test_jacobian_equality(self):
        for n, N, kappa, lam, L in RIGIDITY_CASES:
            M = mf.make_rigidity_model(n, N, kappa, lam, L, f0=0.3)
            ts = np.linspace(0.0, L, 33)
            s, _ = s_kappa_lambda(kappa, lam, ts)
            np.testing.assert_allclose(
                mf.theta_f(M, ts), math.exp(-0.3) * s ** (N - 1), rtol=1e-10
            )
