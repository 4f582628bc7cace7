"""Trade-off boundary solver against analytic anchors and brute-force oracles."""

from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import brute_rms_d2, brute_statistical_d2
from jmspin.algebra import (
    BlochVector,
    ProblemInstance,
    effect_from_parameters,
    sharp_spin,
)
from jmspin.boundary import (
    boundary_curve,
    ellipsoid_distance,
    min_partner_distance,
    region_membership,
    rms_optimal_direction,
    saturation_distance,
    symmetric_optimum,
)
from jmspin.distances import rms_distance, statistical_distance
from jmspin.errors import DistanceOutOfRange
from jmspin.measurability import busch_margin, joint_feasibility
from jmspin.optim import nelder_mead

SQ2 = math.sqrt(2.0)
DEG = (30.0, 60.0, 90.0)


def instance(deg: float) -> ProblemInstance:
    return ProblemInstance.from_angle(math.radians(deg))


class TestSymmetricOptimum:
    def test_right_angle_closed_form(self):
        inst = instance(90.0)
        opt = symmetric_optimum(inst)
        assert opt.lam == pytest.approx(0.5, abs=1e-15)
        assert (opt.a - inst.p * (1 / SQ2)).norm() == pytest.approx(0.0, abs=1e-14)
        assert (opt.b - inst.q * (1 / SQ2)).norm() == pytest.approx(0.0, abs=1e-14)
        assert opt.d_sym == pytest.approx(0.5 * (1.0 - 1.0 / SQ2), abs=1e-12)

    def test_pair_sits_exactly_on_compatibility_boundary(self):
        for deg in (10.0, 30.0, 45.0, 60.0, 77.7, 90.0):
            opt = symmetric_optimum(instance(deg))
            assert busch_margin(opt.a, opt.b) == pytest.approx(0.0, abs=1e-14)

    def test_both_sides_equidistant(self):
        for deg in (20.0, 40.0, 90.0):
            inst = instance(deg)
            opt = symmetric_optimum(inst)
            d_a = statistical_distance(sharp_spin(inst.p), effect_from_parameters(1.0, opt.a))
            d_b = statistical_distance(sharp_spin(inst.q), effect_from_parameters(1.0, opt.b))
            assert d_a == pytest.approx(d_b, abs=1e-14)
            assert d_a == pytest.approx(opt.d_sym, abs=1e-14)


class TestEllipsoidDistance:
    def test_unit_ball_case(self):
        zero = BlochVector(0, 0, 0)
        d, nearest = ellipsoid_distance(zero, BlochVector(0, 0, 2.0))
        assert d == pytest.approx(1.0, abs=1e-12)
        assert (nearest - BlochVector(0, 0, 1.0)).norm() <= 1e-12

    def test_interior_point(self):
        a = BlochVector(0.5, 0, 0)
        d, nearest = ellipsoid_distance(a, BlochVector(0.2, 0.3, 0))
        assert d == 0.0
        assert (nearest - BlochVector(0.2, 0.3, 0)).norm() == 0.0

    def test_segment_case(self):
        a = BlochVector(0, 0, 1.0)
        d, nearest = ellipsoid_distance(a, BlochVector(0.3, 0, 0.4))
        assert d == pytest.approx(0.3, abs=1e-12)
        assert (nearest - BlochVector(0, 0, 0.4)).norm() <= 1e-12

    def test_on_axis_exterior(self):
        a = BlochVector(0.6, 0, 0)
        d, nearest = ellipsoid_distance(a, BlochVector(-1.7, 0, 0))
        assert d == pytest.approx(0.7, abs=1e-12)
        assert (nearest - BlochVector(-1.0, 0, 0)).norm() <= 1e-10

    def test_projection_lies_on_boundary_with_zero_margin(self):
        rng = np.random.default_rng(61)
        for _ in range(200):
            v = rng.normal(size=3)
            a = BlochVector(*(v / np.linalg.norm(v) * rng.uniform(0.05, 0.98)))
            q = BlochVector(*(rng.normal(size=3)))
            q = q * (1.0 / max(1.0, q.norm()))
            d, nearest = ellipsoid_distance(a, q)
            if d == 0.0:
                assert busch_margin(a, q) >= -1e-12
            else:
                assert busch_margin(a, nearest) == pytest.approx(0.0, abs=1e-9)
                assert (q - nearest).norm() == pytest.approx(d, abs=1e-12)

    def test_matches_dense_boundary_grid(self):
        rng = np.random.default_rng(62)
        t = np.linspace(0.0, 2.0 * math.pi, 20001)
        for _ in range(40):
            m = rng.uniform(0.05, 0.95)
            axis = BlochVector(1, 0, 0)
            a = axis * m
            q = BlochVector(rng.uniform(-2, 2), rng.uniform(-2, 2), 0.0)
            minor = math.sqrt(1.0 - m * m)
            ex, ey = np.cos(t), minor * np.sin(t)
            grid = float(np.sqrt((q.x - ex) ** 2 + (q.y - ey) ** 2).min())
            inside = q.x**2 + (q.y / minor) ** 2 <= 1.0
            expected = 0.0 if inside else grid
            d, _ = ellipsoid_distance(a, q)
            assert d == pytest.approx(expected, abs=5e-8)


class TestMinPartnerDistanceStatistical:
    def test_symmetric_anchor_all_angles(self):
        for deg in DEG:
            inst = instance(deg)
            d_sym = symmetric_optimum(inst).d_sym
            pt = min_partner_distance(inst, d_sym, "statistical")
            assert pt.d2 == pytest.approx(d_sym, abs=1e-4)
            assert pt.d2 == pytest.approx(d_sym, abs=1e-9)

    def test_saturation_endpoint_reaches_zero(self):
        for deg in DEG:
            inst = instance(deg)
            sat = saturation_distance(inst, "statistical")
            assert sat == pytest.approx(0.5 * math.sin(inst.theta), abs=1e-15)
            pt = min_partner_distance(inst, sat, "statistical")
            assert pt.d2 == pytest.approx(0.0, abs=1e-9)
            # optimal a is the projection of p onto the degenerate segment of
            # q; the tangency makes its localization quadratically flat
            expect_a = inst.q * math.cos(inst.theta)
            assert (pt.a_opt - expect_a).norm() <= 1e-3
            assert joint_feasibility(
                effect_from_parameters(1.0, pt.a_opt),
                effect_from_parameters(1.0, pt.b_opt),
                1e-7,
            ).feasible

    def test_zero_distance_endpoint(self):
        for deg in DEG:
            inst = instance(deg)
            pt = min_partner_distance(inst, 0.0, "statistical")
            assert pt.d2 == pytest.approx(0.5 * math.sin(inst.theta), abs=1e-12)
            assert (pt.a_opt - inst.p).norm() == 0.0

    def test_against_brute_force_grid(self):
        for deg in DEG:
            inst = instance(deg)
            sat = saturation_distance(inst, "statistical")
            for frac in (0.18, 0.5, 0.82):
                d1 = frac * sat
                pt = min_partner_distance(inst, d1, "statistical")
                brute = brute_statistical_d2(inst.theta, d1)
                assert pt.d2 <= brute + 1e-9
                assert brute - pt.d2 <= 5e-4

    def test_point_invariants(self):
        rng = np.random.default_rng(63)
        for _ in range(10):
            deg = rng.uniform(15.0, 90.0)
            inst = instance(deg)
            d1 = rng.uniform(0.0, saturation_distance(inst, "statistical"))
            pt = min_partner_distance(inst, d1, "statistical")
            assert busch_margin(pt.a_opt, pt.b_opt) >= -1e-7
            P, Q = sharp_spin(inst.p), sharp_spin(inst.q)
            assert statistical_distance(P, effect_from_parameters(1.0, pt.a_opt)) == pytest.approx(d1, abs=1e-7)
            assert statistical_distance(Q, effect_from_parameters(1.0, pt.b_opt)) == pytest.approx(pt.d2, abs=1e-7)

    def test_tilting_away_from_partner_never_wins(self):
        # the solver searches tilts of a toward q only; verify by reflection
        # that the opposite side is never better
        rng = np.random.default_rng(67)
        for _ in range(12):
            deg = rng.uniform(15.0, 90.0)
            inst = instance(deg)
            sat = saturation_distance(inst, "statistical")
            d1 = rng.uniform(0.05, 0.95) * sat
            best = min_partner_distance(inst, d1, "statistical").d2
            e1, e2 = inst.plane_basis()
            psi_max = math.acos(min(1.0, d1))
            for psi in np.linspace(0.0, psi_max, 400):
                a = (1.0 - 2.0 * d1 * math.cos(psi)) * inst.p - (
                    2.0 * d1 * math.sin(psi)
                ) * e2
                away = 0.5 * ellipsoid_distance(a, inst.q)[0]
                assert away >= best - 1e-9

    def test_out_of_range_rejected(self):
        inst = instance(90.0)
        with pytest.raises(DistanceOutOfRange):
            min_partner_distance(inst, 0.51, "statistical")
        with pytest.raises(DistanceOutOfRange):
            min_partner_distance(inst, -0.01, "statistical")


class TestMinPartnerDistanceRms:
    def test_zero_distance_forces_full_gap(self):
        inst = instance(90.0)
        pt = min_partner_distance(inst, 0.0, "rms")
        assert pt.d2 == pytest.approx(SQ2, abs=1e-14)
        assert (pt.a_opt - inst.p).norm() <= 1e-12

    def test_symmetric_point(self):
        inst = instance(90.0)
        d_half = math.sqrt(2.0 - SQ2)
        pt = min_partner_distance(inst, d_half, "rms")
        assert pt.d2 == pytest.approx(d_half, abs=1e-12)
        assert (pt.a_opt - pt.b_opt).norm() == 0.0
        assert pt.a_opt.norm() == pytest.approx(1.0, abs=1e-14)

    def test_analytic_formula_on_grid(self):
        for deg in DEG:
            inst = instance(deg)
            sat = saturation_distance(inst, "rms")
            for d1 in np.linspace(0.0, sat, 50):
                pt = min_partner_distance(inst, float(d1), "rms")
                omega = math.acos(max(-1.0, min(1.0, 1.0 - 0.5 * d1 * d1)))
                expect = math.sqrt(2.0 * (1.0 - math.cos(inst.theta - omega)))
                assert pt.d2 == pytest.approx(expect, abs=1e-6)

    def test_against_brute_force_unit_grid(self):
        # grid-aligned targets avoid resolution mismatch in the comparison
        step = 1e-4
        for deg in DEG:
            inst = instance(deg)
            grid_angles = np.linspace(0.0, inst.theta, int(inst.theta / step) + 1)
            for phi in grid_angles[:: len(grid_angles) // 17 + 1]:
                d1 = 2.0 * math.sin(0.5 * phi)
                pt = min_partner_distance(inst, d1, "rms")
                brute = brute_rms_d2(inst.theta, d1, step=step)
                assert abs(pt.d2 - brute) <= 1e-6

    def test_point_invariants(self):
        rng = np.random.default_rng(64)
        for _ in range(10):
            deg = rng.uniform(15.0, 90.0)
            inst = instance(deg)
            d1 = rng.uniform(0.0, saturation_distance(inst, "rms"))
            pt = min_partner_distance(inst, d1, "rms")
            assert busch_margin(pt.a_opt, pt.b_opt) >= -1e-7
            P, Q = sharp_spin(inst.p), sharp_spin(inst.q)
            assert rms_distance(P, effect_from_parameters(1.0, pt.a_opt)) == pytest.approx(d1, abs=1e-7)
            assert rms_distance(Q, effect_from_parameters(1.0, pt.b_opt)) == pytest.approx(pt.d2, abs=1e-7)


class TestBoundaryCurve:
    def test_statistical_endpoints_right_angle(self):
        curve = boundary_curve(instance(90.0), "statistical", 21)
        assert curve[0].d1 == 0.0
        assert curve[0].d2 == pytest.approx(0.5, abs=1e-9)
        assert curve[-1].d1 == pytest.approx(0.5, abs=1e-15)
        assert curve[-1].d2 == pytest.approx(0.0, abs=1e-9)

    def test_rms_first_point(self):
        curve = boundary_curve(instance(90.0), "rms", 11)
        assert curve[0].d2 == pytest.approx(SQ2, abs=1e-12)

    def test_monotone_nonincreasing(self):
        for metric in ("statistical", "rms"):
            for deg in DEG:
                curve = boundary_curve(instance(deg), metric, 41)
                d1s = [pt.d1 for pt in curve]
                assert d1s == sorted(d1s)
                for left, right in zip(curve, curve[1:]):
                    assert right.d2 <= left.d2 + 1e-9

    def test_warm_start_matches_cold_solves(self):
        inst = instance(60.0)
        curve = boundary_curve(inst, "statistical", 15)
        for pt in curve[1:-1]:
            cold = min_partner_distance(inst, pt.d1, "statistical")
            assert cold.d2 == pytest.approx(pt.d2, abs=1e-9)

    def test_theta_ordering(self):
        # smaller separation angle puts the boundary closer to the origin
        for metric in ("statistical", "rms"):
            shared = np.linspace(
                0.0, saturation_distance(instance(30.0), metric), 12
            )
            values = {
                deg: [
                    min_partner_distance(instance(deg), float(d1), metric).d2
                    for d1 in shared
                ]
                for deg in DEG
            }
            for v30, v60, v90 in zip(values[30.0], values[60.0], values[90.0]):
                assert v30 <= v60 + 1e-6
                assert v60 <= v90 + 1e-6

    def test_rejects_too_few_points(self):
        with pytest.raises(ValueError):
            boundary_curve(instance(90.0), "statistical", 1)

    def test_every_point_confirmed_feasible_by_oracle(self):
        # boundary points sit on the compatibility boundary, so the oracle is
        # given the looser near-boundary tolerance
        for metric in ("statistical", "rms"):
            for pt in boundary_curve(instance(60.0), metric, 9):
                res = joint_feasibility(
                    effect_from_parameters(1.0, pt.a_opt),
                    effect_from_parameters(1.0, pt.b_opt),
                    1e-7,
                )
                assert res.feasible, (metric, pt.d1, res.slack)


class TestLocalOptimality:
    def test_perturbing_partner_toward_target_leaves_region(self):
        eps = 1e-3
        for deg in DEG:
            inst = instance(deg)
            for pt in boundary_curve(inst, "statistical", 9):
                gap = inst.q - pt.b_opt
                if gap.norm() < 2.5 * eps or pt.d2 < 1e-3:
                    continue
                better = pt.b_opt + gap * (eps / gap.norm())
                assert busch_margin(pt.a_opt, better) < 1e-12

    def test_rms_perturbation_also_fails(self):
        eps = 1e-3
        inst = instance(90.0)
        for pt in boundary_curve(inst, "rms", 9):
            gap = inst.q - pt.b_opt
            if gap.norm() < 2.5 * eps or pt.d2 < 1e-3:
                continue
            better = pt.b_opt + gap * (eps / gap.norm())
            assert busch_margin(pt.a_opt, better) < 1e-12


class TestPlanarSufficiency:
    def test_off_plane_restarts_never_improve_statistical(self):
        rng = np.random.default_rng(65)
        cases = [(30.0, 0.4), (60.0, 0.3), (60.0, 0.7), (90.0, 0.2), (90.0, 0.6)]
        for deg, frac in cases:
            inst = instance(deg)
            sat = saturation_distance(inst, "statistical")
            d1 = frac * sat
            planar = min_partner_distance(inst, d1, "statistical").d2
            e1, e2 = inst.plane_basis()
            e3 = BlochVector(
                e1.y * e2.z - e1.z * e2.y,
                e1.z * e2.x - e1.x * e2.z,
                e1.x * e2.y - e1.y * e2.x,
            )

            def objective(v):
                psi, chi = v
                u = (
                    -math.cos(psi) * e1
                    + math.sin(psi) * (math.cos(chi) * e2 + math.sin(chi) * e3)
                )
                a = inst.p + u * (2.0 * d1)
                if a.norm() > 1.0:
                    return 10.0 + a.norm()
                return ellipsoid_distance(a, inst.q)[0] * 0.5

            best = math.inf
            for _ in range(20):
                x0 = (rng.uniform(0.0, math.pi / 2), rng.uniform(-math.pi, math.pi))
                res = nelder_mead(objective, x0, step=0.3, diam_tol=1e-9, max_iter=600)
                best = min(best, res.fx)
            assert best >= planar - 1e-6

    def test_off_plane_restarts_never_improve_rms(self):
        # first vector constrained by its component along p; partner from the
        # exact support point of the compatibility ellipsoid
        rng = np.random.default_rng(66)
        cases = [(30.0, 0.3), (60.0, 0.5), (90.0, 0.4), (90.0, 0.8), (45.0, 0.6)]
        for deg, frac in cases:
            inst = instance(deg)
            sat = saturation_distance(inst, "rms")
            d1 = frac * sat
            analytic = min_partner_distance(inst, d1, "rms").d2
            e1, e2 = inst.plane_basis()
            e3 = BlochVector(
                e1.y * e2.z - e1.z * e2.y,
                e1.z * e2.x - e1.x * e2.z,
                e1.x * e2.y - e1.y * e2.x,
            )
            x_comp = 1.0 - 0.5 * d1 * d1
            s_max = math.sqrt(max(0.0, 1.0 - x_comp * x_comp))

            def objective(v):
                s, chi = v
                if not (0.0 <= s <= s_max):
                    return 10.0 + abs(s)
                a = (
                    e1 * x_comp
                    + (e2 * math.cos(chi) + e3 * math.sin(chi)) * s
                )
                # support value of the compatibility ellipsoid of a along q:
                # semi-axis 1 along a and sqrt(1-|a|^2) transverse collapse to
                # sqrt((q.a)^2 + 1 - |a|^2)
                qa = inst.q.dot(a)
                reach = math.sqrt(max(0.0, qa * qa + 1.0 - a.norm_sq()))
                return math.sqrt(max(0.0, 2.0 * (1.0 - reach)))

            best = math.inf
            for _ in range(20):
                x0 = (rng.uniform(0.0, s_max), rng.uniform(-math.pi, math.pi))
                res = nelder_mead(objective, x0, step=0.2, diam_tol=1e-9, max_iter=600)
                best = min(best, res.fx)
            assert best >= analytic - 1e-6


class TestBiasedPerturbations:
    def test_bias_does_not_unlock_better_partners(self):
        # keeping the worst-case distance fixed, a slightly biased first
        # observable must not make a strictly better partner feasible
        cases = [(60.0, 0.5), (90.0, 0.35), (90.0, 0.7), (30.0, 0.5)]
        for deg, frac in cases:
            inst = instance(deg)
            sat = saturation_distance(inst, "statistical")
            d1 = frac * sat
            pt = min_partner_distance(inst, d1, "statistical")
            if pt.d2 < 5e-3:
                continue
            direction = pt.a_opt - inst.p
            direction = direction * (1.0 / direction.norm())
            for eps in (0.02, 0.05):
                a_biased = inst.p + direction * (2.0 * d1 - eps)
                A_biased = effect_from_parameters(1.0 - eps, a_biased)
                for shrink in (2e-3, 1e-2):
                    gap = inst.q - pt.b_opt
                    better = pt.b_opt + gap * (shrink / gap.norm())
                    B_better = effect_from_parameters(1.0, better)
                    res = joint_feasibility(A_biased, B_better)
                    assert not res.feasible


class TestRegionMembership:
    def test_origin_outside_for_noncommuting_targets(self):
        for metric in ("statistical", "rms"):
            assert not region_membership(instance(90.0), 0.0, 0.0, metric)

    def test_symmetric_point_on_boundary(self):
        inst = instance(90.0)
        d_sym = symmetric_optimum(inst).d_sym
        assert region_membership(inst, d_sym, d_sym, "statistical")
        boundary_d2 = min_partner_distance(inst, d_sym, "statistical").d2
        assert abs(boundary_d2 - d_sym) <= 1e-6

    def test_beyond_saturation_always_inside(self):
        inst = instance(60.0)
        for metric in ("statistical", "rms"):
            sat = saturation_distance(inst, metric)
            assert region_membership(inst, sat + 0.1, 0.0, metric)
            assert region_membership(inst, sat, 0.0, metric)

    def test_negative_distances_outside(self):
        inst = instance(60.0)
        assert not region_membership(inst, -0.1, 0.3, "statistical")
        assert not region_membership(inst, 0.3, -0.1, "statistical")

    def test_membership_witnessed_by_feasible_pair(self):
        inst = instance(60.0)
        pt = min_partner_distance(inst, 0.1, "statistical")
        assert region_membership(inst, 0.1, pt.d2 + 0.01, "statistical")
        res = joint_feasibility(
            effect_from_parameters(1.0, pt.a_opt),
            effect_from_parameters(1.0, pt.b_opt),
            1e-7,
        )
        assert res.feasible


class TestRmsOptimalDirection:
    def test_zero_distance(self):
        inst = instance(90.0)
        opt = rms_optimal_direction(inst, 0.0)
        assert opt.omega == 0.0
        assert (opt.direction - inst.p).norm() == 0.0

    def test_forty_five_degrees(self):
        inst = instance(90.0)
        opt = rms_optimal_direction(inst, math.sqrt(2.0 - SQ2))
        assert opt.omega == pytest.approx(math.radians(45.0), abs=1e-12)

    def test_antipodal_limit(self):
        inst = instance(90.0)
        opt = rms_optimal_direction(inst, 2.0)
        assert opt.omega == pytest.approx(math.pi, abs=1e-12)
        # direction tilted at most theta for boundary use
        assert opt.direction.dot(inst.p) == pytest.approx(
            math.cos(inst.theta), abs=1e-12
        )

    def test_out_of_range(self):
        with pytest.raises(DistanceOutOfRange):
            rms_optimal_direction(instance(90.0), 2.1)
