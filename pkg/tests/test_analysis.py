import numpy as np
import pytest

from geoflow.analysis import (
    ExtendedReturnMap,
    FlowSystem,
    IdentityMap,
    MapSystem,
    SampleSpec,
    TwistMap,
    almost_period_search,
    closed_geodesic_search,
    curve_hausdorff,
    distality_bound,
    equicontinuity_modulus,
    find_closed_geodesics,
    fixed_point_census,
    paracompact_recurrence,
    perturbed_partners,
    power_recurrence_check,
    recurrence_grid,
    recurrence_profile,
    replay_witness,
    set_anchors,
    smallest_common_period,
)
from geoflow.exceptions import PreconditionError
from geoflow.geometry import PhaseBatch
from geoflow.scenarios import principal_anchors
from geoflow.scenarios.geodesics import ellipse_perimeter
from geoflow.section import CompactPoints, chordal_distances

TOL = 1e-9


class DoublingMap(MapSystem):
    """``s ↦ 2s``: expanding, so displacements grow faster than linearly in the iterate."""

    name = "doubling"

    def step(self, points):
        coords = points.coords.copy()
        coords[:, 0] = np.mod(2.0 * coords[:, 0], self.period)
        return CompactPoints(coords, points.pole.copy()), np.ones(len(points), dtype=bool)


class TestMapSystems:
    def test_twist_step(self):
        points = CompactPoints.concatenate([CompactPoints.from_coords([[0.25, 0.5]]), CompactPoints.poles()])
        moved, ok = TwistMap().step(points)
        assert ok.all()
        assert moved.coords[0] == pytest.approx([0.75, 0.5])
        assert moved.pole.tolist() == [0, -1, 1]

    def test_iterate_wraps_s(self):
        moved, _ = TwistMap().iterate(CompactPoints.from_coords([[0.5, 0.3]]), 3)
        assert moved.coords[0] == pytest.approx([0.4, 0.3])

    def test_negative_iterate(self):
        with pytest.raises(PreconditionError):
            IdentityMap().iterate(CompactPoints.poles(), -1)

    def test_return_map_admissibility(self, sphere_section):
        system = ExtendedReturnMap(sphere_section)
        points = CompactPoints.concatenate([CompactPoints.from_coords([[0.0, 0.005], [0.0, 0.5]]), CompactPoints.poles()])
        assert system.admissible(points).tolist() == [False, True, True, True]
        assert system.period == pytest.approx(2.0 * np.pi)


class TestRecurrence:
    def test_grid_size(self):
        grid = recurrence_grid(1.0, 5, 4, irrational=2)
        assert len(grid) == 5 * 6 + 50 * 2 + 2
        assert int(np.count_nonzero(grid.pole)) == 2

    def test_identity_returns_at_every_step(self):
        profile = recurrence_profile(IdentityMap(), 3, recurrence_grid(1.0, 4, 4))
        assert [n for n, _ in profile.near_returns] == [1, 2, 3]
        assert profile.excluded == 0

    def test_twist_has_no_early_returns(self):
        profile = recurrence_profile(TwistMap(), 4, recurrence_grid(1.0, 10, 10, irrational=8))
        assert profile.near_returns == []
        assert all(s > 1e-2 for _, s in profile.sup_displacements)

    def test_sphere_return_map_is_an_involution(self, sphere_section):
        grid = recurrence_grid(sphere_section.period, 4, 3, ring=(), ring_points=0)
        profile = recurrence_profile(ExtendedReturnMap(sphere_section), 2, grid)
        assert [n for n, _ in profile.near_returns] == [2]
        assert profile.sup_displacements[0][1] > 1.0

    def test_guard_points_are_excluded(self, sphere_section):
        grid = CompactPoints.from_coords([[0.0, 0.005], [1.0, 0.5]])
        profile = recurrence_profile(ExtendedReturnMap(sphere_section), 2, grid)
        assert profile.excluded == 1

    def test_needs_at_least_one_step(self):
        with pytest.raises(PreconditionError):
            recurrence_profile(IdentityMap(), 0)

    def test_power_check_on_identity(self):
        profile = recurrence_profile(IdentityMap(), 2, recurrence_grid(1.0, 4, 4))
        report = power_recurrence_check(profile, 3)
        assert report.passed
        assert [e.n_k for e in report.entries] == [1, 2]

    def test_power_check_extends_the_orbit(self, sphere_section):
        grid = recurrence_grid(sphere_section.period, 3, 2, ring=(), ring_points=0)
        profile = recurrence_profile(ExtendedReturnMap(sphere_section), 2, grid)
        report = power_recurrence_check(profile, 2, slack=1e-9)
        assert report.passed
        assert report.entries[0].measured < 1e-5

    def test_power_check_fails_on_an_expanding_map(self):
        profile = recurrence_profile(DoublingMap(), 1, CompactPoints.from_coords([[1e-3, 0.5]]), near_return_tol=1.0)
        report = power_recurrence_check(profile, 3)
        entry = report.entries[0]
        assert entry.asserted == pytest.approx(3 * entry.s_k + 1e-9)
        assert entry.measured > 2.0 * entry.asserted
        assert not entry.passed
        assert not report.passed

    def test_power_check_with_m_one_is_the_profile_itself(self):
        profile = recurrence_profile(DoublingMap(), 1, CompactPoints.from_coords([[1e-3, 0.5]]), near_return_tol=1.0)
        entry = power_recurrence_check(profile, 1).entries[0]
        assert entry.measured == pytest.approx(entry.s_k, abs=1e-15)
        assert entry.passed

    def test_sups_match_raw_iterates(self, sphere_section):
        for system in (TwistMap(), ExtendedReturnMap(sphere_section)):
            grid = recurrence_grid(system.period, 4, 3, ring=(0.02,), ring_points=4)
            profile = recurrence_profile(system, 3, grid)
            start = system.xyz(grid)
            for n, sup in profile.sup_displacements:
                moved, ok = system.iterate(grid, n)
                rows = ok & profile.valid
                expected = float(np.max(chordal_distances(system.xyz(moved)[rows], start[rows])))
                assert sup == pytest.approx(expected, abs=1e-12)

    def test_power_check_needs_near_returns(self):
        profile = recurrence_profile(TwistMap(), 2, recurrence_grid(1.0, 4, 4))
        with pytest.raises(PreconditionError):
            power_recurrence_check(profile, 2)

    def test_paracompact_bands(self):
        profile = recurrence_profile(IdentityMap(), 2, recurrence_grid(1.0, 4, 9))
        report = paracompact_recurrence(profile)
        assert report.near_returns == [1, 2]
        assert len(report.bands) == 6
        assert all(s == 0.0 for band in report.bands for _, s in band.sups)


class TestCensus:
    def test_identity_is_reported_without_count(self):
        report = fixed_point_census(IdentityMap(), (10, 5), 1e-4)
        assert report.identity_like
        assert report.count is None

    def test_twist_fixes_only_the_poles(self):
        report = fixed_point_census(TwistMap(), (20, 10), 1e-4)
        assert report.count == 2
        assert sorted(c.pole for c in report.clusters) == ["minus_infinity", "plus_infinity"]

    def test_twist_power_is_identity_on_the_grid(self):
        # θ = j/10 上 F¹⁰ 平移整数圈
        report = fixed_point_census(TwistMap(), (20, 10), 1e-4, power=10)
        assert report.identity_like

    def test_sphere_return_map_fixes_the_poles(self, sphere_section):
        report = fixed_point_census(ExtendedReturnMap(sphere_section), (6, 4), 1e-4, cluster_radius=0.5)
        assert report.count == 2
        assert all(c.pole for c in report.clusters)

    def test_invalid_grid(self):
        with pytest.raises(PreconditionError):
            fixed_point_census(TwistMap(), (10, 1))


class TestEquicontinuity:
    def test_sphere_is_equicontinuous(self, sphere):
        spec = SampleSpec(n_pairs=20, ladder_depth=4, n_times=100)
        report = equicontinuity_modulus(FlowSystem(sphere, tol=TOL), 0.1, 20.0, spec)
        assert report.verdict == "satisfied"
        assert report.delta >= 0.1 / 16
        assert report.witness is None
        assert report.ladder[-1].max_separation < 0.09

    def test_torus_is_not_equicontinuous(self, torus):
        system = FlowSystem(torus, tol=TOL)
        spec = SampleSpec(n_pairs=30, ladder_depth=2, n_times=200)
        report = equicontinuity_modulus(system, 0.3, 1e3, spec)
        assert report.verdict == "violated"
        assert report.delta is None
        witness = report.witness
        assert witness.initial_distance < 0.3 / 4
        assert witness.separation >= 0.3

        replay = replay_witness(system, report, 2e3)
        assert replay.still_violated
        assert replay.separation >= witness.separation - 1e-6

    def test_replay_needs_a_longer_horizon(self, torus):
        system = FlowSystem(torus, tol=TOL)
        report = equicontinuity_modulus(system, 0.3, 1e3, SampleSpec(n_pairs=30, ladder_depth=1, n_times=200))
        with pytest.raises(PreconditionError):
            replay_witness(system, report, 10.0)

    def test_replay_needs_a_witness(self, sphere):
        system = FlowSystem(sphere, tol=TOL)
        report = equicontinuity_modulus(system, 0.1, 5.0, SampleSpec(n_pairs=5, ladder_depth=4, n_times=20))
        with pytest.raises(PreconditionError):
            replay_witness(system, report, 10.0)

    @pytest.mark.parametrize("epsilon, t_max", [(0.0, 1.0), (0.1, 0.0)])
    def test_rejects_bad_arguments(self, sphere, epsilon, t_max):
        with pytest.raises(PreconditionError):
            equicontinuity_modulus(FlowSystem(sphere), epsilon, t_max)

    def test_pointwise_mode_needs_anchors(self, sphere):
        spec = SampleSpec(n_pairs=0, mode="pointwise")
        with pytest.raises(PreconditionError):
            equicontinuity_modulus(FlowSystem(sphere), 0.1, 1.0, spec)

    def test_pointwise_anchors(self, ellipsoid):
        spec = set_anchors(SampleSpec(n_pairs=0, mode="pointwise", perturbations=3, ladder_depth=3, n_times=20),
                           principal_anchors(ellipsoid, "xz", 2))
        assert len(spec.anchors) == 2
        report = equicontinuity_modulus(FlowSystem(ellipsoid, tol=TOL), 0.5, 1.0, spec)
        assert report.ladder[0].pairs == 6

    def test_partners_are_close(self, ellipsoid, rng):
        system = FlowSystem(ellipsoid)
        base = ellipsoid.random_unit_tangents(20, rng)
        A, B = perturbed_partners(system, base, 0.01, rng)
        d = system.distances(A, B)
        assert len(A) == 20
        assert np.all((d > 0.0) & (d < 0.01))


class TestDistality:
    def test_parallel_orbits(self, torus):
        a = torus.unit_tangent((0.1, 0.1), (1.0, 0.0))
        b = torus.unit_tangent((0.1, 0.2), (1.0, 0.0))
        report = distality_bound(FlowSystem(torus, tol=TOL), [(a, b)], 10.0, 101)
        assert report.minimum == pytest.approx(0.1, abs=1e-8)

    def test_random_pairs_stay_apart(self, torus, rng):
        A = torus.random_unit_tangents(20, rng)
        B = torus.random_unit_tangents(20, rng)
        report = distality_bound(FlowSystem(torus, tol=TOL), (A, B), 50.0, 501)
        assert len(report.entries) == 20
        assert report.minimum > 0.0
        assert all(-50.0 <= e.time <= 50.0 for e in report.entries)

    def test_no_pairs(self, torus):
        report = distality_bound(FlowSystem(torus), [], 1.0)
        assert report.entries == []
        assert np.isnan(report.minimum)

    def test_rejects_bad_horizon(self, torus):
        with pytest.raises(PreconditionError):
            distality_bound(FlowSystem(torus), [], 0.0)


class TestAlmostPeriods:
    def test_sphere_returns_every_full_turn(self, sphere):
        report = almost_period_search(FlowSystem(sphere, tol=TOL), 0.05, 7.0, SampleSpec(n_points=6), (0.0, 14.0))
        assert len(report.windows) == 2
        assert report.empty_windows == []
        assert any(abs(t - 2.0 * np.pi) < 0.05 for t in report.found)
        assert any(abs(t - 4.0 * np.pi) < 0.05 for t in report.found)

    def test_smallest_common_period(self, sphere):
        period = smallest_common_period(FlowSystem(sphere, tol=TOL), 0.05, SampleSpec(n_points=6), (0.0, 8.0))
        assert period == pytest.approx(2.0 * np.pi, abs=0.05)

    def test_only_full_windows(self, torus):
        report = almost_period_search(FlowSystem(torus, tol=TOL), 0.05, 3.0, SampleSpec(n_points=4), (0.0, 10.0))
        assert [(w.start, w.end) for w in report.windows] == [(0.0, 3.0), (3.0, 6.0), (6.0, 9.0)]

    def test_rejects_bad_arguments(self, sphere):
        with pytest.raises(PreconditionError):
            almost_period_search(FlowSystem(sphere), 0.05, 0.0)
        with pytest.raises(PreconditionError):
            almost_period_search(FlowSystem(sphere), 0.05, 1.0, t_range=(2.0, 1.0))


class TestClosedGeodesics:
    def test_principal_ellipse_found_once(self, ellipsoid):
        seeds = principal_anchors(ellipsoid, "xy", 2)
        search = closed_geodesic_search(ellipsoid, seeds, (5.0, 10.0), 1e-6, integrator_tol=1e-10)
        assert len(search.geodesics) == 1
        assert search.geodesics[0].period == pytest.approx(ellipse_perimeter(1.0, 1.2), rel=1e-6)
        assert search.report.seeds[1].duplicate_of == 0
        assert curve_hausdorff(search.geodesics[0], search.geodesics[0]) < 1e-6

    @pytest.mark.slow
    def test_three_principal_ellipses(self, ellipsoid):
        seeds = PhaseBatch.concatenate([principal_anchors(ellipsoid, p, 1) for p in ("xy", "xz", "yz")])
        found = find_closed_geodesics(ellipsoid, seeds, (5.0, 10.0), 1e-6, integrator_tol=1e-10)
        assert len(found) == 3
        assert all(g.closure_error < 1e-6 for g in found)

    def test_rejects_empty_seeds(self, ellipsoid):
        with pytest.raises(PreconditionError):
            find_closed_geodesics(ellipsoid, [], (5.0, 10.0))
