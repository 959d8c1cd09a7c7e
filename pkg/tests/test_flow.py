import numpy as np
import pytest

from geoflow.exceptions import OrbitEscapeError, PreconditionError
from geoflow.flow import (
    CSV_COLUMNS,
    d1_distance,
    d1_distances,
    flow_batch,
    flow_pair_separation,
    geodesic_flow,
    integrate,
    pair_separations,
    propagate,
    sasaki_distance,
    sasaki_distances,
)
from geoflow.geometry import PhaseBatch
from geoflow.scenarios import catalog, oracle_flow

TOL = 1e-10


class TestGeodesicFlow:
    def test_zero_time_is_identity(self, sphere):
        v = sphere.unit_tangent((1.0, 0.5), (1.0, 0.0))
        assert geodesic_flow(sphere, v, 0.0) is v

    def test_sphere_closes_after_full_period(self, sphere, rng):
        start = sphere.random_unit_tangents(20, rng)
        end = flow_batch(sphere, start, 2.0 * np.pi, TOL)
        assert np.max(sasaki_distances(sphere, end, start)) < 1e-7

    def test_sphere_matches_great_circles(self, sphere, rng):
        for v in sphere.random_unit_tangents(5, rng).unit_tangents():
            exact = oracle_flow(sphere, v, 1.7).unit_tangent()
            assert sasaki_distance(sphere, geodesic_flow(sphere, v, 1.7, TOL), exact) < 1e-8

    def test_torus_matches_straight_lines(self, torus):
        v = torus.unit_tangent((0.2, 0.3), (0.6, 0.8))
        moved = geodesic_flow(torus, v, 3.0, TOL)
        expected = torus.unit_tangent((0.0, 0.7), (0.6, 0.8))
        assert sasaki_distance(torus, moved, expected) < 1e-9

    def test_orbit_passes_through_chart_poles(self, sphere):
        # 经线穿过主坐标卡的两个极点
        v = sphere.unit_tangent((np.pi / 2, 0.0), (-1.0, 0.0))
        moved = geodesic_flow(sphere, v, np.pi, TOL)
        expected = sphere.unit_tangent((np.pi / 2, np.pi), (1.0, 0.0))
        assert sasaki_distance(sphere, moved, expected) < 1e-8

    @pytest.mark.parametrize("name", ["ellipsoid", "zoll", "torus"])
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_composition_at_random_times(self, request, name, seed):
        surface = request.getfixturevalue(name)
        gen = np.random.default_rng(seed)
        start = surface.random_unit_tangents(10, gen)
        s, t = gen.uniform(-10.0, 10.0, size=(2, 10))
        composed = flow_batch(surface, flow_batch(surface, start, t, TOL), s, TOL)
        direct = flow_batch(surface, start, s + t, TOL)
        assert np.max(sasaki_distances(surface, composed, direct)) < 1e-7

    @pytest.mark.parametrize("name", ["ellipsoid", "zoll", "torus"])
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_negate_flow_negate_undoes_the_flow(self, request, name, seed):
        surface = request.getfixturevalue(name)
        gen = np.random.default_rng(seed)
        start = surface.random_unit_tangents(10, gen)
        t = gen.uniform(-10.0, 10.0, size=10)
        back = flow_batch(surface, flow_batch(surface, start, t, TOL).negated(), t, TOL).negated()
        assert np.max(sasaki_distances(surface, back, start)) < 1e-7

    def test_flip_conjugates_the_flow(self, zoll, rng):
        start = zoll.random_unit_tangents(4, rng)
        forward = flow_batch(zoll, start.negated(), 1.5, TOL)
        backward = flow_batch(zoll, start, -1.5, TOL).negated()
        assert np.max(sasaki_distances(zoll, forward, backward)) < 1e-7

    def test_escape_raises(self):
        plane = catalog("plane_flat", {"plane_bound": 3.0})
        v = plane.unit_tangent((0.0, 0.0), (1.0, 0.0))
        with pytest.raises(OrbitEscapeError) as info:
            geodesic_flow(plane, v, 10.0)
        assert info.value.data["escape_time"] >= 3.0

    def test_per_row_durations(self, torus):
        start = PhaseBatch.from_unit_tangents([torus.unit_tangent((0.1, 0.1), (1.0, 0.0))] * 3)
        result = propagate(torus, start, [0.0, 0.2, -0.2], tol=TOL)
        assert np.allclose(result.final.points[:, 0], [0.1, 0.3, 0.9])

    def test_fractions_must_increase(self, torus):
        batch = PhaseBatch.from_unit_tangents([torus.unit_tangent((0.1, 0.1), (1.0, 0.0))])
        with pytest.raises(PreconditionError):
            propagate(torus, batch, 1.0, fractions=[0.5, 0.2])


class TestIntegrate:
    def test_diagnostics_on_sphere(self, sphere):
        v = sphere.unit_tangent((1.0, 0.0), (0.6, 0.8 / np.sin(1.0)))
        trajectory = integrate(sphere, v, 10.0, 101, tol=TOL)
        assert len(trajectory) == 101
        assert trajectory.times[0] == 0.0
        assert trajectory.times[-1] == pytest.approx(10.0)
        diagnostics = trajectory.diagnostics()
        assert diagnostics["max_speed_drift"] < 1e-8
        assert diagnostics["max_clairaut_drift"] < 1e-8
        assert diagnostics["escaped"] is False

    def test_no_clairaut_on_ellipsoid(self, ellipsoid):
        v = ellipsoid.random_unit_tangents(1, np.random.default_rng(3)).unit_tangent(0)
        assert integrate(ellipsoid, v, 2.0, 11).max_clairaut_drift is None

    def test_csv_rows(self, torus):
        v = torus.unit_tangent((0.2, 0.3), (0.6, 0.8))
        rows = integrate(torus, v, 1.0, 5, tol=TOL).to_csv_rows()
        assert len(rows) == 5
        assert all(len(row) == len(CSV_COLUMNS) for row in rows)
        assert rows[-1][0] == pytest.approx(1.0)
        assert rows[-1][1:3] == pytest.approx((0.8, 0.1), abs=1e-9)

    def test_escape_truncates(self):
        plane = catalog("plane_flat", {"plane_bound": 3.0})
        v = plane.unit_tangent((0.0, 0.0), (1.0, 0.0))
        trajectory = integrate(plane, v, 10.0, 21)
        assert trajectory.escaped
        assert trajectory.escape_time >= 3.0
        assert trajectory.times[-1] <= trajectory.escape_time
        assert len(trajectory) < 21

    @pytest.mark.parametrize("t_max, n_samples", [(0.0, 10), (-1.0, 10), (1.0, 1)])
    def test_rejects_bad_horizon(self, torus, t_max, n_samples):
        v = torus.unit_tangent((0.2, 0.3), (0.6, 0.8))
        with pytest.raises(PreconditionError):
            integrate(torus, v, t_max, n_samples)


class TestDistances:
    def test_sasaki_zero_on_identical_vectors(self, ellipsoid, rng):
        v = ellipsoid.random_unit_tangents(1, rng).unit_tangent(0)
        assert sasaki_distance(ellipsoid, v, v) == 0.0

    def test_sasaki_adds_transported_angle(self, sphere):
        a = sphere.unit_tangent((np.pi / 2, 0.0), (1.0, 0.0))
        b = sphere.unit_tangent((np.pi / 2, 0.5), (0.0, 1.0))
        # 赤道上平移保持经线方向, 两者夹角为 π/2
        assert sasaki_distance(sphere, a, b) == pytest.approx(0.5 + np.pi / 2)

    def test_d1_is_coordinate_distance(self):
        plane = catalog("plane_flat")
        a = plane.unit_tangent((0.0, 0.0), (1.0, 0.0))
        b = plane.unit_tangent((3.0, 4.0), (0.0, 1.0))
        assert d1_distance(a, b, plane) == pytest.approx(5.0 + np.sqrt(2.0))
        assert d1_distance(a, b) == pytest.approx(5.0 + np.sqrt(2.0))

    def test_d1_on_stretched_plane_uses_polar_coordinates(self, plane_exp):
        a = plane_exp.unit_tangent((1.5, 0.1), (1.0, 0.0), normalize=True)
        b = plane_exp.unit_tangent((1.5, 2.0 * np.pi - 0.1), (1.0, 0.0), normalize=True)
        assert d1_distance(a, b, plane_exp) == pytest.approx(0.2)

    def test_d1_only_on_planes(self, sphere, rng):
        batch = sphere.random_unit_tangents(2, rng)
        with pytest.raises(PreconditionError):
            d1_distances(sphere, batch, batch)

    def test_pair_separations_shape(self, torus, rng):
        A = torus.random_unit_tangents(4, rng)
        B = torus.random_unit_tangents(4, rng)
        times, seps = pair_separations(torus, A, B, 2.0, 9, tol=TOL)
        assert times.shape == (9,)
        assert seps.shape == (9, 4)
        assert np.allclose(seps[0], sasaki_distances(torus, A, B))

    def test_parallel_orbits_keep_their_distance(self, torus):
        a = torus.unit_tangent((0.1, 0.1), (0.6, 0.8))
        b = torus.unit_tangent((0.1, 0.2), (0.6, 0.8))
        series = flow_pair_separation(torus, a, b, 5.0, n_samples=11, tol=TOL)
        assert [t for t, _ in series][-1] == pytest.approx(5.0)
        assert np.allclose([d for _, d in series], 0.1, atol=1e-9)
