import numpy as np
import pytest

from geoflow.exceptions import ConstructionError, PreconditionError, TangencyError
from geoflow.scenarios import reference_geodesic
from geoflow.section import (
    ClosedGeodesic,
    CompactifiedPoint,
    CompactPoints,
    Pole,
    SectionCoord,
    band_seeds,
    build_section,
    compact_distance,
    compactify,
    crossing_count,
    min_return_gap,
    return_map,
    return_time_n,
    section_grid_rows,
)


def _circle_gap(a: float, b: float, period: float) -> float:
    d = abs(a - b) % period
    return min(d, period - d)


class TestClosedGeodesic:
    def test_equator_period(self, sphere_section):
        assert sphere_section.period == pytest.approx(2.0 * np.pi)
        assert sphere_section.geodesic.closure_error < 1e-8
        assert sphere_section.geodesic.is_simple()

    def test_rejects_wrong_period(self, sphere):
        v0 = sphere.unit_tangent((np.pi / 2, 0.0), (0.0, 1.0))
        with pytest.raises(ConstructionError):
            ClosedGeodesic(sphere, v0, 3.0)

    def test_double_cover_is_not_simple(self, sphere):
        v0 = sphere.unit_tangent((np.pi / 2, 0.0), (0.0, 1.0))
        twice = ClosedGeodesic(sphere, v0, 4.0 * np.pi, tol=1e-10)
        assert not twice.is_simple()
        with pytest.raises(ConstructionError):
            build_section(sphere, twice)

    def test_signed_distance_on_sphere(self, sphere_section):
        X = np.array([[np.cos(0.1), 0.0, np.sin(0.1)], [np.cos(0.1), 0.0, -np.sin(0.1)]])
        sigma, s = sphere_section.geodesic.signed_distance(X)
        assert np.allclose(np.abs(sigma), np.sin(0.1), atol=1e-8)
        assert sigma[0] * sigma[1] < 0
        assert _circle_gap(s[0], 0.0, 2.0 * np.pi) < 1e-8


class TestReturnMap:
    def test_sphere_half_turn(self, sphere_section):
        landed, time = return_map(sphere_section, SectionCoord(0.5, 0.3))
        assert time == pytest.approx(np.pi, abs=1e-7)
        assert _circle_gap(landed.s, 0.5 + np.pi, 2.0 * np.pi) < 1e-7
        assert landed.theta == pytest.approx(0.3, abs=1e-7)

    def test_sphere_second_iterate_is_identity(self, sphere_section):
        assert return_time_n(sphere_section, SectionCoord(1.0, 0.7), 2) == pytest.approx(2.0 * np.pi, abs=1e-6)
        assert return_time_n(sphere_section, SectionCoord(1.0, 0.7), 0) == 0.0

    def test_crossing_count(self, sphere_section):
        assert crossing_count(sphere_section, SectionCoord(1.0, 0.4), 3.5) == 1
        assert crossing_count(sphere_section, SectionCoord(1.0, 0.4), 1.0) == 0

    @pytest.mark.parametrize("theta", [1.0 / 3.0, 0.25, 0.6])
    def test_torus_shift(self, torus_section, theta):
        landed, time = return_map(torus_section, SectionCoord(0.1, theta))
        angle = np.pi * theta
        assert time == pytest.approx(1.0 / np.sin(angle), abs=1e-7)
        assert _circle_gap(landed.s, 0.1 + np.cos(angle) / np.sin(angle), 1.0) < 1e-7
        assert landed.theta == pytest.approx(theta, abs=1e-7)

    def test_tangency_guard(self, sphere_section):
        with pytest.raises(TangencyError):
            return_map(sphere_section, SectionCoord(0.0, 0.005))
        with pytest.raises(TangencyError):
            sphere_section.return_map_batch([[0.0, 0.3], [0.0, 0.999]])

    def test_batch_matches_single_steps(self, sphere_section):
        coords = np.array([[0.0, 0.2], [2.0, 0.5], [4.0, 0.8]])
        result = sphere_section.return_map_batch(coords)
        assert result.ok.all()
        assert np.allclose(result.times, np.pi, atol=1e-7)
        assert np.allclose(result.coords[:, 1], coords[:, 1], atol=1e-7)

    def test_grid_rows(self, torus_section):
        rows = section_grid_rows(torus_section, [[0.1, 0.25]])
        s, theta, s_next, theta_next, time = rows[0]
        assert (s, theta) == (0.1, 0.25)
        assert _circle_gap(s_next, 0.1, 1.0) < 1e-7
        assert theta_next == pytest.approx(0.25, abs=1e-7)
        assert time == pytest.approx(np.sqrt(2.0), abs=1e-7)


class TestSectionCoordinates:
    def test_round_trip_through_unit_tangent(self, sphere_section):
        c = SectionCoord(2.0, 0.35)
        back = sphere_section.from_unit_tangent(sphere_section.to_unit_tangent(c))
        assert back.s == pytest.approx(2.0, abs=1e-8)
        assert back.theta == pytest.approx(0.35, abs=1e-8)

    def test_north_pointing_meridian(self, sphere, sphere_section):
        v = sphere.unit_tangent((np.pi / 2, 0.0), (-1.0, 0.0))
        c = sphere_section.from_unit_tangent(v)
        assert _circle_gap(c.s, 0.0, 2.0 * np.pi) < 1e-8
        assert c.theta == pytest.approx(0.5, abs=1e-8)

    def test_base_off_the_geodesic(self, sphere, sphere_section):
        v = sphere.unit_tangent((1.0, 0.0), (1.0, 0.0))
        with pytest.raises(PreconditionError):
            sphere_section.from_unit_tangent(v)

    def test_unknown_mode(self, sphere):
        with pytest.raises(PreconditionError):
            build_section(sphere, reference_geodesic(sphere), mode="sideways")


class TestReturnGaps:
    def test_sphere_gap_is_half_period(self, sphere_section):
        assert min_return_gap(sphere_section, 0.2, 0.8, 7.0, n_samples=4) == pytest.approx(np.pi, abs=1e-6)

    @pytest.mark.parametrize("theta0, theta1, M", [(0.5, 0.2, 7.0), (0.0, 0.5, 7.0), (0.2, 0.8, 0.0)])
    def test_invalid_band(self, sphere_section, theta0, theta1, M):
        with pytest.raises(PreconditionError):
            min_return_gap(sphere_section, theta0, theta1, M)

    def test_band_seeds_share_a_lattice(self, sphere_section):
        wide = band_seeds(sphere_section, 0.05, 0.95, 64)
        narrow = band_seeds(sphere_section, 0.4, 0.6, 64)
        assert set(map(tuple, narrow)) <= set(map(tuple, wide))
        assert np.all((narrow[:, 1] >= 0.4) & (narrow[:, 1] <= 0.6))


class TestCompactify:
    def test_boundary_limits_are_poles(self, sphere_section):
        assert compactify(SectionCoord(1.0, 0.0), sphere_section).pole is Pole.MINUS_INFINITY
        assert compactify(SectionCoord(1.0, 1.0), sphere_section).pole is Pole.PLUS_INFINITY

    def test_interior_point_wraps_s(self):
        point = compactify(SectionCoord(7.0, 0.5), 2.0 * np.pi)
        assert not point.is_pole
        assert point.coord.s == pytest.approx(7.0 - 2.0 * np.pi)

    def test_poles_are_antipodal(self):
        a = CompactifiedPoint(pole=Pole.MINUS_INFINITY)
        b = CompactifiedPoint(pole=Pole.PLUS_INFINITY)
        assert compact_distance(a, b, 1.0) == pytest.approx(2.0)

    def test_near_tangent_points_approach_a_pole(self):
        near = compactify(SectionCoord(0.3, 1e-6), 1.0)
        pole = CompactifiedPoint(pole=Pole.MINUS_INFINITY)
        assert compact_distance(near, pole, 1.0) < 1e-5

    def test_point_needs_exactly_one_role(self):
        with pytest.raises(ValueError):
            CompactifiedPoint()
        with pytest.raises(ValueError):
            CompactifiedPoint(coord=SectionCoord(0.0, 0.5), pole=Pole.PLUS_INFINITY)

    def test_batch_embedding(self):
        points = CompactPoints.concatenate([CompactPoints.from_coords([[0.25, 0.5]]), CompactPoints.poles()])
        xyz = points.xyz(1.0)
        assert np.allclose(xyz, [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, -1.0]], atol=1e-12)
        assert points.point(1).pole is Pole.MINUS_INFINITY
