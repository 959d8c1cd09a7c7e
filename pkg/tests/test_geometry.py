import numpy as np
import pytest

from geoflow.exceptions import DomainError, PreconditionError
from geoflow.geometry import (
    BaseCurve,
    ChartDomain,
    ChartPoint,
    PhaseBatch,
    angle_between,
    base_distance,
    christoffel,
    metric_at,
    parallel_transport,
)
from geoflow.scenarios import SCENARIO_NAMES, catalog


class TestChartDomain:
    def test_normalize_wraps_periodic_axes(self, torus):
        P = torus.chart_domain.normalize(np.array([[1.3, -0.2]]))
        assert np.allclose(P, [[0.3, 0.8]])

    def test_difference_takes_shortest_representative(self, torus):
        delta = torus.chart_domain.difference(np.array([0.9, 0.5]), np.array([0.1, 0.5]))
        assert np.allclose(delta, [0.2, 0.0])

    def test_contains_checks_only_bounded_axes(self):
        domain = ChartDomain(lower=(0.0, 0.0), upper=(np.pi, 2 * np.pi), periodic=(False, True))
        inside = domain.contains(np.array([[1.0, 10.0], [4.0, 1.0]]))
        assert inside.tolist() == [True, False]


class TestPhaseBatch:
    def test_empty_batch(self):
        assert len(PhaseBatch.from_unit_tangents([])) == 0

    def test_take_and_concatenate(self, sphere, rng):
        batch = sphere.random_unit_tangents(6, rng)
        head, tail = batch.take(slice(0, 2)), batch.take(slice(2, 6))
        joined = PhaseBatch.concatenate([head, tail])
        assert np.array_equal(joined.y, batch.y)
        assert np.array_equal(joined.charts, batch.charts)

    def test_negated_keeps_base(self, sphere, rng):
        batch = sphere.random_unit_tangents(3, rng)
        flipped = batch.negated()
        assert np.array_equal(flipped.points, batch.points)
        assert np.allclose(flipped.velocities, -batch.velocities)

    def test_unit_tangent_round_trip(self, sphere, rng):
        batch = sphere.random_unit_tangents(4, rng)
        again = PhaseBatch.from_unit_tangents(batch.unit_tangents())
        assert np.array_equal(again.y, batch.y)


class TestUnitTangent:
    def test_rejects_non_unit_direction(self, sphere):
        with pytest.raises(PreconditionError):
            sphere.unit_tangent((np.pi / 2, 0.0), (2.0, 0.0))

    def test_rejects_point_outside_domain(self, sphere):
        with pytest.raises(DomainError):
            sphere.unit_tangent((4.0, 0.0), (1.0, 0.0))

    def test_normalize_rescales(self, sphere):
        v = sphere.unit_tangent((np.pi / 2, 0.0), (3.0, 0.0), normalize=True)
        assert v.direction == pytest.approx((1.0, 0.0))

    def test_zero_direction_cannot_be_normalized(self, sphere):
        with pytest.raises(PreconditionError):
            sphere.unit_tangent((1.0, 0.0), (0.0, 0.0), normalize=True)

    def test_unit_speed_of_random_tangents(self, ellipsoid, rng):
        batch = ellipsoid.random_unit_tangents(50, rng)
        assert np.allclose(ellipsoid.speeds(batch), 1.0, atol=1e-10)


class TestMetric:
    def test_sphere_metric(self, sphere):
        g = metric_at(sphere, ChartPoint(1.0, 0.3))
        assert np.allclose(g, np.diag([1.0, np.sin(1.0) ** 2]))

    def test_sphere_christoffel(self, sphere):
        gamma = christoffel(sphere, ChartPoint(1.0, 0.3))
        assert gamma[0, 1, 1] == pytest.approx(-np.sin(1.0) * np.cos(1.0))
        assert gamma[1, 0, 1] == pytest.approx(np.cos(1.0) / np.sin(1.0))
        assert gamma[1, 1, 0] == pytest.approx(gamma[1, 0, 1])
        assert gamma[0, 0, 0] == pytest.approx(0.0)

    def test_metric_outside_domain(self, sphere):
        with pytest.raises(DomainError):
            metric_at(sphere, ChartPoint(-0.5, 0.0))

    def test_zoll_analytic_christoffel_matches_finite_differences(self, zoll):
        P = np.array([[0.7, 0.2], [1.4, 3.0], [2.3, 5.5]])
        chart = zoll.charts[0]
        assert np.allclose(chart.christoffel(P), chart.christoffel_fd(P), atol=1e-6)

    @pytest.mark.parametrize("name", SCENARIO_NAMES)
    def test_analytic_christoffel_matches_finite_differences(self, name):
        surface = catalog(name)
        batch = surface.random_unit_tangents(100, np.random.default_rng(7))
        for c, chart in enumerate(surface.charts):
            P = batch.points[batch.charts == c]
            if len(P):
                assert np.allclose(chart.christoffel(P), chart.christoffel_fd(P), rtol=1e-6, atol=1e-6)

    def test_symmetric_in_lower_indices(self, ellipsoid):
        gamma = christoffel(ellipsoid, ChartPoint(1.1, 0.4))
        assert np.allclose(gamma, np.swapaxes(gamma, 1, 2))


class TestAngles:
    def test_orthogonal_directions(self, sphere):
        a = sphere.unit_tangent((np.pi / 2, 0.0), (1.0, 0.0))
        b = sphere.unit_tangent((np.pi / 2, 0.0), (0.0, 1.0))
        assert angle_between(sphere, a, b) == pytest.approx(np.pi / 2)
        assert angle_between(sphere, a, a.negated()) == pytest.approx(np.pi)

    def test_different_bases(self, sphere):
        a = sphere.unit_tangent((np.pi / 2, 0.0), (1.0, 0.0))
        b = sphere.unit_tangent((np.pi / 2, 1.0), (1.0, 0.0))
        with pytest.raises(PreconditionError):
            angle_between(sphere, a, b)


class TestBaseDistance:
    def test_quarter_of_equator(self, sphere):
        d = base_distance(sphere, ChartPoint(np.pi / 2, 0.0), ChartPoint(np.pi / 2, np.pi / 2))
        assert d == pytest.approx(np.pi / 2)

    def test_torus_wraps(self, torus):
        assert base_distance(torus, ChartPoint(0.1, 0.5), ChartPoint(0.9, 0.5)) == pytest.approx(0.2)

    def test_ellipsoid_distance_is_symmetric(self, ellipsoid):
        p, q = ChartPoint(1.0, 0.5), ChartPoint(2.0, 2.5)
        assert base_distance(ellipsoid, p, q) == pytest.approx(base_distance(ellipsoid, q, p), rel=1e-6)


class TestParallelTransport:
    def test_flat_torus_is_trivial(self, torus):
        curve = BaseCurve.from_samples([[0.1, 0.1], [0.5, 0.3], [0.8, 0.9]])
        assert np.allclose(parallel_transport(torus, curve, [0.6, 0.8]), [0.6, 0.8])

    def test_equator_preserves_meridian_direction(self, sphere):
        curve = BaseCurve.from_function(
            lambda tau: np.array([np.pi / 2, 2.0 * tau]), lambda tau: np.array([0.0, 2.0])
        )
        assert np.allclose(parallel_transport(sphere, curve, [1.0, 0.0]), [1.0, 0.0], atol=1e-9)

    def test_latitude_preserves_length(self, sphere):
        theta = np.pi / 4
        curve = BaseCurve.from_function(
            lambda tau: np.array([theta, 2.0 * np.pi * tau]), lambda tau: np.array([0.0, 2.0 * np.pi])
        )
        w = parallel_transport(sphere, curve, [1.0, 0.0])
        g = metric_at(sphere, ChartPoint(theta, 0.0))
        assert float(w @ g @ w) == pytest.approx(1.0, abs=1e-8)
        # 纬线圈上的和乐: 转角 2π cos θ
        assert w[0] == pytest.approx(np.cos(2.0 * np.pi * np.cos(theta)), abs=1e-7)

    def test_curve_outside_domain(self, sphere):
        curve = BaseCurve.from_samples([[3.0, 0.0], [3.5, 0.0]])
        with pytest.raises(DomainError):
            parallel_transport(sphere, curve, [1.0, 0.0])


class TestRechart:
    def test_round_trip_through_second_chart(self, sphere):
        batch = PhaseBatch(
            np.zeros(2, dtype=int),
            np.array([[1.0, 2.0, 0.6, 0.8 / np.sin(1.0)], [2.0, 4.0, -1.0, 0.0]]),
        )
        moved = sphere.rechart(batch, np.ones(2, dtype=int))
        back = sphere.rechart(moved, np.zeros(2, dtype=int))
        assert np.array_equal(moved.charts, [1, 1])
        assert np.allclose(back.y, batch.y, atol=1e-10)
        assert np.allclose(sphere.speeds(moved), 1.0, atol=1e-10)
