import numpy as np
import pytest

from geoflow.exceptions import ConfigurationError, PreconditionError
from geoflow.flow import flow_batch, sasaki_distances
from geoflow.geometry import PhaseBatch
from geoflow.scenarios import (
    SCENARIO_NAMES,
    Blend,
    ZollSphere,
    catalog,
    direction_divergence,
    log_radial_gap,
    middle_axis_plane,
    oracle_flow,
    oracle_geodesic_plane_exp,
    principal_anchors,
    principal_geodesic,
    reference_geodesic,
)
from geoflow.scenarios.geodesics import ellipse_perimeter


class TestCatalog:
    @pytest.mark.parametrize("name", SCENARIO_NAMES)
    def test_every_scenario_builds(self, name):
        surface = catalog(name)
        assert surface.name == name
        assert surface.compact == (name not in ("plane_exp", "plane_flat"))

    def test_unknown_scenario(self):
        with pytest.raises(ConfigurationError) as info:
            catalog("mobius")
        assert "sphere" in info.value.data["known"]

    @pytest.mark.parametrize(
        "name, params",
        [
            ("sphere", {"radius": -1.0}),
            ("ellipsoid", {"semi_axes": (1.0, -1.0, 2.0)}),
            ("zoll", {"zoll_lambda": 1.5}),
            ("plane_exp", {"blend_inner": 2.0, "blend_outer": 1.0}),
        ],
    )
    def test_invalid_parameters(self, name, params):
        with pytest.raises(ConfigurationError):
            catalog(name, params)

    def test_parameters_reach_the_surface(self):
        assert catalog("sphere", {"radius": 2.0}).radius == 2.0
        assert catalog("flat_torus", {"torus_periods": (2.0, 1.0)}).periods.tolist() == [2.0, 1.0]


class TestBlend:
    def test_model_zones(self):
        blend = Blend(0.5, 1.0)
        inner = np.array([0.0, 0.2, 0.49])
        outer = np.array([1.01, 2.0, 5.0])
        assert np.allclose(blend.f(inner), inner)
        assert np.allclose(blend.f(outer), np.exp(outer))

    def test_inverse(self):
        blend = Blend(0.5, 1.0)
        t = np.array([0.1, 0.6, 0.75, 0.95, 1.5, 4.0])
        assert np.allclose(blend.inverse(blend.f(t)), t, atol=1e-12)

    def test_derivatives_match_finite_differences(self):
        blend = Blend(0.5, 1.0)
        t, h = np.array([0.6, 0.75, 0.9]), 1e-6
        assert np.allclose(blend.df(t), (blend.f(t + h) - blend.f(t - h)) / (2 * h), rtol=1e-6)
        assert np.allclose(blend.d2f(t), (blend.df(t + h) - blend.df(t - h)) / (2 * h), rtol=1e-5)

    def test_rejects_inverted_interval(self):
        with pytest.raises(ConfigurationError):
            Blend(1.0, 0.5)


class TestStretchedPlane:
    def test_image_round_trip(self, plane_exp):
        X = np.array([[0.1, 0.2], [0.5, 0.5], [1.5, -0.3], [-3.0, 2.0]])
        assert np.allclose(plane_exp.preimage(plane_exp.image(X)), X, atol=1e-12)

    def test_identity_near_origin(self, plane_exp):
        X = np.array([[0.1, 0.2], [-0.3, 0.1]])
        assert np.allclose(plane_exp.image(X), X)

    def test_velocity_maps_are_inverse(self, plane_exp):
        X = np.array([[0.8, 0.1], [2.0, -1.0]])
        W = np.array([[1.0, 0.0], [0.3, 0.4]])
        assert np.allclose(plane_exp.preimage_velocity(X, plane_exp.image_velocity(X, W)), W)

    def test_oracle_follows_the_image_line(self, plane_exp):
        x, v, t = np.array([1.0, 0.0]), np.array([0.0, 1.0]), 2.0
        state = oracle_geodesic_plane_exp(x, v, t, plane_exp)
        P = np.array([[state.base.u, state.base.v]])
        X = plane_exp.point_to_ambient(0, P)
        assert np.allclose(plane_exp.image(X)[0], x + t * v)
        W = plane_exp.push_forward(0, P, np.array([state.velocity]))
        assert np.allclose(plane_exp.image_velocity(X, W)[0], v)

    def test_oracle_has_unit_speed(self, plane_exp):
        state = oracle_geodesic_plane_exp((0.3, -1.2), (0.6, 0.8), 7.5, plane_exp)
        speed = plane_exp.speeds(plane_exp.rechart(_single(state)))
        assert speed[0] == pytest.approx(1.0, abs=1e-10)

    def test_oracle_requires_unit_direction(self, plane_exp):
        with pytest.raises(PreconditionError):
            oracle_geodesic_plane_exp((1.0, 0.0), (2.0, 0.0), 1.0, plane_exp)

    def test_direction_divergence(self, plane_exp):
        t = direction_divergence((1.0, 0.0), (1.0, 0.0), 1e-3, 10.0, 1e5, plane_exp)
        assert t is not None
        # 像平面上两条直线的距离约为 t · 角度
        assert t == pytest.approx(1e4, rel=0.01)
        assert direction_divergence((1.0, 0.0), (1.0, 0.0), 1e-3, 10.0, 100.0, plane_exp) is None

    def test_log_radial_gap(self):
        gap = log_radial_gap((1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0), 50.0)
        assert gap == pytest.approx(0.5 * np.log((1 / 2500 + 2 / 50 + 1) / (1 / 2500 + 1)))
        with pytest.raises(PreconditionError):
            log_radial_gap((1.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 1.0), 0.0)


def _single(state):
    return PhaseBatch.from_unit_tangents([state.unit_tangent()])


class TestOracles:
    def test_no_closed_form_on_ellipsoid(self, ellipsoid, rng):
        v = ellipsoid.random_unit_tangents(1, rng).unit_tangent(0)
        assert oracle_flow(ellipsoid, v, 1.0) is None

    def test_plane_flat_is_a_straight_line(self, plane_flat):
        v = plane_flat.unit_tangent((1.0, 1.0), (0.6, 0.8))
        state = oracle_flow(plane_flat, v, 5.0)
        assert (state.base.u, state.base.v) == pytest.approx((4.0, 5.0))
        assert state.time == 5.0


class TestPrincipalGeodesics:
    def test_middle_axis_plane(self):
        assert middle_axis_plane((1.0, 1.2, 1.5)) == "xz"
        assert middle_axis_plane((2.0, 1.0, 3.0)) == "yz"
        assert middle_axis_plane((1.5, 1.2, 1.0)) == "xz"

    def test_anchors_lie_on_the_ellipse(self, ellipsoid):
        anchors = principal_anchors(ellipsoid, "xy", 6)
        X, _ = ellipsoid.to_ambient(anchors)
        assert len(anchors) == 6
        assert np.allclose(X[:, 2], 0.0, atol=1e-12)
        assert np.allclose(ellipsoid.speeds(anchors), 1.0, atol=1e-10)

    def test_unknown_plane(self, ellipsoid):
        with pytest.raises(ConfigurationError):
            principal_anchors(ellipsoid, "xw", 2)

    def test_period_matches_ellipse_perimeter(self, ellipsoid):
        geodesic = principal_geodesic(ellipsoid, "xy", tol=1e-10)
        assert geodesic.period == pytest.approx(ellipse_perimeter(1.0, 1.2), rel=1e-6)
        assert geodesic.closure_error < 1e-6

    def test_reference_geodesic_needs_a_compact_surface(self, plane_exp):
        with pytest.raises(ConfigurationError):
            reference_geodesic(plane_exp)

    def test_sphere_radius_scales_the_equator(self):
        assert reference_geodesic(catalog("sphere", {"radius": 2.0})).period == pytest.approx(4.0 * np.pi)


class TestZoll:
    def test_rejects_even_polynomial(self):
        with pytest.raises(ConfigurationError):
            ZollSphere(0.3, q_coefficients=(1.0, 1.0))

    def test_every_geodesic_closes(self, zoll, rng):
        start = zoll.random_unit_tangents(10, rng)
        end = flow_batch(zoll, start, 2.0 * np.pi, 1e-10)
        assert np.max(sasaki_distances(zoll, end, start)) < 1e-5
