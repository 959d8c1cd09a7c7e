"""Reference closed geodesics used to build sections on the compact scenarios."""

from __future__ import annotations

import numpy as np

from geoflow.exceptions import ConfigurationError
from geoflow.geometry.surface import Surface
from geoflow.scenarios.sphere_like import PRINCIPAL_PLANES, Ellipsoid, RoundSphere, ZollSphere
from geoflow.scenarios.torus import FlatTorus
from geoflow.section.geodesic import ClosedGeodesic


def ellipse_perimeter(a: float, b: float) -> float:
    """Ramanujan's approximation."""
    return float(np.pi * (3.0 * (a + b) - np.sqrt((3.0 * a + b) * (a + 3.0 * b))))


def principal_geodesic(surface: Ellipsoid, plane: str = "xy", **kwargs) -> ClosedGeodesic:
    """Principal ellipse of an ellipsoid in a coordinate plane, period located numerically."""
    i, j = PRINCIPAL_PLANES[plane]
    X = np.zeros((1, 3))
    W = np.zeros((1, 3))
    X[0, i] = 1.0
    W[0, j] = 1.0
    v0 = surface.from_ambient(X, surface.g_normalize(X, W)).unit_tangent(0)
    guess = ellipse_perimeter(surface.axes[i], surface.axes[j])
    return ClosedGeodesic.from_guess(surface, v0, (0.9 * guess, 1.1 * guess), **kwargs)


def reference_geodesic(surface: Surface, **kwargs) -> ClosedGeodesic:
    """The equator of sphere-like scenarios, a horizontal circle of the flat torus.

    Raises:
        ConfigurationError: the scenario has no reference closed geodesic
    """
    if isinstance(surface, (RoundSphere, ZollSphere)):
        X = np.array([[1.0, 0.0, 0.0]])
        W = surface.g_normalize(X, np.array([[0.0, 1.0, 0.0]]))
        v0 = surface.from_ambient(X, W).unit_tangent(0)
        period = 2.0 * np.pi * (surface.radius if isinstance(surface, RoundSphere) else 1.0)
        return ClosedGeodesic(surface, v0, period, **kwargs)
    if isinstance(surface, Ellipsoid):
        return principal_geodesic(surface, "xy", **kwargs)
    if isinstance(surface, FlatTorus):
        a, b = surface.periods
        v0 = surface.unit_tangent((0.0, 0.5 * b), (1.0, 0.0))
        return ClosedGeodesic(surface, v0, a, **kwargs)
    raise ConfigurationError("非紧场景没有闭测地线截面", module="scenarios", data={"scenario": surface.name})
