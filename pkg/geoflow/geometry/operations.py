"""Pointwise differential-geometric primitives on a :class:`Surface`."""

from __future__ import annotations

import numpy as np

from geoflow.exceptions import PreconditionError
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import ChartPoint, PhaseBatch, UnitTangent

SAME_BASE_TOLERANCE = 1e-9


def metric_at(surface: Surface, p: ChartPoint, chart: int = 0) -> np.ndarray:
    """Metric matrix ``g_ij`` at ``p``.

    Raises:
        DomainError: ``p`` lies outside the chart domain.
    """
    P = p.as_array()[None]
    surface.check_domain(P, chart)
    return surface.charts[chart].metric(P)[0]


def christoffel(surface: Surface, p: ChartPoint, chart: int = 0) -> np.ndarray:
    """Christoffel symbols ``gamma[k, i, j] = Γ^k_ij`` at ``p``.

    Raises:
        DomainError: ``p`` lies outside the chart domain.
        NumericalError: the metric is degenerate at ``p``.
    """
    P = p.as_array()[None]
    surface.check_domain(P, chart)
    return surface.charts[chart].christoffel(P)[0]


def _in_chart(surface: Surface, v: UnitTangent, chart: int) -> np.ndarray:
    if v.chart == chart:
        return v.as_array()
    moved = surface.rechart(PhaseBatch.from_unit_tangents([v]), np.array([chart]))
    return moved.y[0]


def angle_between(surface: Surface, a: UnitTangent, b: UnitTangent) -> float:
    """Angle in ``[0, π]`` between two unit tangents at the same base point.

    Raises:
        PreconditionError: the base points differ.
    """
    ya = a.as_array()
    yb = _in_chart(surface, b, a.chart)
    chart = surface.charts[a.chart]
    delta = chart.domain.difference(ya[:2], yb[:2])
    if np.max(np.abs(delta)) > SAME_BASE_TOLERANCE:
        raise PreconditionError(
            "两个向量的基点不同",
            module="geometry",
            data={"a": a.base.as_array().tolist(), "b": b.base.as_array().tolist()},
        )
    P = ya[None, :2]
    inner = chart.inner(P, ya[None, 2:], yb[None, 2:])[0]
    norms = chart.norm(P, ya[None, 2:])[0] * chart.norm(P, yb[None, 2:])[0]
    return float(np.arccos(np.clip(inner / norms, -1.0, 1.0)))


def base_distance_bounds(
    surface: Surface, p: ChartPoint, q: ChartPoint, chart: int = 0
) -> tuple[float, float]:
    """Distance of two base points and its error bound (0 for closed forms)."""
    P = np.vstack([p.as_array(), q.as_array()])
    surface.check_domain(P, chart)
    X = surface.point_to_ambient(chart, P)
    dist, err = surface.base_distance_ambient(X[:1], X[1:])
    return float(dist[0]), float(err[0])


def base_distance(surface: Surface, p: ChartPoint, q: ChartPoint, chart: int = 0) -> float:
    """Riemannian distance of two base points.

    Closed form on the sphere, the flat torus and the planes; on the ellipsoid
    and Zoll surfaces an upper bound whose error is reported by
    :func:`base_distance_bounds`.
    """
    return base_distance_bounds(surface, p, q, chart)[0]
