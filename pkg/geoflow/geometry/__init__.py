"""Surfaces, charts and pointwise differential-geometric primitives."""

from geoflow.geometry.charts import Chart, FunctionChart, fd_christoffel
from geoflow.geometry.operations import (
    angle_between,
    base_distance,
    base_distance_bounds,
    christoffel,
    metric_at,
)
from geoflow.geometry.surface import Surface
from geoflow.geometry.transport import BaseCurve, parallel_transport
from geoflow.geometry.types import ChartDomain, ChartPoint, PhaseBatch, UnitTangent

__all__ = [
    "BaseCurve",
    "Chart",
    "ChartDomain",
    "ChartPoint",
    "FunctionChart",
    "PhaseBatch",
    "Surface",
    "UnitTangent",
    "angle_between",
    "base_distance",
    "base_distance_bounds",
    "christoffel",
    "fd_christoffel",
    "metric_at",
    "parallel_transport",
]
