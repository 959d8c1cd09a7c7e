"""Geodesic flow integration and distances on the unit tangent bundle."""

from geoflow.flow.distances import (
    batch_distances,
    d1_distance,
    d1_distances,
    flow_pair_separation,
    pair_separations,
    sasaki_distance,
    sasaki_distances,
)
from geoflow.flow.integrator import flow_batch, flow_samples, geodesic_flow, integrate, propagate
from geoflow.flow.types import CSV_COLUMNS, FlowState, Propagation, Trajectory

__all__ = [
    "CSV_COLUMNS",
    "FlowState",
    "Propagation",
    "Trajectory",
    "batch_distances",
    "d1_distance",
    "d1_distances",
    "flow_batch",
    "flow_pair_separation",
    "flow_samples",
    "geodesic_flow",
    "integrate",
    "pair_separations",
    "propagate",
    "sasaki_distance",
    "sasaki_distances",
]
