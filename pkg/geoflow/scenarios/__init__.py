"""Surface catalog and closed-form oracles."""

from geoflow.scenarios.blend import Blend
from geoflow.scenarios.catalog import P_MANIFOLDS, catalog
from geoflow.scenarios.geodesics import principal_geodesic, reference_geodesic
from geoflow.scenarios.oracles import (
    direction_divergence,
    log_radial_gap,
    oracle_flow,
    oracle_geodesic_plane_exp,
    segment_length,
)
from geoflow.scenarios.params import SCENARIO_NAMES, ScenarioParams
from geoflow.scenarios.plane import PlaneExp, PlaneFlat
from geoflow.scenarios.sphere_like import (
    Ellipsoid,
    RoundSphere,
    ZollSphere,
    middle_axis_plane,
    principal_anchors,
)
from geoflow.scenarios.torus import FlatTorus

__all__ = [
    "P_MANIFOLDS",
    "SCENARIO_NAMES",
    "Blend",
    "Ellipsoid",
    "FlatTorus",
    "PlaneExp",
    "PlaneFlat",
    "RoundSphere",
    "ScenarioParams",
    "ZollSphere",
    "catalog",
    "direction_divergence",
    "log_radial_gap",
    "middle_axis_plane",
    "oracle_flow",
    "oracle_geodesic_plane_exp",
    "principal_anchors",
    "principal_geodesic",
    "reference_geodesic",
    "segment_length",
]
