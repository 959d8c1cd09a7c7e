"""Return map along a simple closed geodesic and its two-point compactification."""

from geoflow.section.compactify import (
    CompactifiedPoint,
    CompactPoints,
    Pole,
    SectionCoord,
    chordal_distances,
    compact_distance,
    compact_xyz,
    compactify,
)
from geoflow.section.geodesic import ClosedGeodesic, estimate_period, return_distance
from geoflow.section.section import (
    ReturnBatch,
    Section,
    band_seeds,
    build_section,
    crossing_count,
    min_return_gap,
    return_map,
    return_time_n,
    section_grid_rows,
)

__all__ = [
    "ClosedGeodesic",
    "CompactPoints",
    "CompactifiedPoint",
    "Pole",
    "ReturnBatch",
    "Section",
    "SectionCoord",
    "band_seeds",
    "build_section",
    "chordal_distances",
    "compact_distance",
    "compact_xyz",
    "compactify",
    "crossing_count",
    "estimate_period",
    "min_return_gap",
    "return_distance",
    "return_map",
    "return_time_n",
    "section_grid_rows",
]
