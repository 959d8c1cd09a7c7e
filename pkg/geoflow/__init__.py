"""
geoflow - a numerical laboratory for geodesic flows on surfaces.

Integrates the geodesic flow on the unit tangent bundle of model surfaces,
builds return maps along simple closed geodesics and estimates dynamical
properties: equicontinuity, recurrence, distality and almost periodicity.

Example:
    >>> from geoflow import catalog, geodesic_flow
    >>> sphere = catalog("sphere")
"""

__version__ = "0.1.0"

from geoflow.exceptions import GeoflowError
from geoflow.flow import geodesic_flow, integrate
from geoflow.geometry import PhaseBatch, Surface, UnitTangent
from geoflow.scenarios import catalog
from geoflow.section import build_section, return_map
from geoflow.settings.builtins.settings import DefaultSettings

__all__ = [
    "__version__",
    "DefaultSettings",
    "GeoflowError",
    "PhaseBatch",
    "Surface",
    "UnitTangent",
    "build_section",
    "catalog",
    "geodesic_flow",
    "integrate",
    "return_map",
]
