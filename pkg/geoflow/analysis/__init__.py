"""Estimators for the dynamical notions: equicontinuity, recurrence, distality, almost periods."""

from geoflow.analysis.almost_period import almost_period_search, smallest_common_period
from geoflow.analysis.census import census_grid, fixed_point_census
from geoflow.analysis.closed_geodesics import (
    ClosedGeodesicSearch,
    closed_geodesic_search,
    curve_hausdorff,
    find_closed_geodesics,
)
from geoflow.analysis.distality import distality_bound
from geoflow.analysis.equicontinuity import equicontinuity_modulus, replay_witness
from geoflow.analysis.recurrence import (
    paracompact_recurrence,
    power_recurrence_check,
    recurrence_grid,
    recurrence_profile,
)
from geoflow.analysis.reports import (
    AlmostPeriodReport,
    CensusReport,
    ClosedGeodesicReport,
    DistalityReport,
    ModulusReport,
    ParacompactReport,
    PowerRecurrenceReport,
    RecurrenceProfile,
    ReplayReport,
    SampleSpec,
    TangentRecord,
)
from geoflow.analysis.sampling import perturbed_partners, set_anchors
from geoflow.analysis.systems import ExtendedReturnMap, FlowSystem, IdentityMap, MapSystem, TwistMap

__all__ = [
    "AlmostPeriodReport",
    "CensusReport",
    "ClosedGeodesicReport",
    "ClosedGeodesicSearch",
    "DistalityReport",
    "ExtendedReturnMap",
    "FlowSystem",
    "IdentityMap",
    "MapSystem",
    "ModulusReport",
    "ParacompactReport",
    "PowerRecurrenceReport",
    "RecurrenceProfile",
    "ReplayReport",
    "SampleSpec",
    "TangentRecord",
    "TwistMap",
    "almost_period_search",
    "census_grid",
    "closed_geodesic_search",
    "curve_hausdorff",
    "distality_bound",
    "equicontinuity_modulus",
    "find_closed_geodesics",
    "fixed_point_census",
    "paracompact_recurrence",
    "perturbed_partners",
    "power_recurrence_check",
    "recurrence_grid",
    "recurrence_profile",
    "replay_witness",
    "set_anchors",
]
