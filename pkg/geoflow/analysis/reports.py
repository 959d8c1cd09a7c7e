"""
分析报告模型

All estimator results are pydantic models so experiments can serialize them
with ``model_dump(mode="json")``; every report carries the sample spec it was
computed from.
"""

from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from geoflow.geometry.types import ChartPoint, UnitTangent

Verdict = Literal["satisfied", "violated", "inconclusive"]


class TangentRecord(BaseModel):
    """单位切向量的可序列化形式"""

    u: float
    v: float
    du: float
    dv: float
    chart: int = 0

    @classmethod
    def from_unit_tangent(cls, t: UnitTangent) -> "TangentRecord":
        return cls(u=t.base.u, v=t.base.v, du=t.direction[0], dv=t.direction[1], chart=t.chart)

    def to_unit_tangent(self) -> UnitTangent:
        return UnitTangent(ChartPoint(self.u, self.v), (self.du, self.dv), self.chart)


class SampleSpec(BaseModel):
    """采样说明

    Attributes:
        n_pairs: random base points per ladder level (uniform mode)
        perturbations: perturbed partners per anchor
        seed: generator seed
        mode: uniform (δ independent of the point) or pointwise (anchors only)
        anchors: configured points for perturbation pairs
        n_times: time samples over the horizon
        ladder_depth: number of δ levels ε/2, ε/4, ...
        n_points: grid size for almost-period searches
    """

    n_pairs: int = Field(default=200, ge=0)
    perturbations: int = Field(default=4, ge=1)
    seed: int = 0
    mode: Literal["uniform", "pointwise"] = "uniform"
    anchors: list[TangentRecord] = Field(default_factory=list)
    n_times: int = Field(default=400, ge=2)
    ladder_depth: int = Field(default=10, ge=1)
    n_points: int = Field(default=32, ge=1)


class WitnessPair(BaseModel):
    a: TangentRecord
    b: TangentRecord
    initial_distance: float
    separation: float
    time: float


class LadderLevel(BaseModel):
    delta: float
    pairs: int
    max_initial: float
    max_separation: float


class ModulusReport(BaseModel):
    """等度连续模报告"""

    verdict: Verdict
    epsilon: float
    delta: float | None = None
    t_max: float
    metric: str = "sasaki"
    samples: SampleSpec
    witness: WitnessPair | None = None
    ladder: list[LadderLevel] = Field(default_factory=list)


class ReplayReport(BaseModel):
    t_max: float
    separation: float
    time: float
    still_violated: bool


class RecurrenceProfile(BaseModel):
    """回归剖面

    ``orbit_xyz`` holds the raw compactified orbit of the sample set, shape
    ``(N_max + 1, |C|, 3)``; ``valid`` marks rows that stayed inside the
    tangency guard for every iterate.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    sup_displacements: list[tuple[int, float]]
    near_returns: list[tuple[int, float]]
    near_return_tol: float
    sample_set: dict[str, Any]
    excluded: int = 0
    orbit_xyz: np.ndarray | None = Field(default=None, exclude=True, repr=False)
    valid: np.ndarray | None = Field(default=None, exclude=True, repr=False)
    orbit_coords: np.ndarray | None = Field(default=None, exclude=True, repr=False)
    poles: np.ndarray | None = Field(default=None, exclude=True, repr=False)
    map_system: Any = Field(default=None, exclude=True, repr=False)


class PowerCheckEntry(BaseModel):
    n_k: int
    s_k: float
    link_sup: float
    asserted: float
    measured: float
    passed: bool


class PowerRecurrenceReport(BaseModel):
    m: int
    slack: float
    entries: list[PowerCheckEntry]
    passed: bool


class BandEntry(BaseModel):
    band: tuple[float, float]
    sups: list[tuple[int, float]]


class ParacompactReport(BaseModel):
    near_returns: list[int]
    bands: list[BandEntry]


class DistalityEntry(BaseModel):
    pair: int
    inf_estimate: float
    time: float


class DistalityReport(BaseModel):
    t_max: float
    n_samples: int
    metric: str
    entries: list[DistalityEntry]

    @property
    def minimum(self) -> float:
        return min((e.inf_estimate for e in self.entries), default=float("nan"))


class WindowEntry(BaseModel):
    start: float
    end: float
    found: list[float]


class AlmostPeriodReport(BaseModel):
    epsilon: float
    tau: float
    t_range: tuple[float, float]
    samples: SampleSpec
    found: list[float]
    windows: list[WindowEntry]

    @property
    def empty_windows(self) -> list[WindowEntry]:
        return [w for w in self.windows if not w.found]


class SeedReport(BaseModel):
    seed: int
    converged: bool
    period: float | None = None
    residual: float | None = None
    halvings: int = 0
    reason: str | None = None
    duplicate_of: int | None = None


class GeodesicRecord(BaseModel):
    period: float
    closure_error: float
    initial: TangentRecord


class ClosedGeodesicReport(BaseModel):
    found: list[GeodesicRecord]
    seeds: list[SeedReport]


class CensusCluster(BaseModel):
    location: tuple[float, float] | None
    pole: str | None
    size: int
    displacement: float


class CensusReport(BaseModel):
    """不动点普查报告; ``identity_like`` 时不给出计数"""

    count: int | None
    identity_like: bool
    clusters: list[CensusCluster]
    grid: tuple[int, int]
    tol: float
    power: int = 1
    excluded: int = 0
