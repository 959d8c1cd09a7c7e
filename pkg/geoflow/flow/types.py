"""Flow states, trajectories and batch propagation results."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from geoflow.geometry.surface import Surface
from geoflow.geometry.types import ChartPoint, PhaseBatch, UnitTangent

CSV_COLUMNS = ("t", "u", "v", "du", "dv", "drift")


@dataclass(frozen=True)
class FlowState:
    """``Φ_t(v)`` at arc-length time ``time``, in chart ``chart``."""

    base: ChartPoint
    velocity: tuple[float, float]
    time: float
    chart: int = 0

    def unit_tangent(self) -> UnitTangent:
        return UnitTangent(self.base, self.velocity, self.chart)

    @classmethod
    def from_row(cls, row, time: float, chart: int = 0) -> FlowState:
        return cls(
            ChartPoint(float(row[0]), float(row[1])),
            (float(row[2]), float(row[3])),
            float(time),
            int(chart),
        )


@dataclass
class Propagation:
    """Result of a batch propagation.

    Attributes:
        final: states at the requested durations
        samples: one batch per requested fraction of the durations
        escaped: rows frozen after leaving a noncompact surface's bounds
        escape_times: time of escape per row (nan if none)
        renormalized: number of row renormalizations
        max_drift: largest unit-speed drift seen before renormalization
        switches: number of chart switches
    """

    final: PhaseBatch
    samples: list[PhaseBatch] = field(default_factory=list)
    escaped: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=bool))
    escape_times: np.ndarray = field(default_factory=lambda: np.zeros(0))
    renormalized: int = 0
    max_drift: float = 0.0
    switches: int = 0


@dataclass
class Trajectory:
    """Sampled orbit ``γ_v`` with conservation diagnostics."""

    states: list[FlowState]
    surface: Surface
    max_speed_drift: float = 0.0
    max_clairaut_drift: float | None = None
    renormalized: int = 0
    escaped: bool = False
    escape_time: float | None = None

    def __post_init__(self) -> None:
        times = [s.time for s in self.states]
        if any(b <= a for a, b in zip(times, times[1:], strict=False)):
            raise ValueError("轨迹时间必须严格递增")

    def __len__(self) -> int:
        return len(self.states)

    @property
    def times(self) -> np.ndarray:
        return np.array([s.time for s in self.states])

    def batch(self) -> PhaseBatch:
        return PhaseBatch.from_unit_tangents([s.unit_tangent() for s in self.states])

    def speed_drifts(self) -> np.ndarray:
        return np.abs(self.surface.speeds(self.batch()) - 1.0)

    def clairaut_values(self) -> np.ndarray | None:
        X, W = self.surface.to_ambient(self.batch())
        return self.surface.clairaut(X, W)

    def diagnostics(self) -> dict:
        return {
            "samples": len(self.states),
            "max_speed_drift": self.max_speed_drift,
            "max_clairaut_drift": self.max_clairaut_drift,
            "renormalized": self.renormalized,
            "escaped": self.escaped,
            "escape_time": self.escape_time,
        }

    def to_csv_rows(self) -> list[tuple[float, ...]]:
        """Rows ``(t, u, v, du, dv, drift)``, coordinates in the primary chart where possible."""
        batch = self.batch()
        drift = self.speed_drifts()
        X, _ = self.surface.to_ambient(batch)
        primary = self.surface.rechart(batch, self.surface.preferred_charts(X))
        return [
            (s.time, *map(float, primary.y[i]), float(drift[i]))
            for i, s in enumerate(self.states)
        ]
