"""Value types shared by every module: chart points, unit tangents and batches."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ChartPoint:
    """A point of the surface in chart coordinates ``(u, v)``."""

    u: float
    v: float

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v], dtype=float)

    @classmethod
    def from_array(cls, values) -> ChartPoint:
        return cls(float(values[0]), float(values[1]))


@dataclass(frozen=True)
class UnitTangent:
    """A point of the unit tangent bundle.

    ``direction`` holds chart velocity components. ``chart`` is the index of the
    chart the coordinates refer to; 0 is the primary chart of the surface.
    Construct through :meth:`geoflow.geometry.surface.Surface.unit_tangent` to
    have the unit-norm invariant checked.
    """

    base: ChartPoint
    direction: tuple[float, float]
    chart: int = 0

    def negated(self) -> UnitTangent:
        return UnitTangent(self.base, (-self.direction[0], -self.direction[1]), self.chart)

    def as_array(self) -> np.ndarray:
        return np.array([self.base.u, self.base.v, self.direction[0], self.direction[1]])

    @classmethod
    def from_array(cls, values, chart: int = 0) -> UnitTangent:
        return cls(
            ChartPoint(float(values[0]), float(values[1])),
            (float(values[2]), float(values[3])),
            int(chart),
        )


@dataclass(frozen=True)
class ChartDomain:
    """Parameter rectangle with per-axis periodic identifications."""

    lower: tuple[float, float]
    upper: tuple[float, float]
    periodic: tuple[bool, bool] = (False, False)

    @property
    def periods(self) -> np.ndarray:
        return np.array(self.upper, dtype=float) - np.array(self.lower, dtype=float)

    def normalize(self, P: np.ndarray) -> np.ndarray:
        """Wrap periodic axes into ``[lower, upper)``."""
        P = np.array(P, dtype=float, copy=True)
        for axis in (0, 1):
            if self.periodic[axis]:
                lo = self.lower[axis]
                P[..., axis] = lo + np.mod(P[..., axis] - lo, self.periods[axis])
        return P

    def contains(self, P: np.ndarray, slack: float = 1e-12) -> np.ndarray:
        P = self.normalize(P)
        inside = np.ones(P.shape[:-1], dtype=bool)
        for axis in (0, 1):
            if not self.periodic[axis]:
                inside &= P[..., axis] >= self.lower[axis] - slack
                inside &= P[..., axis] <= self.upper[axis] + slack
        return inside

    def difference(self, PA: np.ndarray, PB: np.ndarray) -> np.ndarray:
        """``PB - PA`` with periodic axes wrapped into ``[-period/2, period/2)``."""
        delta = np.asarray(PB, dtype=float) - np.asarray(PA, dtype=float)
        for axis in (0, 1):
            if self.periodic[axis]:
                period = self.periods[axis]
                delta[..., axis] = np.mod(delta[..., axis] + 0.5 * period, period) - 0.5 * period
        return delta


@dataclass
class PhaseBatch:
    """A batch of unit tangents stored as arrays.

    ``y`` has shape ``(N, 4)`` with rows ``(u, v, du, dv)``; ``charts`` holds
    the chart index of every row.
    """

    charts: np.ndarray
    y: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.y = np.atleast_2d(np.asarray(self.y, dtype=float))
        self.charts = np.broadcast_to(np.asarray(self.charts, dtype=int), (len(self.y),)).copy()

    def __len__(self) -> int:
        return len(self.y)

    @property
    def points(self) -> np.ndarray:
        return self.y[:, :2]

    @property
    def velocities(self) -> np.ndarray:
        return self.y[:, 2:]

    def copy(self) -> PhaseBatch:
        return PhaseBatch(self.charts.copy(), self.y.copy(), dict(self.meta))

    def take(self, index) -> PhaseBatch:
        return PhaseBatch(self.charts[index], self.y[index])

    def negated(self) -> PhaseBatch:
        y = self.y.copy()
        y[:, 2:] *= -1.0
        return PhaseBatch(self.charts.copy(), y)

    def unit_tangent(self, i: int) -> UnitTangent:
        return UnitTangent.from_array(self.y[i], int(self.charts[i]))

    def unit_tangents(self) -> list[UnitTangent]:
        return [self.unit_tangent(i) for i in range(len(self))]

    @classmethod
    def from_unit_tangents(cls, vectors: list[UnitTangent]) -> PhaseBatch:
        if not vectors:
            return cls(np.zeros(0, dtype=int), np.zeros((0, 4)))
        return cls(
            np.array([v.chart for v in vectors], dtype=int),
            np.array([v.as_array() for v in vectors]),
        )

    @classmethod
    def concatenate(cls, batches: list[PhaseBatch]) -> PhaseBatch:
        return cls(
            np.concatenate([b.charts for b in batches]),
            np.concatenate([b.y for b in batches], axis=0),
        )
