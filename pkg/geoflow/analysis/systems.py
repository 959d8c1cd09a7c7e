"""
分析对象: 流系统与映射系统

Estimators take either a :class:`FlowSystem` (a surface, a distance on its
unit tangent bundle and an integrator tolerance) or a :class:`MapSystem` (a
self-map of the compactified section sphere).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from geoflow.exceptions import PreconditionError
from geoflow.flow.distances import MetricChoice, batch_distances, pair_separations
from geoflow.flow.integrator import propagate
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import PhaseBatch
from geoflow.section.compactify import CompactPoints
from geoflow.section.section import Section


@dataclass
class FlowSystem:
    """The geodesic flow of ``surface`` measured with ``metric``."""

    surface: Surface
    metric: MetricChoice = "sasaki"
    tol: float | None = None

    def distances(self, A: PhaseBatch, B: PhaseBatch) -> np.ndarray:
        return batch_distances(self.surface, A, B, self.metric)

    def separations(self, A: PhaseBatch, B: PhaseBatch, t_max: float, n_samples: int):
        return pair_separations(self.surface, A, B, t_max, n_samples, self.metric, self.tol)

    def flow(self, batch: PhaseBatch, t) -> PhaseBatch:
        return propagate(self.surface, batch, t, tol=self.tol).final


class MapSystem(ABC):
    """A self-map ``F`` of the compactified annulus.

    ``period`` is the length ``L`` used by the compactification.
    """

    name: str = "map"
    period: float = 1.0

    @abstractmethod
    def step(self, points: CompactPoints) -> tuple[CompactPoints, np.ndarray]:
        """``F`` of every point and a mask of rows where it could be evaluated."""

    def admissible(self, points: CompactPoints) -> np.ndarray:
        return np.ones(len(points), dtype=bool)

    def iterate(self, points: CompactPoints, n: int) -> tuple[CompactPoints, np.ndarray]:
        """``Fⁿ``; a row that fails once stays failed."""
        if n < 0:
            raise PreconditionError("迭代次数必须非负", module="analysis", data={"n": n})
        current = CompactPoints(points.coords.copy(), points.pole.copy())
        ok = self.admissible(current)
        for _ in range(n):
            idx = np.flatnonzero(ok)
            if len(idx) == 0:
                break
            moved, good = self.step(current.take(idx))
            current.coords[idx] = moved.coords
            current.pole[idx] = moved.pole
            ok[idx] = good
        return current, ok

    def xyz(self, points: CompactPoints) -> np.ndarray:
        return points.xyz(self.period)


class ExtendedReturnMap(MapSystem):
    """Return map of a section extended to the two poles, which stay fixed."""

    def __init__(self, section: Section) -> None:
        self.section = section
        self.name = f"return_map:{section.surface.name}"
        self.period = section.period

    def admissible(self, points: CompactPoints) -> np.ndarray:
        theta = points.coords[:, 1]
        guard = self.section.guard
        return (points.pole != 0) | ((theta > guard) & (theta < 1.0 - guard))

    def step(self, points: CompactPoints) -> tuple[CompactPoints, np.ndarray]:
        out = CompactPoints(points.coords.copy(), points.pole.copy())
        ok = self.admissible(points)
        rows = np.flatnonzero(ok & (points.pole == 0))
        if len(rows):
            result = self.section.return_map_batch(points.coords[rows])
            landed = result.coords.copy()
            landed[:, 0] = np.mod(landed[:, 0], self.period)
            out.coords[rows] = np.where(result.ok[:, None], landed, points.coords[rows])
            ok[rows] = result.ok
        return out, ok


class TwistMap(MapSystem):
    """``(s, θ) ↦ (s + θ, θ)`` on ``[0, 1) × (0, 1)``, poles fixed."""

    name = "twist"
    period = 1.0

    def step(self, points: CompactPoints) -> tuple[CompactPoints, np.ndarray]:
        coords = points.coords.copy()
        annulus = points.pole == 0
        coords[annulus, 0] = np.mod(coords[annulus, 0] + coords[annulus, 1], self.period)
        return CompactPoints(coords, points.pole.copy()), np.ones(len(points), dtype=bool)


class IdentityMap(MapSystem):
    name = "identity"

    def __init__(self, period: float = 1.0) -> None:
        self.period = period

    def step(self, points: CompactPoints) -> tuple[CompactPoints, np.ndarray]:
        return CompactPoints(points.coords.copy(), points.pole.copy()), np.ones(len(points), dtype=bool)
