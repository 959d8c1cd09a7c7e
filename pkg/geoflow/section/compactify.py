"""Two-point compactification of the section annulus.

``(s, θ)`` goes to the unit sphere with azimuth ``2πs/L`` and polar angle
``πθ``; the boundary limits ``θ → 0`` and ``θ → 1`` become the poles.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Pole(str, Enum):
    """The two points added by the compactification."""

    MINUS_INFINITY = "minus_infinity"
    PLUS_INFINITY = "plus_infinity"


@dataclass(frozen=True)
class SectionCoord:
    """Arc-length position ``s ∈ [0, L)`` and crossing angle ``θ ∈ (0, 1)`` in units of π."""

    s: float
    theta: float

    def as_array(self) -> np.ndarray:
        return np.array([self.s, self.theta])


@dataclass(frozen=True)
class CompactifiedPoint:
    coord: SectionCoord | None = None
    pole: Pole | None = None

    def __post_init__(self) -> None:
        if (self.coord is None) == (self.pole is None):
            raise ValueError("紧化点必须恰好是截面坐标或极点之一")

    @property
    def is_pole(self) -> bool:
        return self.pole is not None

    def xyz(self, period: float) -> np.ndarray:
        if self.pole is Pole.MINUS_INFINITY:
            return np.array([0.0, 0.0, 1.0])
        if self.pole is Pole.PLUS_INFINITY:
            return np.array([0.0, 0.0, -1.0])
        return compact_xyz(np.array([self.coord.s]), np.array([self.coord.theta]), period)[0]


def compact_xyz(s: np.ndarray, theta: np.ndarray, period: float) -> np.ndarray:
    """Embedding of annulus coordinates (vectorized); ``θ = 0`` is the ``+z`` pole."""
    azimuth = 2.0 * np.pi * np.asarray(s, dtype=float) / period
    polar = np.pi * np.asarray(theta, dtype=float)
    return np.stack(
        [np.sin(polar) * np.cos(azimuth), np.sin(polar) * np.sin(azimuth), np.cos(polar)], axis=-1
    )


def compactify(c: SectionCoord, section) -> CompactifiedPoint:
    """Boundary limits ``θ <= 0`` and ``θ >= 1`` map to the poles.

    ``section`` is a :class:`~geoflow.section.section.Section` or its period ``L``.
    """
    period = float(getattr(section, "period", section))
    if c.theta <= 0.0:
        return CompactifiedPoint(pole=Pole.MINUS_INFINITY)
    if c.theta >= 1.0:
        return CompactifiedPoint(pole=Pole.PLUS_INFINITY)
    return CompactifiedPoint(coord=SectionCoord(float(np.mod(c.s, period)), c.theta))


def compact_distance(a: CompactifiedPoint, b: CompactifiedPoint, period: float) -> float:
    """Chordal distance on the embedding sphere."""
    return float(np.linalg.norm(a.xyz(period) - b.xyz(period)))


def chordal_distances(xyz_a: np.ndarray, xyz_b: np.ndarray) -> np.ndarray:
    return np.linalg.norm(np.asarray(xyz_a) - np.asarray(xyz_b), axis=-1)


@dataclass
class CompactPoints:
    """A batch of compactified points: annulus coordinates plus a pole marker.

    ``pole`` is 0 for annulus points, -1 for minus infinity and +1 for plus
    infinity; ``coords`` rows of poles are ignored.
    """

    coords: np.ndarray
    pole: np.ndarray

    def __post_init__(self) -> None:
        self.coords = np.atleast_2d(np.asarray(self.coords, dtype=float)).reshape(-1, 2)
        self.pole = np.broadcast_to(np.asarray(self.pole, dtype=int), (len(self.coords),)).copy()

    def __len__(self) -> int:
        return len(self.coords)

    @classmethod
    def from_coords(cls, coords) -> CompactPoints:
        coords = np.atleast_2d(np.asarray(coords, dtype=float)).reshape(-1, 2)
        return cls(coords, np.zeros(len(coords), dtype=int))

    @classmethod
    def poles(cls) -> CompactPoints:
        return cls(np.array([[0.0, 0.0], [0.0, 1.0]]), np.array([-1, 1]))

    @classmethod
    def concatenate(cls, parts: list[CompactPoints]) -> CompactPoints:
        return cls(
            np.concatenate([p.coords for p in parts], axis=0),
            np.concatenate([p.pole for p in parts]),
        )

    def take(self, index) -> CompactPoints:
        return CompactPoints(self.coords[index], self.pole[index])

    def xyz(self, period: float) -> np.ndarray:
        out = compact_xyz(self.coords[:, 0], self.coords[:, 1], period)
        out[self.pole == -1] = (0.0, 0.0, 1.0)
        out[self.pole == 1] = (0.0, 0.0, -1.0)
        return out

    def point(self, i: int) -> CompactifiedPoint:
        if self.pole[i] == -1:
            return CompactifiedPoint(pole=Pole.MINUS_INFINITY)
        if self.pole[i] == 1:
            return CompactifiedPoint(pole=Pole.PLUS_INFINITY)
        return CompactifiedPoint(coord=SectionCoord(float(self.coords[i, 0]), float(self.coords[i, 1])))
