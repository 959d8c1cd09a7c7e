"""The :class:`Surface` abstraction.

A surface is a small atlas of charts plus an *ambient model*: a fixed vector
space in which base points and velocities of every chart can be compared. For
sphere-like surfaces the ambient space is ℝ³ with points on the unit parameter
sphere; for the torus and the planes it is the parameter plane itself. Chart
switching, section frames and distances all work through the ambient model.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any

import numpy as np

from geoflow.exceptions import DomainError, PreconditionError
from geoflow.geometry.charts import Chart
from geoflow.geometry.types import ChartPoint, PhaseBatch, UnitTangent

UNIT_TOLERANCE = 1e-12


class Surface(ABC):
    """A 2D Riemannian surface described by charts and an ambient model.

    Attributes:
        name: catalog identifier
        compact: whether the surface is compact
        charts: the atlas; ``charts[0]`` is the primary chart
        ambient_dim: dimension of the ambient comparison space
        injectivity_hint: injectivity radius estimate in ambient units
        escape_radius: ambient radius beyond which orbits count as escaped
        revolution: whether Clairaut's quantity is conserved
        speed_bound: bound on the ambient speed of unit-speed orbits
        ambient_box: periods of a periodic ambient model (torus), else None
    """

    ambient_dim: int = 2
    injectivity_hint: float = 1.0
    speed_bound: float = 1.0
    escape_radius: float | None = None
    ambient_box: np.ndarray | None = None
    revolution: bool = False

    def __init__(
        self,
        name: str,
        charts: tuple[Chart, ...],
        *,
        compact: bool,
        params: dict[str, Any] | None = None,
    ) -> None:
        self.name = name
        self.charts = charts
        self.compact = compact
        self.params = dict(params or {})

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name={self.name!r}, params={self.params})"

    @property
    def primary(self) -> Chart:
        return self.charts[0]

    @property
    def chart_domain(self):
        return self.primary.domain

    # -- ambient model -----------------------------------------------------

    @abstractmethod
    def point_to_ambient(self, chart: int, P: np.ndarray) -> np.ndarray:
        """Chart points ``(N, 2)`` to ambient points ``(N, k)``."""

    @abstractmethod
    def ambient_to_point(self, chart: int, X: np.ndarray) -> np.ndarray:
        """Ambient points to chart coordinates of ``chart``."""

    @abstractmethod
    def push_forward(self, chart: int, P: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Chart velocities to ambient velocities."""

    @abstractmethod
    def pull_back(self, chart: int, P: np.ndarray, W: np.ndarray) -> np.ndarray:
        """Ambient velocities (tangent at the point) to chart velocities."""

    @abstractmethod
    def ambient_inner(self, X: np.ndarray, W1: np.ndarray, W2: np.ndarray) -> np.ndarray:
        """Metric inner product of ambient tangent vectors."""

    @abstractmethod
    def left_rotation(self, X: np.ndarray, T: np.ndarray) -> np.ndarray:
        """A tangent vector on the left of ``T``, not necessarily g-orthogonal."""

    @abstractmethod
    def base_distance_ambient(
        self, XA: np.ndarray, XB: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        """Riemannian distance of base points and an error bound (0 when exact)."""

    @abstractmethod
    def transport_angle_ambient(
        self, XA: np.ndarray, WA: np.ndarray, XB: np.ndarray, WB: np.ndarray
    ) -> np.ndarray:
        """Angle between ``WB`` and ``WA`` transported along a minimal base path."""

    @abstractmethod
    def sample_ambient(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Random base points for estimators (pole caps excluded)."""

    def project(self, X: np.ndarray) -> np.ndarray:
        """Snap ambient points back onto the model (sphere, torus box)."""
        return X

    def ambient_difference(self, XA: np.ndarray, XB: np.ndarray) -> np.ndarray:
        return np.asarray(XB) - np.asarray(XA)

    def embed(self, X: np.ndarray) -> np.ndarray:
        """Euclidean embedding used for Hausdorff comparisons of curves."""
        return np.asarray(X)

    def clairaut(self, X: np.ndarray, W: np.ndarray) -> np.ndarray | None:
        return None

    # -- charts ------------------------------------------------------------

    def chart_margins(self, X: np.ndarray) -> np.ndarray:
        """``quality - switch_below`` for every chart, shape ``(N, n_charts)``."""
        X = np.atleast_2d(X)
        margins = np.empty((len(X), len(self.charts)))
        for c, chart in enumerate(self.charts):
            margins[:, c] = chart.quality(self.ambient_to_point(c, X)) - chart.switch_below
        return margins

    def best_chart(self, X: np.ndarray) -> np.ndarray:
        if len(self.charts) == 1:
            return np.zeros(len(np.atleast_2d(X)), dtype=int)
        return np.argmax(self.chart_margins(X), axis=1)

    def preferred_charts(self, X: np.ndarray) -> np.ndarray:
        """Primary chart wherever it is well conditioned, otherwise the best one."""
        if len(self.charts) == 1:
            return np.zeros(len(np.atleast_2d(X)), dtype=int)
        margins = self.chart_margins(X)
        return np.where(margins[:, 0] >= 0.0, 0, np.argmax(margins, axis=1))

    def to_ambient(self, batch: PhaseBatch) -> tuple[np.ndarray, np.ndarray]:
        n = len(batch)
        X = np.empty((n, self.ambient_dim))
        W = np.empty((n, self.ambient_dim))
        for c in np.unique(batch.charts):
            idx = batch.charts == c
            P = batch.points[idx]
            X[idx] = self.point_to_ambient(int(c), P)
            W[idx] = self.push_forward(int(c), P, batch.velocities[idx])
        return X, W

    def from_ambient(
        self, X: np.ndarray, W: np.ndarray, charts: np.ndarray | None = None
    ) -> PhaseBatch:
        X = np.atleast_2d(X)
        W = np.atleast_2d(W)
        charts = self.preferred_charts(X) if charts is None else np.asarray(charts, dtype=int)
        charts = np.broadcast_to(charts, (len(X),)).copy()
        y = np.empty((len(X), 4))
        for c in np.unique(charts):
            idx = charts == c
            P = self.ambient_to_point(int(c), X[idx])
            y[idx, :2] = P
            y[idx, 2:] = self.pull_back(int(c), P, W[idx])
        return PhaseBatch(charts, y)

    def rechart(self, batch: PhaseBatch, charts: np.ndarray | None = None) -> PhaseBatch:
        X, W = self.to_ambient(batch)
        return self.from_ambient(X, W, charts)

    def normalize_batch(self, batch: PhaseBatch) -> PhaseBatch:
        """Wrap periodic coordinates of every row into its chart domain."""
        out = batch.copy()
        for c in np.unique(out.charts):
            idx = out.charts == c
            out.y[idx, :2] = self.charts[int(c)].domain.normalize(out.y[idx, :2])
        return out

    def speeds(self, batch: PhaseBatch) -> np.ndarray:
        out = np.empty(len(batch))
        for c in np.unique(batch.charts):
            idx = batch.charts == c
            out[idx] = self.charts[int(c)].norm(batch.points[idx], batch.velocities[idx])
        return out

    # -- unit tangents -----------------------------------------------------

    def check_domain(self, P: np.ndarray, chart: int = 0) -> None:
        P = np.atleast_2d(P)
        inside = self.charts[chart].domain.contains(P)
        if not np.all(inside):
            where = P[np.argmin(inside)]
            raise DomainError(
                "点超出坐标卡定义域",
                data={"surface": self.name, "chart": chart, "u": float(where[0]), "v": float(where[1])},
            )

    def unit_tangent(
        self, base, direction, chart: int = 0, *, normalize: bool = False
    ) -> UnitTangent:
        """Build a :class:`UnitTangent`, checking the unit-norm invariant.

        Args:
            base: ``ChartPoint`` or a pair of coordinates
            direction: chart velocity components
            chart: chart index of the coordinates
            normalize: rescale ``direction`` to unit length instead of checking it
        """
        if not isinstance(base, ChartPoint):
            base = ChartPoint(float(base[0]), float(base[1]))
        P = base.as_array()[None]
        self.check_domain(P, chart)
        V = np.asarray(direction, dtype=float)[None]
        norm = float(self.charts[chart].norm(P, V)[0])
        if normalize:
            if norm == 0.0:
                raise PreconditionError("零向量无法归一化", module="geometry")
            V = V / norm
        elif abs(norm - 1.0) > UNIT_TOLERANCE:
            raise PreconditionError(
                "方向向量不是单位向量",
                module="geometry",
                data={"norm": norm, "surface": self.name},
            )
        return UnitTangent(base, (float(V[0, 0]), float(V[0, 1])), chart)

    def directions_at(self, X: np.ndarray, angles: np.ndarray) -> PhaseBatch:
        """Unit tangents at ambient points with angles taken in an orthonormal frame."""
        X = np.atleast_2d(X)
        charts = self.preferred_charts(X)
        y = np.empty((len(X), 4))
        for c in np.unique(charts):
            idx = charts == c
            P = self.ambient_to_point(int(c), X[idx])
            e1, e2 = self.charts[int(c)].orthonormal_frame(P)
            a = np.asarray(angles)[idx][:, None]
            y[idx, :2] = P
            y[idx, 2:] = np.cos(a) * e1 + np.sin(a) * e2
        return PhaseBatch(charts, y)

    def random_unit_tangents(self, n: int, rng: np.random.Generator) -> PhaseBatch:
        X = self.sample_ambient(n, rng)
        angles = rng.uniform(0.0, 2.0 * np.pi, size=n)
        return self.directions_at(X, angles)

    def g_normalize(self, X: np.ndarray, W: np.ndarray) -> np.ndarray:
        return W / np.sqrt(self.ambient_inner(X, W, W))[:, None]

    def left_normal(self, X: np.ndarray, T: np.ndarray) -> np.ndarray:
        """Unit g-normal on the left of the g-unit ambient tangent ``T``."""
        raw = self.left_rotation(X, T)
        raw = raw - self.ambient_inner(X, raw, T)[:, None] * T
        return self.g_normalize(X, raw)
