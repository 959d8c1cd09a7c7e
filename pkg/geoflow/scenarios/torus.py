"""Flat torus ``ℝ²/(aℤ × bℤ)``."""

from __future__ import annotations

import numpy as np

from geoflow.exceptions import ConfigurationError
from geoflow.geometry.charts import FunctionChart
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import ChartDomain


def _euclidean(P: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.eye(2), (len(P), 2, 2)).copy()


def _flat_christoffel(P: np.ndarray) -> np.ndarray:
    return np.zeros((len(P), 2, 2, 2))


class FlatTorus(Surface):
    """Single periodic chart; the ambient model is the fundamental box."""

    ambient_dim = 2

    def __init__(self, periods=(1.0, 1.0)) -> None:
        a, b = (float(x) for x in periods)
        if a <= 0 or b <= 0:
            raise ConfigurationError("环面周期必须为正", data={"torus_periods": [a, b]})
        domain = ChartDomain(lower=(0.0, 0.0), upper=(a, b), periodic=(True, True))
        chart = FunctionChart(domain, _euclidean, _flat_christoffel, name="box")
        super().__init__("flat_torus", (chart,), compact=True, params={"torus_periods": [a, b]})
        self.periods = np.array([a, b])
        self.ambient_box = self.periods
        self.injectivity_hint = 0.5 * min(a, b)

    def point_to_ambient(self, chart, P):
        return self.chart_domain.normalize(np.atleast_2d(P))

    def ambient_to_point(self, chart, X):
        return self.chart_domain.normalize(np.atleast_2d(X))

    def push_forward(self, chart, P, V):
        return np.array(V, dtype=float, copy=True)

    def pull_back(self, chart, P, W):
        return np.array(W, dtype=float, copy=True)

    def ambient_inner(self, X, W1, W2):
        return np.sum(np.atleast_2d(W1) * np.atleast_2d(W2), axis=1)

    def left_rotation(self, X, T):
        T = np.atleast_2d(T)
        return np.stack([-T[:, 1], T[:, 0]], axis=1)

    def project(self, X):
        return self.chart_domain.normalize(X)

    def ambient_difference(self, XA, XB):
        return self.chart_domain.difference(XA, XB)

    def base_distance_ambient(self, XA, XB):
        dist = np.linalg.norm(self.ambient_difference(np.atleast_2d(XA), np.atleast_2d(XB)), axis=1)
        return dist, np.zeros_like(dist)

    def transport_angle_ambient(self, XA, WA, XB, WB):
        WA, WB = np.atleast_2d(WA), np.atleast_2d(WB)
        cross = WA[:, 0] * WB[:, 1] - WA[:, 1] * WB[:, 0]
        return np.abs(np.arctan2(cross, np.sum(WA * WB, axis=1)))

    def sample_ambient(self, n, rng):
        return rng.uniform(0.0, 1.0, size=(n, 2)) * self.periods

    def embed(self, X):
        """Flat embedding in ℝ⁴ (Clifford torus scaled to the periods)."""
        X = np.atleast_2d(X)
        scale = self.periods / (2.0 * np.pi)
        angles = X / scale
        return np.concatenate(
            [scale * np.cos(angles), scale * np.sin(angles)], axis=1
        )[:, [0, 2, 1, 3]]
