"""Noncompact planes: the Euclidean plane and its exponentially stretched variant.

The stretched plane carries the metric ``f'(r)² dr² + f(r)² dφ²``. It is the
pullback of the Euclidean metric by ``F(p) = f(|p|) p/|p|``, so it is flat and
its geodesics are preimages of straight lines, but distances grow like ``e^r``.
The ambient model is the domain plane in Cartesian coordinates.
"""

from __future__ import annotations

import numpy as np

from geoflow.geometry.charts import Chart, FunctionChart
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import ChartDomain
from geoflow.scenarios.blend import Blend

SAMPLE_RADIUS = 2.0


def _euclidean(P: np.ndarray) -> np.ndarray:
    return np.broadcast_to(np.eye(2), (len(P), 2, 2)).copy()


def _flat_christoffel(P: np.ndarray) -> np.ndarray:
    return np.zeros((len(P), 2, 2, 2))


def _rotate_left(T: np.ndarray) -> np.ndarray:
    T = np.atleast_2d(T)
    return np.stack([-T[:, 1], T[:, 0]], axis=1)


def _euclidean_angle(WA: np.ndarray, WB: np.ndarray) -> np.ndarray:
    cross = WA[:, 0] * WB[:, 1] - WA[:, 1] * WB[:, 0]
    return np.abs(np.arctan2(cross, np.sum(WA * WB, axis=1)))


class PlaneSurface(Surface):
    """Shared ambient model of the two planes."""

    ambient_dim = 2

    def __init__(self, name: str, charts: tuple[Chart, ...], bound: float, params: dict) -> None:
        super().__init__(name, charts, compact=False, params=params)
        self.escape_radius = float(bound)
        self.injectivity_hint = float(bound)

    def ambient_inner(self, X, W1, W2):
        return np.sum(np.atleast_2d(W1) * np.atleast_2d(W2), axis=1)

    def left_rotation(self, X, T):
        return _rotate_left(T)

    def sample_ambient(self, n, rng):
        radius = SAMPLE_RADIUS * np.sqrt(rng.uniform(0.0, 1.0, size=n))
        angle = rng.uniform(0.0, 2.0 * np.pi, size=n)
        return np.stack([radius * np.cos(angle), radius * np.sin(angle)], axis=1)


class PlaneFlat(PlaneSurface):
    """Euclidean plane in one Cartesian chart."""

    def __init__(self, bound: float = 50.0) -> None:
        domain = ChartDomain(lower=(-bound, -bound), upper=(bound, bound))
        chart = FunctionChart(domain, _euclidean, _flat_christoffel, name="cartesian")
        super().__init__("plane_flat", (chart,), bound, {"plane_bound": bound})

    def point_to_ambient(self, chart, P):
        return np.array(np.atleast_2d(P), dtype=float, copy=True)

    def ambient_to_point(self, chart, X):
        return np.array(np.atleast_2d(X), dtype=float, copy=True)

    def push_forward(self, chart, P, V):
        return np.array(V, dtype=float, copy=True)

    def pull_back(self, chart, P, W):
        return np.array(W, dtype=float, copy=True)

    def base_distance_ambient(self, XA, XB):
        dist = np.linalg.norm(np.atleast_2d(XB) - np.atleast_2d(XA), axis=1)
        return dist, np.zeros_like(dist)

    def transport_angle_ambient(self, XA, WA, XB, WB):
        return _euclidean_angle(np.atleast_2d(WA), np.atleast_2d(WB))


class PolarChart(Chart):
    """``(r, φ)`` with metric ``diag(f'(r)², f(r)²)``."""

    name = "polar"
    switch_below = 0.3
    floor = 0.05

    def __init__(self, blend: Blend, bound: float) -> None:
        super().__init__(ChartDomain(lower=(0.0, 0.0), upper=(bound, 2.0 * np.pi), periodic=(False, True)))
        self.blend = blend

    def metric(self, P):
        r = np.atleast_2d(P)[:, 0]
        g = np.zeros((len(r), 2, 2))
        g[:, 0, 0] = self.blend.df(r) ** 2
        g[:, 1, 1] = self.blend.f(r) ** 2
        return g

    def christoffel(self, P):
        r = np.atleast_2d(P)[:, 0]
        f, df, d2f = self.blend.f(r), self.blend.df(r), self.blend.d2f(r)
        gamma = np.zeros((len(r), 2, 2, 2))
        gamma[:, 0, 0, 0] = d2f / df
        gamma[:, 0, 1, 1] = -f * df / df**2
        gamma[:, 1, 0, 1] = gamma[:, 1, 1, 0] = df / f
        return gamma

    def quality(self, P):
        return np.atleast_2d(P)[:, 0]


class StretchedCartesianChart(Chart):
    """Cartesian coordinates of the domain plane, used near the origin.

    Exactly Euclidean inside the identity zone of the profile.
    """

    name = "cartesian"
    switch_below = 0.4
    floor = -0.1

    def __init__(self, blend: Blend, bound: float) -> None:
        super().__init__(ChartDomain(lower=(-bound, -bound), upper=(bound, bound)))
        self.blend = blend

    def metric(self, P):
        P = np.atleast_2d(P)
        alpha, beta, unit = _radial_factors(self.blend, P)
        outer = np.einsum("ni,nj->nij", unit, unit)
        eye = np.broadcast_to(np.eye(2), outer.shape)
        return alpha[:, None, None] * outer + beta[:, None, None] * (eye - outer)

    def quality(self, P):
        return 0.9 - np.linalg.norm(np.atleast_2d(P), axis=1)


def _radial_factors(blend: Blend, X: np.ndarray):
    """``f'(r)²``, ``(f(r)/r)²`` and the radial unit vector; flat values inside the identity zone."""
    r = np.linalg.norm(X, axis=1)
    flat = r < blend.inner
    safe = np.where(flat, 1.0, r)
    unit = np.where(flat[:, None], np.array([1.0, 0.0]), X / safe[:, None])
    alpha = np.where(flat, 1.0, blend.df(np.where(flat, 1.0, r)) ** 2)
    beta = np.where(flat, 1.0, (blend.f(np.where(flat, 1.0, r)) / safe) ** 2)
    return alpha, beta, unit


class PlaneExp(PlaneSurface):
    """Flat plane with exponentially stretched radial metric.

    Chart 0 is polar, chart 1 is Cartesian and covers the origin.
    """

    def __init__(self, inner: float = 0.5, outer: float = 1.0, bound: float = 50.0) -> None:
        self.blend = Blend(inner, outer)
        charts = (PolarChart(self.blend, bound), StretchedCartesianChart(self.blend, bound))
        super().__init__(
            "plane_exp",
            charts,
            bound,
            {"blend_inner": inner, "blend_outer": outer, "plane_bound": bound},
        )

    def point_to_ambient(self, chart, P):
        P = np.atleast_2d(P)
        if chart == 1:
            return np.array(P, dtype=float, copy=True)
        return np.stack([P[:, 0] * np.cos(P[:, 1]), P[:, 0] * np.sin(P[:, 1])], axis=1)

    def ambient_to_point(self, chart, X):
        X = np.atleast_2d(X)
        if chart == 1:
            return np.array(X, dtype=float, copy=True)
        r = np.linalg.norm(X, axis=1)
        phi = np.mod(np.arctan2(X[:, 1], X[:, 0]), 2.0 * np.pi)
        return np.stack([r, phi], axis=1)

    def push_forward(self, chart, P, V):
        if chart == 1:
            return np.array(V, dtype=float, copy=True)
        P, V = np.atleast_2d(P), np.atleast_2d(V)
        c, s = np.cos(P[:, 1]), np.sin(P[:, 1])
        radial = np.stack([c, s], axis=1)
        angular = np.stack([-s, c], axis=1)
        return V[:, :1] * radial + (P[:, 0] * V[:, 1])[:, None] * angular

    def pull_back(self, chart, P, W):
        if chart == 1:
            return np.array(W, dtype=float, copy=True)
        P, W = np.atleast_2d(P), np.atleast_2d(W)
        c, s = np.cos(P[:, 1]), np.sin(P[:, 1])
        dr = W[:, 0] * c + W[:, 1] * s
        dphi = (-W[:, 0] * s + W[:, 1] * c) / P[:, 0]
        return np.stack([dr, dphi], axis=1)

    def ambient_inner(self, X, W1, W2):
        X, W1, W2 = map(np.atleast_2d, (X, W1, W2))
        alpha, beta, unit = _radial_factors(self.blend, X)
        a = np.sum(unit * W1, axis=1)
        b = np.sum(unit * W2, axis=1)
        return alpha * a * b + beta * (np.sum(W1 * W2, axis=1) - a * b)

    def image(self, X: np.ndarray) -> np.ndarray:
        """``F(p) = f(|p|) p/|p|`` into the Euclidean image plane."""
        X = np.atleast_2d(X)
        r = np.linalg.norm(X, axis=1)
        safe = np.where(r > 0.0, r, 1.0)
        return X * (self.blend.f(r) / safe)[:, None]

    def preimage(self, Y: np.ndarray) -> np.ndarray:
        Y = np.atleast_2d(Y)
        rho = np.linalg.norm(Y, axis=1)
        safe = np.where(rho > 0.0, rho, 1.0)
        return Y * (self.blend.inverse(rho) / safe)[:, None]

    def image_velocity(self, X: np.ndarray, W: np.ndarray) -> np.ndarray:
        """``DF(p) W`` in the image plane."""
        X, W = np.atleast_2d(X), np.atleast_2d(W)
        r = np.linalg.norm(X, axis=1)
        flat = r < self.blend.inner
        safe = np.where(flat, 1.0, r)
        unit = X / safe[:, None]
        radial = np.sum(unit * W, axis=1)[:, None]
        stretched = (
            self.blend.df(r)[:, None] * radial * unit
            + (self.blend.f(r) / safe)[:, None] * (W - radial * unit)
        )
        return np.where(flat[:, None], W, stretched)

    def preimage_velocity(self, X: np.ndarray, U: np.ndarray) -> np.ndarray:
        """``DF(p)⁻¹ U`` for image-plane vectors ``U``."""
        X, U = np.atleast_2d(X), np.atleast_2d(U)
        r = np.linalg.norm(X, axis=1)
        flat = r < self.blend.inner
        safe = np.where(flat, 1.0, r)
        unit = X / safe[:, None]
        radial = np.sum(unit * U, axis=1)[:, None]
        pulled = radial * unit / self.blend.df(r)[:, None] + (safe / self.blend.f(safe))[:, None] * (
            U - radial * unit
        )
        return np.where(flat[:, None], U, pulled)

    def base_distance_ambient(self, XA, XB):
        dist = np.linalg.norm(self.image(XB) - self.image(XA), axis=1)
        return dist, np.zeros_like(dist)

    def transport_angle_ambient(self, XA, WA, XB, WB):
        return _euclidean_angle(self.image_velocity(XA, WA), self.image_velocity(XB, WB))

    def embed(self, X):
        return self.image(X)
