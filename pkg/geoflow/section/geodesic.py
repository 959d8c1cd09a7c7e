"""Closed geodesics as dense periodic samples with spline interpolation."""

from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import minimize_scalar
from scipy.spatial import cKDTree

from geoflow.exceptions import ConstructionError, PreconditionError
from geoflow.flow.distances import sasaki_distances
from geoflow.flow.integrator import propagate
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import PhaseBatch, UnitTangent
from geoflow.utils.logger import log_debug

CLOSURE_TOLERANCE = 1e-6
SAMPLE_SPACING = 0.01
NEWTON_STEPS = 6


def in_box(X: np.ndarray, box: np.ndarray | None) -> np.ndarray:
    """Wrap points into ``[0, box)`` for periodic KD-trees."""
    if box is None:
        return np.asarray(X)
    X = np.mod(X, box)
    return np.where(X >= box, 0.0, X)


def kd_tree(surface: Surface, X: np.ndarray) -> cKDTree:
    box = surface.ambient_box
    return cKDTree(in_box(X, box), boxsize=box)


def return_distance(surface: Surface, X0, W0, X, W) -> np.ndarray:
    """Ambient closure residual ``|X - X0| + |W - W0|``."""
    gap = surface.ambient_difference(np.atleast_2d(X0), np.atleast_2d(X))
    return np.linalg.norm(gap, axis=1) + np.linalg.norm(np.atleast_2d(W) - np.atleast_2d(W0), axis=1)


def estimate_period(
    surface: Surface,
    v0: UnitTangent,
    period_range: tuple[float, float],
    n_grid: int = 400,
    tol: float | None = None,
) -> tuple[float, float]:
    """Time in ``period_range`` minimizing the return residual of ``v0``.

    Returns:
        (period, residual)
    """
    lo, hi = (float(x) for x in period_range)
    if not 0.0 < lo < hi:
        raise PreconditionError("周期范围必须为正且递增", module="section", data={"period_range": [lo, hi]})
    start = PhaseBatch.from_unit_tangents([v0])
    X0, W0 = surface.to_ambient(start)
    fractions = np.linspace(lo / hi, 1.0, n_grid)
    result = propagate(surface, start, hi, fractions=fractions, tol=tol)
    stacked = PhaseBatch.concatenate(result.samples)
    X, W = surface.to_ambient(stacked)
    coarse = return_distance(surface, X0, W0, X, W)
    k = int(np.argmin(coarse))
    times = fractions * hi
    spacing = times[1] - times[0]
    anchor = stacked.take([max(k - 1, 0)])
    anchor_time = times[max(k - 1, 0)]

    def residual(t: float) -> float:
        moved = propagate(surface, anchor, t - anchor_time, tol=tol).final
        Xt, Wt = surface.to_ambient(moved)
        return float(return_distance(surface, X0, W0, Xt, Wt)[0])

    bounds = (max(lo, times[k] - spacing), min(hi, times[k] + spacing))
    found = minimize_scalar(residual, bounds=bounds, method="bounded", options={"xatol": 1e-12})
    return float(found.x), float(found.fun)


class ClosedGeodesic:
    """A periodic geodesic ``γ`` with period ``L`` and its dense samples.

    Attributes:
        surface: the surface
        v0: defining initial vector
        period: arc-length period ``L``
        samples: ``PhaseBatch`` at ``n + 1`` equally spaced times in ``[0, L]``
        closure_error: ``d̃(Φ_L(v0), v0)``

    Raises:
        ConstructionError: the orbit does not close within tolerance
    """

    def __init__(
        self,
        surface: Surface,
        v0: UnitTangent,
        period: float,
        *,
        n_samples: int | None = None,
        closure_tol: float = CLOSURE_TOLERANCE,
        tol: float | None = None,
    ) -> None:
        if not period > 0:
            raise PreconditionError("周期必须为正", module="section", data={"period": period})
        self.surface = surface
        self.v0 = v0
        self.period = float(period)
        n = n_samples or max(512, int(np.ceil(self.period / SAMPLE_SPACING)))
        self.spacing = self.period / n
        result = propagate(
            surface, PhaseBatch.from_unit_tangents([v0]), self.period, fractions=np.linspace(0.0, 1.0, n + 1), tol=tol
        )
        self.samples = surface.rechart(PhaseBatch.concatenate(result.samples))
        self.closure_error = float(
            sasaki_distances(surface, self.samples.take([n]), self.samples.take([0]))[0]
        )
        if not self.closure_error < closure_tol:
            raise ConstructionError(
                "轨道在给定周期内没有闭合",
                data={"surface": surface.name, "period": self.period, "closure_error": self.closure_error},
            )
        X, W = surface.to_ambient(self.samples)
        self.points = X[:-1]
        self.velocities = W[:-1]
        steps = surface.ambient_difference(X[:-1], X[1:])
        unwrapped = X[0] + np.vstack([np.zeros((1, X.shape[1])), np.cumsum(steps, axis=0)])
        self.shift = unwrapped[-1] - unwrapped[0]
        self._times = np.linspace(0.0, self.period, n + 1)
        self._spline = CubicHermiteSpline(self._times, unwrapped, W, axis=0)
        self._d1 = self._spline.derivative()
        self._d2 = self._spline.derivative(2)
        self._tree = kd_tree(surface, self.points)
        log_debug(
            "构造",
            resource="闭测地线",
            resource_id=surface.name,
            status="完成",
            details={"period": self.period, "closure_error": self.closure_error},
        )

    def __repr__(self) -> str:
        return f"ClosedGeodesic(surface={self.surface.name!r}, period={self.period:.10g})"

    def position(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        laps = np.floor(s / self.period)
        raw = self._spline(s - laps * self.period) + laps[..., None] * self.shift
        return self.surface.project(np.atleast_2d(raw))

    def velocity(self, s) -> np.ndarray:
        s = np.mod(np.asarray(s, dtype=float), self.period)
        return np.atleast_2d(self._d1(s))

    def frame(self, s) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Point, g-unit tangent and g-unit left normal of ``γ`` at ``s``."""
        X = self.position(s)
        T = self.surface.g_normalize(X, self.velocity(s))
        return X, T, self.surface.left_normal(X, T)

    def nearest(self, X: np.ndarray) -> np.ndarray:
        """Arc-length parameter ``s*`` of the foot point of ``X`` on ``γ``."""
        X = np.atleast_2d(X)
        _, idx = self._tree.query(in_box(X, self.surface.ambient_box))
        s = idx * self.spacing
        for _ in range(NEWTON_STEPS):
            laps = np.floor(s / self.period)
            local = s - laps * self.period
            C = self._spline(local) + laps[:, None] * self.shift
            T, dT = self._d1(local), self._d2(local)
            gap = self.surface.ambient_difference(C, X)
            value = np.sum(gap * T, axis=1)
            slope = -np.sum(T * T, axis=1) + np.sum(gap * dT, axis=1)
            step = np.clip(-value / slope, -self.spacing, self.spacing)
            s = s + step
        return np.mod(s, self.period)

    def signed_distance(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """``σ(X)``: offset of ``X`` along the left normal of ``γ`` at its foot point, and ``s*``."""
        s = self.nearest(X)
        C, _, N = self.frame(s)
        return np.sum(self.surface.ambient_difference(C, X) * N, axis=1), s

    def is_simple(self) -> bool:
        """No two base samples far apart in arc length come close in the ambient model."""
        X = self.points
        n = len(X)
        steps = np.linalg.norm(self.surface.ambient_difference(X, np.roll(X, -1, axis=0)), axis=1)
        radius = 2.0 * float(np.max(steps))
        tree = kd_tree(self.surface, X)
        pairs = tree.query_pairs(radius, output_type="ndarray")
        if len(pairs) == 0:
            return True
        gap = np.abs(pairs[:, 0] - pairs[:, 1])
        gap = np.minimum(gap, n - gap)
        return bool(np.all(gap <= 8))

    def embedded_curve(self) -> np.ndarray:
        """Base samples in the surface's Euclidean embedding."""
        return self.surface.embed(self.points)

    @classmethod
    def from_guess(
        cls,
        surface: Surface,
        v0: UnitTangent,
        period_range: tuple[float, float],
        **kwargs,
    ) -> ClosedGeodesic:
        """Locate the period of ``v0`` inside ``period_range`` and build the geodesic."""
        period, _ = estimate_period(surface, v0, period_range, tol=kwargs.get("tol"))
        return cls(surface, v0, period, **kwargs)
