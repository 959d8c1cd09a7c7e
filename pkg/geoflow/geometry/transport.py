"""Parallel transport along base curves."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from geoflow.exceptions import DomainError, NumericalError
from geoflow.geometry.charts import Chart
from geoflow.geometry.surface import Surface

# 批量路径: τ -> (点, 速度), 形状均为 (N, 2)
BatchPath = Callable[[float], tuple[np.ndarray, np.ndarray]]

TRANSPORT_TOL = 1e-11
_DOMAIN_SAMPLES = 257


@dataclass(frozen=True)
class BaseCurve:
    """A base curve ``c(τ)``, ``τ ∈ [0, 1]``, in the coordinates of one chart."""

    position: Callable[[float], np.ndarray]
    velocity: Callable[[float], np.ndarray]
    chart: int = 0

    @classmethod
    def from_samples(cls, points, chart: int = 0) -> BaseCurve:
        """Cubic spline through chart points taken at uniform parameters."""
        points = np.asarray(points, dtype=float)
        if len(points) == 1:
            points = np.vstack([points, points])
        spline = CubicSpline(np.linspace(0.0, 1.0, len(points)), points, axis=0)
        derivative = spline.derivative()
        return cls(lambda tau: spline(tau), lambda tau: derivative(tau), chart)

    @classmethod
    def from_function(
        cls,
        position: Callable[[float], np.ndarray],
        velocity: Callable[[float], np.ndarray],
        chart: int = 0,
    ) -> BaseCurve:
        return cls(position, velocity, chart)

    def samples(self, n: int = _DOMAIN_SAMPLES) -> np.ndarray:
        return np.array([self.position(t) for t in np.linspace(0.0, 1.0, n)])


def transport_batch(chart: Chart, path: BatchPath, W0: np.ndarray, tol: float = TRANSPORT_TOL):
    """Transport chart vectors ``W0`` along a batch of paths ``τ ∈ [0, 1]``.

    Solves ``dw^k/dτ = -Γ^k_ij(c) ċ^i w^j`` for every row at once.
    """
    W0 = np.atleast_2d(np.asarray(W0, dtype=float))
    n = len(W0)

    def rhs(tau, flat):
        P, dP = path(tau)
        w = flat.reshape(n, 2)
        gamma = chart.christoffel(P)
        return -np.einsum("nkij,ni,nj->nk", gamma, dP, w).ravel()

    scaled = tol / np.sqrt(max(2 * n, 1))
    sol = solve_ivp(rhs, (0.0, 1.0), W0.ravel(), method="RK45", rtol=scaled, atol=scaled)
    if not sol.success:
        raise NumericalError(f"平行移动积分失败: {sol.message}", module="geometry")
    return sol.y[:, -1].reshape(n, 2)


def curve_lengths(chart: Chart, path: BatchPath, order: int = 32) -> np.ndarray:
    """Metric lengths of a batch of paths by Gauss-Legendre quadrature."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    taus = 0.5 * (nodes + 1.0)
    total = 0.0
    for tau, weight in zip(taus, weights, strict=True):
        P, dP = path(float(tau))
        total = total + 0.5 * weight * chart.norm(P, dP)
    return np.asarray(total)


def parallel_transport(surface: Surface, along: BaseCurve, w) -> np.ndarray:
    """Parallel transport of the chart vector ``w`` along ``along``.

    Raises:
        DomainError: the curve leaves the chart domain.
    """
    chart = surface.charts[along.chart]
    samples = along.samples()
    inside = chart.domain.contains(samples)
    if not np.all(inside):
        where = samples[np.argmin(inside)]
        raise DomainError(
            "平行移动曲线超出坐标卡定义域",
            data={"surface": surface.name, "u": float(where[0]), "v": float(where[1])},
        )
    w = np.asarray(w, dtype=float)
    if np.allclose(samples, samples[0], rtol=0.0, atol=0.0):
        return w.copy()

    def path(tau):
        return (
            np.asarray(along.position(tau), dtype=float)[None],
            np.asarray(along.velocity(tau), dtype=float)[None],
        )

    return transport_batch(chart, path, w[None])[0]
