"""Closed-form geodesics for the catalog surfaces that have them."""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from geoflow.exceptions import PreconditionError
from geoflow.flow.types import FlowState
from geoflow.geometry.surface import Surface
from geoflow.geometry.transport import curve_lengths
from geoflow.geometry.types import ChartPoint, PhaseBatch, UnitTangent
from geoflow.scenarios.plane import PlaneExp, PlaneFlat
from geoflow.scenarios.sphere_like import RoundSphere
from geoflow.scenarios.torus import FlatTorus
from geoflow.utils.logger import log_info

UNIT_TOLERANCE = 1e-9


def _cross(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def oracle_geodesic_plane_exp(x, v, t: float, surface: PlaneExp | None = None) -> FlowState:
    """Exact geodesic of the stretched plane through the image data ``(x, v)``.

    ``x`` and ``v`` live in the Euclidean image plane; the result is the
    preimage of the straight line ``x + t v`` in polar coordinates, with the
    angle unwrapped continuously along the line.

    Raises:
        PreconditionError: ``v`` is not a unit vector
    """
    surface = surface or PlaneExp()
    blend = surface.blend
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if abs(np.linalg.norm(v) - 1.0) > UNIT_TOLERANCE:
        raise PreconditionError("方向必须是单位向量", module="scenarios", data={"v": v.tolist()})
    g = x + t * v
    rho = float(np.linalg.norm(g))
    if rho == 0.0:
        # 直线恰好过原点: 取右连续极限
        log_info("解析解", resource="曲面", resource_id=surface.name, status="径向穿越", details={"t": t})
        return FlowState(ChartPoint(0.0, float(np.mod(np.arctan2(v[1], v[0]), 2.0 * np.pi))), (1.0, 0.0), t)

    if np.linalg.norm(x) > 0.0:
        phi = np.arctan2(x[1], x[0]) + np.arctan2(_cross(x, g), float(x @ g))
        closest = -float(x @ v)
        if abs(_cross(x, v)) == 0.0 and min(0.0, t) < closest < max(0.0, t):
            log_info("解析解", resource="曲面", resource_id=surface.name, status="径向穿越", details={"t": closest})
    else:
        direction = v if t > 0 else -v
        phi = np.arctan2(direction[1], direction[0])
    r = float(blend.inverse(rho))
    dr = float(g @ v) / (rho * float(blend.df(r)))
    dphi = _cross(g, v) / rho**2
    return FlowState(ChartPoint(r, float(np.mod(phi, 2.0 * np.pi))), (dr, dphi), float(t))


def _single(surface: Surface, X: np.ndarray, W: np.ndarray, t: float) -> FlowState:
    batch = surface.from_ambient(X[None], W[None])
    return FlowState.from_row(batch.y[0], t, batch.charts[0])


def oracle_flow(surface: Surface, v: UnitTangent, t: float) -> FlowState | None:
    """Exact ``Φ_t(v)`` where a closed form exists, otherwise ``None``."""
    X, W = surface.to_ambient(PhaseBatch.from_unit_tangents([v]))
    X, W = X[0], W[0]
    if isinstance(surface, RoundSphere):
        radius = surface.radius
        c, s = np.cos(t / radius), np.sin(t / radius)
        return _single(surface, X * c + radius * W * s, W * c - X * s / radius, t)
    if isinstance(surface, (FlatTorus, PlaneFlat)):
        return _single(surface, surface.project((X + t * W)[None])[0], W, t)
    if isinstance(surface, PlaneExp):
        image = surface.image(X[None])[0]
        direction = surface.image_velocity(X[None], W[None])[0]
        return oracle_geodesic_plane_exp(image, direction / np.linalg.norm(direction), t, surface)
    return None


def log_radial_gap(x, v, y, w, t: float) -> float:
    """``|f⁻¹(|x + tv|) - f⁻¹(|y + tw|)|`` in the logarithmic zone, as ½ ln of a ratio in ``1/t``."""
    if t == 0:
        raise PreconditionError("t 不能为 0", module="scenarios")
    (a0, b0), (a1, b1) = np.asarray(x, dtype=float), np.asarray(v, dtype=float)
    (n0, m0), (n1, m1) = np.asarray(y, dtype=float), np.asarray(w, dtype=float)
    num = (a0**2 + b0**2) / t**2 + 2.0 * (a0 * a1 + b0 * b1) / t + a1**2 + b1**2
    den = (n0**2 + m0**2) / t**2 + 2.0 * (n0 * n1 + m0 * m1) / t + n1**2 + m1**2
    return abs(0.5 * float(np.log(num / den)))


def direction_divergence(
    x, v, angle: float, bound: float, t_max: float, surface: PlaneExp | None = None
) -> float | None:
    """First time two oracle geodesics from ``x`` with directions ``angle`` apart are ``bound`` apart.

    Returns ``None`` when the base distance stays below ``bound`` on ``[0, t_max]``.
    """
    surface = surface or PlaneExp()
    v = np.asarray(v, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    w = np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])

    def gap(t: float) -> float:
        a = oracle_geodesic_plane_exp(x, v, t, surface)
        b = oracle_geodesic_plane_exp(x, w, t, surface)
        P = np.array([[a.base.u, a.base.v], [b.base.u, b.base.v]])
        X = surface.point_to_ambient(0, P)
        return float(surface.base_distance_ambient(X[:1], X[1:])[0][0]) - bound

    lo, hi = 0.0, 1.0
    while gap(hi) < 0.0:
        if hi >= t_max:
            return None
        lo, hi = hi, min(2.0 * hi, t_max)
    return float(brentq(gap, lo, hi, xtol=1e-9))


def segment_length(surface: PlaneExp, y0, y1) -> float:
    """h-length of the preimage of the image-plane segment ``[y0, y1]``."""
    y0, y1 = np.asarray(y0, dtype=float), np.asarray(y1, dtype=float)
    step = y1 - y0

    def path(tau: float):
        P = surface.preimage((y0 + tau * step)[None])
        return P, surface.preimage_velocity(P, step[None])

    return float(curve_lengths(surface.charts[1], path)[0])
