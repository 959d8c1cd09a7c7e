"""Distances on the unit tangent bundle.

``sasaki`` is the computable surrogate ``d(πa, πb) + ∠(τ a, b)`` where ``τ``
is parallel transport along a minimal base path; it dominates the base
distance by construction. ``d1`` is the coordinate distance
``‖x - y‖ + ‖v - w‖`` of the plane scenarios, taken in the primary chart.
"""

from __future__ import annotations

from typing import Literal

import numpy as np

from geoflow.exceptions import PreconditionError
from geoflow.flow.integrator import flow_samples
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import PhaseBatch, UnitTangent

MetricChoice = Literal["sasaki", "d1"]

PLANE_SCENARIOS = frozenset({"plane_flat", "plane_exp"})


def sasaki_distances(surface: Surface, A: PhaseBatch, B: PhaseBatch) -> np.ndarray:
    XA, WA = surface.to_ambient(A)
    XB, WB = surface.to_ambient(B)
    base, _ = surface.base_distance_ambient(XA, XB)
    return base + surface.transport_angle_ambient(XA, WA, XB, WB)


def sasaki_distance(surface: Surface, a: UnitTangent, b: UnitTangent) -> float:
    if a == b:
        return 0.0
    batch_a = PhaseBatch.from_unit_tangents([a])
    batch_b = PhaseBatch.from_unit_tangents([b])
    return float(sasaki_distances(surface, batch_a, batch_b)[0])


def d1_distances(surface: Surface, A: PhaseBatch, B: PhaseBatch) -> np.ndarray:
    """``‖x - y‖ + ‖v - w‖`` in the coordinates of the primary chart.

    On ``plane_flat`` these are Cartesian. On ``plane_exp`` the primary chart
    is polar ``(r, φ)`` with the ``φ`` difference wrapped: the pointwise
    equicontinuity of the stretched plane is stated for this coordinate
    distance, where unit-speed geodesics have bounded coordinate velocity
    ``(ṙ, φ̇)`` away from the origin.

    Raises:
        PreconditionError: ``surface`` is not a plane scenario
    """
    if surface.name not in PLANE_SCENARIOS:
        raise PreconditionError(
            "d1 距离只适用于平面场景", module="flow", data={"surface": surface.name}
        )
    A = surface.rechart(A, np.zeros(len(A), dtype=int))
    B = surface.rechart(B, np.zeros(len(B), dtype=int))
    base = surface.chart_domain.difference(A.points, B.points)
    return np.linalg.norm(base, axis=1) + np.linalg.norm(B.velocities - A.velocities, axis=1)


def d1_distance(a: UnitTangent, b: UnitTangent, surface: Surface | None = None) -> float:
    """``‖x - y‖ + ‖v - w‖``.

    Without a surface the coordinates are taken as Cartesian plane coordinates.

    Raises:
        PreconditionError: ``surface`` is not a plane scenario
    """
    if surface is None:
        ya, yb = a.as_array(), b.as_array()
        return float(np.linalg.norm(ya[:2] - yb[:2]) + np.linalg.norm(ya[2:] - yb[2:]))
    batch_a = PhaseBatch.from_unit_tangents([a])
    batch_b = PhaseBatch.from_unit_tangents([b])
    return float(d1_distances(surface, batch_a, batch_b)[0])


def batch_distances(surface: Surface, A: PhaseBatch, B: PhaseBatch, metric: MetricChoice) -> np.ndarray:
    if metric == "sasaki":
        return sasaki_distances(surface, A, B)
    if metric == "d1":
        return d1_distances(surface, A, B)
    raise PreconditionError(f"未知距离: {metric}", module="flow")


def pair_separations(
    surface: Surface,
    A: PhaseBatch,
    B: PhaseBatch,
    t_max: float,
    n_samples: int,
    metric: MetricChoice = "sasaki",
    tol: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Distances of ``Φ_t(A_i)`` and ``Φ_t(B_i)`` on a time grid, shape ``(n_samples, N)``.

    ``t_max`` may be negative for backward flow.
    """
    n = len(A)
    times, samples, _ = flow_samples(surface, PhaseBatch.concatenate([A, B]), t_max, n_samples, tol)
    out = np.empty((n_samples, n))
    for k, sample in enumerate(samples):
        out[k] = batch_distances(
            surface, sample.take(slice(0, n)), sample.take(slice(n, 2 * n)), metric
        )
    return times, out


def flow_pair_separation(
    surface: Surface,
    a: UnitTangent,
    b: UnitTangent,
    t_max: float,
    metric_choice: MetricChoice = "sasaki",
    n_samples: int = 201,
    tol: float | None = None,
) -> list[tuple[float, float]]:
    """Sampled ``d(Φ_t a, Φ_t b)`` for ``t`` in ``[0, t_max]``."""
    if not t_max > 0 or n_samples < 2:
        raise PreconditionError(
            "需要 t_max > 0 且 n_samples >= 2", module="flow", data={"t_max": t_max, "n_samples": n_samples}
        )
    times, seps = pair_separations(
        surface,
        PhaseBatch.from_unit_tangents([a]),
        PhaseBatch.from_unit_tangents([b]),
        t_max,
        n_samples,
        metric_choice,
        tol,
    )
    return [(float(t), float(d)) for t, d in zip(times, seps[:, 0], strict=True)]
