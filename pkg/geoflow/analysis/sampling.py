"""Sample construction shared by the estimators."""

from __future__ import annotations

import numpy as np

from geoflow.analysis.reports import SampleSpec, TangentRecord
from geoflow.analysis.systems import FlowSystem
from geoflow.exceptions import PreconditionError
from geoflow.geometry.types import PhaseBatch, UnitTangent
from geoflow.utils.logger import log_warning

MAX_SHRINK = 60


def anchor_batch(surface, spec: SampleSpec) -> PhaseBatch:
    vectors = [a.to_unit_tangent() for a in spec.anchors]
    for v in vectors:
        surface.check_domain(v.base.as_array()[None], v.chart)
    return PhaseBatch.from_unit_tangents(vectors)


def set_anchors(spec: SampleSpec, anchors: PhaseBatch | list[UnitTangent]) -> SampleSpec:
    """Copy of ``spec`` with ``anchors`` recorded."""
    if isinstance(anchors, PhaseBatch):
        anchors = anchors.unit_tangents()
    return spec.model_copy(update={"anchors": [TangentRecord.from_unit_tangent(a) for a in anchors]})


def _move(system: FlowSystem, base: PhaseBatch, shift: np.ndarray, turn: np.ndarray, eta: np.ndarray) -> PhaseBatch:
    """Shift base points along an orthonormal frame and turn the directions, both scaled by ``eta``."""
    surface = system.surface
    out = base.copy()
    for c in np.unique(base.charts):
        idx = np.flatnonzero(base.charts == c)
        chart = surface.charts[int(c)]
        P = base.points[idx]
        e1, e2 = chart.orthonormal_frame(P)
        V = base.velocities[idx]
        angle = np.arctan2(chart.inner(P, V, e2), chart.inner(P, V, e1))
        step = 0.5 * eta[idx, None]
        Q = P + step * (shift[idx, :1] * e1 + shift[idx, 1:] * e2)
        f1, f2 = chart.orthonormal_frame(Q)
        a = (angle + 0.5 * eta[idx] * turn[idx])[:, None]
        out.y[idx, :2] = Q
        out.y[idx, 2:] = np.cos(a) * f1 + np.sin(a) * f2
    return surface.normalize_batch(out)


def perturbed_partners(
    system: FlowSystem, base: PhaseBatch, delta: float, rng: np.random.Generator
) -> tuple[PhaseBatch, PhaseBatch]:
    """Generic partners at distance ``< δ`` (base shift plus direction turn, halved until close).

    Returns:
        (A, B) restricted to the rows where a partner was found
    """
    n = len(base)
    shift = rng.normal(size=(n, 2))
    shift /= np.linalg.norm(shift, axis=1, keepdims=True)
    turn = rng.choice([-1.0, 1.0], size=n) * rng.uniform(0.5, 1.0, size=n)
    eta = np.full(n, float(delta))
    partner = base.copy()
    done = np.zeros(n, dtype=bool)
    for _ in range(MAX_SHRINK):
        todo = np.flatnonzero(~done)
        if len(todo) == 0:
            break
        moved = _move(system, base.take(todo), shift[todo], turn[todo], eta[todo])
        dist = system.distances(base.take(todo), moved)
        good = (dist > 0.0) & (dist < delta)
        partner.y[todo[good]] = moved.y[good]
        partner.charts[todo[good]] = moved.charts[good]
        done[todo[good]] = True
        eta[todo[~good]] *= 0.5
    if not np.all(done):
        log_warning(
            "采样",
            resource="扰动对",
            resource_id=system.surface.name,
            status="部分失败",
            details={"missing": int(np.count_nonzero(~done)), "delta": delta},
        )
    return base.take(done), partner.take(done)


def pair_bases(system: FlowSystem, spec: SampleSpec, rng: np.random.Generator) -> PhaseBatch:
    """Base points of the pairs at one ladder level."""
    parts = []
    if spec.mode == "uniform" and spec.n_pairs:
        parts.append(system.surface.random_unit_tangents(spec.n_pairs, rng))
    if spec.anchors:
        anchors = anchor_batch(system.surface, spec)
        parts.append(PhaseBatch.concatenate([anchors] * spec.perturbations))
    if not parts:
        raise PreconditionError(
            "没有可用的采样点: pointwise 模式需要锚点", module="analysis", data={"mode": spec.mode}
        )
    return PhaseBatch.concatenate(parts)
