"""Distality: how close two orbits come over a finite two-sided horizon."""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from geoflow.analysis.reports import DistalityEntry, DistalityReport
from geoflow.analysis.systems import FlowSystem
from geoflow.exceptions import PreconditionError
from geoflow.geometry.types import PhaseBatch, UnitTangent


def _as_batches(pairs) -> tuple[PhaseBatch, PhaseBatch]:
    if isinstance(pairs, tuple) and len(pairs) == 2 and isinstance(pairs[0], PhaseBatch):
        return pairs
    pairs = list(pairs)
    return (
        PhaseBatch.from_unit_tangents([a for a, _ in pairs]),
        PhaseBatch.from_unit_tangents([b for _, b in pairs]),
    )


def distality_bound(
    flow_system: FlowSystem,
    pairs: Sequence[tuple[UnitTangent, UnitTangent]] | tuple[PhaseBatch, PhaseBatch],
    t_max: float,
    n_samples: int = 2001,
) -> DistalityReport:
    """Smallest sampled ``d(Φ_t a, Φ_t b)`` over ``t ∈ [-t_max, t_max]`` for every pair.

    The value is an upper bound on the true infimum: the orbits may come
    closer between samples or beyond the horizon.
    """
    if not t_max > 0 or n_samples < 2:
        raise PreconditionError(
            "需要 t_max > 0 且 n_samples >= 2", module="analysis", data={"t_max": t_max, "n_samples": n_samples}
        )
    A, B = _as_batches(pairs)
    if len(A) == 0:
        return DistalityReport(t_max=t_max, n_samples=n_samples, metric=flow_system.metric, entries=[])
    forward_t, forward = flow_system.separations(A, B, t_max, n_samples)
    backward_t, backward = flow_system.separations(A, B, -t_max, n_samples)
    times = np.concatenate([backward_t[::-1], forward_t])
    seps = np.concatenate([backward[::-1], forward], axis=0)
    k = np.argmin(seps, axis=0)
    entries = [
        DistalityEntry(pair=i, inf_estimate=float(seps[k[i], i]), time=float(times[k[i]]))
        for i in range(len(A))
    ]
    return DistalityReport(t_max=t_max, n_samples=n_samples, metric=flow_system.metric, entries=entries)
