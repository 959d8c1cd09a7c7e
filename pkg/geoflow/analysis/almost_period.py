"""
几乎周期搜索

``D(t) = max_x d(Φ_t x, x)`` over a fixed sample grid is evaluated on a coarse
time grid; local minima that can reach ``ε`` are refined with a bounded scalar
minimization started from the nearest stored state.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from geoflow.analysis.reports import AlmostPeriodReport, SampleSpec, WindowEntry
from geoflow.analysis.systems import FlowSystem
from geoflow.exceptions import PreconditionError
from geoflow.flow.integrator import propagate
from geoflow.geometry.types import PhaseBatch
from geoflow.utils.logger import log_info

# D is Lipschitz in t with a constant bounded by this value for unit-speed flows
LIPSCHITZ = 4.0
MAX_SPACING = 0.1


def _grid_points(flow_system: FlowSystem, spec: SampleSpec) -> PhaseBatch:
    rng = np.random.default_rng(spec.seed)
    return flow_system.surface.random_unit_tangents(spec.n_points, rng)


def _sup_distance(flow_system: FlowSystem, moved: PhaseBatch, start: PhaseBatch) -> float:
    return float(np.max(flow_system.distances(moved, start)))


def almost_period_search(
    flow_system: FlowSystem,
    epsilon: float,
    tau: float,
    sample_spec: SampleSpec | None = None,
    t_range: tuple[float, float] = (0.0, 100.0),
    spacing: float | None = None,
) -> AlmostPeriodReport:
    """Times ``t`` in ``t_range`` with ``sup_x d(Φ_t x, x) < ε``, grouped into windows of length ``τ``.

    Only full windows ``[t₀ + kτ, t₀ + (k+1)τ)`` inside ``t_range`` are
    reported; empty windows are listed with no times.
    """
    if not epsilon > 0 or not tau > 0:
        raise PreconditionError("需要 ε > 0 且 τ > 0", module="analysis", data={"epsilon": epsilon, "tau": tau})
    t0, t1 = (float(t) for t in t_range)
    if not t1 > t0:
        raise PreconditionError("时间范围无效", module="analysis", data={"t_range": [t0, t1]})
    spec = sample_spec or SampleSpec()
    surface, tol = flow_system.surface, flow_system.tol
    grid = _grid_points(flow_system, spec)

    step = spacing or min(MAX_SPACING, tau / 10.0)
    count = int(np.ceil((t1 - t0) / step)) + 1
    fractions = np.linspace(0.0, 1.0, count)
    times = t0 + fractions * (t1 - t0)
    start = grid if t0 == 0.0 else propagate(surface, grid, t0, tol=tol).final
    samples = propagate(surface, start, t1 - t0, fractions=fractions, tol=tol).samples
    D = np.array([_sup_distance(flow_system, s, grid) for s in samples])
    dt = times[1] - times[0]

    found: list[float] = []
    for j in range(count):
        left = D[j - 1] if j > 0 else np.inf
        right = D[j + 1] if j + 1 < count else np.inf
        if not (D[j] <= left and D[j] <= right):
            continue
        if D[j] < epsilon:
            found.append(float(times[j]))
            continue
        if D[j] >= epsilon + LIPSCHITZ * dt:
            continue
        anchor = max(j - 1, 0)
        state = samples[anchor]

        def sup_at(t: float, state=state, anchor=anchor) -> float:
            moved = propagate(surface, state, t - times[anchor], tol=tol).final
            return _sup_distance(flow_system, moved, grid)

        lo, hi = times[max(j - 1, 0)], times[min(j + 1, count - 1)]
        best = minimize_scalar(sup_at, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
        if best.fun < epsilon:
            found.append(float(best.x))

    windows = []
    a = t0
    while a + tau <= t1 + 1e-12:
        windows.append(WindowEntry(start=a, end=a + tau, found=[t for t in found if a <= t < a + tau]))
        a += tau
    empty = sum(1 for w in windows if not w.found)
    log_info(
        "几乎周期",
        resource="曲面",
        resource_id=surface.name,
        status="完成",
        details={"found": len(found), "windows": len(windows), "empty": empty},
    )
    return AlmostPeriodReport(
        epsilon=epsilon, tau=tau, t_range=(t0, t1), samples=spec, found=found, windows=windows
    )


def smallest_common_period(
    flow_system: FlowSystem,
    epsilon: float,
    sample_spec: SampleSpec | None = None,
    t_range: tuple[float, float] = (0.0, 20.0),
    min_period: float = 0.5,
) -> float | None:
    """Smallest ``t >= min_period`` in ``t_range`` at which the whole sample grid returns ``ε``-close."""
    t0, t1 = t_range
    report = almost_period_search(flow_system, epsilon, t1 - t0, sample_spec, t_range)
    candidates = [t for t in report.found if t >= min_period]
    return min(candidates) if candidates else None
