"""Batch integration of the geodesic flow.

The geodesic equation ``ü^k + Γ^k_ij u̇^i u̇^j = 0`` of every orbit in a batch
is stacked into one system and handed to ``solve_ivp`` (RK45). Time is
rescaled to ``τ ∈ [0, 1]`` with ``dy_j/dτ = d_j · f(y_j)``, so each row runs
for its own duration ``d_j`` (negative for backward flow). Integration
proceeds in chunks; between chunks rows whose chart quality dropped below the
switch threshold move to their best chart, and rows past the escape radius of
a noncompact surface are frozen.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import solve_ivp

from geoflow.exceptions import NumericalError, OrbitEscapeError, PreconditionError, StiffnessError
from geoflow.flow.types import FlowState, Propagation, Trajectory
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import PhaseBatch, UnitTangent
from geoflow.settings import configs
from geoflow.utils.logger import log_debug, log_info

MIN_CHUNK = 1e-12


def _resolve_tol(tol: float | None) -> float:
    tol = configs.numerics.tol if tol is None else float(tol)
    if not tol > 0:
        raise PreconditionError("积分容差必须为正", module="flow", data={"tol": tol})
    return tol


def _qualities(surface: Surface, batch: PhaseBatch) -> np.ndarray:
    out = np.full(len(batch), np.inf)
    for c in np.unique(batch.charts):
        idx = batch.charts == c
        out[idx] = surface.charts[int(c)].quality(batch.points[idx])
    return out


def _chart_attr(surface: Surface, charts: np.ndarray, attr: str) -> np.ndarray:
    table = np.array([getattr(chart, attr) for chart in surface.charts], dtype=float)
    return table[charts]


def _make_rhs(surface: Surface, charts: np.ndarray, scale: np.ndarray):
    n = len(charts)
    groups = [
        (int(c), np.flatnonzero((charts == c) & (scale != 0.0)))
        for c in np.unique(charts)
    ]

    def rhs(tau, flat):
        y = flat.reshape(n, 4)
        out = np.zeros_like(y)
        for c, idx in groups:
            if len(idx) == 0:
                continue
            P, V = y[idx, :2], y[idx, 2:]
            gamma = surface.charts[c].christoffel(P)
            out[idx, :2] = V
            out[idx, 2:] = -np.einsum("nkij,ni,nj->nk", gamma, V, V)
        out *= scale[:, None]
        return out.ravel()

    return rhs


def _switch_charts(surface: Surface, state: PhaseBatch, active: np.ndarray) -> int:
    if len(surface.charts) == 1:
        return 0
    quality = _qualities(surface, state)
    low = active & (quality < _chart_attr(surface, state.charts, "switch_below"))
    if not np.any(low):
        return 0
    X, W = surface.to_ambient(state.take(low))
    moved = surface.from_ambient(X, W, surface.best_chart(X))
    state.y[low] = moved.y
    state.charts[low] = moved.charts
    return int(np.count_nonzero(low))


def _chunk_length(
    surface: Surface, state: PhaseBatch, active: np.ndarray, durations: np.ndarray, radius: np.ndarray
) -> float:
    span = np.abs(durations[active])
    if len(span) == 0:
        return np.inf
    floors = _chart_attr(surface, state.charts[active], "floor")
    limit = np.inf
    finite = np.isfinite(floors)
    if np.any(finite):
        quality = _qualities(surface, state.take(active))[finite]
        rates = _chart_attr(surface, state.charts[active], "quality_rate")[finite]
        limit = min(limit, float(np.min((quality - floors[finite]) / rates / span[finite])))
    if surface.escape_radius is not None:
        room = surface.escape_radius - radius[active] + 1.0
        limit = min(limit, float(np.min(room / span)))
    return max(limit, MIN_CHUNK)


def _renormalize(surface: Surface, y: np.ndarray, charts: np.ndarray, threshold: float):
    batch = PhaseBatch(charts, y)
    speeds = surface.speeds(batch)
    drift = np.abs(speeds - 1.0)
    fix = drift > threshold
    if np.any(fix):
        y[fix, 2:] /= speeds[fix, None]
    return float(np.max(drift, initial=0.0)), int(np.count_nonzero(fix))


def propagate(
    surface: Surface,
    batch: PhaseBatch,
    durations,
    *,
    fractions=None,
    tol: float | None = None,
) -> Propagation:
    """Flow every row of ``batch`` for its duration.

    Args:
        surface: the surface
        batch: initial unit tangents
        durations: scalar or one duration per row (sign gives the direction)
        fractions: increasing values in ``[0, 1]``; states at ``fraction * duration`` are returned
        tol: local error target (defaults to ``configs.numerics.tol``)

    Raises:
        StiffnessError: the step size underflowed
        NumericalError: the state became non-finite
    """
    tol = _resolve_tol(tol)
    n = len(batch)
    durations = np.broadcast_to(np.asarray(durations, dtype=float), (n,)).copy()
    fractions = np.asarray([] if fractions is None else fractions, dtype=float)
    if np.any(np.diff(fractions) < 0) or np.any((fractions < 0) | (fractions > 1)):
        raise PreconditionError("采样比例必须在 [0, 1] 内递增", module="flow")

    state = batch.copy()
    escaped = np.zeros(n, dtype=bool)
    escape_times = np.full(n, np.nan)
    sample_y = np.broadcast_to(state.y, (len(fractions), n, 4)).copy()
    sample_charts = np.broadcast_to(state.charts, (len(fractions), n)).copy()
    scaled = tol / np.sqrt(max(4 * n, 1))
    switches = 0
    tau = 0.0

    while True:
        radius = np.zeros(n)
        if surface.escape_radius is not None and n:
            X, _ = surface.to_ambient(state)
            radius = np.linalg.norm(X, axis=1)
            newly = (radius > surface.escape_radius) & ~escaped & (durations != 0.0)
            if np.any(newly):
                escaped |= newly
                escape_times[newly] = tau * durations[newly]
                log_info(
                    "积分",
                    resource="曲面",
                    resource_id=surface.name,
                    status="轨道逃逸",
                    details={"rows": int(np.count_nonzero(newly)), "radius": surface.escape_radius},
                )
        active = ~escaped & (durations != 0.0)
        if tau >= 1.0 or not np.any(active):
            break

        moved = _switch_charts(surface, state, active)
        if moved:
            switches += moved
            log_debug("换卡", resource="曲面", resource_id=surface.name, details={"rows": moved, "tau": tau})

        end = min(1.0, tau + _chunk_length(surface, state, active, durations, radius))
        if 1.0 - end < MIN_CHUNK:
            end = 1.0
        inside = np.flatnonzero((fractions > tau) & (fractions <= end))
        t_eval = np.unique(np.append(fractions[inside], end))
        scale = np.where(active, durations, 0.0)
        sol = solve_ivp(
            _make_rhs(surface, state.charts, scale),
            (tau, end),
            state.y.ravel(),
            method="RK45",
            rtol=scaled,
            atol=scaled,
            t_eval=t_eval,
        )
        if sol.status == -1:
            raise StiffnessError(
                f"积分步长下溢: {sol.message}",
                data={"surface": surface.name, "tau": tau, "rows": n},
            )
        if not np.all(np.isfinite(sol.y)):
            raise NumericalError("积分状态出现非有限值", module="flow", data={"surface": surface.name, "tau": tau})
        for k in inside:
            j = int(np.searchsorted(sol.t, fractions[k]))
            sample_y[k] = sol.y[:, j].reshape(n, 4)
            sample_charts[k] = state.charts
        state.y = sol.y[:, -1].reshape(n, 4).copy()
        tau = end

    for k in np.flatnonzero(escaped):
        # 冻结行在逃逸之后的采样保持逃逸时的状态
        late = np.flatnonzero(fractions * abs(durations[k]) > abs(escape_times[k]))
        sample_y[late, k] = state.y[k]
        sample_charts[late, k] = state.charts[k]

    threshold = configs.numerics.renormalize_above
    max_drift, renormalized = _renormalize(surface, state.y, state.charts, threshold)
    samples = []
    for k in range(len(fractions)):
        drift, count = _renormalize(surface, sample_y[k], sample_charts[k], threshold)
        max_drift = max(max_drift, drift)
        renormalized += count
        samples.append(surface.normalize_batch(PhaseBatch(sample_charts[k], sample_y[k])))
    if renormalized:
        log_debug("重归一化", resource="曲面", resource_id=surface.name, details={"rows": renormalized})

    return Propagation(
        final=surface.normalize_batch(state),
        samples=samples,
        escaped=escaped,
        escape_times=escape_times,
        renormalized=renormalized,
        max_drift=max_drift,
        switches=switches,
    )


def flow_batch(surface: Surface, batch: PhaseBatch, t, tol: float | None = None) -> PhaseBatch:
    """``Φ_t`` of every row, reported in the preferred charts."""
    result = propagate(surface, batch, t, tol=tol)
    return surface.rechart(result.final)


def flow_samples(
    surface: Surface, batch: PhaseBatch, t_max: float, n_samples: int, tol: float | None = None
) -> tuple[np.ndarray, list[PhaseBatch], Propagation]:
    """States of every row at ``n_samples`` equally spaced times in ``[0, t_max]``."""
    fractions = np.linspace(0.0, 1.0, n_samples)
    result = propagate(surface, batch, t_max, fractions=fractions, tol=tol)
    return fractions * t_max, result.samples, result


def geodesic_flow(surface: Surface, v: UnitTangent, t: float, tol: float | None = None) -> UnitTangent:
    """``Φ_t(v)``.

    Raises:
        OrbitEscapeError: the orbit left the declared bounds of a noncompact surface
        StiffnessError: the step size underflowed
    """
    _resolve_tol(tol)
    surface.check_domain(v.base.as_array()[None], v.chart)
    if t == 0:
        return v
    batch = PhaseBatch.from_unit_tangents([v])
    result = propagate(surface, batch, float(t), tol=tol)
    if result.escaped[0]:
        raise OrbitEscapeError(
            data={
                "surface": surface.name,
                "escape_time": float(result.escape_times[0]),
                "state": result.final.y[0].tolist(),
            }
        )
    return surface.rechart(result.final).unit_tangent(0)


def integrate(
    surface: Surface, v: UnitTangent, t_max: float, n_samples: int = 201, tol: float | None = None
) -> Trajectory:
    """Sample ``γ_v`` on ``[0, t_max]`` with speed and Clairaut diagnostics.

    Escaping orbits are truncated at the escape time and flagged in the
    diagnostics instead of raising.
    """
    if not t_max > 0 or n_samples < 2:
        raise PreconditionError(
            "需要 t_max > 0 且 n_samples >= 2", module="flow", data={"t_max": t_max, "n_samples": n_samples}
        )
    surface.check_domain(v.base.as_array()[None], v.chart)
    times, samples, result = flow_samples(
        surface, PhaseBatch.from_unit_tangents([v]), t_max, n_samples, tol
    )
    stacked = surface.rechart(PhaseBatch.concatenate(samples))
    escape_time = float(result.escape_times[0]) if result.escaped[0] else None
    keep = times if escape_time is None else times[times <= escape_time]
    states = [FlowState.from_row(stacked.y[i], keep[i], stacked.charts[i]) for i in range(len(keep))]
    trajectory = Trajectory(
        states=states,
        surface=surface,
        renormalized=result.renormalized,
        escaped=escape_time is not None,
        escape_time=escape_time,
    )
    trajectory.max_speed_drift = max(result.max_drift, float(np.max(trajectory.speed_drifts())))
    clairaut = trajectory.clairaut_values()
    if clairaut is not None:
        trajectory.max_clairaut_drift = float(np.max(np.abs(clairaut - clairaut[0])))
    log_debug(
        "积分",
        resource="曲面",
        resource_id=surface.name,
        status="完成",
        details={"t_max": t_max, "switches": result.switches},
    )
    return trajectory
