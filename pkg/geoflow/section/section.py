"""Return map of the geodesic flow on the annulus of vectors crossing a closed geodesic.

A unit vector at ``γ(s)`` making angle ``πθ`` with ``γ̇(s)`` (measured towards
the left normal) has section coordinates ``(s, θ)``. Crossings are located as
sign changes of the signed offset ``σ`` from ``γ`` inside a tubular strip and
refined by bisection in time.

Two crossing modes are available. ``transversal`` counts every transversal
crossing and reports the unsigned crossing angle, so a crossing towards the
right side is folded onto the left one. ``same_side`` counts only crossings
towards the left side.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from geoflow.exceptions import ConstructionError, HorizonError, PreconditionError, TangencyError
from geoflow.flow.integrator import propagate
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import PhaseBatch, UnitTangent
from geoflow.section.compactify import SectionCoord
from geoflow.section.geodesic import ClosedGeodesic
from geoflow.settings import configs
from geoflow.utils.logger import log_debug, log_warning

CrossingMode = Literal["transversal", "same_side"]

STRIP_FRACTION = 0.1
SAMPLES_PER_PERIOD = 200
WINDOW_SAMPLES = 64
ON_GEODESIC_TOLERANCE = 1e-8


@dataclass
class ReturnBatch:
    """Outcome of one return-map step for a batch of coordinates.

    ``coords`` and ``times`` are nan where ``ok`` is false; ``failures``
    describes those rows.
    """

    coords: np.ndarray
    times: np.ndarray
    ok: np.ndarray
    states: PhaseBatch
    failures: list[dict] = field(default_factory=list)


class Section:
    """Transversal section along a simple closed geodesic.

    Args:
        surface: the surface
        geodesic: the closed geodesic ``γ``
        mode: crossing mode
        guard: tangency guard ``θ_min``
        horizon: time horizon for one return
        tol: integrator tolerance
    """

    def __init__(
        self,
        surface: Surface,
        geodesic: ClosedGeodesic,
        *,
        mode: CrossingMode = "transversal",
        guard: float | None = None,
        horizon: float | None = None,
        tol: float | None = None,
        bisection_tol: float | None = None,
    ) -> None:
        numerics = configs.numerics
        if mode not in ("transversal", "same_side"):
            raise PreconditionError(f"未知穿越模式: {mode}", module="section")
        self.surface = surface
        self.geodesic = geodesic
        self.mode = mode
        self.guard = numerics.tangency_guard if guard is None else float(guard)
        self.horizon = numerics.return_horizon if horizon is None else float(horizon)
        self.tol = tol
        self.bisection_tol = numerics.bisection_tol if bisection_tol is None else float(bisection_tol)
        self.strip = STRIP_FRACTION * surface.injectivity_hint
        self.spacing = min(0.5 * self.strip / surface.speed_bound, geodesic.period / SAMPLES_PER_PERIOD)

    def __repr__(self) -> str:
        return f"Section(surface={self.surface.name!r}, period={self.period:.10g}, mode={self.mode!r})"

    @property
    def period(self) -> float:
        return self.geodesic.period

    # -- coordinates -------------------------------------------------------

    def check_guard(self, theta) -> None:
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        bad = (theta <= self.guard) | (theta >= 1.0 - self.guard)
        if np.any(bad):
            raise TangencyError(
                data={"theta": float(theta[np.argmax(bad)]), "guard": self.guard},
            )

    def coords_to_batch(self, coords) -> PhaseBatch:
        """Unit tangents on the left side of ``γ`` for rows ``(s, θ)``."""
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        X, T, N = self.geodesic.frame(coords[:, 0])
        angle = np.pi * coords[:, 1:2]
        return self.surface.from_ambient(X, np.cos(angle) * T + np.sin(angle) * N)

    def crossing_coords(self, batch: PhaseBatch) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(s, θ)`` of states lying on ``γ``, their side (+1 left, -1 right) and offsets ``σ``."""
        X, W = self.surface.to_ambient(batch)
        sigma, s = self.geodesic.signed_distance(X)
        _, T, N = self.geodesic.frame(s)
        along = self.surface.ambient_inner(X, W, T)
        across = self.surface.ambient_inner(X, W, N)
        angle = np.arctan2(across, along)
        side = np.where(across >= 0.0, 1, -1)
        theta = np.abs(angle) / np.pi
        return np.stack([s, theta], axis=1), side, sigma

    def to_unit_tangent(self, c: SectionCoord) -> UnitTangent:
        return self.coords_to_batch(c.as_array()).unit_tangent(0)

    def from_unit_tangent(self, v: UnitTangent) -> SectionCoord:
        """Section coordinates of a vector based on ``γ``.

        Raises:
            PreconditionError: the base point is not on ``γ``, or (same-side
                mode) the vector points to the right of ``γ``
        """
        coords, side, sigma = self.crossing_coords(PhaseBatch.from_unit_tangents([v]))
        if abs(sigma[0]) > ON_GEODESIC_TOLERANCE:
            raise PreconditionError("基点不在闭测地线上", module="section", data={"offset": float(sigma[0])})
        if self.mode == "same_side" and side[0] < 0:
            raise PreconditionError("向量不在 A0 一侧", module="section")
        return SectionCoord(float(coords[0, 0]), float(coords[0, 1]))

    # -- crossing detection ------------------------------------------------

    def _sigma_series(self, samples: list[PhaseBatch]) -> np.ndarray:
        stacked = PhaseBatch.concatenate(samples)
        X, _ = self.surface.to_ambient(stacked)
        sigma, _ = self.geodesic.signed_distance(X)
        return sigma.reshape(len(samples), -1)

    def _brackets(self, sigma: np.ndarray, forward: bool) -> np.ndarray:
        """``mask[k, i]``: a counted crossing of row ``i`` lies between samples ``k`` and ``k + 1``."""
        a, b = sigma[:-1], sigma[1:]
        change = ((a * b) < 0.0) | ((b == 0.0) & (a != 0.0))
        change &= (np.abs(a) < self.strip) & (np.abs(b) < self.strip)
        if self.mode == "same_side":
            rising = b > a if forward else a > b
            change &= rising
        return change

    def _refine(
        self, left: PhaseBatch, sigma_left: np.ndarray, width: np.ndarray
    ) -> tuple[PhaseBatch, np.ndarray]:
        """Bisect each bracket ``[0, width]`` (signed) started from ``left``; returns states and offsets."""
        lo = np.zeros(len(left))
        hi = np.asarray(width, dtype=float).copy()
        state = left.copy()
        sign_lo = np.sign(sigma_left)
        while np.max(np.abs(hi - lo), initial=0.0) > self.bisection_tol:
            mid = 0.5 * (lo + hi)
            moved = propagate(self.surface, state, mid - lo, tol=self.tol).final
            X, _ = self.surface.to_ambient(moved)
            sigma, _ = self.geodesic.signed_distance(X)
            keep_left = (np.sign(sigma) == sign_lo) & (sigma != 0.0)
            lo = np.where(keep_left, mid, lo)
            hi = np.where(keep_left, hi, mid)
            state.y[keep_left] = moved.y[keep_left]
            state.charts[keep_left] = moved.charts[keep_left]
        crossing = propagate(self.surface, state, hi - lo, tol=self.tol).final
        return self.surface.rechart(crossing), hi

    def _scan(self, start: PhaseBatch, duration: float) -> tuple[np.ndarray, list[PhaseBatch], np.ndarray, object]:
        count = max(int(np.ceil(abs(duration) / self.spacing)), 1) + 1
        fractions = np.linspace(0.0, 1.0, count)
        result = propagate(self.surface, start, duration, fractions=fractions, tol=self.tol)
        sigma = self._sigma_series(result.samples)
        return fractions * duration, result.samples, sigma, result

    def return_map_batch(self, coords) -> ReturnBatch:
        """One step of the return map for every row ``(s, θ)``."""
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        self.check_guard(coords[:, 1])
        n = len(coords)
        state = self.coords_to_batch(coords)
        pending = np.arange(n)
        elapsed = 0.0
        window = WINDOW_SAMPLES * self.spacing
        found_rows: list[np.ndarray] = []
        found_left: list[PhaseBatch] = []
        found_sigma: list[np.ndarray] = []
        found_width: list[np.ndarray] = []
        found_start: list[np.ndarray] = []
        failures: list[dict] = []

        while len(pending) and elapsed < self.horizon:
            duration = min(window, self.horizon - elapsed)
            times, samples, sigma, result = self._scan(state, duration)
            mask = self._brackets(sigma, forward=True)
            if elapsed == 0.0:
                mask[0] = False
            hit = mask.any(axis=0)
            first = np.argmax(mask, axis=0)
            for i in np.flatnonzero(result.escaped & ~hit):
                failures.append({"row": int(pending[i]), "reason": "escape", "time": elapsed})
            rows = np.flatnonzero(hit)
            if len(rows):
                k = first[rows]
                stacked = PhaseBatch.concatenate([samples[int(j)].take([int(r)]) for j, r in zip(k, rows, strict=True)])
                found_rows.append(pending[rows])
                found_left.append(stacked)
                found_sigma.append(sigma[k, rows])
                found_width.append(times[k + 1] - times[k])
                found_start.append(elapsed + times[k])
            keep = ~hit & ~result.escaped
            pending = pending[keep]
            state = result.final.take(keep)
            elapsed += duration

        for r in pending:
            failures.append({"row": int(r), "reason": "horizon", "time": elapsed, "coords": coords[r].tolist()})

        out_coords = np.full((n, 2), np.nan)
        out_times = np.full(n, np.nan)
        ok = np.zeros(n, dtype=bool)
        out_states = self.coords_to_batch(coords)
        if found_rows:
            rows = np.concatenate(found_rows)
            crossing, offset = self._refine(
                PhaseBatch.concatenate(found_left), np.concatenate(found_sigma), np.concatenate(found_width)
            )
            landed, _, _ = self.crossing_coords(crossing)
            out_coords[rows] = landed
            out_times[rows] = np.concatenate(found_start) + offset
            ok[rows] = True
            out_states.y[rows] = crossing.y
            out_states.charts[rows] = crossing.charts
            near = (landed[:, 1] <= self.guard) | (landed[:, 1] >= 1.0 - self.guard)
            for i in np.flatnonzero(near):
                log_warning(
                    "回归映射",
                    resource="截面",
                    resource_id=self.surface.name,
                    status="近切穿越",
                    details={"theta": float(landed[i, 1]), "guard": self.guard},
                )
        if failures:
            log_warning(
                "回归映射",
                resource="截面",
                resource_id=self.surface.name,
                status="未找到穿越",
                details={"rows": len(failures), "horizon": self.horizon},
            )
        return ReturnBatch(out_coords, out_times, ok, out_states, failures)

    def crossing_times(self, coords, t_end: float) -> list[np.ndarray]:
        """Times of every counted crossing in ``(0, t_end]`` (or ``[t_end, 0)``), per row."""
        coords = np.atleast_2d(np.asarray(coords, dtype=float))
        start = self.coords_to_batch(coords)
        times, samples, sigma, _ = self._scan(start, t_end)
        mask = self._brackets(sigma, forward=t_end > 0)
        mask[0] = False
        k_idx, rows = np.nonzero(mask)
        per_row: list[list[float]] = [[] for _ in range(len(coords))]
        if len(rows):
            left = PhaseBatch.concatenate([samples[int(k)].take([int(r)]) for k, r in zip(k_idx, rows, strict=True)])
            _, offset = self._refine(left, sigma[k_idx, rows], times[k_idx + 1] - times[k_idx])
            for r, t in zip(rows, times[k_idx] + offset, strict=True):
                per_row[int(r)].append(float(t))
        return [np.sort(np.array(t)) for t in per_row]


def build_section(surface: Surface, geodesic: ClosedGeodesic, **kwargs) -> Section:
    """Section along ``geodesic``.

    Raises:
        ConstructionError: the geodesic is not simple
    """
    if not geodesic.is_simple():
        raise ConstructionError(
            "闭测地线不是简单曲线", data={"surface": surface.name, "period": geodesic.period}
        )
    section = Section(surface, geodesic, **kwargs)
    log_debug(
        "构造",
        resource="截面",
        resource_id=surface.name,
        status="完成",
        details={"period": section.period, "strip": section.strip, "mode": section.mode},
    )
    return section


def return_map(section: Section, c: SectionCoord, tol: float | None = None) -> tuple[SectionCoord, float]:
    """Next counted crossing of the orbit of ``c`` and its return time.

    Raises:
        TangencyError: ``θ`` outside the guard band
        HorizonError: no crossing within the section horizon
    """
    target = section if tol is None else _with_tol(section, tol)
    result = target.return_map_batch(c.as_array())
    if not result.ok[0]:
        raise HorizonError(
            data={"coords": [c.s, c.theta], "horizon": section.horizon, "partial": result.failures},
        )
    return SectionCoord(float(result.coords[0, 0]), float(result.coords[0, 1])), float(result.times[0])


def _with_tol(section: Section, tol: float) -> Section:
    return Section(
        section.surface,
        section.geodesic,
        mode=section.mode,
        guard=section.guard,
        horizon=section.horizon,
        tol=tol,
        bisection_tol=section.bisection_tol,
    )


def return_time_n(section: Section, c: SectionCoord, n: int) -> float:
    """``t(n, c)``: cumulative time of ``n`` successive returns."""
    if n < 0:
        raise PreconditionError("n 必须非负", module="section", data={"n": n})
    total = 0.0
    current = c
    for _ in range(n):
        current, step = return_map(section, current)
        total += step
    return total


def crossing_count(section: Section, c: SectionCoord, t: float) -> int:
    """``P(c, t) = max{n >= 0 | t(n, c) <= t}``."""
    if t < 0:
        raise PreconditionError("t 必须非负", module="section", data={"t": t})
    count, total, current = 0, 0.0, c
    while True:
        current, step = return_map(section, current)
        if total + step > t:
            return count
        total += step
        count += 1


def band_seeds(section: Section, theta0: float, theta1: float, n_samples: int) -> np.ndarray:
    """Seeds of a fixed lattice restricted to the band ``[θ₀, θ₁]``.

    Narrower bands select subsets of the same lattice; an empty selection
    falls back to the band midpoint.
    """
    n_s = max(int(np.sqrt(n_samples)), 1)
    n_theta = max(n_samples // n_s, 1)
    thetas = np.arange(1, n_theta + 1) / (n_theta + 1)
    thetas = thetas[(thetas >= theta0) & (thetas <= theta1)]
    if len(thetas) == 0:
        thetas = np.array([0.5 * (theta0 + theta1)])
    s = section.period * np.arange(n_s) / n_s
    grid = np.stack(np.meshgrid(s, thetas, indexing="ij"), axis=-1)
    return grid.reshape(-1, 2)


def min_return_gap(
    section: Section, theta0: float, theta1: float, M: float, n_samples: int = 64
) -> float:
    """Smallest gap between consecutive crossing times in ``[-M, M]`` over seeds in the band.

    Raises:
        PreconditionError: invalid band or horizon
        HorizonError: a seed has fewer than 2 crossings forward or backward
    """
    if not 0.0 < theta0 < theta1 < 1.0 or not M > 0:
        raise PreconditionError(
            "需要 0 < θ0 < θ1 < 1 且 M > 0", module="section", data={"theta0": theta0, "theta1": theta1, "M": M}
        )
    seeds = band_seeds(section, theta0, theta1, n_samples)
    section.check_guard(seeds[:, 1])
    forward = section.crossing_times(seeds, M)
    backward = section.crossing_times(seeds, -M)
    short = [i for i in range(len(seeds)) if len(forward[i]) < 2 or len(backward[i]) < 2]
    if short:
        raise HorizonError(
            "时间范围内穿越次数不足",
            data={"seeds": seeds[short].tolist(), "M": M},
        )
    gaps = [np.diff(np.concatenate([b, [0.0], f])) for f, b in zip(forward, backward, strict=True)]
    result = float(min(np.min(g) for g in gaps))
    if not result > 0:
        raise HorizonError("回归间隔不是正数", data={"gap": result})
    return result


def section_grid_rows(section: Section, coords) -> list[tuple[float, float, float, float, float]]:
    """CSV rows ``(s, θ, s′, θ′, return_time)``; failed rows carry nan."""
    coords = np.atleast_2d(np.asarray(coords, dtype=float))
    result = section.return_map_batch(coords)
    return [
        (float(c[0]), float(c[1]), float(o[0]), float(o[1]), float(t))
        for c, o, t in zip(coords, result.coords, result.times, strict=True)
    ]
