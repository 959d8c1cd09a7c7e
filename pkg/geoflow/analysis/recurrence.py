"""
回归剖面

Displacements are chordal distances on the compactification sphere, so the
two poles and near-boundary points of the annulus are part of the sample set.
"""

from __future__ import annotations

import numpy as np

from geoflow.analysis.reports import (
    BandEntry,
    ParacompactReport,
    PowerCheckEntry,
    PowerRecurrenceReport,
    RecurrenceProfile,
)
from geoflow.analysis.systems import MapSystem
from geoflow.exceptions import PreconditionError
from geoflow.section.compactify import CompactPoints, chordal_distances
from geoflow.utils.logger import log_info, log_warning

GOLDEN = 0.5 * (np.sqrt(5.0) - 1.0)


def recurrence_grid(
    period: float,
    n_s: int = 50,
    n_theta: int = 50,
    ring: tuple[float, ...] = (0.02, 0.98),
    ring_points: int = 50,
    irrational: int = 0,
    include_poles: bool = True,
) -> CompactPoints:
    """Lattice ``s_i = L i/n_s``, ``θ_j = j/(n_θ + 1)`` plus near-boundary rings and the poles.

    ``irrational`` adds that many angles ``frac(k·φ)`` from the golden ratio
    sequence, each sampled at ``n_s`` positions.
    """
    s = period * np.arange(n_s) / n_s
    thetas = list(np.arange(1, n_theta + 1) / (n_theta + 1))
    thetas += [float(np.mod(k * GOLDEN, 1.0)) for k in range(1, irrational + 1)]
    grid = np.stack(np.meshgrid(s, np.array(thetas), indexing="ij"), axis=-1).reshape(-1, 2)
    parts = [CompactPoints.from_coords(grid)]
    if ring and ring_points:
        s_ring = period * np.arange(ring_points) / ring_points
        rows = np.stack(np.meshgrid(s_ring, np.asarray(ring, dtype=float), indexing="ij"), axis=-1)
        parts.append(CompactPoints.from_coords(rows.reshape(-1, 2)))
    if include_poles:
        parts.append(CompactPoints.poles())
    return CompactPoints.concatenate(parts)


def _orbit(map_system: MapSystem, points: CompactPoints, start_valid: np.ndarray, n: int):
    """Coordinates, poles and xyz of ``F⁰ .. Fⁿ``; rows failing once are dropped from ``valid``."""
    coords = np.empty((n + 1, len(points), 2))
    xyz = np.empty((n + 1, len(points), 3))
    coords[0] = points.coords
    xyz[0] = map_system.xyz(points)
    valid = start_valid.copy()
    current = CompactPoints(points.coords.copy(), points.pole.copy())
    for k in range(1, n + 1):
        idx = np.flatnonzero(valid)
        if len(idx):
            moved, ok = map_system.step(current.take(idx))
            current.coords[idx] = moved.coords
            valid[idx] = ok
        coords[k] = current.coords
        xyz[k] = map_system.xyz(current)
    return coords, xyz, valid


def _sups(xyz: np.ndarray, valid: np.ndarray) -> np.ndarray:
    return np.array([float(np.max(chordal_distances(x[valid], xyz[0][valid]), initial=0.0)) for x in xyz[1:]])


def recurrence_profile(
    map_system: MapSystem,
    N_max: int,
    sample_set: CompactPoints | None = None,
    near_return_tol: float = 1e-5,
) -> RecurrenceProfile:
    """``sup_{x∈C} d(Fⁿx, x)`` for ``n = 1..N_max`` and the near returns below ``near_return_tol``.

    Rows outside the tangency guard, or whose return fails, are excluded
    from every sup and counted in ``excluded``.

    Raises:
        PreconditionError: ``N_max < 1`` or no usable sample point
    """
    if N_max < 1:
        raise PreconditionError("N_max 必须 >= 1", module="analysis", data={"N_max": N_max})
    points = sample_set if sample_set is not None else recurrence_grid(map_system.period)
    coords, xyz, valid = _orbit(map_system, points, map_system.admissible(points), N_max)
    if not np.any(valid):
        raise PreconditionError("没有可用的采样点", module="analysis", data={"size": len(points)})
    excluded = int(np.count_nonzero(~valid))
    if excluded:
        log_warning(
            "回归剖面",
            resource="映射",
            resource_id=map_system.name,
            status="排除采样点",
            details={"excluded": excluded, "size": len(points)},
        )
    sups = _sups(xyz, valid)
    near = [(n, float(s)) for n, s in enumerate(sups, start=1) if s < near_return_tol]
    log_info(
        "回归剖面",
        resource="映射",
        resource_id=map_system.name,
        status="完成",
        details={"N_max": N_max, "near_returns": [n for n, _ in near]},
    )
    return RecurrenceProfile(
        sup_displacements=[(n, float(s)) for n, s in enumerate(sups, start=1)],
        near_returns=near,
        near_return_tol=near_return_tol,
        sample_set={
            "size": len(points),
            "annulus": int(np.count_nonzero(points.pole == 0)),
            "poles": int(np.count_nonzero(points.pole != 0)),
            "period": map_system.period,
            "map": map_system.name,
        },
        excluded=excluded,
        orbit_xyz=xyz,
        orbit_coords=coords,
        valid=valid,
        poles=points.pole.copy(),
        map_system=map_system,
    )


def _extended_xyz(profile: RecurrenceProfile, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Orbit xyz up to index ``n``, iterating the stored map beyond ``N_max`` when needed."""
    xyz = profile.orbit_xyz
    have = len(xyz) - 1
    if n <= have:
        return xyz, profile.valid
    if profile.map_system is None:
        raise PreconditionError("剖面没有保存映射, 无法延长轨道", module="analysis", data={"needed": n})
    last = CompactPoints(profile.orbit_coords[-1], profile.poles)
    _, more, valid = _orbit(profile.map_system, last, profile.valid, n - have)
    return np.concatenate([xyz, more[1:]], axis=0), valid


def power_recurrence_check(profile: RecurrenceProfile, m: int, slack: float = 1e-9) -> PowerRecurrenceReport:
    """Re-measure ``sup d(F^{m n_k} x, x)`` on the sample set of ``profile`` against ``m · s_k + slack``.

    ``link_sup`` is the largest step ``d(F^{(j+1) n_k} x, F^{j n_k} x)`` along
    the sampled orbits, kept as a diagnostic only.

    Raises:
        PreconditionError: ``m < 1`` or the profile has no near return
    """
    if m < 1:
        raise PreconditionError("m 必须 >= 1", module="analysis", data={"m": m})
    if not profile.near_returns:
        raise PreconditionError("剖面中没有近回归", module="analysis")
    entries = []
    needed = m * max(n for n, _ in profile.near_returns)
    xyz, valid = _extended_xyz(profile, needed)
    for n_k, s_k in profile.near_returns:
        chain = xyz[[j * n_k for j in range(m + 1)]][:, valid]
        link = float(np.max(chordal_distances(chain[1:], chain[:-1]), initial=0.0))
        measured = float(np.max(chordal_distances(chain[-1], chain[0]), initial=0.0))
        asserted = m * s_k + slack
        entries.append(
            PowerCheckEntry(
                n_k=n_k,
                s_k=s_k,
                link_sup=link,
                asserted=asserted,
                measured=measured,
                passed=measured <= asserted,
            )
        )
    report = PowerRecurrenceReport(m=m, slack=slack, entries=entries, passed=all(e.passed for e in entries))
    if not report.passed:
        log_warning(
            "幂回归检查",
            resource="映射",
            resource_id=str(profile.sample_set.get("map", "")),
            status="超出界限",
            details={"m": m, "failed": [e.n_k for e in entries if not e.passed]},
        )
    return report


def paracompact_recurrence(
    profile: RecurrenceProfile, bands: list[tuple[float, float]] | None = None
) -> ParacompactReport:
    """The near-return sequence of ``profile`` restricted to compact angle bands ``[1/j, 1 - 1/j]``."""
    if bands is None:
        bands = [(1.0 / j, 1.0 - 1.0 / j) for j in range(3, 9)]
    steps = [n for n, _ in profile.near_returns] or [n for n, _ in profile.sup_displacements]
    theta = profile.orbit_coords[0][:, 1]
    xyz = profile.orbit_xyz
    out = []
    for lo, hi in bands:
        rows = profile.valid & (profile.poles == 0) & (theta >= lo) & (theta <= hi)
        sups = [(n, float(np.max(chordal_distances(xyz[n][rows], xyz[0][rows]), initial=0.0))) for n in steps]
        out.append(BandEntry(band=(lo, hi), sups=sups))
    return ParacompactReport(near_returns=steps, bands=out)
