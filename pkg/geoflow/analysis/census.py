"""Fixed points of a map of the compactified annulus, located on a grid and clustered."""

from __future__ import annotations

import numpy as np
from scipy.cluster.hierarchy import fclusterdata

from geoflow.analysis.reports import CensusCluster, CensusReport
from geoflow.analysis.systems import MapSystem
from geoflow.exceptions import PreconditionError
from geoflow.section.compactify import CompactPoints, Pole, chordal_distances
from geoflow.utils.logger import log_info

LINK_FACTOR = 2.5


def census_grid(period: float, n_s: int, n_theta: int) -> CompactPoints:
    """``s_i = L i/n_s``, ``θ_j = j/n_θ`` for ``0 < j < n_θ``, and both poles."""
    s = period * np.arange(n_s) / n_s
    theta = np.arange(1, n_theta) / n_theta
    grid = np.stack(np.meshgrid(s, theta, indexing="ij"), axis=-1).reshape(-1, 2)
    return CompactPoints.concatenate([CompactPoints.from_coords(grid), CompactPoints.poles()])


def _pole_name(pole: int) -> str | None:
    if pole == -1:
        return Pole.MINUS_INFINITY.value
    if pole == 1:
        return Pole.PLUS_INFINITY.value
    return None


def fixed_point_census(
    map_system: MapSystem,
    grid_resolution: tuple[int, int] = (200, 100),
    tol: float = 1e-4,
    power: int = 1,
    cluster_radius: float | None = None,
) -> CensusReport:
    """Grid points displaced less than ``tol`` by ``F^power``, clustered by single linkage.

    When every evaluated point is displaced less than ``tol`` the map is
    reported as identity-like and no count is given.
    """
    n_s, n_theta = grid_resolution
    if n_s < 1 or n_theta < 2 or power < 1 or not tol > 0:
        raise PreconditionError(
            "网格或参数无效",
            module="analysis",
            data={"grid": [n_s, n_theta], "power": power, "tol": tol},
        )
    points = census_grid(map_system.period, n_s, n_theta)
    moved, ok = map_system.iterate(points, power)
    start = map_system.xyz(points)
    disp = chordal_distances(map_system.xyz(moved), start)
    excluded = int(np.count_nonzero(~ok))
    hits = ok & (disp < tol)

    if np.all(hits[ok]) and np.any(ok & (points.pole == 0)):
        log_info("普查", resource="映射", resource_id=map_system.name, status="近似恒等", details={"power": power})
        return CensusReport(
            count=None,
            identity_like=True,
            clusters=[],
            grid=(n_s, n_theta),
            tol=tol,
            power=power,
            excluded=excluded,
        )

    idx = np.flatnonzero(hits)
    if len(idx) == 0:
        labels = np.zeros(0, dtype=int)
    elif len(idx) == 1:
        labels = np.ones(1, dtype=int)
    else:
        radius = cluster_radius or LINK_FACTOR * np.pi * max(2.0 / n_s, 1.0 / n_theta)
        labels = fclusterdata(start[idx], t=radius, criterion="distance", method="single")

    clusters = []
    for label in np.unique(labels):
        members = idx[labels == label]
        best = members[np.argmin(disp[members])]
        pole = _pole_name(int(points.pole[best]))
        location = None if pole else (float(points.coords[best, 0]), float(points.coords[best, 1]))
        clusters.append(
            CensusCluster(location=location, pole=pole, size=len(members), displacement=float(disp[best]))
        )
    log_info(
        "普查",
        resource="映射",
        resource_id=map_system.name,
        status="完成",
        details={"count": len(clusters), "power": power, "excluded": excluded},
    )
    return CensusReport(
        count=len(clusters),
        identity_like=False,
        clusters=clusters,
        grid=(n_s, n_theta),
        tol=tol,
        power=power,
        excluded=excluded,
    )
