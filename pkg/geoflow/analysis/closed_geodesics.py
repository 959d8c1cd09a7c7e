"""
闭测地线打靶

Each seed gets a period estimate from the return residual, then
``(u, v, ψ, T)`` (base point, direction angle in an orthonormal frame, period)
is refined by nonlinear least squares on the ambient closure residual with a
finite-difference Jacobian evaluated as one batched integration. Converged
orbits are reduced to their smallest period, re-verified over one period and
deduplicated by the Hausdorff distance of their embedded base curves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares
from scipy.spatial.distance import directed_hausdorff

from geoflow.analysis.reports import ClosedGeodesicReport, GeodesicRecord, SeedReport, TangentRecord
from geoflow.exceptions import GeoflowError, PreconditionError
from geoflow.flow.distances import sasaki_distances
from geoflow.flow.integrator import propagate
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import PhaseBatch, UnitTangent
from geoflow.section.geodesic import ClosedGeodesic, estimate_period
from geoflow.settings import configs
from geoflow.utils.logger import log_info, log_warning

JACOBIAN_STEP = 1e-6
MAX_EVALUATIONS = 40


@dataclass
class ClosedGeodesicSearch:
    geodesics: list[ClosedGeodesic] = field(default_factory=list)
    report: ClosedGeodesicReport = field(default_factory=lambda: ClosedGeodesicReport(found=[], seeds=[]))


class _Shooting:
    """Closure residual of the orbit defined by ``p = (u, v, ψ, T)`` in a fixed chart."""

    def __init__(self, surface: Surface, chart: int, tol: float | None) -> None:
        self.surface = surface
        self.chart = chart
        self.tol = tol

    def params(self, v: UnitTangent, period: float) -> np.ndarray:
        chart = self.surface.charts[self.chart]
        P = v.base.as_array()[None]
        V = np.asarray(v.direction, dtype=float)[None]
        e1, e2 = chart.orthonormal_frame(P)
        psi = float(np.arctan2(chart.inner(P, V, e2)[0], chart.inner(P, V, e1)[0]))
        return np.array([v.base.u, v.base.v, psi, period])

    def batch(self, p: np.ndarray) -> PhaseBatch:
        p = np.atleast_2d(p)
        chart = self.surface.charts[self.chart]
        P = p[:, :2]
        e1, e2 = chart.orthonormal_frame(P)
        psi = p[:, 2:3]
        y = np.hstack([P, np.cos(psi) * e1 + np.sin(psi) * e2])
        return PhaseBatch(np.full(len(p), self.chart), y)

    def residuals(self, p: np.ndarray) -> np.ndarray:
        """Rows ``(X(T) - X(0), W(T) - W(0))`` in the ambient model."""
        p = np.atleast_2d(p)
        start = self.batch(p)
        end = propagate(self.surface, start, p[:, 3], tol=self.tol).final
        X0, W0 = self.surface.to_ambient(start)
        X1, W1 = self.surface.to_ambient(end)
        return np.hstack([self.surface.ambient_difference(X0, X1), W1 - W0])

    def fun(self, p: np.ndarray) -> np.ndarray:
        return self.residuals(p)[0]

    def jac(self, p: np.ndarray) -> np.ndarray:
        h = JACOBIAN_STEP * np.maximum(1.0, np.abs(p))
        stacked = np.vstack([p, p + np.diag(h)])
        r = self.residuals(stacked)
        return ((r[1:] - r[0]) / h[:, None]).T

    def closure(self, v: PhaseBatch, period: float) -> float:
        end = propagate(self.surface, v, period, tol=self.tol).final
        return float(sasaki_distances(self.surface, end, v)[0])


def curve_hausdorff(a: ClosedGeodesic, b: ClosedGeodesic) -> float:
    """Hausdorff distance of the embedded base curves, projecting samples onto the other curve's spline."""

    def one_way(src: ClosedGeodesic, dst: ClosedGeodesic) -> float:
        s = dst.nearest(src.points)
        gap = src.surface.embed(src.points) - dst.surface.embed(dst.position(s))
        return float(np.max(np.linalg.norm(gap, axis=1)))

    return max(one_way(a, b), one_way(b, a))


def _same_orbit(a: ClosedGeodesic, b: ClosedGeodesic, threshold: float) -> bool:
    ca, cb = a.embedded_curve(), b.embedded_curve()
    coarse = max(directed_hausdorff(ca, cb)[0], directed_hausdorff(cb, ca)[0])
    if coarse > threshold + 2.0 * max(a.spacing, b.spacing):
        return False
    return curve_hausdorff(a, b) < threshold


def closed_geodesic_search(
    surface: Surface,
    seeds: PhaseBatch | list[UnitTangent],
    period_range: tuple[float, float],
    tol: float = 1e-6,
    *,
    dedup_threshold: float | None = None,
    max_halvings: int | None = None,
    integrator_tol: float | None = None,
) -> ClosedGeodesicSearch:
    """Shooting from every seed; see :func:`find_closed_geodesics`."""
    if isinstance(seeds, list):
        seeds = PhaseBatch.from_unit_tangents(seeds)
    lo, hi = (float(t) for t in period_range)
    if len(seeds) == 0 or not 0.0 < lo < hi or not tol > 0:
        raise PreconditionError(
            "需要非空种子、正的周期范围和 tol > 0",
            module="analysis",
            data={"seeds": len(seeds), "period_range": [lo, hi], "tol": tol},
        )
    numerics = configs.numerics
    dedup = numerics.dedup_threshold if dedup_threshold is None else dedup_threshold
    halvings_max = numerics.max_halvings if max_halvings is None else max_halvings
    search = ClosedGeodesicSearch()

    for i in range(len(seeds)):
        seed = seeds.unit_tangent(i)
        entry = SeedReport(seed=i, converged=False)
        search.report.seeds.append(entry)
        try:
            shooting = _Shooting(surface, seed.chart, integrator_tol)
            period, _ = estimate_period(surface, seed, (lo, hi), tol=integrator_tol)
            p = shooting.params(seed, period)
            start = shooting.batch(p)
            residual = shooting.closure(start, period)
            if not residual < tol:
                fit = least_squares(
                    shooting.fun,
                    p,
                    jac=shooting.jac,
                    bounds=([-np.inf, -np.inf, -np.inf, lo], [np.inf, np.inf, np.inf, hi]),
                    method="trf",
                    xtol=1e-15,
                    ftol=1e-15,
                    gtol=1e-15,
                    max_nfev=MAX_EVALUATIONS,
                )
                p = fit.x
                start = shooting.batch(p)
                period = float(p[3])
                residual = shooting.closure(start, period)
            entry.residual = residual
            if not residual < tol:
                entry.reason = "no_convergence"
                log_warning("打靶", resource="种子", resource_id=str(i), status="跳过", details={"residual": residual})
                continue

            halvings = 0
            while halvings < halvings_max and shooting.closure(start, 0.5 * period) < tol:
                period *= 0.5
                halvings += 1
            entry.halvings = halvings
            entry.period = period

            start = surface.rechart(start)
            geodesic = ClosedGeodesic(surface, start.unit_tangent(0), period, tol=integrator_tol)
        except GeoflowError as exc:
            entry.reason = f"{type(exc).__name__}: {exc.message}"
            log_warning("打靶", resource="种子", resource_id=str(i), status="跳过", details={"error": entry.reason})
            continue

        entry.converged = True
        duplicate = next(
            (k for k, g in enumerate(search.geodesics) if _same_orbit(g, geodesic, dedup)),
            None,
        )
        if duplicate is not None:
            entry.duplicate_of = duplicate
            continue
        search.geodesics.append(geodesic)
        search.report.found.append(
            GeodesicRecord(
                period=geodesic.period,
                closure_error=geodesic.closure_error,
                initial=TangentRecord.from_unit_tangent(geodesic.v0),
            )
        )

    log_info(
        "打靶",
        resource="曲面",
        resource_id=surface.name,
        status="完成",
        details={"seeds": len(seeds), "found": len(search.geodesics)},
    )
    return search


def find_closed_geodesics(
    surface: Surface,
    seeds: PhaseBatch | list[UnitTangent],
    period_range: tuple[float, float],
    tol: float = 1e-6,
    **kwargs,
) -> list[ClosedGeodesic]:
    """Distinct closed geodesics found by shooting from ``seeds``.

    A seed is accepted when ``d̃(Φ_T v, v) < tol``; ``T`` is then halved while
    the half period also closes, and the orbit is re-verified by
    :class:`~geoflow.section.geodesic.ClosedGeodesic`. Seeds that do not
    converge are skipped and logged; use :func:`closed_geodesic_search` for
    the per-seed report.

    Raises:
        PreconditionError: no seeds or an invalid period range
    """
    return closed_geodesic_search(surface, seeds, period_range, tol, **kwargs).geodesics
