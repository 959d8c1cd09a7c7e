"""
实验任务

One function per experiment name, each taking the resolved
:class:`ExperimentConfig` and returning an :class:`ExperimentResult`.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np

from geoflow.analysis import (
    ExtendedReturnMap,
    FlowSystem,
    IdentityMap,
    MapSystem,
    SampleSpec,
    TwistMap,
    almost_period_search,
    closed_geodesic_search,
    distality_bound,
    equicontinuity_modulus,
    fixed_point_census,
    paracompact_recurrence,
    power_recurrence_check,
    recurrence_grid,
    recurrence_profile,
    set_anchors,
)
from geoflow.exceptions import ConfigurationError
from geoflow.experiments.config import ExperimentConfig
from geoflow.experiments.export import ExperimentResult
from geoflow.flow import geodesic_flow, integrate
from geoflow.flow.distances import batch_distances
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import PhaseBatch, UnitTangent
from geoflow.scenarios import (
    PlaneExp,
    catalog,
    middle_axis_plane,
    oracle_flow,
    oracle_geodesic_plane_exp,
    principal_anchors,
    reference_geodesic,
)
from geoflow.scenarios.sphere_like import PRINCIPAL_PLANES, Ellipsoid
from geoflow.section import Section, band_seeds, build_section, section_grid_rows

Task = Callable[[ExperimentConfig], ExperimentResult]

TASKS: dict[str, Task] = {}


def task(name: str) -> Callable[[Task], Task]:
    def register(fn: Task) -> Task:
        TASKS[name] = fn
        return fn

    return register


def surface_of(config: ExperimentConfig) -> Surface:
    return catalog(config.scenario, config.scenario_params())


def initial_tangent(surface: Surface, config: ExperimentConfig) -> UnitTangent:
    """``config.initial``, read as image-plane data on the plane scenarios, or a seeded random vector."""
    if config.initial is None:
        rng = np.random.default_rng(config.seed)
        return surface.random_unit_tangents(1, rng).unit_tangent(0)
    x, v = np.array(config.initial[:2]), np.array(config.initial[2:])
    if isinstance(surface, PlaneExp):
        return oracle_geodesic_plane_exp(x, v / np.linalg.norm(v), 0.0, surface).unit_tangent()
    return surface.unit_tangent(x, v, 0, normalize=True)


def section_of(surface: Surface, config: ExperimentConfig) -> Section:
    geodesic = reference_geodesic(surface, tol=config.tol)
    return build_section(
        surface,
        geodesic,
        mode=config.crossing_mode,
        guard=config.guard,
        horizon=config.horizon,
        tol=config.tol,
    )


def map_of(surface_name: str, config: ExperimentConfig) -> MapSystem:
    if config.map_name == "twist":
        return TwistMap()
    if config.map_name == "identity":
        return IdentityMap()
    return ExtendedReturnMap(section_of(catalog(surface_name, config.scenario_params()), config))


def anchors_of(surface: Surface, config: ExperimentConfig) -> PhaseBatch | None:
    if config.anchor_plane is not None:
        if not isinstance(surface, Ellipsoid):
            raise ConfigurationError("anchor_plane 只适用于椭球类场景", data={"scenario": config.scenario})
        plane = middle_axis_plane(surface.axes) if config.anchor_plane == "middle" else config.anchor_plane
        return principal_anchors(surface, plane, max(config.samples // config.perturbations, 1))
    if config.initial is not None:
        return PhaseBatch.from_unit_tangents([initial_tangent(surface, config)])
    return None


def flow_system_of(surface: Surface, config: ExperimentConfig) -> FlowSystem:
    return FlowSystem(surface, config.metric, config.tol)


@task("integrate")
def run_integrate(config: ExperimentConfig) -> ExperimentResult:
    surface = surface_of(config)
    v = initial_tangent(surface, config)
    trajectory = integrate(surface, v, config.t_max, max(config.samples, 2), config.tol)
    diagnostics = trajectory.diagnostics()
    return ExperimentResult(
        experiment="integrate",
        summary=f"{surface.name}: {len(trajectory)} samples, speed drift {trajectory.max_speed_drift:.3e}",
        payload={"initial": v.as_array().tolist(), "chart": v.chart, "diagnostics": diagnostics},
        rows=trajectory.to_csv_rows(),
    )


@task("section")
def run_section(config: ExperimentConfig) -> ExperimentResult:
    surface = surface_of(config)
    section = section_of(surface, config)
    seeds = band_seeds(section, config.guard, 1.0 - config.guard, config.samples)
    seeds = seeds[(seeds[:, 1] > config.guard) & (seeds[:, 1] < 1.0 - config.guard)]
    rows = section_grid_rows(section, seeds)
    failed = sum(1 for row in rows if not np.isfinite(row[2]))
    return ExperimentResult(
        experiment="section",
        summary=f"{surface.name}: {len(rows)} section points, {failed} without return",
        payload={"period": section.period, "mode": section.mode, "points": len(rows), "failed": failed},
        rows=rows,
    )


@task("equicont")
def run_equicont(config: ExperimentConfig) -> ExperimentResult:
    surface = surface_of(config)
    spec = SampleSpec(
        n_pairs=config.samples if config.mode == "uniform" else 0,
        perturbations=config.perturbations,
        seed=config.seed,
        mode=config.mode,
        n_times=config.n_times,
        ladder_depth=config.ladder_depth,
    )
    anchors = anchors_of(surface, config)
    if anchors is not None:
        spec = set_anchors(spec, anchors)
    report = equicontinuity_modulus(flow_system_of(surface, config), config.epsilon, config.t_max, spec)
    delta = "none" if report.delta is None else f"{report.delta:.3e}"
    return ExperimentResult(
        experiment="equicont",
        summary=f"{surface.name}: {report.verdict} (ε={config.epsilon}, δ={delta})",
        verdict=report.verdict,
        payload={"report": report.model_dump(mode="json")},
    )


@task("recur")
def run_recur(config: ExperimentConfig) -> ExperimentResult:
    system = map_of(config.scenario, config)
    n = int(round(np.sqrt(config.samples))) if config.samples > 1 else 50
    points = recurrence_grid(system.period, n, n, irrational=8 if config.map_name == "twist" else 0)
    profile = recurrence_profile(system, config.n_max, points, config.near_return_tol)
    payload = {"report": profile.model_dump(mode="json")}
    if profile.near_returns:
        payload["power_check"] = power_recurrence_check(profile, config.power).model_dump(mode="json")
        payload["paracompact"] = paracompact_recurrence(profile).model_dump(mode="json")
    verdict = "satisfied" if profile.near_returns else "violated"
    near = [k for k, _ in profile.near_returns]
    return ExperimentResult(
        experiment="recur",
        summary=f"{system.name}: near returns at {near}",
        verdict=verdict,
        payload=payload,
        rows=profile.sup_displacements,
    )


@task("distal")
def run_distal(config: ExperimentConfig) -> ExperimentResult:
    surface = surface_of(config)
    rng = np.random.default_rng(config.seed)
    A = surface.random_unit_tangents(config.samples, rng)
    B = surface.random_unit_tangents(config.samples, rng)
    report = distality_bound(flow_system_of(surface, config), (A, B), config.t_max, config.n_times)
    verdict = "satisfied" if report.minimum >= config.distal_floor else "violated"
    return ExperimentResult(
        experiment="distal",
        summary=f"{surface.name}: smallest inf-estimate {report.minimum:.3e}",
        verdict=verdict,
        payload={"report": report.model_dump(mode="json")},
        rows=[(e.pair, e.inf_estimate, e.time) for e in report.entries],
    )


@task("almostperiod")
def run_almostperiod(config: ExperimentConfig) -> ExperimentResult:
    surface = surface_of(config)
    spec = SampleSpec(seed=config.seed, n_points=config.samples)
    report = almost_period_search(
        flow_system_of(surface, config), config.epsilon, config.tau, spec, (0.0, config.t_max)
    )
    empty = len(report.empty_windows)
    return ExperimentResult(
        experiment="almostperiod",
        summary=f"{surface.name}: {len(report.found)} almost periods, {empty} empty windows",
        verdict="satisfied" if empty == 0 else "violated",
        payload={"report": report.model_dump(mode="json")},
    )


def shooting_seeds(surface: Surface, config: ExperimentConfig) -> PhaseBatch:
    """Principal-plane seeds on ellipsoids, the configured vector or seeded random vectors elsewhere."""
    if isinstance(surface, Ellipsoid) and config.initial is None:
        return PhaseBatch.concatenate([principal_anchors(surface, plane, 2) for plane in PRINCIPAL_PLANES])
    if config.initial is not None:
        return PhaseBatch.from_unit_tangents([initial_tangent(surface, config)])
    return surface.random_unit_tangents(config.samples, np.random.default_rng(config.seed))


@task("closed-geodesics")
def run_closed_geodesics(config: ExperimentConfig) -> ExperimentResult:
    surface = surface_of(config)
    search = closed_geodesic_search(
        surface, shooting_seeds(surface, config), config.period_range, config.shooting_tol, integrator_tol=config.tol
    )
    periods = [round(g.period, 6) for g in search.geodesics]
    return ExperimentResult(
        experiment="closed-geodesics",
        summary=f"{surface.name}: {len(search.geodesics)} closed geodesics, periods {periods}",
        payload={"report": search.report.model_dump(mode="json")},
    )


@task("census")
def run_census(config: ExperimentConfig) -> ExperimentResult:
    system = map_of(config.scenario, config)
    report = fixed_point_census(system, config.grid, config.census_tol, config.power)
    count = "identity-like" if report.identity_like else str(report.count)
    return ExperimentResult(
        experiment="census",
        summary=f"{system.name}: fixed points {count}",
        payload={"report": report.model_dump(mode="json")},
    )


def oracle_starts(surface: Surface, n: int, rng: np.random.Generator) -> list[UnitTangent]:
    if not isinstance(surface, PlaneExp):
        return surface.random_unit_tangents(n, rng).unit_tangents()
    # 像平面上取初值
    x = rng.uniform(-2.0, 2.0, size=(n, 2))
    angle = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return [
        oracle_geodesic_plane_exp(x[i], (np.cos(angle[i]), np.sin(angle[i])), 0.0, surface).unit_tangent()
        for i in range(n)
    ]


def oracle_errors(
    surface: Surface, n: int, t_max: float, rng: np.random.Generator, tol: float
) -> tuple[list[tuple[float, ...]], str]:
    """Rows ``(t, u, v, du, dv, error)`` comparing the integrator with the closed form at ``|t| <= t_max``.

    Raises:
        ConfigurationError: the scenario has no closed form
    """
    metric = "d1" if isinstance(surface, PlaneExp) else "sasaki"
    starts = oracle_starts(surface, n, rng)
    times = rng.uniform(-t_max, t_max, size=n)
    rows = []
    for v, t in zip(starts, times, strict=True):
        exact = oracle_flow(surface, v, float(t))
        if exact is None:
            raise ConfigurationError("该场景没有解析解", module="scenarios", data={"scenario": surface.name})
        found = geodesic_flow(surface, v, float(t), tol=tol)
        error = batch_distances(
            surface,
            PhaseBatch.from_unit_tangents([found]),
            PhaseBatch.from_unit_tangents([exact.unit_tangent()]),
            metric,
        )
        rows.append((float(t), *v.as_array().tolist(), float(error[0])))
    return rows, metric


@task("oracle-check")
def run_oracle_check(config: ExperimentConfig) -> ExperimentResult:
    surface = surface_of(config)
    rows, metric = oracle_errors(surface, config.samples, config.t_max, np.random.default_rng(config.seed), config.tol)
    worst = max(row[-1] for row in rows)
    return ExperimentResult(
        experiment="oracle-check",
        summary=f"{surface.name}: largest oracle error {worst:.3e} ({metric})",
        verdict="satisfied" if worst < config.oracle_tol else "violated",
        payload={"max_error": worst, "metric": metric, "checks": len(rows)},
        rows=rows,
    )
