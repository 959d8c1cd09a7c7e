"""
验收测试

Each criterion is a registered check with fixed desk-scale constants. The
``accept`` experiment runs every criterion tagged with the configured
scenario and reports one entry per criterion.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from pydantic import BaseModel

from geoflow.analysis import (
    ExtendedReturnMap,
    FlowSystem,
    RecurrenceProfile,
    SampleSpec,
    distality_bound,
    equicontinuity_modulus,
    find_closed_geodesics,
    fixed_point_census,
    power_recurrence_check,
    recurrence_grid,
    recurrence_profile,
    set_anchors,
)
from geoflow.exceptions import GeoflowError
from geoflow.experiments.config import ExperimentConfig
from geoflow.experiments.export import ExperimentResult
from geoflow.experiments.tasks import oracle_errors, task
from geoflow.flow import flow_batch, flow_samples, sasaki_distances
from geoflow.geometry.surface import Surface
from geoflow.geometry.types import PhaseBatch
from geoflow.scenarios import (
    catalog,
    direction_divergence,
    middle_axis_plane,
    oracle_geodesic_plane_exp,
    principal_anchors,
    reference_geodesic,
)
from geoflow.scenarios.sphere_like import PRINCIPAL_PLANES
from geoflow.section import build_section
from geoflow.utils.logger import log_info, log_warning

TOL = 1e-9
COMPACT = ("sphere", "zoll", "ellipsoid", "flat_torus")


class CriterionOutcome(BaseModel):
    id: int
    name: str
    scenario: str
    passed: bool
    measured: dict[str, Any]
    error: str | None = None


@dataclass
class Criterion:
    id: int
    name: str
    scenarios: tuple[str, ...]
    check: Callable[[AcceptanceContext], dict[str, Any]]


CRITERIA: dict[int, Criterion] = {}


def criterion(id: int, name: str, scenarios: tuple[str, ...]):
    """Register ``fn(context) -> measured`` as acceptance criterion ``id``; ``measured["passed"]`` is the result."""

    def register(fn: Callable[[AcceptanceContext], dict[str, Any]]):
        CRITERIA[id] = Criterion(id, name, scenarios, fn)
        return fn

    return register


@dataclass
class AcceptanceContext:
    """Scenario under test plus results shared between criteria."""

    scenario: str
    seed: int = 0
    cache: dict[str, Any] = field(default_factory=dict)

    @property
    def surface(self) -> Surface:
        if "surface" not in self.cache:
            self.cache["surface"] = catalog(self.scenario)
        return self.cache["surface"]

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def sphere_profile(self) -> RecurrenceProfile:
        if "profile" not in self.cache:
            section = build_section(self.surface, reference_geodesic(self.surface, tol=TOL), tol=TOL)
            system = ExtendedReturnMap(section)
            self.cache["map"] = system
            self.cache["profile"] = recurrence_profile(system, 10, recurrence_grid(system.period, 50, 50))
        return self.cache["profile"]

    def return_map(self) -> ExtendedReturnMap:
        self.sphere_profile()
        return self.cache["map"]


def _closure_errors(surface: Surface, n: int, period: float, rng: np.random.Generator) -> np.ndarray:
    start = surface.random_unit_tangents(n, rng)
    return sasaki_distances(surface, flow_batch(surface, start, period, TOL), start)


@criterion(1, "periodic flow on P-manifolds", ("sphere", "zoll"))
def periodic_flow(ctx: AcceptanceContext) -> dict[str, Any]:
    n, bound = (100, 1e-6) if ctx.scenario == "sphere" else (50, 1e-4)
    worst = float(np.max(_closure_errors(ctx.surface, n, 2.0 * np.pi, ctx.rng(1))))
    return {"passed": worst < bound, "max_closure": worst, "bound": bound, "samples": n}


@criterion(2, "P-manifold flow is equicontinuous", ("sphere", "zoll"))
def equicontinuous_flow(ctx: AcceptanceContext) -> dict[str, Any]:
    epsilon = 0.1
    spec = SampleSpec(n_pairs=200, seed=ctx.seed)
    report = equicontinuity_modulus(FlowSystem(ctx.surface, tol=TOL), epsilon, 100.0, spec)
    passed = report.verdict == "satisfied"
    if ctx.scenario == "sphere":
        passed = passed and report.delta is not None and report.delta >= epsilon / 8
    return {"passed": passed, "verdict": report.verdict, "delta": report.delta}


@criterion(3, "non-P flow is not equicontinuous", ("flat_torus", "ellipsoid"))
def not_equicontinuous(ctx: AcceptanceContext) -> dict[str, Any]:
    system = FlowSystem(ctx.surface, tol=TOL)
    if ctx.scenario == "flat_torus":
        report = equicontinuity_modulus(system, 0.3, 1e4, SampleSpec(n_pairs=200, seed=ctx.seed))
    else:
        plane = middle_axis_plane(ctx.surface.axes)
        spec = SampleSpec(n_pairs=0, mode="pointwise", ladder_depth=14, seed=ctx.seed)
        spec = set_anchors(spec, principal_anchors(ctx.surface, plane, 8))
        report = equicontinuity_modulus(system, 0.1, 200.0, spec)
    witness = report.witness.model_dump(mode="json") if report.witness else None
    return {"passed": report.verdict == "violated", "verdict": report.verdict, "witness": witness}


@criterion(4, "return map is recurrent", ("sphere",))
def return_map_recurrence(ctx: AcceptanceContext) -> dict[str, Any]:
    profile = ctx.sphere_profile()
    near = {n for n, _ in profile.near_returns}
    expected = {2, 4, 6, 8, 10}
    return {
        "passed": expected <= near,
        "near_returns": sorted(near),
        "sups": {n: s for n, s in profile.sup_displacements if n in expected},
    }


@criterion(5, "extended return map has two fixed points", ("sphere",))
def two_fixed_points(ctx: AcceptanceContext) -> dict[str, Any]:
    report = fixed_point_census(ctx.return_map(), (200, 100), 1e-4)
    poles = sorted(c.pole for c in report.clusters if c.pole)
    return {"passed": report.count == 2 and len(poles) == 2, "count": report.count, "poles": poles}


@criterion(6, "power recurrence bound", ("sphere",))
def power_bound(ctx: AcceptanceContext) -> dict[str, Any]:
    profile = ctx.sphere_profile()
    reports = {m: power_recurrence_check(profile, m, slack=1e-9) for m in (2, 3)}
    return {
        "passed": all(r.passed for r in reports.values()),
        "checks": {m: r.model_dump(mode="json") for m, r in reports.items()},
    }


@criterion(7, "flat torus flow is distal", ("flat_torus",))
def distal_torus(ctx: AcceptanceContext) -> dict[str, Any]:
    rng = ctx.rng(7)
    A = ctx.surface.random_unit_tangents(100, rng)
    B = ctx.surface.random_unit_tangents(100, rng)
    report = distality_bound(FlowSystem(ctx.surface, tol=TOL), (A, B), 1e4)
    return {"passed": report.minimum >= 1e-4, "minimum": report.minimum}


@criterion(8, "integrator matches the closed form", ("plane_exp",))
def oracle_agreement(ctx: AcceptanceContext) -> dict[str, Any]:
    rows, metric = oracle_errors(ctx.surface, 100, 50.0, ctx.rng(8), TOL)
    worst = max(row[-1] for row in rows)
    return {"passed": worst < 1e-6, "max_error": worst, "metric": metric}


@criterion(9, "pointwise d1 equicontinuity against direction divergence", ("plane_exp",))
def two_metric_contrast(ctx: AcceptanceContext) -> dict[str, Any]:
    x, v = (1.0, 0.0), (1.0, 0.0)
    anchor = oracle_geodesic_plane_exp(x, v, 0.0, ctx.surface).unit_tangent()
    spec = SampleSpec(n_pairs=0, perturbations=100, mode="pointwise", seed=ctx.seed)
    report = equicontinuity_modulus(
        FlowSystem(ctx.surface, metric="d1", tol=TOL), 1e-2, 100.0, set_anchors(spec, [anchor])
    )
    divergence = direction_divergence(x, v, 1e-3, 10.0, 1e5, ctx.surface)
    return {
        "passed": report.verdict == "satisfied" and divergence is not None,
        "d1_verdict": report.verdict,
        "delta": report.delta,
        "divergence_time": divergence,
    }


@criterion(10, "conservation, composition and time reversal", COMPACT)
def conservation(ctx: AcceptanceContext) -> dict[str, Any]:
    surface, horizon = ctx.surface, 100.0
    rng = ctx.rng(10)
    start = surface.random_unit_tangents(100, rng)
    _, samples, result = flow_samples(surface, start, horizon, 101, TOL)
    stacked = PhaseBatch.concatenate(samples)
    speed = max(result.max_drift, float(np.max(np.abs(surface.speeds(stacked) - 1.0)))) / horizon

    clairaut = None
    if ctx.scenario in ("sphere", "zoll"):
        values = [surface.clairaut(*surface.to_ambient(batch)) for batch in samples]
        clairaut = float(np.max(np.abs(np.stack(values) - values[0]))) / horizon

    s, t = rng.uniform(-10.0, 10.0, size=(2, len(start)))
    composed = flow_batch(surface, flow_batch(surface, start, t, TOL), s, TOL)
    composition = float(np.max(sasaki_distances(surface, composed, flow_batch(surface, start, s + t, TOL))))
    back = flow_batch(surface, flow_batch(surface, start, t, TOL).negated(), t, TOL).negated()
    reversal = float(np.max(sasaki_distances(surface, back, start)))

    passed = speed < 1e-8 and composition < 1e-7 and reversal < 1e-7
    if clairaut is not None:
        passed = passed and clairaut < 1e-8
    return {
        "passed": passed,
        "speed_drift_rate": speed,
        "clairaut_drift_rate": clairaut,
        "composition": composition,
        "reversal": reversal,
    }


@criterion(11, "three principal closed geodesics on the ellipsoid", ("ellipsoid",))
def principal_geodesics(ctx: AcceptanceContext) -> dict[str, Any]:
    seeds = PhaseBatch.concatenate([principal_anchors(ctx.surface, plane, 2) for plane in PRINCIPAL_PLANES])
    found = find_closed_geodesics(ctx.surface, seeds, (5.0, 10.0), 1e-6, integrator_tol=TOL)
    errors = [g.closure_error for g in found]
    return {
        "passed": len(found) == 3 and all(e < 1e-6 for e in errors),
        "periods": sorted(g.period for g in found),
        "closure_errors": errors,
    }


def run_criteria(scenario: str, seed: int = 0, only: tuple[int, ...] | None = None) -> list[CriterionOutcome]:
    """Run the criteria tagged with ``scenario`` (optionally restricted to ``only``) in id order."""
    context = AcceptanceContext(scenario, seed)
    outcomes = []
    for cid in sorted(CRITERIA):
        entry = CRITERIA[cid]
        if scenario not in entry.scenarios or (only is not None and cid not in only):
            continue
        try:
            measured = entry.check(context)
            outcome = CriterionOutcome(
                id=cid, name=entry.name, scenario=scenario, passed=bool(measured.pop("passed")), measured=measured
            )
        except GeoflowError as exc:
            outcome = CriterionOutcome(
                id=cid, name=entry.name, scenario=scenario, passed=False, measured=exc.data, error=exc.message
            )
            log_warning("验收", resource="条目", resource_id=str(cid), status="执行失败", details=exc.to_dict())
        log_info("验收", resource="条目", resource_id=str(cid), status="通过" if outcome.passed else "未通过")
        outcomes.append(outcome)
    return outcomes


@task("accept")
def run_accept(config: ExperimentConfig) -> ExperimentResult:
    outcomes = run_criteria(config.scenario, config.seed, config.criteria)
    passed = sum(o.passed for o in outcomes)
    verdict = "satisfied" if outcomes and passed == len(outcomes) else "violated"
    return ExperimentResult(
        experiment="accept",
        summary=f"{config.scenario}: {passed}/{len(outcomes)} acceptance criteria passed",
        verdict=verdict,
        payload={"criteria": [o.model_dump(mode="json") for o in outcomes]},
    )
