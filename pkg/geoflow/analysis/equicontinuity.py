"""
等度连续模估计

For ``δ`` on the ladder ``ε/2, ε/4, ...`` pairs at distance ``< δ`` are flowed
over ``[0, t_max]`` and their largest separation is compared with ``ε``:

- ``satisfied`` at the first level whose largest separation stays below
  ``near_miss · ε``;
- ``violated`` when the smallest level still has a pair separating to ``ε``
  or more; that pair is the witness and is closer than every tested ``δ``;
- ``inconclusive`` when the ladder ends with separations in
  ``[near_miss · ε, ε)``.
"""

from __future__ import annotations

import numpy as np

from geoflow.analysis.reports import (
    LadderLevel,
    ModulusReport,
    ReplayReport,
    SampleSpec,
    TangentRecord,
    WitnessPair,
)
from geoflow.analysis.sampling import pair_bases, perturbed_partners
from geoflow.analysis.systems import FlowSystem
from geoflow.exceptions import GeoflowError, PreconditionError
from geoflow.flow.integrator import propagate
from geoflow.geometry.types import PhaseBatch
from geoflow.settings import configs
from geoflow.utils.logger import log_info


def _locate_failure(system: FlowSystem, A: PhaseBatch, B: PhaseBatch, t_max: float, n_times: int, exc: GeoflowError):
    """Re-run pairs one by one to attach the failing pair to ``exc``."""
    for i in range(len(A)):
        try:
            system.separations(A.take([i]), B.take([i]), t_max, n_times)
        except GeoflowError:
            exc.data["pair"] = {
                "index": i,
                "a": A.y[i].tolist(),
                "b": B.y[i].tolist(),
                "charts": [int(A.charts[i]), int(B.charts[i])],
            }
            break
    return exc


def _measure(system: FlowSystem, A: PhaseBatch, B: PhaseBatch, t_max: float, n_times: int):
    try:
        times, seps = system.separations(A, B, t_max, n_times)
    except GeoflowError as exc:
        raise _locate_failure(system, A, B, t_max, n_times, exc) from exc
    worst = np.argmax(seps, axis=0)
    return times[worst], seps[worst, np.arange(seps.shape[1])]


def equicontinuity_modulus(
    flow_system: FlowSystem,
    epsilon: float,
    t_max: float,
    sample_spec: SampleSpec | None = None,
) -> ModulusReport:
    """Search a ``δ(ε)`` on a geometric ladder or return a violation witness.

    In ``pointwise`` mode only pairs anchored at ``sample_spec.anchors`` are
    tested, so the reported ``δ`` may depend on those points.

    Raises:
        PreconditionError: ``ε <= 0`` or ``t_max <= 0``
        GeoflowError: integration failures, with the failing pair in ``data``
    """
    if not epsilon > 0 or not t_max > 0:
        raise PreconditionError(
            "需要 ε > 0 且 t_max > 0", module="analysis", data={"epsilon": epsilon, "t_max": t_max}
        )
    spec = sample_spec or SampleSpec()
    near_miss = configs.numerics.near_miss
    ladder: list[LadderLevel] = []
    witness: WitnessPair | None = None
    worst = 0.0

    for k in range(1, spec.ladder_depth + 1):
        delta = epsilon / 2.0**k
        rng = np.random.default_rng([spec.seed, k])
        A, B = perturbed_partners(flow_system, pair_bases(flow_system, spec, rng), delta, rng)
        if len(A) == 0:
            raise PreconditionError("该层没有构造出任何扰动对", module="analysis", data={"delta": delta})
        initial = flow_system.distances(A, B)
        at, seps = _measure(flow_system, A, B, t_max, spec.n_times)
        worst = float(np.max(seps))
        ladder.append(LadderLevel(delta=delta, pairs=len(A), max_initial=float(np.max(initial)), max_separation=worst))
        log_info(
            "等度连续",
            resource="阶梯",
            resource_id=str(k),
            details={"delta": delta, "pairs": len(A), "max_separation": worst},
        )
        if worst >= epsilon:
            i = int(np.argmax(seps))
            witness = WitnessPair(
                a=TangentRecord.from_unit_tangent(A.unit_tangent(i)),
                b=TangentRecord.from_unit_tangent(B.unit_tangent(i)),
                initial_distance=float(initial[i]),
                separation=float(seps[i]),
                time=float(at[i]),
            )
            continue
        witness = None
        if worst < near_miss * epsilon:
            return ModulusReport(
                verdict="satisfied",
                epsilon=epsilon,
                delta=delta,
                t_max=t_max,
                metric=flow_system.metric,
                samples=spec,
                ladder=ladder,
            )

    verdict = "violated" if witness is not None else "inconclusive"
    return ModulusReport(
        verdict=verdict,
        epsilon=epsilon,
        delta=None,
        t_max=t_max,
        metric=flow_system.metric,
        samples=spec,
        witness=witness,
        ladder=ladder,
    )


def replay_witness(flow_system: FlowSystem, report: ModulusReport, t_max: float) -> ReplayReport:
    """Re-measure the witness of a violated report over ``[0, t_max]``.

    The original witness time is always among the sampled times.

    Raises:
        PreconditionError: the report has no witness or ``t_max`` is shorter than its horizon
    """
    if report.witness is None:
        raise PreconditionError("报告中没有违例见证", module="analysis", data={"verdict": report.verdict})
    if t_max < report.t_max:
        raise PreconditionError(
            "重放时间不能短于原时间范围", module="analysis", data={"t_max": t_max, "original": report.t_max}
        )
    w = report.witness
    n = max(report.samples.n_times, int(np.ceil(report.samples.n_times * t_max / report.t_max)))
    fractions = np.unique(np.append(np.linspace(0.0, 1.0, n), w.time / t_max))
    pair = PhaseBatch.from_unit_tangents([w.a.to_unit_tangent(), w.b.to_unit_tangent()])
    result = propagate(flow_system.surface, pair, t_max, fractions=fractions, tol=flow_system.tol)
    seps = np.array([flow_system.distances(s.take([0]), s.take([1]))[0] for s in result.samples])
    k = int(np.argmax(seps))
    return ReplayReport(
        t_max=t_max,
        separation=float(seps[k]),
        time=float(fractions[k] * t_max),
        still_violated=bool(seps[k] >= report.epsilon),
    )
