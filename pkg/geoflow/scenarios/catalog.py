"""Scenario catalog: surfaces by name."""

from __future__ import annotations

from collections.abc import Callable
from typing import Any

from pydantic import ValidationError

from geoflow.exceptions import ConfigurationError
from geoflow.geometry.surface import Surface
from geoflow.scenarios.params import SCENARIO_NAMES, ScenarioParams
from geoflow.scenarios.plane import PlaneExp, PlaneFlat
from geoflow.scenarios.sphere_like import Ellipsoid, RoundSphere, ZollSphere
from geoflow.scenarios.torus import FlatTorus
from geoflow.utils.logger import log_debug

_BUILDERS: dict[str, Callable[[ScenarioParams], Surface]] = {
    "sphere": lambda p: RoundSphere(p.radius),
    "ellipsoid": lambda p: Ellipsoid(p.semi_axes),
    "flat_torus": lambda p: FlatTorus(p.torus_periods),
    "zoll": lambda p: ZollSphere(p.zoll_lambda),
    "plane_exp": lambda p: PlaneExp(p.blend_inner, p.blend_outer, p.plane_bound),
    "plane_flat": lambda p: PlaneFlat(p.plane_bound),
}

# 具有周期流的场景 (所有测地线闭合)
P_MANIFOLDS = frozenset({"sphere", "zoll"})


def catalog(name: str, params: ScenarioParams | dict[str, Any] | None = None) -> Surface:
    """Build a catalog surface.

    Raises:
        ConfigurationError: unknown name or invalid parameters
    """
    if name not in _BUILDERS:
        raise ConfigurationError(
            f"未知场景: {name}", module="scenarios", data={"scenario": name, "known": list(SCENARIO_NAMES)}
        )
    if not isinstance(params, ScenarioParams):
        try:
            params = ScenarioParams.model_validate(params or {})
        except ValidationError as exc:
            fields = [".".join(str(part) for part in err["loc"]) for err in exc.errors()]
            raise ConfigurationError(
                f"场景参数无效: {', '.join(fields)}",
                module="scenarios",
                data={"scenario": name, "fields": fields},
            ) from exc
    surface = _BUILDERS[name](params)
    log_debug("构造", resource="曲面", resource_id=name, status="完成", details=surface.params)
    return surface
