"""Scenario parameters."""

from typing import Literal, get_args

from pydantic import BaseModel, Field, field_validator

ScenarioName = Literal["sphere", "ellipsoid", "flat_torus", "zoll", "plane_exp", "plane_flat"]

SCENARIO_NAMES: tuple[str, ...] = get_args(ScenarioName)


class ScenarioParams(BaseModel):
    """曲面参数

    Unused fields are ignored by scenarios that do not need them.
    """

    radius: float = Field(default=1.0, gt=0, description="球半径")
    semi_axes: tuple[float, float, float] = Field(default=(1.0, 1.2, 1.5), description="椭球半轴")
    torus_periods: tuple[float, float] = Field(default=(1.0, 1.0), description="环面周期")
    zoll_lambda: float = Field(default=0.3, gt=-1, lt=1, description="Zoll 形变参数 λ")
    blend_inner: float = Field(default=0.5, gt=0, description="恒等区终点")
    blend_outer: float = Field(default=1.0, gt=0, description="指数区起点")
    plane_bound: float = Field(default=50.0, gt=0, description="平面坐标半径上限")

    @field_validator("semi_axes", "torus_periods")
    @classmethod
    def positive_entries(cls, value):
        if any(x <= 0 for x in value):
            raise ValueError("所有分量必须为正")
        return value
