"""
实验配置

An experiment is configured by a human-readable ``key=value`` file read
through the pydantic-settings dotenv source, plus command-line flags passed as
init values; flags win. Process environment variables are not consulted, so a
config file and its flags fully determine a run.
"""

from pathlib import Path
from typing import Any, Literal

from pydantic import Field, model_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict

from geoflow.exceptions import ConfigurationError
from geoflow.scenarios.params import ScenarioName, ScenarioParams

ExperimentName = Literal[
    "integrate",
    "section",
    "equicont",
    "recur",
    "distal",
    "almostperiod",
    "closed-geodesics",
    "census",
    "oracle-check",
    "accept",
]
Expectation = Literal["satisfied", "violated", "inconclusive"]


class ExperimentConfig(BaseSettings):
    """实验配置

    Fields not used by the selected experiment are ignored by it but still
    validated and echoed into every JSON report.
    """

    # 场景
    scenario: ScenarioName = Field(default="sphere", description="场景名称")
    radius: float = Field(default=1.0, gt=0)
    semi_axes: tuple[float, float, float] = (1.0, 1.2, 1.5)
    torus_periods: tuple[float, float] = (1.0, 1.0)
    zoll_lambda: float = Field(default=0.3, gt=-1, lt=1)
    blend_inner: float = Field(default=0.5, gt=0)
    blend_outer: float = Field(default=1.0, gt=0)
    plane_bound: float = Field(default=50.0, gt=0)

    # 实验
    experiment: ExperimentName = Field(default="integrate", description="实验名称")
    seed: int = 0
    tol: float = Field(default=1e-9, gt=0, description="积分器局部误差目标")
    t_max: float = Field(default=10.0, gt=0, description="时间上限")
    samples: int = Field(default=201, ge=1, description="采样数量 (含义随实验而定)")
    initial: tuple[float, float, float, float] | None = Field(
        default=None, description="初始向量 (u, v, du, dv); 平面场景为像平面坐标 (x1, x2, v1, v2)"
    )

    # 分析参数
    epsilon: float = Field(default=0.1, gt=0)
    tau: float = Field(default=7.0, gt=0)
    metric: Literal["sasaki", "d1"] = "sasaki"
    mode: Literal["uniform", "pointwise"] = "uniform"
    ladder_depth: int = Field(default=10, ge=1)
    n_times: int = Field(default=400, ge=2)
    perturbations: int = Field(default=4, ge=1)
    anchor_plane: Literal["xy", "xz", "yz", "middle"] | None = None
    n_max: int = Field(default=10, ge=1)
    near_return_tol: float = Field(default=1e-5, gt=0)
    power: int = Field(default=1, ge=1)
    map_name: Literal["return", "twist", "identity"] = "return"
    grid: tuple[int, int] = (200, 100)
    census_tol: float = Field(default=1e-4, gt=0)
    period_range: tuple[float, float] = (5.0, 10.0)
    shooting_tol: float = Field(default=1e-6, gt=0)
    oracle_tol: float = Field(default=1e-6, gt=0)
    distal_floor: float = Field(default=1e-4, gt=0)
    criteria: tuple[int, ...] | None = Field(default=None, description="验收条目子集; 默认运行该场景的全部条目")

    # 截面
    crossing_mode: Literal["transversal", "same_side"] = "transversal"
    guard: float = Field(default=0.01, gt=0, lt=0.5)
    horizon: float = Field(default=200.0, gt=0)

    # 输出
    out: str | None = Field(default=None, description="输出路径")
    format: Literal["csv", "json"] = "json"
    expect: Expectation | None = None

    model_config = SettingsConfigDict(extra="forbid", env_file_encoding="utf-8")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # 参数优先, 其次配置文件; 不读取进程环境变量
        return init_settings, dotenv_settings

    @model_validator(mode="after")
    def check_ranges(self):
        lo, hi = self.period_range
        if not 0 < lo < hi:
            raise ValueError("period_range 必须满足 0 < min < max")
        if self.blend_outer <= self.blend_inner:
            raise ValueError("blend_outer 必须大于 blend_inner")
        if min(self.grid) < 2:
            raise ValueError("grid 两个分量都必须 >= 2")
        return self

    def scenario_params(self) -> ScenarioParams:
        return ScenarioParams(
            radius=self.radius,
            semi_axes=self.semi_axes,
            torus_periods=self.torus_periods,
            zoll_lambda=self.zoll_lambda,
            blend_inner=self.blend_inner,
            blend_outer=self.blend_outer,
            plane_bound=self.plane_bound,
        )


def load_config(path: str | None = None, **overrides: Any) -> ExperimentConfig:
    """Read ``path`` (``key=value`` lines) and apply ``overrides``; ``None`` overrides are dropped.

    Raises:
        ConfigurationError: the file does not exist
        pydantic.ValidationError: unknown keys or invalid values
    """
    if path is not None and not Path(path).is_file():
        raise ConfigurationError(f"配置文件不存在: {path}", data={"config": path})
    values = {k.replace("-", "_"): v for k, v in overrides.items() if v is not None}
    return ExperimentConfig(_env_file=path, **values)
