"""
进程级默认配置

使用嵌套配置模型, 日志和数值默认值分组管理
"""

from pydantic import BaseModel, Field, model_validator  # noqa: I001
from pydantic_settings import BaseSettings, SettingsConfigDict


# 配置分组


class LogConfig(BaseModel):
    """日志配置"""

    level: str = Field(default="INFO", description="日志级别")
    format: str = Field(default="STRING", description="日志格式 STRING | JSON")
    to_file: bool = Field(default=False, description="是否输出到文件")
    file_path: str = Field(default="logs/geoflow.log", description="日志文件路径")
    backup_count: int = Field(default=10, description="备份文件数量")


class NumericsConfig(BaseModel):
    """数值默认值

    Experiments and estimators fall back to these values when a caller does not
    pass an explicit knob.
    """

    tol: float = Field(default=1e-9, gt=0, description="积分器局部误差目标")
    tangency_guard: float = Field(default=0.01, gt=0, lt=0.5, description="切向保护角 θ_min")
    return_horizon: float = Field(default=200.0, gt=0, description="回归映射搜索时间上限")
    bisection_tol: float = Field(default=1e-10, gt=0, description="穿越时间二分精度")
    dedup_threshold: float = Field(default=1e-3, gt=0, description="闭测地线去重阈值")
    max_halvings: int = Field(default=10, ge=0, description="最小周期折半次数上限")
    near_miss: float = Field(default=0.9, gt=0, lt=1, description="等度连续近失阈值比例")
    renormalize_above: float = Field(default=1e-10, gt=0, description="输出重归一化阈值")


# 主配置类


class DefaultSettings(BaseSettings):
    """
    进程设置

    环境变量使用 GEOFLOW_ 前缀, 例如:
    - GEOFLOW_LOG_LEVEL=DEBUG
    - GEOFLOW_LOG_FORMAT=JSON
    - GEOFLOW_TOL=1e-10
    """

    project_name: str = Field(default="geoflow", description="项目名称")

    # 顶层字段读取环境变量, 再通过 model_validator 传递给嵌套配置
    log_level: str = Field(default="INFO", validation_alias="GEOFLOW_LOG_LEVEL")
    log_format: str = Field(default="STRING", validation_alias="GEOFLOW_LOG_FORMAT")
    log_to_file: bool = Field(default=False, validation_alias="GEOFLOW_LOG_TO_FILE")
    tol: float = Field(default=1e-9, gt=0, validation_alias="GEOFLOW_TOL")

    # 嵌套配置
    log: LogConfig = Field(default_factory=LogConfig, description="日志配置")
    numerics: NumericsConfig = Field(default_factory=NumericsConfig, description="数值配置")

    @model_validator(mode="after")
    def propagate_flat_fields(self):
        """把顶层环境变量字段同步到嵌套配置"""
        if self.log_format.upper() not in {"STRING", "JSON"}:
            raise ValueError(f"不支持的日志格式: {self.log_format}")
        self.log.level = self.log_level
        self.log.format = self.log_format
        self.log.to_file = self.log_to_file
        self.numerics.tol = self.tol
        return self

    model_config = SettingsConfigDict(
        env_file=".env",
        extra="ignore",
    )
