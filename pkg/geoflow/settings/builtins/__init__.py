from .settings import DefaultSettings, LogConfig, NumericsConfig

__all__ = ["DefaultSettings", "LogConfig", "NumericsConfig"]
