"""异常处理模块"""

from geoflow.exceptions.base import GeoflowError
from geoflow.exceptions.manager import ExceptionManager, get_manager, reset_manager
from geoflow.exceptions.types import (
    ConfigurationError,
    ConstructionError,
    DomainError,
    HorizonError,
    NumericalError,
    OrbitEscapeError,
    PreconditionError,
    StiffnessError,
    TangencyError,
)

__all__ = [
    "GeoflowError",
    "ConfigurationError",
    "ConstructionError",
    "DomainError",
    "HorizonError",
    "NumericalError",
    "OrbitEscapeError",
    "PreconditionError",
    "StiffnessError",
    "TangencyError",
    "ExceptionManager",
    "get_manager",
    "reset_manager",
]
