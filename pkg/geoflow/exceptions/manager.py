"""异常管理器"""

import logging
from collections.abc import Callable

from pydantic import ValidationError

from geoflow.exceptions.base import GeoflowError
from geoflow.exceptions.handlers import (
    general_exception_handler,
    geoflow_exception_handler,
    validation_exception_handler,
)

logger = logging.getLogger("geoflow")

ExceptionHandler = Callable[[Exception], int]


class ExceptionManager:
    """异常处理器管理器

    按异常类的 MRO 查找最具体的已注册处理器。
    """

    def __init__(self) -> None:
        self._handlers: dict[type[Exception], ExceptionHandler] = {}
        self._registered_defaults = False

    def register(self, exception_class: type[Exception], handler: ExceptionHandler) -> None:
        """注册异常处理器"""
        if exception_class in self._handlers:
            raise ValueError(f"异常处理器 {exception_class.__name__} 已注册")
        self._handlers[exception_class] = handler
        logger.debug(f"[异常管理器] 注册: {exception_class.__name__}")

    def register_defaults(self) -> None:
        """注册默认异常处理器"""
        if self._registered_defaults:
            return
        self.register(GeoflowError, geoflow_exception_handler)
        self.register(ValidationError, validation_exception_handler)
        self.register(Exception, general_exception_handler)
        self._registered_defaults = True

    def unregister(self, exception_class: type[Exception]) -> None:
        """取消注册异常处理器"""
        if exception_class not in self._handlers:
            raise KeyError(f"异常处理器 {exception_class.__name__} 未注册")
        del self._handlers[exception_class]

    def get_handler(self, exception_class: type[Exception]) -> ExceptionHandler | None:
        """按 MRO 获取最具体的处理器"""
        for klass in exception_class.__mro__:
            if klass in self._handlers:
                return self._handlers[klass]
        return None

    def list_handlers(self) -> list[tuple[type[Exception], ExceptionHandler]]:
        """列出所有注册的异常处理器"""
        return list(self._handlers.items())

    def handle(self, exc: Exception) -> int:
        """处理异常并返回退出码"""
        handler = self.get_handler(type(exc))
        if handler is None:
            raise exc
        return handler(exc)

    def clear(self) -> None:
        """清空所有注册的异常处理器"""
        self._handlers.clear()
        self._registered_defaults = False


_global_manager: ExceptionManager | None = None


def get_manager() -> ExceptionManager:
    """获取全局异常管理器"""
    global _global_manager
    if _global_manager is None:
        _global_manager = ExceptionManager()
        _global_manager.register_defaults()
    return _global_manager


def reset_manager() -> None:
    """重置全局异常管理器(用于测试)"""
    global _global_manager
    _global_manager = None
