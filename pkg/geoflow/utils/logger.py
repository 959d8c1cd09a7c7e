"""
统一日志格式工具

所有模块通过这里输出结构化日志: 消息文本统一为
``[操作] 资源: 标识 状态: 值 k: v``, 结构化字段通过 ``extra`` 传递,
JSON 格式下成为顶级字段。
"""

import logging
from typing import Any

logger = logging.getLogger("geoflow")


def format_log_message(
    action: str,
    resource: str | None = None,
    resource_id: str | None = None,
    status: str | None = None,
    details: dict[str, Any] | None = None,
    message: str | None = None,
) -> str:
    """格式化日志消息

    Args:
        action: 操作类型 (如: "积分", "回归映射", "打靶")
        resource: 资源类型 (如: "曲面", "截面", "种子")
        resource_id: 资源标识 (如: 曲面名称, 种子序号)
        status: 状态 (如: "成功", "失败", "跳过")
        details: 额外详细信息字典
        message: 自定义消息 (如果提供, 将优先使用)

    Returns:
        格式化后的日志消息

    Example:
        >>> format_log_message("积分", resource="曲面", resource_id="sphere", status="完成")
        '[积分] 曲面: sphere 状态: 完成'
    """
    if message:
        return message

    parts = [f"[{action}]"]
    if resource:
        parts.append(f"{resource}: {resource_id}" if resource_id else resource)
    if status:
        parts.append(f"状态: {status}")
    if details:
        parts.extend(f"{k}: {v}" for k, v in details.items())
    return " ".join(parts)


def _structured_extra(
    action: str,
    resource: str | None,
    resource_id: str | None,
    status: str | None,
    details: dict[str, Any] | None,
) -> dict[str, Any]:
    extra: dict[str, Any] = {"event": action}
    if resource:
        extra["resource_type"] = resource
    if resource_id:
        extra["resource_id"] = resource_id
    if status:
        extra["status"] = status
    if details:
        # 与 LogRecord 自带属性同名的键会让 logging 抛出 KeyError
        extra.update({f"detail_{k}" if k in _CLASHING else k: v for k, v in details.items()})
    return extra


_CLASHING = frozenset({"name", "message", "args", "module", "msg", "filename", "lineno"})


def _emit(
    level: int,
    action: str,
    resource: str | None,
    resource_id: str | None,
    status: str | None,
    details: dict[str, Any] | None,
    message: str | None,
    logger_instance: logging.Logger | None,
    exc_info: bool = False,
) -> None:
    log = logger_instance or logger
    if not log.isEnabledFor(level):
        return
    msg = format_log_message(action, resource, resource_id, status, details, message)
    extra = _structured_extra(action, resource, resource_id, status, details)
    log.log(level, msg, extra=extra, exc_info=exc_info, stacklevel=3)


def log_info(
    action: str,
    resource: str | None = None,
    resource_id: str | None = None,
    status: str | None = None,
    details: dict[str, Any] | None = None,
    message: str | None = None,
    logger_instance: logging.Logger | None = None,
) -> None:
    """记录 INFO 级别日志"""
    _emit(logging.INFO, action, resource, resource_id, status, details, message, logger_instance)


def log_warning(
    action: str,
    resource: str | None = None,
    resource_id: str | None = None,
    status: str | None = None,
    details: dict[str, Any] | None = None,
    message: str | None = None,
    logger_instance: logging.Logger | None = None,
) -> None:
    """记录 WARNING 级别日志"""
    _emit(
        logging.WARNING, action, resource, resource_id, status, details, message, logger_instance
    )


def log_error(
    action: str,
    resource: str | None = None,
    resource_id: str | None = None,
    status: str | None = None,
    details: dict[str, Any] | None = None,
    message: str | None = None,
    logger_instance: logging.Logger | None = None,
    exc_info: bool = False,
) -> None:
    """记录 ERROR 级别日志"""
    _emit(
        logging.ERROR,
        action,
        resource,
        resource_id,
        status,
        details,
        message,
        logger_instance,
        exc_info=exc_info,
    )


def log_debug(
    action: str,
    resource: str | None = None,
    resource_id: str | None = None,
    status: str | None = None,
    details: dict[str, Any] | None = None,
    message: str | None = None,
    logger_instance: logging.Logger | None = None,
) -> None:
    """记录 DEBUG 级别日志"""
    _emit(logging.DEBUG, action, resource, resource_id, status, details, message, logger_instance)
