"""命令行异常处理器

每个处理器接收异常, 打印一行带模块标签的消息, 返回进程退出码。
"""

from pydantic import ValidationError
from rich.console import Console

from geoflow.exceptions.base import GeoflowError
from geoflow.utils.logger import log_error, log_warning

console = Console(stderr=True)


def geoflow_exception_handler(exc: Exception) -> int:
    """库异常: 打印模块标签和消息"""
    assert isinstance(exc, GeoflowError)
    log_warning(
        "异常处理",
        resource=type(exc).__name__,
        resource_id=exc.module,
        details={"message": exc.message, **{k: v for k, v in exc.data.items() if _short(v)}},
    )
    console.print(f"[bold red]❌ [{exc.module}] {exc.message}[/bold red]")
    if exc.error_detail:
        console.print(f"[dim]{exc.error_detail}[/dim]")
    return exc.exit_code


def validation_exception_handler(exc: Exception) -> int:
    """配置校验失败: 视为用法错误并给出字段名"""
    assert isinstance(exc, ValidationError)
    fields = []
    for error in exc.errors():
        loc = ".".join(str(part) for part in error.get("loc", ())) or "<config>"
        fields.append(f"{loc}: {error.get('msg', '')}")
    log_warning("异常处理", resource="配置", status="校验失败", details={"fields": fields})
    console.print("[bold red]❌ [cli] 配置无效[/bold red]")
    for line in fields:
        console.print(f"   [red]{line}[/red]")
    return 2


def general_exception_handler(exc: Exception) -> int:
    """未预期的异常: 记录堆栈, 返回执行错误"""
    log_error(
        "异常处理",
        resource=type(exc).__name__,
        status="未处理",
        details={"message": str(exc)},
        exc_info=True,
    )
    console.print(f"[bold red]❌ [geoflow] {type(exc).__name__}: {exc}[/bold red]")
    return 2


def _short(value: object) -> bool:
    return isinstance(value, (str, int, float, bool))
