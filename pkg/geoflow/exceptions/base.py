"""异常基类"""

from typing import Any


class GeoflowError(Exception):
    """统一异常基类

    所有库异常都继承此类, 命令行据此给出带模块标签的消息和退出码。

    Attributes:
        message: 错误消息
        module: 出错模块标签 (geometry, flow, section, analysis, scenarios, cli)
        exit_code: 命令行退出码
        error_detail: 详细错误信息
        data: 附加数据 (位置、部分轨道、种子编号等)
    """

    default_exit_code: int = 2
    default_message: str = "执行失败"
    default_module: str = "geoflow"

    def __init__(
        self,
        message: str | None = None,
        *,
        module: str | None = None,
        exit_code: int | None = None,
        error_detail: str | None = None,
        data: dict[str, Any] | None = None,
    ) -> None:
        self.message = message or self.default_message
        self.module = module or self.default_module
        self.exit_code = exit_code if exit_code is not None else self.default_exit_code
        self.error_detail = error_detail
        self.data = data or {}
        super().__init__(self.message)

    def __repr__(self) -> str:
        return (
            f"{self.__class__.__name__}("
            f"message={self.message!r}, "
            f"module={self.module!r}, "
            f"exit_code={self.exit_code})"
        )

    def __str__(self) -> str:
        return f"[{self.module}] {self.message}"

    def to_dict(self, *, include_detail: bool = True) -> dict[str, Any]:
        """转换为字典格式

        Args:
            include_detail: 是否包含详细错误信息

        Returns:
            错误报告字典
        """
        result: dict[str, Any] = {
            "error": self.__class__.__name__,
            "module": self.module,
            "message": self.message,
            "data": self.data,
        }
        if include_detail and self.error_detail:
            result["error_detail"] = self.error_detail
        return result
