"""
命令基类

Command names are derived from class names: known suffixes are stripped and
CamelCase becomes kebab-case (``FindGeodesicsCommand`` → ``find-geodesics``).
A command exposing only ``run`` is registered as that function, so its flags
follow the command name directly; other commands are exposed as groups.
"""

import inspect
import re
from typing import Any

from geoflow.experiments.runner import EXIT_OK, run_from

_CAMEL_BOUNDARY = re.compile(r"(?<=[a-z0-9])(?=[A-Z])")


class BaseCommand:
    """命令基类

    Attributes:
        _DEFAULT_PREFIXES: prefixes stripped from command names
        _DEFAULT_SUFFIXES: suffixes stripped from command names
    """

    # 私有属性, 避免被 Fire 暴露
    _DEFAULT_PREFIXES: list[str] = []
    _DEFAULT_SUFFIXES: list[str] = ["Commands", "Command", "Group"]

    class Meta:
        PREFIXES: list[str] = []
        SUFFIXES: list[str] = []

    @classmethod
    def _get_command_name(
        cls,
        class_name: str | None = None,
        prefixes: list[str] | None = None,
        suffixes: list[str] | None = None,
    ) -> str:
        """
        Example:
            >>> FindGeodesicsCommand._get_command_name()
            'find-geodesics'
        """
        if class_name is None:
            class_name = cls.__name__
        if prefixes is None:
            prefixes = cls._DEFAULT_PREFIXES + getattr(cls.Meta, "PREFIXES", [])
        if suffixes is None:
            suffixes = cls._DEFAULT_SUFFIXES + getattr(cls.Meta, "SUFFIXES", [])

        # 优先匹配较长的前缀和后缀
        for prefix in sorted(prefixes, key=len, reverse=True):
            if class_name.startswith(prefix):
                class_name = class_name[len(prefix) :]
                break
        for suffix in sorted(suffixes, key=len, reverse=True):
            if class_name.endswith(suffix):
                class_name = class_name[: -len(suffix)]
                break
        return _CAMEL_BOUNDARY.sub("-", class_name).lower()

    def _entry(self) -> Any:
        """The object handed to Fire: ``run`` for single-action commands, the instance otherwise."""
        public = [name for name, _ in inspect.getmembers(type(self), inspect.isfunction) if not name.startswith("_")]
        if public == ["run"]:
            return self.run  # type: ignore[attr-defined]
        return self

    def _launch(self, experiment: str, config: str | None = None, **flags: Any) -> None:
        """Run ``experiment``; a non-zero status leaves the process through ``SystemExit``."""
        status = run_from(config, experiment=experiment, **flags)
        if status != EXIT_OK:
            raise SystemExit(status)
