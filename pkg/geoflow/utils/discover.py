import importlib
import inspect
import logging
import pkgutil
from types import ModuleType
from typing import Any

logger = logging.getLogger("geoflow")


class BaseDiscover:
    """Collect instances of ``INSTANCE_TYPE`` from the modules of a package.

    Attributes:
        INSTANCE_TYPE: the type of instances to extract
        TARGETS: packages to scan, each ``{"package": dotted name, "skip_modules": [...]}``
    """

    INSTANCE_TYPE: type | None = None
    TARGETS: list[dict[str, Any]] = []

    def discover(self) -> list[Any]:
        instances = []
        for target in self.TARGETS:
            instances.extend(self.scan(target["package"], target.get("skip_modules")))
        return instances

    def walk(self, package: str, skip_modules: list[str] | None = None) -> list[str]:
        """Dotted names of the direct submodules of ``package``, sorted."""
        skip_modules = skip_modules or []
        try:
            root = importlib.import_module(package)
        except ImportError as e:
            logger.warning(f"无法导入包 {package}: {e}")
            return []
        return sorted(
            f"{package}.{info.name}"
            for info in pkgutil.iter_modules(getattr(root, "__path__", []))
            if not info.ispkg and info.name not in skip_modules
        )

    def scan(self, package: str, skip_modules: list[str] | None = None) -> list[Any]:
        instances = []
        for name in self.walk(package, skip_modules):
            try:
                module = importlib.import_module(name)
            except ImportError as e:
                # 依赖缺失时跳过该模块, 其余命令仍可用
                logger.warning(f"无法导入模块 {name}: {e}")
                continue
            instances.extend(self.extract_instances(module))
        return instances

    def extract_instances(self, module: ModuleType) -> list[Any]:
        """Instantiate every concrete ``INSTANCE_TYPE`` subclass defined in ``module``."""
        assert self.INSTANCE_TYPE is not None
        instances = []
        for _, obj in inspect.getmembers(module, inspect.isclass):
            if (
                issubclass(obj, self.INSTANCE_TYPE)
                and obj is not self.INSTANCE_TYPE
                and obj.__module__ == module.__name__
                and not inspect.isabstract(obj)
            ):
                try:
                    instances.append(obj())
                except TypeError as e:
                    logger.warning(f"无法实例化 {obj.__name__}: {e}")
        return instances
