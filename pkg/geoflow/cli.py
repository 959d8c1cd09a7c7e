"""
geoflow 命令行入口

Discovers the builtin commands and hands them to Fire.
"""

import os
from typing import Any

import fire

from geoflow.commands.discover import CommandDiscover
from geoflow.settings import logger


def main() -> None:
    """geoflow 命令行主入口"""
    # 禁用 Fire 的分页器, 输出直接显示
    if "PAGER" not in os.environ:
        os.environ["PAGER"] = "cat"

    logger.debug("[命令行] 启动")
    commands: dict[str, Any] = CommandDiscover().collect()
    fire.Fire(commands, name="geoflow")


if __name__ == "__main__":
    main()
