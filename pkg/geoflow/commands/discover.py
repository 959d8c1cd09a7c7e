"""
自动发现内置命令
"""

from typing import Any

from geoflow.commands.base import BaseCommand
from geoflow.utils.discover import BaseDiscover


class CommandDiscover(BaseDiscover):
    INSTANCE_TYPE = BaseCommand
    TARGETS = [
        {
            "package": "geoflow.commands.builtins",
            "skip_modules": [],
        },
    ]

    def collect(self) -> dict[str, Any]:
        commands = {}
        for instance in self.discover():
            commands[instance._get_command_name()] = instance._entry()
        return commands
