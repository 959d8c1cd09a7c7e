"""
命令行工具模块

基于 Fire 的命令基类和内置命令的自动发现
"""

from .base import BaseCommand
from .discover import CommandDiscover

__all__ = [
    "BaseCommand",
    "CommandDiscover",
]
