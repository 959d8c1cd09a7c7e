"""
配置实例模块

提供全局配置实例, 避免循环导入
"""

from geoflow.settings.builtins.settings import DefaultSettings

configs = DefaultSettings()
