"""Utility helpers"""

import os

# 先定义 BASE_DIR, 避免循环导入
BASE_DIR = os.path.dirname(os.path.dirname(__file__))
