"""内置命令: 每个模块定义一个命令类, 由 CommandDiscover 自动注册"""
