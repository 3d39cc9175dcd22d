"""
Command-line front end: solve, table, period and emit
"""
from .manager import main, build_parser, cmd_hbm_solve, cmd_table, cmd_period, cmd_emit
from .models import RunConfig

__all__ = [
    "main",
    "build_parser",
    "cmd_hbm_solve",
    "cmd_table",
    "cmd_period",
    "cmd_emit",
    "RunConfig"
]
