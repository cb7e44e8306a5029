"""
Spatiale 콘솔 명령
"""

from core.console.commands import (
    RunReport,
    Workspace,
    cmd_add_earth,
    cmd_add_space,
    cmd_add_types,
    cmd_disasm,
    cmd_inspect,
    cmd_list,
    cmd_load_corpus,
    cmd_run,
    open_workspace,
    parse_machine,
)
from core.console.render import parse_value, render_value, report_lines

__all__ = [
    "RunReport",
    "Workspace",
    "cmd_add_earth",
    "cmd_add_space",
    "cmd_add_types",
    "cmd_disasm",
    "cmd_inspect",
    "cmd_list",
    "cmd_load_corpus",
    "cmd_run",
    "open_workspace",
    "parse_machine",
    "parse_value",
    "render_value",
    "report_lines",
]
