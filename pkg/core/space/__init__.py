"""
Space 상호언어 패키지
"""

from core.space.compiler import MapNode, check_module, compile_space, read_phase, submodule_map, trace_lines
from core.space.expand import expand
from core.space.indexical import Indexical, eval_indexical, parse_indexical
from core.space.parser import parse_space
from core.space.scheduling import emit_barrier, emit_jump_tree, jump_tree
from core.space.types import TypeDef, TypeTable, parse_typedefs

__all__ = [
    "MapNode",
    "check_module",
    "compile_space",
    "read_phase",
    "submodule_map",
    "trace_lines",
    "expand",
    "Indexical",
    "eval_indexical",
    "parse_indexical",
    "parse_space",
    "emit_barrier",
    "emit_jump_tree",
    "jump_tree",
    "TypeDef",
    "TypeTable",
    "parse_typedefs",
]
