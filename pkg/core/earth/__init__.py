"""
Earth 레벨 0 언어 패키지
"""

from core.earth.compiler import compile_earth, expand_earth, listing, resolve
from core.earth.module import CompiledModule, Fixup, ModuleRun, execute, load_module, read_symbol, write_symbol
from core.earth.numex import Numex, eval_numex, parse_numex
from core.earth.parser import parse_earth
from core.earth.replicate import replicate
from core.earth.storage import Symbol, allocate_storage

__all__ = [
    "compile_earth",
    "expand_earth",
    "listing",
    "resolve",
    "CompiledModule",
    "Fixup",
    "ModuleRun",
    "execute",
    "load_module",
    "read_symbol",
    "write_symbol",
    "Numex",
    "eval_numex",
    "parse_numex",
    "parse_earth",
    "replicate",
    "Symbol",
    "allocate_storage",
]
