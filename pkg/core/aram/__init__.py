"""
A-Ram 패키지
"""

from core.aram.instruction import (
    Instruction,
    MachineConfig,
    Opcode,
    assemble,
    decode,
    disassemble,
    encode,
    make_word,
)
from core.aram.machine import ErrorKind, MemoryBlock, Status, step_sequential, step_synchronic
from core.aram.runner import Outcome, run, run_module

__all__ = [
    "Instruction",
    "MachineConfig",
    "Opcode",
    "assemble",
    "decode",
    "disassemble",
    "encode",
    "make_word",
    "ErrorKind",
    "MemoryBlock",
    "Status",
    "step_sequential",
    "step_synchronic",
    "Outcome",
    "run",
    "run_module",
]
