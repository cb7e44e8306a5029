"""
B-Ram 패키지
"""

from core.bram.instruction import BConfig, BInstruction, BOpcode, assemble_b, decode_b, disassemble_b, encode_b
from core.bram.machine import BErrorKind, BMemory, CursorMap, step_sequential_b, step_synchronic_b
from core.bram.runner import run_b
from core.bram.tm import TuringMachine, load_tm, run_tm
from core.bram.utm import decode_tape, encode_tm, run_utm

__all__ = [
    "BConfig",
    "BInstruction",
    "BOpcode",
    "assemble_b",
    "decode_b",
    "disassemble_b",
    "encode_b",
    "BErrorKind",
    "BMemory",
    "CursorMap",
    "step_sequential_b",
    "step_synchronic_b",
    "run_b",
    "TuringMachine",
    "load_tm",
    "run_tm",
    "decode_tape",
    "encode_tm",
    "run_utm",
]
