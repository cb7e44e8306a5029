"""
B-Ram 명령어 형식 모듈
"""

import logging
import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Iterable, List

from core.errors import MachineError

logger = logging.getLogger(__name__)


class BOpcode(IntEnum):
    """B-Ram 연산 코드 (최상위 3비트)"""
    WRT0 = 0
    WRT1 = 1
    COND = 2
    JUMP = 3
    MVRT = 4
    MVLT = 5


B_MNEMONICS: Dict[BOpcode, str] = {
    BOpcode.WRT0: "wrt0",
    BOpcode.WRT1: "wrt1",
    BOpcode.COND: "cond",
    BOpcode.JUMP: "jump",
    BOpcode.MVRT: "mvrt",
    BOpcode.MVLT: "mvlt",
}
_BY_MNEMONIC = {name: op for op, name in B_MNEMONICS.items()}


@dataclass(frozen=True)
class BConfig:
    """B-Ram 기계 설정

    p=4 이면 16비트 레지스터: 연산 코드 비트 13-15, destination 비트 4-12,
    offset 비트 0-3, 메모리 블록당 512 레지스터.
    """

    p: int = 4

    def __post_init__(self):
        if self.p < 3:
            raise MachineError(f"p 는 3 이상이어야 합니다: {self.p}")
        if self.p > 5:
            raise MachineError(f"지원하지 않는 레지스터 폭: {self.n}")

    @property
    def n(self) -> int:
        return 1 << self.p

    @property
    def block_size(self) -> int:
        return 1 << (self.n - self.p - 3)

    @property
    def x_mask(self) -> int:
        return self.block_size - 1

    @property
    def y_mask(self) -> int:
        return (1 << self.p) - 1

    @property
    def opcode_shift(self) -> int:
        return self.n - 3

    @property
    def word_mask(self) -> int:
        return (1 << self.n) - 1


@dataclass(frozen=True)
class BInstruction:
    """해독된 B-Ram 명령어"""

    opcode: BOpcode
    x: int
    y: int = 0

    def __str__(self) -> str:
        name = B_MNEMONICS[self.opcode]
        if self.opcode in (BOpcode.MVRT, BOpcode.MVLT) or (self.opcode == BOpcode.JUMP and self.y == 0):
            return f"{name} {self.x}"
        return f"{name} {self.x} {self.y}"


def decode_b(word: int, config: BConfig) -> BInstruction:
    """기계어 단어 해독

    Raises:
        MachineError: 연산 코드 6, 7
    """
    word = int(word)
    code = (word >> config.opcode_shift) & 7
    if code > BOpcode.MVLT:
        raise MachineError(f"불법 B-Ram 연산 코드: {code:03b}")
    return BInstruction(BOpcode(code), (word >> config.p) & config.x_mask, word & config.y_mask)


def encode_b(instr: BInstruction, config: BConfig) -> int:
    if not 0 <= instr.x <= config.x_mask:
        raise MachineError(f"destination 범위 초과: {instr.x}")
    if not 0 <= instr.y <= config.y_mask:
        raise MachineError(f"offset 범위 초과: {instr.y}")
    return (int(instr.opcode) << config.opcode_shift) | (instr.x << config.p) | instr.y


def make_b_word(opcode: BOpcode, x: int, y: int, config: BConfig) -> int:
    return encode_b(BInstruction(opcode, x, y), config)


_LINE = re.compile(
    r"^(?:(\d+)\s+)?(wrt0|wrt1|cond|jump|mvrt|mvlt)\s+(\d+(?:\s*,\s*\d+)*)(?:\s+(\d+))?$"
)


def assemble_b(text: str, config: BConfig) -> Dict[int, int]:
    """B-Ram 어셈블리를 코드 블록 레지스터별 기계어로 변환

    줄 형식은 A-Ram 과 같다. mvrt/mvlt 는 쉼표로 여러 대상을 나열할 수 있고
    대상마다 연속된 레지스터에 명령어 하나씩 배치된다
    (예: "2 mvrt 10,13,16" 은 레지스터 2, 3, 4).

    Returns:
        레지스터 번호 -> 기계어 단어
    """
    program: Dict[int, int] = {}
    register = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        match = _LINE.match(line)
        if not match:
            raise MachineError(f"B-Ram 어셈블리 구문 오류 (줄 {lineno}): {raw.strip()}")
        number, mnemonic, targets, y = match.groups()
        opcode = _BY_MNEMONIC[mnemonic]
        xs = [int(t) for t in targets.split(",")]
        if len(xs) > 1 and opcode not in (BOpcode.MVRT, BOpcode.MVLT):
            raise MachineError(f"대상 목록은 mvrt/mvlt 에만 허용됩니다 (줄 {lineno})")
        register = int(number) if number else register + 1
        for k, x in enumerate(xs):
            if register + k in program:
                raise MachineError(f"레지스터 {register + k} 중복 정의 (줄 {lineno})")
            program[register + k] = make_b_word(opcode, x, int(y or 0), config)
        register += len(xs) - 1
    logger.debug(f"B-Ram 어셈블 완료: {len(program)} 명령어")
    return program


def disassemble_b(words: Iterable[int], config: BConfig, start: int = 1) -> str:
    lines: List[str] = []
    for register, word in enumerate(words, start=start):
        lines.append(f"{register} {decode_b(word, config)}")
    return "\n".join(lines)
