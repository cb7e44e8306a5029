"""
A-Ram 명령어 형식 모듈
"""

import logging
import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Dict, Iterable, List, Optional

import numpy as np

from core.errors import MachineError

logger = logging.getLogger(__name__)

_DTYPES = {8: np.uint8, 16: np.uint16, 32: np.uint32, 64: np.uint64}


class Opcode(IntEnum):
    """A-Ram 연산 코드 (최상위 2비트)"""
    WRT0 = 0
    WRT1 = 1
    COND = 2
    JUMP = 3


MNEMONICS: Dict[Opcode, str] = {
    Opcode.WRT0: "wrt0",
    Opcode.WRT1: "wrt1",
    Opcode.COND: "cond",
    Opcode.JUMP: "jump",
}
_BY_MNEMONIC = {name: op for op, name in MNEMONICS.items()}


@dataclass(frozen=True)
class MachineConfig:
    """A-Ram 기계 설정

    p 는 오프셋 길이, 레지스터는 n = 2^p 비트이다. register_count 를 지정하지
    않으면 전체 메모리 블록 2^(n-p-2) 개를 사용한다.
    """

    p: int = 5
    register_count: Optional[int] = None

    def __post_init__(self):
        if self.p < 3:
            raise MachineError(f"p 는 3 이상이어야 합니다: {self.p}")
        if self.n > 64:
            raise MachineError(f"지원하지 않는 레지스터 폭: {self.n}")
        if self.register_count is not None:
            if self.register_count < 4 or self.register_count > self.full_register_count:
                raise MachineError(
                    f"레지스터 수 범위 오류: {self.register_count} (최대 {self.full_register_count})"
                )

    @property
    def n(self) -> int:
        return 1 << self.p

    @property
    def full_register_count(self) -> int:
        return 1 << (self.n - self.p - 2)

    @property
    def registers(self) -> int:
        """실제 메모리 블록 크기"""
        return self.register_count if self.register_count is not None else self.full_register_count

    @property
    def dtype(self):
        return _DTYPES[self.n]

    @property
    def y_mask(self) -> int:
        return (1 << self.p) - 1

    @property
    def x_mask(self) -> int:
        return (1 << (self.n - self.p - 2)) - 1

    @property
    def word_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def opcode_shift(self) -> int:
        return self.n - 2


@dataclass(frozen=True)
class Instruction:
    """해독된 명령어"""

    opcode: Opcode
    x: int
    y: int

    def encode(self, config: MachineConfig) -> int:
        return encode(self, config)

    def __str__(self) -> str:
        return f"{MNEMONICS[self.opcode]} {self.x} {self.y}"


def decode(word: int, config: MachineConfig) -> Instruction:
    """기계어 단어를 명령어로 해독

    Args:
        word: n 비트 부호 없는 정수
        config: 기계 설정

    Returns:
        해독된 명령어
    """
    word = int(word)
    return Instruction(
        Opcode((word >> config.opcode_shift) & 3),
        (word >> config.p) & config.x_mask,
        word & config.y_mask,
    )


def encode(instr: Instruction, config: MachineConfig) -> int:
    """명령어를 기계어 단어로 부호화"""
    if not 0 <= instr.x <= config.x_mask:
        raise MachineError(f"destination 범위 초과: {instr.x}")
    if not 0 <= instr.y <= config.y_mask:
        raise MachineError(f"offset 범위 초과: {instr.y}")
    return (int(instr.opcode) << config.opcode_shift) | (instr.x << config.p) | instr.y


def make_word(opcode: Opcode, x: int, y: int, config: MachineConfig) -> int:
    return encode(Instruction(opcode, x, y), config)


_LINE = re.compile(r"^(?:(\d+)\s+)?(wrt0|wrt1|cond|jump)\s+(\d+)(?:\s+(\d+))?$")


def assemble(text: str, config: MachineConfig) -> Dict[int, int]:
    """A-Ram 어셈블리 텍스트를 레지스터별 기계어로 변환

    한 줄에 한 명령어. 레지스터 번호가 앞에 오면 그 레지스터에, 없으면
    직전 레지스터 다음에 배치한다 (첫 줄은 레지스터 1). '//' 이후는 주석.

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
            raise MachineError(f"어셈블리 구문 오류 (줄 {lineno}): {raw.strip()}")
        number, mnemonic, x, y = match.groups()
        register = int(number) if number else register + 1
        if register in program:
            raise MachineError(f"레지스터 {register} 중복 정의 (줄 {lineno})")
        program[register] = make_word(_BY_MNEMONIC[mnemonic], int(x), int(y or 0), config)
    logger.debug(f"어셈블 완료: {len(program)} 명령어")
    return program


def disassemble(words: Iterable[int], config: MachineConfig, start: int = 1) -> str:
    """기계어 단어열을 번호 붙은 어셈블리 텍스트로 변환"""
    lines: List[str] = []
    for register, word in enumerate(words, start=start):
        lines.append(f"{register} {decode(word, config)}")
    return "\n".join(lines)
