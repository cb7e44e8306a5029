"""
A-Ram 상태 및 상태 변환 함수 모듈
"""

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Union

import numpy as np

from core.aram.instruction import MachineConfig, Opcode
from core.errors import MachineError

logger = logging.getLogger(__name__)


class ErrorKind(IntEnum):
    """Synchronic A-Ram 오류 종류 (값 = 레지스터 0 의 상태 비트)"""
    MARKING = 1
    WRITE = 2
    HALT = 3
    LIVE = 4
    COND = 5
    CONSEQUENT = 6
    ACTIVE = 7
    JUMP = 8
    ERROR = 9


# Sequential A-Ram 은 세 가지 실패만 있고 비트 번호가 다르다
SEQUENTIAL_BITS: Dict[ErrorKind, int] = {
    ErrorKind.HALT: 1,
    ErrorKind.COND: 2,
    ErrorKind.ERROR: 3,
}


class Status(Enum):
    """실행 상태"""
    RUNNING = "running"
    SUCCESS = "success"
    FAIL = "fail"
    CYCLE_LIMIT = "cycle_limit"
    HALTED = "halted"


@dataclass
class StepResult:
    """한 사이클 적용 결과"""

    marking: List[int]
    status: Status = Status.RUNNING
    error: Optional[ErrorKind] = None


class MemoryBlock:
    """A-Ram 메모리 블록 σ

    레지스터 x 의 비트 y 가 σ(x, y) 이다.
    """

    def __init__(self, config: MachineConfig, words: Optional[np.ndarray] = None):
        self.config = config
        if words is None:
            self.words = np.zeros(config.registers, dtype=config.dtype)
        else:
            if len(words) != config.registers:
                raise MachineError(
                    f"메모리 크기 불일치: {len(words)} != {config.registers}"
                )
            self.words = np.asarray(words, dtype=config.dtype).copy()

    def __len__(self) -> int:
        return len(self.words)

    def copy(self) -> "MemoryBlock":
        return MemoryBlock(self.config, self.words)

    def word(self, register: int) -> int:
        return int(self.words[register])

    def set_word(self, register: int, value: int):
        self.words[register] = value & self.config.word_mask

    def bit(self, register: int, bit: int) -> int:
        return (int(self.words[register]) >> bit) & 1

    def set_bit(self, register: int, bit: int, value: int):
        word = int(self.words[register])
        if value:
            word |= 1 << bit
        else:
            word &= ~(1 << bit)
        self.words[register] = word & self.config.word_mask

    def field(self, register: int, low: int, width: int) -> int:
        """비트 low 부터 width 개 비트를 정수로 읽기"""
        return (int(self.words[register]) >> low) & ((1 << width) - 1)

    def set_field(self, register: int, low: int, width: int, value: int):
        mask = ((1 << width) - 1) << low
        word = int(self.words[register])
        word = (word & ~mask) | ((value << low) & mask)
        self.words[register] = word & self.config.word_mask

    def sigma_x(self, register: int) -> int:
        return (int(self.words[register]) >> self.config.p) & self.config.x_mask

    def sigma_y(self, register: int) -> int:
        return int(self.words[register]) & self.config.y_mask

    def sigma_z(self, register: int) -> int:
        return int(self.words[register])

    def load(self, program: Union[Mapping[int, int], Sequence[int]], base: int = 1):
        """프로그램 적재

        Args:
            program: 레지스터->단어 사전, 또는 base 부터 채울 단어열
            base: 단어열 적재 시작 레지스터
        """
        if isinstance(program, Mapping):
            items: Iterable = program.items()
        else:
            items = enumerate(program, start=base)
        for register, word in items:
            if not 0 <= register < len(self.words):
                raise MachineError(f"레지스터 범위 초과: {register}")
            self.words[register] = word

    def error_bits(self) -> List[ErrorKind]:
        status = int(self.words[0])
        return [kind for kind in ErrorKind if (status >> int(kind)) & 1]


def _check_register(register: int, config: MachineConfig):
    if register >= config.registers:
        raise MachineError(
            f"레지스터 {register} 는 메모리 블록({config.registers}) 밖입니다"
        )


def _fail(memory: MemoryBlock, kind: ErrorKind, bit: Optional[int] = None) -> StepResult:
    memory.set_bit(0, int(kind) if bit is None else bit, 1)
    logger.debug(f"오류 검출: {kind.name} (비트 {int(kind) if bit is None else bit})")
    return StepResult([], Status.FAIL, kind)


def step_synchronic(memory: MemoryBlock, marking: Sequence[int]) -> StepResult:
    """Synchronic A-Ram 상태 변환 함수 η 를 한 번 적용

    메모리는 제자리에서 갱신된다. 오류 조건은 성공, marking, write, halt,
    live, cond, consequent, active, jump, error 순서로 검사한다.

    Args:
        memory: 메모리 블록 σ
        marking: 정렬된 다중집합 μ

    Returns:
        다음 marking 과 상태
    """
    config = memory.config
    words = memory.words
    registers = config.registers
    shift, p, x_mask, y_mask = config.opcode_shift, config.p, config.x_mask, config.y_mask

    if not marking:
        status = int(words[0])
        if status & 1 and not status >> 1:
            return _fail(memory, ErrorKind.LIVE)
        return StepResult([], Status.HALTED)

    decoded = []
    for i in marking:
        if i <= 0:
            raise MachineError("레지스터 0 은 marking 될 수 없습니다")
        _check_register(i, config)
        w = int(words[i])
        decoded.append((i, w, w >> shift, (w >> p) & x_mask, w & y_mask))

    # (1) 성공: 단독 halt 명령어
    if len(decoded) == 1 and decoded[0][1] == 0:
        memory.set_bit(0, 0, 0)
        return StepResult([], Status.SUCCESS)

    marked = set(marking)
    # (2) 다중집합
    if len(marked) != len(marking):
        return _fail(memory, ErrorKind.MARKING)

    # (3) 동시 쓰기
    targets = Counter((x, y) for _, _, op, x, y in decoded if op < 2)
    if any(count > 1 for count in targets.values()):
        return _fail(memory, ErrorKind.WRITE)

    # (4) halt 가 단독이 아님
    if any(w == 0 for _, w, _, _, _ in decoded):
        return _fail(memory, ErrorKind.HALT)

    # (6) 마지막 두 레지스터의 cond
    if any(op == Opcode.COND and i >= registers - 2 for i, _, op, _, _ in decoded):
        return _fail(memory, ErrorKind.COND)

    # (7) cond 와 그 결과 명령어의 동시 marking
    for i, _, op, _, _ in decoded:
        if op == Opcode.COND and (i + 1 in marked or i + 2 in marked):
            return _fail(memory, ErrorKind.CONSEQUENT)
        k = i - 2
        if k >= 0 and i - 1 in marked and (int(words[k]) >> shift) == Opcode.COND:
            return _fail(memory, ErrorKind.CONSEQUENT)

    # (8) 다른 활성 명령어가 marking 된 레지스터에 쓰기
    for i, _, op, x, _ in decoded:
        if op < 2 and x != i and x in marked:
            return _fail(memory, ErrorKind.ACTIVE)

    # (9) jump 범위
    for _, _, op, x, y in decoded:
        if op == Opcode.JUMP and (x == 0 or x + y >= registers):
            return _fail(memory, ErrorKind.JUMP)

    # (10) 상태 비트 쓰기
    for _, _, _, x, y in decoded:
        if x == 0 and y != 0:
            return _fail(memory, ErrorKind.ERROR)

    # 읽기 단계
    following: List[int] = []
    writes = []
    for i, _, op, x, y in decoded:
        if op == Opcode.JUMP:
            following.extend(range(x, x + y + 1))
        elif op == Opcode.COND:
            _check_register(x, config)
            following.append(i + 2 if (int(words[x]) >> y) & 1 else i + 1)
        else:
            _check_register(x, config)
            writes.append((x, y, op))
    # 쓰기 단계
    for x, y, op in writes:
        w = int(words[x])
        words[x] = (w | (1 << y)) if op == Opcode.WRT1 else (w & ~(1 << y))
    following.sort()
    return StepResult(following)


def step_sequential(memory: MemoryBlock, marking: Sequence[int]) -> StepResult:
    """Sequential A-Ram 상태 변환 함수 η′ 를 한 번 적용

    Args:
        memory: 메모리 블록
        marking: 단일 원소 marking {i}

    Returns:
        다음 marking 과 상태
    """
    if len(marking) != 1:
        raise MachineError(f"Sequential A-Ram marking 은 단일 원소여야 합니다: {list(marking)}")
    config = memory.config
    i = marking[0]
    if i <= 0:
        raise MachineError("레지스터 0 은 marking 될 수 없습니다")
    _check_register(i, config)
    w = memory.sigma_z(i)
    op = w >> config.opcode_shift
    x = memory.sigma_x(i)
    y = memory.sigma_y(i)
    registers = config.registers

    if w == 0:
        memory.set_bit(0, 0, 0)
        return StepResult([], Status.SUCCESS)
    if i == registers - 1:
        return _fail(memory, ErrorKind.HALT, SEQUENTIAL_BITS[ErrorKind.HALT])
    if i == registers - 2 and op == Opcode.COND:
        return _fail(memory, ErrorKind.COND, SEQUENTIAL_BITS[ErrorKind.COND])
    if x == 0 and y != 0:
        return _fail(memory, ErrorKind.ERROR, SEQUENTIAL_BITS[ErrorKind.ERROR])
    _check_register(x, config)
    if op < 2:
        memory.set_bit(x, y, op)
        return StepResult([i + 1])
    if op == Opcode.COND:
        return StepResult([i + 2 if memory.bit(x, y) else i + 1])
    if x == 0:
        raise MachineError(f"레지스터 {i}: jump 0 은 정의되지 않습니다")
    return StepResult([x])
