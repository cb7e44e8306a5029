"""
B-Ram 상태 및 상태 변환 함수 모듈
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, Iterator, List, Mapping, Optional, Tuple

import numpy as np

from core.aram.machine import Status
from core.bram.instruction import BConfig, BOpcode
from core.errors import MachineError

logger = logging.getLogger(__name__)

# 블록 번호 -> 정렬된 레지스터 다중집합
BMarking = Dict[int, List[int]]


class BErrorKind(IntEnum):
    """Synchronic B-Ram 오류 종류 (값 = σ0 레지스터 0 의 상태 비트)"""
    MARKING = 1
    WRITE = 2
    HALT = 3
    LIVE = 4
    COND = 5
    CONSEQUENT = 6
    ACTIVE = 7
    CURSOR = 8
    JUMP = 9


SEQUENTIAL_B_BITS: Dict[BErrorKind, int] = {
    BErrorKind.HALT: 1,
    BErrorKind.COND: 2,
    BErrorKind.CURSOR: 3,
}


class BMemory:
    """무한 메모리 블록열 σ

    쓰인 적 있는 블록만 보관한다. 없는 블록은 0 으로 읽힌다.
    """

    def __init__(self, config: BConfig):
        self.config = config
        self.blocks: Dict[int, np.ndarray] = {}
        self._dtype = np.uint16 if config.n <= 16 else np.uint32

    def block(self, index: int) -> np.ndarray:
        """쓰기용 블록 (없으면 생성)"""
        if index < 0:
            raise MachineError(f"블록 번호는 음수일 수 없습니다: {index}")
        found = self.blocks.get(index)
        if found is None:
            found = np.zeros(self.config.block_size, dtype=self._dtype)
            self.blocks[index] = found
        return found

    def word(self, block: int, register: int) -> int:
        found = self.blocks.get(block)
        return 0 if found is None else int(found[register])

    def set_word(self, block: int, register: int, value: int):
        self.block(block)[register] = value & self.config.word_mask

    def bit(self, block: int, register: int, bit: int) -> int:
        return (self.word(block, register) >> bit) & 1

    def set_bit(self, block: int, register: int, bit: int, value: int):
        word = self.word(block, register)
        word = (word | (1 << bit)) if value else (word & ~(1 << bit))
        self.set_word(block, register, word)

    def load(self, program: Mapping[int, int], block: int = 0):
        """레지스터->단어 사전을 한 블록에 적재"""
        target = self.block(block)
        for register, word in program.items():
            if not 0 <= register < self.config.block_size:
                raise MachineError(f"레지스터 범위 초과: {register}")
            target[register] = word

    def error_bits(self) -> List[BErrorKind]:
        status = self.word(0, 0)
        return [kind for kind in BErrorKind if (status >> int(kind)) & 1]

    def nonempty(self) -> Iterator[Tuple[int, np.ndarray]]:
        for index in sorted(self.blocks):
            if self.blocks[index].any():
                yield index, self.blocks[index]


@dataclass
class CursorMap:
    """커서 함수 ρ. 기록되지 않은 레지스터는 자기 블록을 가리킨다."""

    cursors: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def get(self, block: int, register: int) -> int:
        return self.cursors.get((block, register), block)

    def set(self, block: int, register: int, target: int):
        if target == block:
            self.cursors.pop((block, register), None)
        else:
            self.cursors[(block, register)] = target


@dataclass
class BStepResult:
    """한 사이클 적용 결과"""

    marking: BMarking
    status: Status = Status.RUNNING
    error: Optional[BErrorKind] = None


def _fail(memory: BMemory, kind: BErrorKind, bit: Optional[int] = None) -> BStepResult:
    bit = int(kind) if bit is None else bit
    memory.set_bit(0, 0, bit, 1)
    logger.debug(f"B-Ram 오류 검출: {kind.name} (비트 {bit})")
    return BStepResult({}, Status.FAIL, kind)


def _fields(word: int, config: BConfig) -> Tuple[int, int, int]:
    op = word >> config.opcode_shift
    if op > BOpcode.MVLT:
        raise MachineError(f"불법 B-Ram 연산 코드: {op:03b}")
    return op, (word >> config.p) & config.x_mask, word & config.y_mask


def step_sequential_b(
    memory: BMemory, cursors: CursorMap, position: Tuple[int, int]
) -> Tuple[Optional[Tuple[int, int]], BStepResult]:
    """Sequential B-Ram 상태 변환 함수 ξ′ 를 한 번 적용

    메모리와 커서는 제자리에서 갱신된다. 쓰기, cond 읽기, jump 는 명령어
    레지스터의 커서가 가리키는 블록에서 일어난다.

    Args:
        memory: 메모리 σ
        cursors: 커서 함수 ρ
        position: 단일 marking ⟨i, j⟩

    Returns:
        (다음 위치 또는 None, 결과)
    """
    config = memory.config
    i, j = position
    if i == 0 and j == 0:
        raise MachineError("σ0 의 레지스터 0 은 marking 될 수 없습니다")
    last = config.block_size - 1
    word = memory.word(i, j)
    target = cursors.get(i, j)

    if word == 0 and target == 0:
        memory.set_bit(0, 0, 0, 0)
        return None, BStepResult({}, Status.SUCCESS)
    if j == last:
        return None, _fail(memory, BErrorKind.HALT, SEQUENTIAL_B_BITS[BErrorKind.HALT])
    op, x, y = _fields(word, config)
    if j == last - 1 and op == BOpcode.COND:
        return None, _fail(memory, BErrorKind.COND, SEQUENTIAL_B_BITS[BErrorKind.COND])
    if op == BOpcode.MVLT and cursors.get(target, x) == 0:
        return None, _fail(memory, BErrorKind.CURSOR, SEQUENTIAL_B_BITS[BErrorKind.CURSOR])

    if op <= BOpcode.WRT1:
        memory.set_bit(target, x, y, op)
        nxt = (i, j + 1)
    elif op == BOpcode.COND:
        nxt = (i, j + 2) if memory.bit(target, x, y) else (i, j + 1)
    elif op == BOpcode.JUMP:
        if target == 0 and x == 0:
            raise MachineError(f"⟨{i},{j}⟩: σ0 레지스터 0 으로의 jump")
        nxt = (target, x)
    else:
        step = 1 if op == BOpcode.MVRT else -1
        cursors.set(target, x, cursors.get(target, x) + step)
        nxt = (i, j + 1)
    return nxt, BStepResult({nxt[0]: [nxt[1]]})


def step_synchronic_b(memory: BMemory, cursors: CursorMap, marking: BMarking) -> BStepResult:
    """Synchronic B-Ram 상태 변환 함수 ξ 를 한 번 적용

    오류 조건은 성공, marking, write, halt, live, cond, consequent, active,
    cursor, jump 순서로 검사한다. 합법적인 사이클에서는 모든 읽기 뒤에
    쓰기(ξ1), 다음 marking(ξ2), 커서 이동(ξ3) 을 적용한다.

    Args:
        memory: 메모리 σ
        cursors: 커서 함수 ρ
        marking: 블록 -> 레지스터 다중집합

    Returns:
        다음 marking 과 상태
    """
    config = memory.config
    last = config.block_size - 1
    active = [(b, r) for b in sorted(marking) for r in marking[b]]

    if not active:
        status = memory.word(0, 0)
        if status & 1 and not status >> 1:
            return _fail(memory, BErrorKind.LIVE)
        return BStepResult({}, Status.HALTED)

    decoded = []
    for b, r in active:
        if b == 0 and r == 0:
            raise MachineError("σ0 의 레지스터 0 은 marking 될 수 없습니다")
        if not 0 <= r <= last:
            raise MachineError(f"레지스터 범위 초과: ⟨{b},{r}⟩")
        w = memory.word(b, r)
        op, x, y = _fields(w, config)
        decoded.append((b, r, w, op, x, y, cursors.get(b, r)))

    # (1) 성공
    if len(decoded) == 1 and decoded[0][2] == 0 and decoded[0][6] == 0:
        memory.set_bit(0, 0, 0, 0)
        return BStepResult({}, Status.SUCCESS)

    # (2) 다중집합
    if len(set(active)) != len(active):
        return _fail(memory, BErrorKind.MARKING)

    # (3) 해석된 (블록, 레지스터, 비트) 에 대한 동시 쓰기. 같은 커서를
    # 두 번 움직이는 것도 동시 쓰기로 본다.
    targets = Counter((t, x, y) for _, _, _, op, x, y, t in decoded if op <= BOpcode.WRT1)
    moved = Counter((t, x) for _, _, _, op, x, _, t in decoded if op >= BOpcode.MVRT)
    if any(c > 1 for c in targets.values()) or any(c > 1 for c in moved.values()):
        return _fail(memory, BErrorKind.WRITE)

    # (4) halt 가 단독이 아님
    if any(w == 0 for _, _, w, _, _, _, _ in decoded):
        return _fail(memory, BErrorKind.HALT)

    # (6) 블록 마지막 두 번째 레지스터의 cond
    if any(op == BOpcode.COND and r == last - 1 for _, r, _, op, _, _, _ in decoded):
        return _fail(memory, BErrorKind.COND)

    # (7) 같은 블록 안의 cond 와 결과 명령어
    marked = set(active)
    for b, r, _, op, _, _, _ in decoded:
        if op == BOpcode.COND and ((b, r + 1) in marked or (b, r + 2) in marked):
            return _fail(memory, BErrorKind.CONSEQUENT)
        k = r - 2
        if k >= 0 and (b, r - 1) in marked and (memory.word(b, k) >> config.opcode_shift) == BOpcode.COND:
            return _fail(memory, BErrorKind.CONSEQUENT)

    # (8) marking 된 레지스터에 다른 명령어가 쓰기
    for b, r, _, op, x, _, t in decoded:
        if op <= BOpcode.WRT1 and (t, x) != (b, r) and (t, x) in marked:
            return _fail(memory, BErrorKind.ACTIVE)

    # (9) σ0 을 넘어 왼쪽으로 커서 이동
    for _, _, _, op, x, _, t in decoded:
        if op == BOpcode.MVLT and cursors.get(t, x) == 0:
            return _fail(memory, BErrorKind.CURSOR)

    # (10) jump 범위
    for _, _, _, op, x, y, t in decoded:
        if op == BOpcode.JUMP and (x + y > last or (t == 0 and x == 0)):
            return _fail(memory, BErrorKind.JUMP)

    following: Dict[int, List[int]] = {}
    writes = []
    moves = []
    for b, r, _, op, x, y, t in decoded:
        if op == BOpcode.JUMP:
            following.setdefault(t, []).extend(range(x, x + y + 1))
        elif op == BOpcode.COND:
            following.setdefault(b, []).append(r + 2 if memory.bit(t, x, y) else r + 1)
        elif op <= BOpcode.WRT1:
            writes.append((t, x, y, op))
        else:
            moves.append((t, x, 1 if op == BOpcode.MVRT else -1))
    # ξ1
    for t, x, y, op in writes:
        memory.set_bit(t, x, y, op)
    # ξ3
    for t, x, step in moves:
        cursors.set(t, x, cursors.get(t, x) + step)
    for registers in following.values():
        registers.sort()
    return BStepResult(following)


