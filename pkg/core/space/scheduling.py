"""
Space 스케줄링 코드 모듈

jump tree 는 thread n 개를 동시에 시작하고, barrier 는 감시 비트가 모두
0 이 될 때까지 기다린 뒤 다음 열을 시작한다.

barrier 는 8 입력 AND 게이트 배열처럼 동작한다. 감시 비트를 8 개씩 묶은
사슬이 차례로 비트를 검사하고 (1 이면 제자리에서 대기), 사슬이 끝나면
자기 완료 비트를 0 으로 쓴다. 윗단 사슬은 완료 비트들을 같은 방식으로
감시하고, 맨 위 사슬이 끝나면 다음 열로 간다.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from config.settings import get_setting
from core.aram.instruction import Opcode
from core.errors import SpaceCompileError
from core.space.assembler import Addr, Assembler

logger = logging.getLogger(__name__)

GATE_INPUTS = int(get_setting("space.barrier_fanin", 8))

Bit = Tuple[Addr, int]


@dataclass(frozen=True)
class Fragment:
    """생성된 코드 조각

    Attributes:
        entry: 시작 레지스터 (항상 jump)
        registers: 차지한 레지스터 수
        cycles: 시작부터 잎 thread 가 목표를 표시할 때까지의 사이클 (barrier 는 0)
    """

    entry: int
    registers: int
    cycles: int = 0


def jump_tree(n: int, p: int = 5) -> Tuple[int, int]:
    """thread n 개 jump tree 의 (레지스터 수, 사이클 수)"""
    if n < 1:
        raise SpaceCompileError(f"jump tree 의 thread 수는 1 이상이어야 합니다: {n}")
    fanout = 1 << p
    registers, cycles, layer = n, 1, n
    while layer > 1:
        layer = -(-layer // fanout)
        registers += layer
        cycles += 1
    return registers, cycles


def emit_jump_tree(asm: Assembler, leaves: Sequence[Tuple[Addr, int]], p: int = 5) -> Fragment:
    """잎 jump 들을 한꺼번에 표시하는 jump tree 생성

    잎 층을 먼저 놓고, 위층은 아래층 2^p 개씩을 'jump 시작 개수-1' 로 덮는다.

    Args:
        asm: 조립기
        leaves: 잎 jump 의 (x, y)
        p: offset 길이

    Returns:
        뿌리 레지스터가 entry 인 조각
    """
    if not leaves:
        raise SpaceCompileError("잎이 없는 jump tree")
    fanout = 1 << p
    start = asm.here
    layer = [asm.emit(Opcode.JUMP, x, y) for x, y in leaves]
    cycles = 1
    while len(layer) > 1:
        layer = [
            asm.emit(Opcode.JUMP, layer[k], len(layer[k:k + fanout]) - 1) for k in range(0, len(layer), fanout)
        ]
        cycles += 1
    return Fragment(layer[0], asm.here - start, cycles)


def register_runs(registers: Sequence[int], p: int = 5) -> List[Tuple[int, int]]:
    """연속 레지스터 묶음을 (시작, offset) 잎으로 나눈다 (묶음당 2^p 개까지)"""
    fanout = 1 << p
    leaves: List[Tuple[int, int]] = []
    for register in registers:
        if leaves:
            first, offset = leaves[-1]
            if register == first + offset + 1 and offset + 1 < fanout:
                leaves[-1] = (first, offset + 1)
                continue
        leaves.append((register, 0))
    return leaves


class ControlBits:
    """모듈 제어 레지스터의 비트 할당기

    label 'control' 에서 시작하는 레지스터들에 32 비트씩 차례로 채운다.
    """

    def __init__(self, label: str = "control"):
        self.label = label
        self.count = 0

    def allocate(self) -> Bit:
        k = self.count
        self.count += 1
        return (self.label, k // 32), k % 32

    @property
    def registers(self) -> int:
        return max(1, -(-self.count // 32))


def _emit_chain(asm: Assembler, bits: Sequence[Bit], end: Tuple) -> int:
    """[cond b; 다음 검사(마지막은 end); 자기 자신으로 jump] 삼중 사슬"""
    first = asm.here
    for k, (register, bit) in enumerate(bits):
        cond = asm.emit(Opcode.COND, register, bit)
        if k == len(bits) - 1:
            asm.emit(*end)
        else:
            asm.emit(Opcode.JUMP, cond + 3, 0)
        asm.emit(Opcode.JUMP, cond, 0)
    return first


def emit_barrier(
    asm: Assembler,
    bits: Sequence[Bit],
    cont: Addr,
    control: ControlBits,
    p: int = 5,
    inputs: int = GATE_INPUTS,
) -> Fragment:
    """비트가 모두 0 이 되면 cont 를 표시하는 barrier 생성

    Args:
        asm: 조립기
        bits: 감시할 (레지스터, 비트)
        cont: 끝난 뒤 표시할 레지스터
        control: 완료 비트를 할당할 제어 비트
        p: offset 길이
        inputs: 사슬 하나가 검사하는 비트 수

    Returns:
        entry 가 jump 인 조각
    """
    if not bits:
        raise SpaceCompileError("감시 비트가 없는 barrier")
    start = asm.here
    if len(bits) <= inputs:
        chain = _emit_chain(asm, bits, (Opcode.JUMP, cont, 0))
        root = asm.emit(Opcode.JUMP, chain, 0)
        return Fragment(root, asm.here - start)

    chains: List[int] = []
    done: List[Bit] = []
    level: List[Bit] = list(bits)
    while len(level) > inputs:
        upper: List[Bit] = []
        for k in range(0, len(level), inputs):
            flag = control.allocate()
            chains.append(_emit_chain(asm, level[k:k + inputs], (Opcode.WRT0, flag[0], flag[1])))
            upper.append(flag)
        done.extend(upper)
        level = upper
    chains.append(_emit_chain(asm, level, (Opcode.JUMP, cont, 0)))

    setters = [asm.emit(Opcode.WRT1, register, bit) for register, bit in done]
    launch = emit_jump_tree(asm, [(c, 0) for c in chains], p)
    reset = emit_jump_tree(asm, register_runs(setters, p) + [(launch.entry, 0)], p)
    logger.debug(f"barrier: 비트 {len(bits)} 개, 사슬 {len(chains)} 개, 레지스터 {asm.here - start}")
    return Fragment(reset.entry, asm.here - start)


def emit_delay(asm: Assembler, cycles: int, cont: Addr) -> Optional[int]:
    """cycles 사이클 뒤 cont 를 표시하는 jump 사슬. 0 이면 None."""
    if cycles <= 0:
        return None
    first = asm.here
    for k in range(cycles - 1):
        asm.emit(Opcode.JUMP, first + k + 1, 0)
    asm.emit(Opcode.JUMP, cont, 0)
    return first
