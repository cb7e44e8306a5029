"""
B-Ram 실행 모듈
"""

import logging
from typing import List, Optional, Tuple

from core.aram.machine import Status
from core.aram.runner import SEQUENTIAL, SYNCHRONIC, Outcome
from core.bram.machine import BMarking, BMemory, CursorMap, step_sequential_b, step_synchronic_b
from core.errors import MachineError

logger = logging.getLogger(__name__)

DEFAULT_B_MAX_CYCLES = 5 * 10 ** 7


def _flatten(marking: BMarking) -> List[Tuple[int, int]]:
    return [(b, r) for b in sorted(marking) for r in marking[b]]


def run_b(
    memory: BMemory,
    cursors: Optional[CursorMap] = None,
    mode: str = SEQUENTIAL,
    max_cycles: int = DEFAULT_B_MAX_CYCLES,
    trace: bool = False,
    marking: Optional[BMarking] = None,
) -> Outcome:
    """B-Ram 실행 (메모리와 커서 제자리 갱신)

    Sequential 은 ⟨0,{1}⟩, Synchronic 은 ⟨0,{1,2}⟩ 에서 시작한다.
    trace 는 사이클마다 (블록, 레지스터) 목록이다.

    Args:
        memory: 메모리
        cursors: 커서 함수 (기본: 모두 자기 블록)
        mode: sequential 또는 synchronic
        max_cycles: 최대 사이클 수
        trace: marking 기록 여부
        marking: 초기 marking

    Returns:
        실행 결과
    """
    if mode not in (SEQUENTIAL, SYNCHRONIC):
        raise MachineError(f"알 수 없는 실행 모드: {mode}")
    cursors = cursors if cursors is not None else CursorMap()
    if marking is None:
        marking = {0: [1]} if mode == SEQUENTIAL else {0: [1, 2]}
    current: BMarking = {b: sorted(rs) for b, rs in marking.items() if rs}
    history: Optional[List[List[Tuple[int, int]]]] = [] if trace else None
    cycles = 0

    if mode == SEQUENTIAL:
        flat = _flatten(current)
        if len(flat) != 1:
            raise MachineError(f"Sequential B-Ram marking 은 단일 원소여야 합니다: {flat}")
        position: Optional[Tuple[int, int]] = flat[0]
        while True:
            if cycles >= max_cycles:
                outcome = Outcome(Status.CYCLE_LIMIT, cycles)
                break
            if history is not None:
                history.append([position])
            position, result = step_sequential_b(memory, cursors, position)
            cycles += 1
            if result.status != Status.RUNNING:
                outcome = Outcome(result.status, cycles, result.error)
                break
    else:
        while True:
            if cycles >= max_cycles:
                outcome = Outcome(Status.CYCLE_LIMIT, cycles)
                break
            if history is not None:
                history.append(_flatten(current))
            result = step_synchronic_b(memory, cursors, current)
            if result.status == Status.HALTED:
                if history is not None:
                    history.pop()
                outcome = Outcome(Status.HALTED, cycles)
                break
            cycles += 1
            if result.status != Status.RUNNING:
                outcome = Outcome(result.status, cycles, result.error)
                break
            current = result.marking

    if history is not None and outcome.status in (Status.SUCCESS, Status.FAIL):
        history.append([])
    outcome.trace = history
    if outcome.status == Status.FAIL:
        logger.warning(f"B-Ram 실패: {outcome.describe()} ({cycles} 사이클)")
    else:
        logger.debug(f"B-Ram 실행 종료: {outcome.describe()} ({cycles} 사이클)")
    return outcome
