"""
A-Ram 실행 모듈
"""

import logging
from dataclasses import dataclass
from enum import IntEnum
from typing import List, Optional, Sequence, Tuple

import pandas as pd

from core.aram.machine import (
    ErrorKind,
    MemoryBlock,
    Status,
    StepResult,
    step_sequential,
    step_synchronic,
)
from core.errors import MachineError

logger = logging.getLogger(__name__)

DEFAULT_MAX_CYCLES = 10 ** 8
SEQUENTIAL = "sequential"
SYNCHRONIC = "synchronic"
PHASE1_MARKING = (1, 2)
PHASE2_MARKING = (3, 4)


@dataclass
class Outcome:
    """실행 결과"""

    status: Status
    cycles: int
    error: Optional[IntEnum] = None
    trace: Optional[List[list]] = None

    @property
    def succeeded(self) -> bool:
        return self.status == Status.SUCCESS

    def describe(self) -> str:
        if self.status == Status.FAIL and self.error is not None:
            return f"Fail({self.error.name.capitalize()}Fail)"
        return self.status.value.replace("_", " ").title().replace(" ", "")


def _initial_marking(mode: str, marking: Optional[Sequence[int]]) -> List[int]:
    if marking is not None:
        return sorted(marking)
    if mode == SEQUENTIAL:
        return [1]
    if mode == SYNCHRONIC:
        return list(PHASE1_MARKING)
    raise MachineError(f"알 수 없는 실행 모드: {mode}")


def run(
    memory: MemoryBlock,
    mode: str = SYNCHRONIC,
    max_cycles: int = DEFAULT_MAX_CYCLES,
    trace: bool = False,
    marking: Optional[Sequence[int]] = None,
) -> Outcome:
    """기계 실행 (제자리 갱신)

    성공 또는 실패까지, 또는 max_cycles 에 도달할 때까지 상태 변환 함수를
    반복 적용한다. trace 는 적용된 marking 들과 마지막 빈 marking 이다.

    Args:
        memory: 메모리 블록
        mode: sequential 또는 synchronic
        max_cycles: 최대 사이클 수
        trace: marking 기록 여부
        marking: 초기 marking (기본 {1} 또는 {1,2})

    Returns:
        실행 결과
    """
    step = step_sequential if mode == SEQUENTIAL else step_synchronic
    current = _initial_marking(mode, marking)
    history: Optional[List[List[int]]] = [] if trace else None
    cycles = 0
    while True:
        if not current and mode == SEQUENTIAL:
            outcome = Outcome(Status.HALTED, cycles)
            break
        if cycles >= max_cycles:
            outcome = Outcome(Status.CYCLE_LIMIT, cycles)
            break
        if history is not None:
            history.append(list(current))
        result: StepResult = step(memory, current)
        if result.status == Status.HALTED:
            # 빈 marking 에 대해 η 가 정의되지 않음
            if history is not None:
                history.pop()
            outcome = Outcome(Status.HALTED, cycles)
            break
        cycles += 1
        if result.status != Status.RUNNING:
            outcome = Outcome(result.status, cycles, result.error)
            if history is not None:
                history.append([])
            break
        current = result.marking
    outcome.trace = history
    if outcome.status == Status.FAIL:
        logger.warning(f"기계 실패: {outcome.describe()} ({outcome.cycles} 사이클)")
    else:
        logger.debug(f"실행 종료: {outcome.describe()} ({outcome.cycles} 사이클)")
    return outcome


def run_module(
    memory: MemoryBlock,
    busy: Tuple[int, int],
    marking: Sequence[int] = PHASE1_MARKING,
    max_cycles: int = DEFAULT_MAX_CYCLES,
    trace: bool = False,
) -> Outcome:
    """모듈 단위 실행

    진입 marking 으로 시작해 marking 이 빌 때까지 실행한다. 모든 사이클
    (busy 비트를 해제하는 사이클 포함) 을 센다. marking 이 비었을 때 모듈
    busy 비트가 해제되어 있으면 성공, 아니면 LiveFail 이다.

    Args:
        memory: 메모리 블록
        busy: 모듈 busy 비트의 (레지스터, 비트)
        marking: 진입 marking ({1,2} 또는 메타 2단계 {3,4})
        max_cycles: 최대 사이클 수
        trace: marking 기록 여부

    Returns:
        실행 결과
    """
    current = sorted(marking)
    history: Optional[List[List[int]]] = [] if trace else None
    cycles = 0
    while current:
        if cycles >= max_cycles:
            return Outcome(Status.CYCLE_LIMIT, cycles, trace=history)
        if history is not None:
            history.append(list(current))
        result = step_synchronic(memory, current)
        cycles += 1
        if result.status == Status.FAIL:
            logger.warning(f"모듈 실행 실패: {result.error.name} ({cycles} 사이클)")
            if history is not None:
                history.append([])
            return Outcome(Status.FAIL, cycles, result.error, history)
        if result.status == Status.SUCCESS:
            break
        current = result.marking
    if history is not None:
        history.append([])
    if memory.bit(*busy):
        memory.set_bit(0, int(ErrorKind.LIVE), 1)
        logger.warning(f"모듈 busy 비트가 해제되지 않음: {busy}")
        return Outcome(Status.FAIL, cycles, ErrorKind.LIVE, history)
    return Outcome(Status.SUCCESS, cycles, trace=history)


def format_trace(trace: Sequence[Sequence[int]]) -> str:
    """사이클당 한 줄, 오름차순 레지스터 번호를 쉼표로 구분"""
    return "\n".join(",".join(str(r) for r in marking) for marking in trace)


def trace_frame(trace: Sequence[Sequence[int]]) -> pd.DataFrame:
    """marking 기록을 DataFrame 으로 변환"""
    return pd.DataFrame(
        {
            "cycle": list(range(1, len(trace) + 1)),
            "size": [len(m) for m in trace],
            "marking": [",".join(str(r) for r in m) for m in trace],
        }
    )
