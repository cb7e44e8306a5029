"""
단방향 단일 테이프 튜링 기계 모듈
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from core.errors import TuringMachineError

logger = logging.getLogger(__name__)

BLANK = "_"
SYMBOLS = ("0", "1", BLANK)
MOVES = ("L", "R", "C")
SUCCESS = "success"
FAILURE = "failure"

Transition = Tuple[str, str, str]


@dataclass
class TuringMachine:
    """알파벳 {0, 1, ⊥} 의 튜링 기계

    states 의 첫 상태가 초기 상태이다. 종료 상태는 success 와 failure 이며
    delta 에 없는 (상태, 기호) 조합은 failure 로 간다.

    Attributes:
        states: failure 를 제외한 상태 목록 (success 포함)
        delta: (상태, 기호) -> (새 상태, 새 기호, 이동)
        success: 성공 상태 이름
    """

    states: List[str]
    delta: Dict[Tuple[str, str], Transition] = field(default_factory=dict)
    success: str = SUCCESS

    def __post_init__(self):
        self.validate()

    @property
    def initial(self) -> str:
        return self.states[0]

    @property
    def q(self) -> int:
        """실패가 아닌 상태 수"""
        return len(self.states)

    def index(self, state: str) -> int:
        return self.states.index(state)

    def validate(self):
        if not self.states:
            raise TuringMachineError("상태가 없습니다")
        if len(set(self.states)) != len(self.states):
            raise TuringMachineError(f"중복 상태: {self.states}")
        if FAILURE in self.states:
            raise TuringMachineError("failure 상태는 states 에 넣지 않습니다")
        if self.success not in self.states:
            raise TuringMachineError(f"성공 상태 {self.success} 가 states 에 없습니다")
        for (state, symbol), (target, written, move) in self.delta.items():
            if state not in self.states or state == self.success:
                raise TuringMachineError(f"전이의 출발 상태 오류: {state}")
            if target != FAILURE and target not in self.states:
                raise TuringMachineError(f"알 수 없는 상태: {target}")
            if symbol not in SYMBOLS or written not in SYMBOLS:
                raise TuringMachineError(f"알 수 없는 기호: {symbol}, {written}")
            if move not in MOVES:
                raise TuringMachineError(f"알 수 없는 이동: {move}")

    def to_dict(self) -> Dict:
        return {
            "states": list(self.states),
            "success": self.success,
            "delta": [[s, a, t, b, m] for (s, a), (t, b, m) in sorted(self.delta.items())],
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "TuringMachine":
        delta = {(s, a): (t, b, m) for s, a, t, b, m in data.get("delta", [])}
        return cls(states=list(data["states"]), delta=delta, success=data.get("success", SUCCESS))


def load_tm(path: Union[str, Path]) -> TuringMachine:
    """JSON 기술 파일에서 튜링 기계 로드"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return TuringMachine.from_dict(json.load(f))
    except (OSError, ValueError, KeyError) as e:
        raise TuringMachineError(f"튜링 기계 파일을 읽을 수 없습니다: {path} ({e})")


def normalize_tape(tape: Sequence[str]) -> List[str]:
    """끝의 공백 기호 제거"""
    squares = list(tape)
    while squares and squares[-1] == BLANK:
        squares.pop()
    return squares


@dataclass
class TMResult:
    """직접 해석 결과"""

    halted: bool
    success: bool
    tape: List[str]
    steps: int
    head: int


def run_tm(tm: TuringMachine, tape: Sequence[str], max_steps: int = 10_000) -> TMResult:
    """튜링 기계 직접 해석

    Raises:
        TuringMachineError: 0 번 칸에서 왼쪽 이동, 알 수 없는 기호
    """
    squares = list(tape)
    for symbol in squares:
        if symbol not in SYMBOLS:
            raise TuringMachineError(f"알 수 없는 테이프 기호: {symbol}")
    state = tm.initial
    head = 0
    steps = 0
    while steps < max_steps:
        if state == tm.success:
            return TMResult(True, True, normalize_tape(squares), steps, head)
        if head == len(squares):
            squares.append(BLANK)
        move: Optional[Transition] = tm.delta.get((state, squares[head]))
        if move is None or move[0] == FAILURE:
            return TMResult(True, False, normalize_tape(squares), steps, head)
        state, squares[head], direction = move
        steps += 1
        if direction == "L":
            if head == 0:
                raise TuringMachineError("0 번 칸에서 왼쪽으로 이동할 수 없습니다")
            head -= 1
        elif direction == "R":
            head += 1
    return TMResult(False, False, normalize_tape(squares), steps, head)
