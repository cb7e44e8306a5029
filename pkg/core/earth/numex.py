"""
Earth numex 모듈

복제 구조에서 쓰는 산술식 형식. 8 가지 형식만 허용한다:

    정수 | r | (정수*r) | (정수+r) | (정수+정수*r) | (정수+r1+r2)
    | (정수-r) | (r1+정수*r2)

linename 과 상대 jump 번호의 선두 수(leading number)는 첫 번째 정수
피연산자이다.
"""

import re
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, Optional, Tuple

from core.errors import EarthCompileError, EarthSyntaxError


class NumexKind(Enum):
    INT = "int"
    REP = "rep"
    INT_TIMES_REP = "int*rep"
    INT_PLUS_REP = "int+rep"
    INT_PLUS_INT_TIMES_REP = "int+int*rep"
    INT_PLUS_REP_PLUS_REP = "int+rep+rep"
    INT_MINUS_REP = "int-rep"
    REP_PLUS_INT_TIMES_REP = "rep+int*rep"


_LEADING_KINDS = {
    NumexKind.INT,
    NumexKind.INT_PLUS_REP,
    NumexKind.INT_PLUS_INT_TIMES_REP,
    NumexKind.INT_PLUS_REP_PLUS_REP,
    NumexKind.INT_MINUS_REP,
}

_R = r"([A-Za-z])"
_N = r"(\d+)"
_PATTERNS = [
    (NumexKind.INT, re.compile(rf"^{_N}$")),
    (NumexKind.REP, re.compile(rf"^{_R}$")),
    (NumexKind.INT_TIMES_REP, re.compile(rf"^\({_N}\*{_R}\)$")),
    (NumexKind.INT_PLUS_REP, re.compile(rf"^\({_N}\+{_R}\)$")),
    (NumexKind.INT_PLUS_INT_TIMES_REP, re.compile(rf"^\({_N}\+{_N}\*{_R}\)$")),
    (NumexKind.INT_PLUS_REP_PLUS_REP, re.compile(rf"^\({_N}\+{_R}\+{_R}\)$")),
    (NumexKind.INT_MINUS_REP, re.compile(rf"^\({_N}-{_R}\)$")),
    (NumexKind.REP_PLUS_INT_TIMES_REP, re.compile(rf"^\({_R}\+{_N}\*{_R}\)$")),
]


@dataclass(frozen=True)
class Numex:
    """numex 한 개

    Attributes:
        kind: 형식
        constant: 선두 정수 (INT, (c+r), (c+f*r), (c+r1+r2), (c-r))
        factor: 곱해지는 정수 ((f*r), (c+f*r), (r1+f*r2))
        reps: 복제자 이름들 (등장 순서)
    """

    kind: NumexKind
    constant: int = 0
    factor: int = 0
    reps: Tuple[str, ...] = ()

    @classmethod
    def of(cls, value: int) -> "Numex":
        return cls(NumexKind.INT, constant=value)

    @property
    def leading(self) -> Optional[int]:
        """선두 수 (없으면 None)"""
        return self.constant if self.kind in _LEADING_KINDS else None

    @property
    def replicative(self) -> bool:
        return self.kind != NumexKind.INT

    @property
    def is_int(self) -> bool:
        return self.kind == NumexKind.INT

    def shifted(self, delta: int) -> "Numex":
        """선두 수에 delta 를 더한 numex"""
        if self.leading is None:
            raise EarthCompileError(f"선두 수가 없는 numex 는 증가시킬 수 없습니다: {self}")
        return replace(self, constant=self.constant + delta)

    def evaluate(self, env: Dict[str, int]) -> int:
        """복제자 환경에서 값 계산

        Raises:
            EarthCompileError: 바인딩되지 않은 복제자, 음수 결과
        """
        values = []
        for rep in self.reps:
            if rep not in env:
                raise EarthCompileError(f"바인딩되지 않은 복제자 '{rep}': {self}")
            values.append(env[rep])
        kind, c, f = self.kind, self.constant, self.factor
        if kind == NumexKind.INT:
            result = c
        elif kind == NumexKind.REP:
            result = values[0]
        elif kind == NumexKind.INT_TIMES_REP:
            result = f * values[0]
        elif kind == NumexKind.INT_PLUS_REP:
            result = c + values[0]
        elif kind == NumexKind.INT_PLUS_INT_TIMES_REP:
            result = c + f * values[0]
        elif kind == NumexKind.INT_PLUS_REP_PLUS_REP:
            result = c + values[0] + values[1]
        elif kind == NumexKind.INT_MINUS_REP:
            result = c - values[0]
        else:
            result = values[0] + f * values[1]
        if result < 0:
            raise EarthCompileError(f"numex {self} 의 값이 음수입니다: {result}")
        return result

    def bind(self, rep: str, value: int) -> "Numex":
        """복제자 하나만 값으로 치환한 numex

        (c+r1+r2) 에서 r1 을 묶으면 (c+v+r2) 가 된다. 결과의 선두 수는
        원래 선두 수에 묶인 값이 더해진 수이다.
        """
        if rep not in self.reps:
            return self
        if all(r == rep for r in self.reps):
            return Numex.of(self.evaluate({rep: value}))
        kind, c, f = self.kind, self.constant, self.factor
        if kind == NumexKind.INT_PLUS_REP_PLUS_REP:
            other = self.reps[1] if self.reps[0] == rep else self.reps[0]
            return Numex(NumexKind.INT_PLUS_REP, constant=c + value, reps=(other,))
        # (r1+f*r2)
        if self.reps[0] == rep:
            return Numex(NumexKind.INT_PLUS_INT_TIMES_REP, constant=value, factor=f, reps=(self.reps[1],))
        return Numex(NumexKind.INT_PLUS_REP, constant=f * value, reps=(self.reps[0],))

    def __str__(self) -> str:
        kind, c, f, r = self.kind, self.constant, self.factor, self.reps
        if kind == NumexKind.INT:
            return str(c)
        if kind == NumexKind.REP:
            return r[0]
        if kind == NumexKind.INT_TIMES_REP:
            return f"({f}*{r[0]})"
        if kind == NumexKind.INT_PLUS_REP:
            return f"({c}+{r[0]})"
        if kind == NumexKind.INT_PLUS_INT_TIMES_REP:
            return f"({c}+{f}*{r[0]})"
        if kind == NumexKind.INT_PLUS_REP_PLUS_REP:
            return f"({c}+{r[0]}+{r[1]})"
        if kind == NumexKind.INT_MINUS_REP:
            return f"({c}-{r[0]})"
        return f"({r[0]}+{f}*{r[1]})"


def parse_numex(text: str) -> Numex:
    """numex 문자열 파싱 (괄호 안 공백 허용)

    Raises:
        EarthSyntaxError: 8 가지 형식에 맞지 않는 경우
    """
    compact = re.sub(r"\s+", "", text)
    for kind, pattern in _PATTERNS:
        match = pattern.match(compact)
        if not match:
            continue
        groups = match.groups()
        if kind == NumexKind.INT:
            return Numex(kind, constant=int(groups[0]))
        if kind == NumexKind.REP:
            return Numex(kind, reps=(groups[0],))
        if kind == NumexKind.INT_TIMES_REP:
            return Numex(kind, factor=int(groups[0]), reps=(groups[1],))
        if kind in (NumexKind.INT_PLUS_REP, NumexKind.INT_MINUS_REP):
            return Numex(kind, constant=int(groups[0]), reps=(groups[1],))
        if kind == NumexKind.INT_PLUS_INT_TIMES_REP:
            return Numex(kind, constant=int(groups[0]), factor=int(groups[1]), reps=(groups[2],))
        if kind == NumexKind.INT_PLUS_REP_PLUS_REP:
            return Numex(kind, constant=int(groups[0]), reps=(groups[1], groups[2]))
        return Numex(kind, factor=int(groups[1]), reps=(groups[0], groups[2]))
    raise EarthSyntaxError(f"잘못된 numex: {text}")


def eval_numex(numex: Numex, env: Optional[Dict[str, int]] = None) -> int:
    return numex.evaluate(env or {})
