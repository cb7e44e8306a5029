"""
Space 색인 함수 모듈

색인식은 정수, 복제자, 또는 '복제자/함수' 형식이다. 함수는 여덟 개로
고정되어 있다.
"""

import re
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from core.errors import SpaceCompileError, SpaceSyntaxError


def _dec(i: int) -> int:
    if i == 0:
        raise SpaceCompileError("dec 함수에 0 이 입력되었습니다")
    return i - 1


FUNCTIONS: Dict[str, Callable[[int], int]] = {
    "id": lambda i: i,
    "inc": lambda i: i + 1,
    "plus2": lambda i: i + 2,
    "dec": _dec,
    "2*": lambda i: 2 * i,
    "2*+1": lambda i: 2 * i + 1,
    "2^": lambda i: 1 << i,
    "div2": lambda i: i >> 1,
}

_EXPR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:/(\S+))?$")


@dataclass(frozen=True)
class Indexical:
    """색인식

    constant 가 있으면 정수, 아니면 replicator 에 function 을 적용한 값이다.
    """

    replicator: Optional[str] = None
    function: str = "id"
    constant: Optional[int] = None

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    def __str__(self) -> str:
        if self.constant is not None:
            return str(self.constant)
        return self.replicator if self.function == "id" else f"{self.replicator}/{self.function}"


def parse_indexical(text: str) -> Indexical:
    text = text.strip()
    if re.fullmatch(r"-?\d+", text):
        return Indexical(constant=int(text))
    match = _EXPR.match(text)
    if not match:
        raise SpaceSyntaxError(f"잘못된 색인식: '{text}'")
    function = match.group(2) or "id"
    if function not in FUNCTIONS:
        raise SpaceSyntaxError(f"알 수 없는 색인 함수: '{function}'")
    return Indexical(match.group(1), function)


def eval_indexical(expr, env: Optional[Dict[str, int]] = None) -> int:
    """색인식 값

    Args:
        expr: Indexical 또는 색인식 문자열
        env: 복제자 -> 현재 값

    Raises:
        SpaceCompileError: 묶이지 않은 복제자, dec(0)
    """
    if isinstance(expr, str):
        expr = parse_indexical(expr)
    if expr.constant is not None:
        return expr.constant
    env = env or {}
    if expr.replicator not in env:
        raise SpaceCompileError(f"묶이지 않은 복제자: '{expr.replicator}'")
    return FUNCTIONS[expr.function](env[expr.replicator])
