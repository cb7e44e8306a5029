"""
xyfib 항의 트리/그래프 덧셈 수 모듈

xyfib(0) = x, xyfib(1) = y, xyfib(n) = xyfib(n-1) + xyfib(n-2).
트리 표현의 덧셈 수 addtree 는 지수적으로, 공유한 그래프의 덧셈 수
addgraph 는 n-1 로 선형으로 늘어난다.
"""

from functools import lru_cache
from typing import Tuple

from core.intermachine.terms import Apply, Term, Var


def fib(n: int) -> int:
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def addtree(n: int) -> int:
    if n < 0:
        raise ValueError(f"n 은 0 이상이어야 합니다: {n}")
    a, b = 0, 0  # addtree(0), addtree(1)
    for _ in range(n):
        a, b = b, a + b + 1
    return a


def addgraph(n: int) -> int:
    if n < 0:
        raise ValueError(f"n 은 0 이상이어야 합니다: {n}")
    return max(n - 1, 0)


def xyfib_counts(n: int) -> Tuple[int, int]:
    """(addtree(n), addgraph(n))"""
    return addtree(n), addgraph(n)


@lru_cache(maxsize=None)
def xyfib_term(n: int, x: str = "x", y: str = "y") -> Term:
    """xyfib(n, x, y) 의 트리 항 (같은 부분항은 같은 객체)"""
    if n == 0:
        return Var(x)
    if n == 1:
        return Var(y)
    return Apply("+", xyfib_term(n - 1, x, y), xyfib_term(n - 2, x, y))
