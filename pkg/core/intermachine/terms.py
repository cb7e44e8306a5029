"""
트리 항 언어 모듈

항은 변수, 상수, 이항 함수 적용 셋 중 하나이다. 함수 기호 Id 는 예약되어
있으며 모든 모델에서 첫 번째 인자를 돌려준다.
"""

import logging
import random
import re
from dataclasses import dataclass
from typing import Callable, Dict, Generic, Iterator, List, Mapping, Optional, Sequence, TypeVar, Union

from core.errors import InterstringError

logger = logging.getLogger(__name__)

ID = "Id"
D = TypeVar("D")


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Apply:
    """이항 함수 적용 f(left, right)"""

    function: str
    left: "Term"
    right: "Term"

    def __str__(self) -> str:
        return write_term(self)


Term = Union[Var, Const, Apply]
Leaf = Union[Var, Const]


def height(term: Term) -> int:
    """적용 중첩 깊이 (잎은 0)"""
    if isinstance(term, Apply):
        return 1 + max(height(term.left), height(term.right))
    return 0


def subterms(term: Term) -> Iterator[Term]:
    """전위 순회"""
    yield term
    if isinstance(term, Apply):
        yield from subterms(term.left)
        yield from subterms(term.right)


def variables(term: Term) -> List[str]:
    return sorted({t.name for t in subterms(term) if isinstance(t, Var)})


@dataclass
class Model(Generic[D]):
    """모델 ⟨D, I⟩

    Attributes:
        functions: 함수 기호 -> D 위의 이항 연산 (Id 는 자동)
        constants: 상수 기호 -> D 값
        constant_parser: constants 에 없는 상수 기호 해석 (예: 숫자 문자열)
    """

    functions: Dict[str, Callable[[D, D], D]]
    constants: Dict[str, D]
    constant_parser: Optional[Callable[[str], D]] = None

    def operation(self, symbol: str) -> Callable[[D, D], D]:
        if symbol == ID:
            return lambda a, b: a
        if symbol not in self.functions:
            raise InterstringError(f"해석되지 않은 함수 기호: {symbol}")
        return self.functions[symbol]

    def constant(self, symbol: str) -> D:
        if symbol in self.constants:
            return self.constants[symbol]
        if self.constant_parser is not None:
            try:
                return self.constant_parser(symbol)
            except ValueError:
                pass
        raise InterstringError(f"해석되지 않은 상수 기호: {symbol}")

    def leaf(self, leaf: Leaf, assignment: Mapping[str, D]) -> D:
        """잎의 지시값 (변수는 배정 A, 상수는 해석 I)"""
        if isinstance(leaf, Var):
            if leaf.name not in assignment:
                raise InterstringError(f"배정되지 않은 변수: {leaf.name}")
            return assignment[leaf.name]
        return self.constant(leaf.name)


_MASK64 = (1 << 64) - 1


def wrap64(value: int) -> int:
    """부호 있는 64 비트로 자르기"""
    value &= _MASK64
    return value - (1 << 64) if value >> 63 else value


def integer_model() -> Model[int]:
    """64 비트 정수 위의 {+, -, *} 모델. 숫자 상수는 그 값으로 해석한다."""
    return Model(
        functions={
            "+": lambda a, b: wrap64(a + b),
            "-": lambda a, b: wrap64(a - b),
            "*": lambda a, b: wrap64(a * b),
        },
        constants={},
        constant_parser=lambda text: wrap64(int(text)),
    )


def eval_term(term: Term, model: Model[D], assignment: Mapping[str, D]) -> D:
    """항의 지시값 [[t]]M,A"""
    if isinstance(term, Apply):
        return model.operation(term.function)(
            eval_term(term.left, model, assignment), eval_term(term.right, model, assignment)
        )
    return model.leaf(term, assignment)


# --- s-식 읽기/쓰기 ---

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([^\s()]+))")
_NUMBER = re.compile(r"^-?\d+$")


def _tokens(text: str) -> List[str]:
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match or match.end() == pos:
            raise InterstringError(f"항 구문 오류: 위치 {pos}")
        tokens.append(match.group(match.lastindex))
        pos = match.end()
    return tokens


def read_term(text: str) -> Term:
    """'(+ x (* y 3))' 형식의 항 읽기. 숫자는 상수, 나머지 원자는 변수."""
    tokens = _tokens(text)
    if not tokens:
        raise InterstringError("빈 항")
    pos = 0

    def parse() -> Term:
        nonlocal pos
        if pos >= len(tokens):
            raise InterstringError("항이 중간에 끝났습니다")
        token = tokens[pos]
        pos += 1
        if token == ")":
            raise InterstringError("예상하지 못한 ')'")
        if token != "(":
            if token == ID:
                raise InterstringError("Id 는 함수 기호로만 쓸 수 있습니다")
            return Const(token) if _NUMBER.match(token) else Var(token)
        if pos >= len(tokens) or tokens[pos] in ("(", ")"):
            raise InterstringError("적용에는 함수 기호가 필요합니다")
        function = tokens[pos]
        pos += 1
        left = parse()
        right = parse()
        if pos >= len(tokens) or tokens[pos] != ")":
            raise InterstringError(f"{function} 적용은 인자가 둘이어야 합니다")
        pos += 1
        return Apply(function, left, right)

    term = parse()
    if pos != len(tokens):
        raise InterstringError(f"항 뒤에 남은 토큰: {' '.join(tokens[pos:])}")
    return term


def write_term(term: Term) -> str:
    if isinstance(term, Apply):
        return f"({term.function} {write_term(term.left)} {write_term(term.right)})"
    return term.name


def random_term(
    rng: random.Random,
    depth: int,
    names: Sequence[str] = ("x", "y", "z", "w"),
    functions: Sequence[str] = ("+", "-", "*", ID),
    leaf_chance: float = 0.25,
) -> Term:
    """깊이 depth 이하의 무작위 항 (나눗셈 없음)

    Args:
        rng: 시드 고정 난수 생성기
        depth: 최대 높이
        names: 변수 이름
        functions: 함수 기호
        leaf_chance: 깊이가 남아도 잎을 고를 확률
    """
    if depth <= 0 or rng.random() < leaf_chance:
        if rng.random() < 0.2:
            return Const(str(rng.randint(0, 9)))
        return Var(rng.choice(list(names)))
    return Apply(
        rng.choice(list(functions)),
        random_term(rng, depth - 1, names, functions, leaf_chance),
        random_term(rng, depth - 1, names, functions, leaf_chance),
    )
