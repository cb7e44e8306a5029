"""
인터스트링과 인터머신 모듈

kVC 메모리는 셀 0..3k 에 변수/상수 기호를 담는다. FU j (1 ≤ j ≤ k) 는
셀 3j-2, 3j-1 을 읽어 셀 3j 에 쓴다. 인터스트링은 alpha 열(함수 기호, FU)
과 beta 열(원본 셀, 대상 셀)이 번갈아 오는 열의 문자열이며, 마지막 열은
⟨t, 0⟩ (t mod 3 = 0) 하나만 담는다.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import List, Mapping, Sequence, Tuple, TypeVar, Union

from core.errors import InterstringError
from core.intermachine.terms import Leaf, Model

logger = logging.getLogger(__name__)

D = TypeVar("D")

EMPTY = "_"


@dataclass(frozen=True)
class AlphaColumn:
    """(함수 기호, FU 번호) 목록"""

    entries: Tuple[Tuple[str, int], ...] = ()

    def __str__(self) -> str:
        return " ".join(f"{f}({j})" for f, j in self.entries) or EMPTY


@dataclass(frozen=True)
class BetaColumn:
    """(원본 셀, 대상 셀) 복사 목록. 읽기 단계 뒤에 쓰기 단계가 온다."""

    copies: Tuple[Tuple[int, int], ...] = ()

    def __str__(self) -> str:
        return " ".join(f"{s}->{t}" for s, t in self.copies) or EMPTY


Column = Union[AlphaColumn, BetaColumn]


def check_alpha(column: AlphaColumn, k: int):
    """A_k 조건: FU 번호 1..k, 한 열에 같은 FU 없음"""
    seen = set()
    for function, j in column.entries:
        if not 1 <= j <= k:
            raise InterstringError(f"FU 번호 범위 오류: {function}({j}), k={k}")
        if j in seen:
            raise InterstringError(f"한 alpha 열에서 FU {j} 가 두 번 활성화됩니다")
        seen.add(j)


def check_beta(column: BetaColumn, k: int):
    """B_k 조건: 원본 1..3k, 대상 0..3k, 한 열에 같은 대상 없음"""
    seen = set()
    for source, target in column.copies:
        if not 1 <= source <= 3 * k:
            raise InterstringError(f"원본 셀 범위 오류: {source}->{target}, k={k}")
        if not 0 <= target <= 3 * k:
            raise InterstringError(f"대상 셀 범위 오류: {source}->{target}, k={k}")
        if target in seen:
            raise InterstringError(f"한 beta 열에서 셀 {target} 에 두 번 복사합니다")
        seen.add(target)


def check_column(column: Column, k: int):
    if isinstance(column, AlphaColumn):
        check_alpha(column, k)
    else:
        check_beta(column, k)


@dataclass
class Interstring:
    """차원 k 의 인터스트링 α0 :: β0 :: α1 :: β1 :: ... ;;"""

    k: int
    columns: List[Column] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.columns)

    @property
    def alpha_entries(self) -> int:
        return sum(len(c.entries) for c in self.columns if isinstance(c, AlphaColumn))

    @property
    def beta_entries(self) -> int:
        return sum(len(c.copies) for c in self.columns if isinstance(c, BetaColumn))

    def validate(self):
        """교대, A_k/B_k, 종결 열 조건 검사

        Raises:
            InterstringError: 조건 위반
        """
        if self.k < 1:
            raise InterstringError(f"차원은 1 이상이어야 합니다: {self.k}")
        if not self.columns or len(self.columns) % 2:
            raise InterstringError(f"인터스트링은 alpha/beta 쌍으로 이루어져야 합니다 (열 {len(self.columns)} 개)")
        for i, column in enumerate(self.columns):
            expected = AlphaColumn if i % 2 == 0 else BetaColumn
            if not isinstance(column, expected):
                raise InterstringError(f"열 {i} 은 {expected.__name__} 이어야 합니다")
            check_column(column, self.k)
        last = self.columns[-1]
        if len(last.copies) != 1 or last.copies[0][1] != 0 or last.copies[0][0] % 3:  # type: ignore[union-attr]
            raise InterstringError(f"종결 열은 ⟨t, 0⟩ (t mod 3 = 0) 하나여야 합니다: {last}")


@dataclass
class VCMemory:
    """kVC 메모리 ψ: 셀 0..3k -> 변수/상수 기호"""

    cells: List[Leaf]

    def __post_init__(self):
        if len(self.cells) < 4 or len(self.cells) % 3 != 1:
            raise InterstringError(f"kVC 메모리 셀 수는 3k+1 이어야 합니다: {len(self.cells)}")

    @property
    def k(self) -> int:
        return (len(self.cells) - 1) // 3

    def __str__(self) -> str:
        return " ".join(f"{i}:{leaf}" for i, leaf in enumerate(self.cells))


def lift(psi: VCMemory, model: Model[D], assignment: Mapping[str, D]) -> List[D]:
    """셀별 지시값으로 kD 메모리 [[ψ]]M,A 를 만든다"""
    return [model.leaf(leaf, assignment) for leaf in psi.cells]


def step_column(sigma: Sequence[D], column: Column, model: Model[D]) -> List[D]:
    """열 하나 적용 (apply_M / copy_M). 건드리지 않은 셀은 그대로."""
    k = (len(sigma) - 1) // 3
    check_column(column, k)
    result = list(sigma)
    if isinstance(column, AlphaColumn):
        for function, j in column.entries:
            result[3 * j] = model.operation(function)(sigma[3 * j - 2], sigma[3 * j - 1])
    else:
        for source, target in column.copies:
            result[target] = sigma[source]
    return result


def cycle(h: int, sigma: Sequence[D], interstring: Interstring, model: Model[D]) -> List[D]:
    """처음 h 개 열을 처리한 뒤의 메모리 (cycle_M)"""
    if not 0 <= h <= len(interstring):
        raise InterstringError(f"사이클 수 {h} 가 인터스트링 길이 {len(interstring)} 를 넘습니다")
    state = list(sigma)
    for column in interstring.columns[:h]:
        state = step_column(state, column, model)
    return state


def denote(psi: VCMemory, interstring: Interstring, model: Model[D], assignment: Mapping[str, D]) -> D:
    """⟨ψ, Y⟩ 의 지시값: 모든 열을 실행한 뒤 셀 0"""
    if psi.k != interstring.k:
        raise InterstringError(f"메모리 차원 {psi.k} 와 인터스트링 차원 {interstring.k} 가 다릅니다")
    if not interstring.columns:
        raise InterstringError("빈 인터스트링")
    return cycle(len(interstring), lift(psi, model, assignment), interstring, model)[0]


def render_interstring(interstring: Interstring) -> str:
    """'Id(1) :: 3->0 ;;' 표기"""
    return " :: ".join(str(c) for c in interstring.columns) + " ;;"


_ALPHA = re.compile(r"^(\S+)\((\d+)\)$")
_BETA = re.compile(r"^(\d+)->(\d+)$")


def parse_interstring(text: str, k: int) -> Interstring:
    """render_interstring 표기 읽기. 짝수 번째 열이 alpha 이다."""
    body = text.strip()
    if not body.endswith(";;"):
        raise InterstringError("인터스트링은 ';;' 로 끝나야 합니다")
    columns: List[Column] = []
    for i, chunk in enumerate(body[:-2].split("::")):
        items = [] if chunk.strip() == EMPTY else chunk.split()
        if i % 2 == 0:
            entries = []
            for item in items:
                match = _ALPHA.match(item)
                if not match:
                    raise InterstringError(f"잘못된 alpha 원소: '{item}'")
                entries.append((match.group(1), int(match.group(2))))
            columns.append(AlphaColumn(tuple(entries)))
        else:
            copies = []
            for item in items:
                match = _BETA.match(item)
                if not match:
                    raise InterstringError(f"잘못된 beta 원소: '{item}'")
                copies.append((int(match.group(1)), int(match.group(2))))
            columns.append(BetaColumn(tuple(copies)))
    interstring = Interstring(k, columns)
    interstring.validate()
    return interstring
