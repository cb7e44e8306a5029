"""
항 -> ⟨kVC 메모리, 인터스트링⟩ 컴파일 모듈

잎은 셀 4 개가 모두 그 잎인 1-FU 메모리와 ⟨Id(1) :: 3->0⟩ 이 된다.
f(t1, t2) 는 두 메모리를 이어 붙이고 (t2 쪽 셀 0 은 버림) 두 인터스트링을
열 단위로 합친 뒤 (t2 쪽 FU 번호 +k, 셀 번호 +3k, 짧은 쪽은 패딩 없이 끝남)
마지막 beta 열을 떼고 3->1 3k+3->2 :: f(1) :: 3->0 을 붙인다.

열 번호는 0 부터 세며 짝수 열이 alpha 이다. 합친 부분의 마지막 열은
긴 쪽 인터스트링의 마지막 alpha 열이므로, 그 뒤 셀 3 에 [[t1]], 셀 3k+3 에
[[t2]] 가 있다.
"""

import logging
from typing import List, Tuple

from core.errors import InterstringError
from core.intermachine.interstring import AlphaColumn, BetaColumn, Column, Interstring, VCMemory
from core.intermachine.terms import ID, Apply, Term

logger = logging.getLogger(__name__)


def _shift(column: Column, k: int) -> Column:
    if isinstance(column, AlphaColumn):
        return AlphaColumn(tuple((f, j + k) for f, j in column.entries))
    if any(s == 0 or t == 0 for s, t in column.copies):
        raise InterstringError(f"오른쪽 인터스트링이 셀 0 을 중간에 씁니다: {column}")
    return BetaColumn(tuple((s + 3 * k, t + 3 * k) for s, t in column.copies))


def _merge(left: Column, right: Column) -> Column:
    if isinstance(left, AlphaColumn) and isinstance(right, AlphaColumn):
        return AlphaColumn(left.entries + right.entries)
    if isinstance(left, BetaColumn) and isinstance(right, BetaColumn):
        return BetaColumn(left.copies + right.copies)
    raise InterstringError("alpha 열과 beta 열은 합칠 수 없습니다")


def conjoin(
    first: Tuple[VCMemory, Interstring], second: Tuple[VCMemory, Interstring], function: str
) -> Tuple[VCMemory, Interstring]:
    """귀납 단계: ⟨ψ1, Y1⟩, ⟨ψ2, Y2⟩ 로 f(t1, t2) 의 ⟨ψ3, Y3⟩ 를 만든다"""
    psi1, y1 = first
    psi2, y2 = second
    k = psi1.k
    psi3 = VCMemory(list(psi1.cells) + list(psi2.cells[1:]))

    body1 = y1.columns[:-1]
    body2 = [_shift(c, k) for c in y2.columns[:-1]]
    columns: List[Column] = []
    for i in range(max(len(body1), len(body2))):
        if i < len(body1) and i < len(body2):
            columns.append(_merge(body1[i], body2[i]))
        else:
            columns.append(body1[i] if i < len(body1) else body2[i])
    columns.append(BetaColumn(((3, 1), (3 * k + 3, 2))))
    columns.append(AlphaColumn(((function, 1),)))
    columns.append(BetaColumn(((3, 0),)))
    return psi3, Interstring(psi3.k, columns)


def compile_term(term: Term) -> Tuple[VCMemory, Interstring]:
    """항과 같은 지시값을 갖는 ⟨ψ, Y⟩ (모든 모델, 모든 배정에 대해)"""
    if isinstance(term, Apply):
        result = conjoin(compile_term(term.left), compile_term(term.right), term.function)
    else:
        result = VCMemory([term] * 4), Interstring(1, [AlphaColumn(((ID, 1),)), BetaColumn(((3, 0),))])
    return result
