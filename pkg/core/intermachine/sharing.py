"""
인터스트링 공유 제거 모듈

인터스트링을 기호적으로 실행하며 셀마다 값 번호를 매긴다. 같은 alpha 열에서
이미 계산되는 값, 또는 출력 셀에 이미 있는 값을 다시 계산하는 alpha 원소를
지우고, 그 값을 읽던 beta 복사는 값을 가진 다른 셀에서 읽도록 바꾼다. 값을
읽을 셀이 없으면 그 값을 만든 원소를 되살리고 처음부터 다시 한다. 마지막으로
역방향 생존 분석으로 결과가 쓰이지 않는 원소를 지운다.

함수 기호는 해석하지 않는 것으로 보되 Id(a, b) = a 는 모든 모델에서 성립하므로
그대로 쓴다. 따라서 결과는 모든 모델, 모든 배정에서 지시값이 같다.
"""

import logging
from typing import Dict, List, Optional, Set, Tuple

from core.intermachine.interstring import AlphaColumn, BetaColumn, Column, Interstring, VCMemory
from core.intermachine.terms import ID, Var

logger = logging.getLogger(__name__)

Site = Tuple[int, int]  # (열 번호, FU)


class _Resurrect(Exception):
    def __init__(self, site: Optional[Site]):
        super().__init__(site)
        self.site = site


def _leaf_key(leaf) -> Tuple[str, str]:
    return ("var" if isinstance(leaf, Var) else "const", leaf.name)


def _forward(psi: VCMemory, columns: List[Column], keep: Set[Site]) -> List[Column]:
    numbers: Dict[object, int] = {}

    def number(key) -> int:
        return numbers.setdefault(key, len(numbers))

    intended = [number(_leaf_key(leaf)) for leaf in psi.cells]
    actual = list(intended)
    dropped_writer: Dict[int, Site] = {}
    result: List[Column] = []
    last = len(columns) - 1

    for i, column in enumerate(columns):
        if isinstance(column, AlphaColumn):
            entries = []
            produced: Set[int] = set()
            new_intended, new_actual = list(intended), list(actual)
            for function, j in column.entries:
                a, b = intended[3 * j - 2], intended[3 * j - 1]
                value = a if function == ID else number((function, a, b))
                new_intended[3 * j] = value
                redundant = actual[3 * j] == value or value in produced
                if redundant and (i, j) not in keep:
                    dropped_writer[3 * j] = (i, j)
                    continue
                entries.append((function, j))
                produced.add(value)
                new_actual[3 * j] = value
                dropped_writer.pop(3 * j, None)
            intended, actual = new_intended, new_actual
            result.append(AlphaColumn(tuple(entries)))
            continue

        copies = []
        new_intended, new_actual = list(intended), list(actual)
        for source, target in column.copies:
            desired = intended[source]
            new_intended[target] = desired
            if i == last:
                if actual[source] != desired:
                    raise _Resurrect(dropped_writer.get(source))
                copies.append((source, target))
                new_actual[target] = desired
                continue
            if actual[target] == desired:
                continue
            if actual[source] != desired:
                holders = [c for c in range(1, len(actual)) if actual[c] == desired]
                if not holders:
                    raise _Resurrect(dropped_writer.get(source))
                source = holders[0]
            copies.append((source, target))
            new_actual[target] = desired
            dropped_writer.pop(target, None)
        intended, actual = new_intended, new_actual
        result.append(BetaColumn(tuple(copies)))
    return result


def _drop_dead(columns: List[Column]) -> List[Column]:
    """쓰이지 않는 셀에 쓰는 원소 제거 (마지막 열은 그대로)"""
    result: List[Column] = [columns[-1]]
    live = {s for s, _ in columns[-1].copies}  # type: ignore[union-attr]
    for column in reversed(columns[:-1]):
        if isinstance(column, AlphaColumn):
            entries = tuple((f, j) for f, j in column.entries if 3 * j in live)
            live -= {3 * j for _, j in entries}
            for _, j in entries:
                live |= {3 * j - 2, 3 * j - 1}
            result.append(AlphaColumn(entries))
        else:
            copies = tuple((s, t) for s, t in column.copies if t in live)
            live -= {t for _, t in copies}
            live |= {s for s, _ in copies}
            result.append(BetaColumn(copies))
    result.reverse()
    return result


def dedup_columns(psi: VCMemory, interstring: Interstring) -> Interstring:
    """지시값을 바꾸지 않고 중복 계산과 불필요한 복사를 지운 인터스트링

    공유를 안전하게 만들 수 없으면 원래 인터스트링을 돌려준다.
    """
    interstring.validate()
    keep: Set[Site] = set()
    while True:
        try:
            columns = _forward(psi, interstring.columns, keep)
            break
        except _Resurrect as e:
            if e.site is None or e.site in keep:
                logger.debug("공유 제거 불가: 원래 인터스트링 유지")
                return interstring
            keep.add(e.site)
    shared = Interstring(interstring.k, _drop_dead(columns))
    logger.debug(
        f"공유 제거: alpha {interstring.alpha_entries} -> {shared.alpha_entries}, "
        f"beta {interstring.beta_entries} -> {shared.beta_entries}"
    )
    return shared
