"""
Earth 복제 구조 전개 모듈

복제 구조를 풀어 평탄한 명령어 목록을 만든다. 복제 linename 이 있는 구조는
새 linename 을 만들어 내므로, 구조의 floor (linename 선두 수의 최댓값) 보다
큰 선두 수를 가진 다른 모든 linename 과 참조(jump 목적지, [n])에
linename 증가분을 더한다. 같은 구조 안에서는 참조에만 증가분을 더하고,
dash 구조 안의 복제 참조는 그대로 둔다.

두 복제자 linename 을 가진 구조는 모듈 끝의 한 개만 허용된다. 그 구조는
바깥 복제 값마다 따로 전개하며 linename 을 이어 붙인다.
"""

import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Set, Tuple

from core.earth.numex import Numex
from core.earth.syntax import Construct, EarthInstr, ReplicativeStructure, linenames
from core.errors import EarthCompileError

logger = logging.getLogger(__name__)

Env = Dict[str, int]


def _two_replicator(numex: Numex) -> bool:
    return len(set(numex.reps)) > 1


def _is_terminal_candidate(construct: Construct) -> bool:
    return isinstance(construct, ReplicativeStructure) and any(
        _two_replicator(n) for n in linenames(construct)
    )


def _shift_construct(
    construct: Construct,
    floor: int,
    inc: int,
    inside: bool,
    dashed: bool = False,
    at_least: bool = False,
) -> Construct:
    """선두 수가 floor 보다 큰 (at_least 이면 floor 이상) numex 에 inc 를 더한다

    inside 이면 linename 은 건드리지 않고, dash 구조 안의 복제 참조도
    건드리지 않는다.
    """

    def hit(numex: Numex) -> bool:
        lead = numex.leading
        if lead is None:
            return False
        return lead >= floor if at_least else lead > floor

    def fn(role: str, numex: Numex) -> Numex:
        if role == "operand" or not hit(numex):
            return numex
        if inside and role == "linename":
            return numex
        if inside and dashed and numex.replicative:
            return numex
        return numex.shifted(inc)

    if isinstance(construct, EarthInstr):
        return construct.map_numex(fn)
    inner_dashed = dashed or (inside and construct.dashed)
    body = [_shift_construct(c, floor, inc, inside, inner_dashed, at_least) for c in construct.body]
    return construct.with_body(body)


def _bind_construct(construct: Construct, rep: str, value: int) -> Construct:
    if isinstance(construct, EarthInstr):
        return construct.map_numex(lambda _role, n: n.bind(rep, value))
    body = [_bind_construct(c, rep, value) for c in construct.body]
    return ReplicativeStructure(
        construct.left.bind(rep, value),
        construct.replicator,
        construct.right.bind(rep, value),
        tuple(body),
        construct.dashed,
        construct.line,
    )


def _concrete(instr: EarthInstr, env: Env) -> EarthInstr:
    return instr.map_numex(lambda _role, n: Numex.of(n.evaluate(env)))


def _expand(construct: Construct, env: Env, out: List[EarthInstr]):
    if isinstance(construct, EarthInstr):
        out.append(_concrete(construct, env))
        return
    if construct.replicator in env:
        raise EarthCompileError(
            f"중첩 구조가 복제자 '{construct.replicator}' 를 다시 사용합니다", line=construct.line
        )
    left = construct.left.evaluate(env)
    right = construct.right.evaluate(env)
    if left > right:
        raise EarthCompileError(f"leftlimit {left} 가 rightlimit {right} 보다 큽니다", line=construct.line)
    for value in range(left, right + 1):
        inner = dict(env)
        inner[construct.replicator] = value
        for c in construct.body:
            _expand(c, inner, out)


def _expand_top(construct: Construct, env: Env) -> List[EarthInstr]:
    """최상위 구성요소 전개. 구조 안에서 이미 나온 linename 값은 첫 사본에만 남긴다."""
    out: List[EarthInstr] = []
    _expand(construct, env, out)
    if isinstance(construct, EarthInstr):
        return out
    seen: Set[int] = set()
    result = []
    for instr in out:
        if instr.linename is not None:
            value = instr.linename.constant
            if value in seen:
                instr = replace(instr, linename=None)
            else:
                seen.add(value)
        result.append(instr)
    return result


def _increment(structure: ReplicativeStructure, env: Env) -> Optional[Tuple[int, int]]:
    """(floor, linename 증가분). 구조에 linename 이 없으면 None."""
    names = linenames(structure)
    if not names:
        return None
    leads = []
    for numex in names:
        if numex.leading is None:
            raise EarthCompileError(f"선두 수가 없는 linename: {numex}", line=structure.line)
        leads.append(numex.leading)
    produced = sum(1 for instr in _expand_top(structure, env) if instr.linename is not None)
    return max(leads), produced - len(set(names))


def _check_monotonic(code: Sequence[Construct], module: Optional[str]):
    names: List[Numex] = []
    for construct in code:
        names.extend(linenames(construct))
    if not any(n.replicative for n in names):
        return
    leads = [n.leading for n in names]
    for prev, cur in zip(leads, leads[1:]):
        if prev is None or cur is None or cur != prev + 1:
            raise EarthCompileError(
                f"복제 linename 이 있는 모듈의 linename 선두 수는 1씩 증가해야 합니다: {prev} -> {cur}",
                module,
            )


def _replicate_list(code: List[Construct], env: Env, skip: Optional[int] = None) -> List[Construct]:
    """최상위 구조들의 linename 증가분을 차례로 적용한 구성요소 목록"""
    code = list(code)
    # code 는 루프 안에서 이동된 목록으로 바뀌므로 매번 새로 읽는다
    for k in range(len(code)):
        construct = code[k]
        if k == skip or not isinstance(construct, ReplicativeStructure):
            continue
        found = _increment(construct, env)
        if found is None:
            continue
        floor, inc = found
        if inc == 0:
            continue
        logger.debug(f"복제 구조 (줄 {construct.line}): floor={floor}, linename 증가분={inc}")
        code = [
            _shift_construct(other, floor, inc, inside=(m == k)) for m, other in enumerate(code)
        ]
    return code


def _flatten(code: List[Construct], env: Env) -> List[EarthInstr]:
    flat: List[EarthInstr] = []
    for construct in code:
        flat.extend(_expand_top(construct, env))
    return flat


def _expand_terminal(structure: ReplicativeStructure) -> List[EarthInstr]:
    """모듈 끝의 두 복제자 linename 구조 전개

    바깥 값 v 마다 본문을 v 로 묶고, 선두 수가 L0+v 이상인 numex 를
    지금까지 만든 linename 바로 뒤로 옮긴 다음 독립된 코드처럼 전개한다.
    """
    leads = [n.leading for n in linenames(structure)]
    if any(lead is None for lead in leads):
        raise EarthCompileError("선두 수가 없는 linename", line=structure.line)
    origin = min(leads)
    left = structure.left.evaluate({})
    right = structure.right.evaluate({})
    if left > right:
        raise EarthCompileError(f"leftlimit {left} 가 rightlimit {right} 보다 큽니다", line=structure.line)
    base = origin
    flat: List[EarthInstr] = []
    for value in range(left, right + 1):
        body = [_bind_construct(c, structure.replicator, value) for c in structure.body]
        start = origin + value - left
        delta = base - start
        if delta:
            body = [_shift_construct(c, start, delta, inside=False, at_least=True) for c in body]
        copy = _flatten(_replicate_list(body, {}), {})
        flat.extend(copy)
        base += sum(1 for instr in copy if instr.linename is not None)
    return flat


def replicate(code: Sequence[Construct], module: Optional[str] = None) -> List[EarthInstr]:
    """복제 구조를 전개해 평탄한 명령어 목록 생성

    구조가 없는 코드에는 항등 함수이다. 결과 명령어의 numex 는 모두 정수이다.

    Args:
        code: 파싱된 구성요소 목록 (endc 포함 가능)
        module: 오류 메시지용 모듈 이름

    Returns:
        전개된 명령어 목록

    Raises:
        EarthCompileError: linename 단조 증가 위반, 잘못된 두 복제자 구조
    """
    code = list(code)
    try:
        _check_monotonic(code, module)
        terminal: Optional[int] = None
        for k, construct in enumerate(code):
            if _is_terminal_candidate(construct):
                if terminal is not None:
                    raise EarthCompileError("두 복제자 linename 구조는 하나만 허용됩니다", module)
                terminal = k
        if terminal is not None:
            trailing = code[terminal + 1:]
            if any(linenames(c) for c in trailing) or any(
                isinstance(c, ReplicativeStructure) for c in trailing
            ):
                raise EarthCompileError("두 복제자 linename 구조는 모듈 끝에 있어야 합니다", module)

        code = _replicate_list(code, {}, skip=terminal)
        flat: List[EarthInstr] = []
        for k, construct in enumerate(code):
            if k == terminal:
                flat.extend(_expand_terminal(construct))
            else:
                flat.extend(_expand_top(construct, {}))
    except EarthCompileError as e:
        if e.module is None and module is not None:
            raise EarthCompileError(e.message, module, e.line)
        raise
    return flat
