"""
Space construct 전개 모듈

construct-line 을 안쪽부터 풀어 서로 독립된 base-line 목록을 만든다.

- deep: 첫 의존 라인의 열을 복제자 값마다 세로로 복제한 라인 하나가 되어
  construct 의 주소를 차지한다. wait 열은 한 번만 복사하고, '__' 는 첫
  활성화 원소에만 남긴다. egress 가 있으면 jump 열을 덧붙인다.
- while A: 라인 A 는 비트가 1 이면 본문 A.1 로, 0 이면 egress 로 간다.
  본문의 subhalt(A) 는 A 로 돌아가는 jump 가 된다.
- dowhile A: 라인 A 는 본문으로 바로 가고, 검사 라인 A.0 이 while 의
  검사를 맡는다. 본문의 subhalt(A) 는 A.0 으로 가는 jump 가 된다.
"""

import logging
from dataclasses import replace
from typing import Dict, List, Optional

from core.errors import SpaceCompileError
from core.space.indexical import FUNCTIONS, Indexical, eval_indexical
from core.space.syntax import (
    ACTIVATE,
    COND,
    DEEP,
    HALT,
    IMMEDIATE,
    JUMP,
    SKIP,
    STORAGE,
    SUBHALT,
    WAIT,
    WHILE,
    Activate,
    BaseLine,
    Column,
    Cond,
    ConstructLine,
    Copy,
    DeepClause,
    Identifier,
    Jump,
    LineAddress,
    Ref,
    SpaceModuleAST,
    format_address,
)

logger = logging.getLogger(__name__)

MAX_ITERATIONS = 1 << 20

Env = Dict[str, int]


def _bind_indexical(expr: Optional[Indexical], env: Env) -> Optional[Indexical]:
    if expr is None or expr.is_constant or expr.replicator not in env:
        return expr
    return Indexical(constant=eval_indexical(expr, env))


def _bind_ref(ref: Ref, env: Env) -> Ref:
    return Ref(ref.name, tuple(_bind_indexical(i, env) for i in ref.indices))


def render_identifier(ident: Identifier) -> str:
    """색인이 묶인 식별자의 원문"""
    if ident.kind == IMMEDIATE and ident.value is not None:
        return f"#{ident.value}"
    if ident.kind != STORAGE:
        return ident.text
    text = ("&" if ident.address else "") + ".".join(str(ref) for ref in ident.path)
    if ident.cell is not None:
        text += f".{ident.cell}"
    elif ident.bit is not None:
        text += f".{ident.bit}"
    return text


def bind_identifier(ident: Identifier, env: Env) -> Identifier:
    bound = replace(
        ident,
        path=tuple(_bind_ref(ref, env) for ref in ident.path),
        bit=_bind_indexical(ident.bit, env),
        value=_bind_indexical(ident.value, env),
    )
    return replace(bound, text=render_identifier(bound))


def bind_item(item, env: Env):
    if isinstance(item, Copy):
        return Copy(bind_identifier(item.source, env), bind_identifier(item.target, env))
    if isinstance(item, Activate):
        return replace(item, ref=_bind_ref(item.ref, env))
    if isinstance(item, Cond):
        return replace(item, bit=bind_identifier(item.bit, env))
    return item


def _holds(value: int, comparator: str, limit: int) -> bool:
    if comparator == "<=":
        return value <= limit
    if comparator == ">=":
        return value >= limit
    if comparator == "<<":
        return value < limit
    return value > limit


def clause_values(clause: DeepClause, env: Env, limit: int = MAX_ITERATIONS) -> List[int]:
    """deep 절 하나가 복제자에 주는 값 목록"""
    value = eval_indexical(clause.left, env)
    right = eval_indexical(clause.right, env)
    step = FUNCTIONS[clause.function]
    values: List[int] = []
    while _holds(value, clause.comparator, right):
        values.append(value)
        if len(values) > limit:
            raise SpaceCompileError(f"deep 반복이 {limit} 번을 넘습니다: {clause}")
        following = step(value)
        if following == value:
            raise SpaceCompileError(f"색인 함수 {clause.function} 가 값을 바꾸지 않아 deep 이 끝나지 않습니다: {clause}")
        value = following
    return values


def deep_environments(clauses: List[DeepClause], env: Optional[Env] = None, limit: int = MAX_ITERATIONS) -> List[Env]:
    """여러 줄 deep 의 복제자 값 조합 (첫 절이 가장 바깥)"""
    env = env or {}
    if not clauses:
        return [dict(env)]
    found: List[Env] = []
    for value in clause_values(clauses[0], env, limit):
        inner = dict(env)
        inner[clauses[0].replicator] = value
        found.extend(deep_environments(clauses[1:], inner, limit))
        if len(found) > limit:
            raise SpaceCompileError(f"deep 반복이 {limit} 번을 넘습니다")
    return found


def _unique(items: List) -> List:
    seen = []
    for item in items:
        if item not in seen:
            seen.append(item)
    return seen


def expand_deep(body: BaseLine, construct: ConstructLine, limit: int = MAX_ITERATIONS) -> BaseLine:
    """deep construct 하나를 base-line 하나로 전개"""
    label = construct.label
    try:
        envs = deep_environments(construct.clauses, limit=limit)
    except SpaceCompileError as e:
        raise SpaceCompileError(e.message, line=label)
    if not envs:
        raise SpaceCompileError("deep 이 한 번도 반복되지 않습니다", line=label)
    columns: List[Column] = []
    for column in body.columns:
        if column.kind == WAIT:
            columns.append(Column(column.kind, list(column.items)))
            continue
        try:
            items = [bind_item(item, env) for env in envs for item in column.items]
        except SpaceCompileError as e:
            raise SpaceCompileError(e.message, line=label)
        if column.kind == ACTIVATE:
            items = [replace(item, exclusive=item.exclusive and k == 0) for k, item in enumerate(items)]
        elif column.kind in (JUMP, SUBHALT, HALT, SKIP):
            items = _unique(items)
        columns.append(Column(column.kind, items))
    line = BaseLine(construct.address, columns, body.source_line)
    if construct.egress is not None:
        if line.terminal is not None:
            raise SpaceCompileError("종결 열이 있는 라인에는 egress 를 둘 수 없습니다", line=label)
        line.columns.append(Column(JUMP, [Jump(construct.egress)]))
    logger.debug(f"deep 전개: {label} ({len(envs)} 회)")
    return line


def _replace_subhalt(lines: Dict[LineAddress, BaseLine], address: LineAddress, target: LineAddress):
    for line in lines.values():
        for k, column in enumerate(line.columns):
            if column.kind != SUBHALT:
                continue
            if any(item.address != address for item in column.items):
                continue
            line.columns[k] = Column(JUMP, [Jump((target, 0))])


def _descendants(lines: Dict[LineAddress, BaseLine], address: LineAddress) -> List[LineAddress]:
    n = len(address)
    return [a for a in lines if len(a) > n and a[:n] == address]


def expand(ast: SpaceModuleAST, limit: int = MAX_ITERATIONS) -> List[BaseLine]:
    """construct-line 을 모두 풀어 독립 base-line 목록 생성

    Returns:
        라인 주소 순으로 정렬된 base-line 목록

    Raises:
        SpaceCompileError: 선언되지 않은 복제자, 없는 라인 주소, 남은 subhalt
    """
    lines: Dict[LineAddress, BaseLine] = {
        line.address: BaseLine(line.address, [Column(c.kind, list(c.items)) for c in line.columns], line.source_line)
        for line in ast.lines
    }
    declared = set(ast.replicators)
    for construct in sorted(ast.constructs, key=lambda c: (-len(c.address), c.address)):
        label = construct.label
        dependent = construct.first_dependent
        if dependent not in lines:
            raise SpaceCompileError(f"construct-line {label} 의 의존 라인 {format_address(dependent)} 이 없습니다", ast.name, label)
        if construct.kind == DEEP:
            for clause in construct.clauses:
                if clause.replicator not in declared:
                    raise SpaceCompileError(f"선언되지 않은 복제자: {clause.replicator}", ast.name, label)
            if _descendants(lines, dependent):
                raise SpaceCompileError("deep 의 의존 라인은 base-line 하나여야 합니다", ast.name, label)
            try:
                lines[construct.address] = expand_deep(lines.pop(dependent), construct, limit)
            except SpaceCompileError as e:
                raise SpaceCompileError(e.message, ast.name, e.line or label)
            continue
        test = (dependent, 0)
        guard = Column(COND, [Cond(construct.bit, construct.egress, test)])
        if construct.kind == WHILE:
            lines[construct.address] = BaseLine(construct.address, [guard], construct.source_line)
            _replace_subhalt(lines, construct.address, construct.address)
        else:
            check = construct.address + (0,)
            if check in lines:
                raise SpaceCompileError(f"dowhile 검사 라인 {format_address(check)} 이 이미 있습니다", ast.name, label)
            lines[construct.address] = BaseLine(construct.address, [Column(JUMP, [Jump(test)])], construct.source_line)
            lines[check] = BaseLine(check, [guard], construct.source_line)
            _replace_subhalt(lines, construct.address, check)

    for line in lines.values():
        for column in line.columns:
            if column.kind == SUBHALT:
                raise SpaceCompileError(
                    f"subhalt({format_address(column.items[0].address)}) 에 맞는 while/dowhile 이 없습니다",
                    ast.name,
                    line.label,
                )
    result = [lines[a] for a in sorted(lines)]
    logger.debug(f"{ast.name} 전개 완료: base-line {len(result)} 개")
    return result


