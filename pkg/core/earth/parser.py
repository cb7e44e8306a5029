"""
Earth 소스 파서 모듈

선언은 한 줄에 하나씩 NAME 으로 시작해 TIME 으로 끝난다. 코드는 endc 로
끝나고 // 뒤는 주석이다.
"""

import logging
import re
from typing import List, Optional, Tuple

from core.earth.numex import parse_numex
from core.earth.syntax import (
    STORAGE_KEYWORDS,
    AddressMode,
    Construct,
    EarthDeclarations,
    EarthInstr,
    EarthSource,
    Interface,
    ReplicativeStructure,
    StorageDecl,
    StorageType,
)
from core.errors import EarthSyntaxError

logger = logging.getLogger(__name__)

BUSY = "busy"
META_BUSY = "mbsy"

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_DECL = re.compile(r"^([A-Z]+)\s*:\s*(.*?)\s*;$")
_TIME = re.compile(r"^(\d+)\s*-\s*(\d+)\s*cycles?$")
_INSTR = re.compile(r"^(?:(\S+)\s+)?(wrt0|wrt1|cond|jump|endc)(?:\s+(.*))?$")
_OPEN = re.compile(r"^<\s*([^;>]+?)\s*;\s*([A-Za-z])\s*;\s*([^;>]+?)\s*>\s*(-*)\s*\{$")
_BRACKET = re.compile(r"^\[\s*(\S+)\s*\]\s+(\S+)$")
_NAMED = re.compile(rf"^({_IDENT})(?:\.(\S+))?$")


def _clean(raw: str) -> str:
    line = raw.split("//", 1)[0].strip()
    # 괄호 안 공백 제거: "( 1 + i )" -> "(1+i)"
    return re.sub(r"\(([^()]*)\)", lambda m: "(" + re.sub(r"\s+", "", m.group(1)) + ")", line)


def _parse_declaration(
    decls: EarthDeclarations, key: str, body: str, lineno: int, seen: set
) -> None:
    name = decls.name or None
    if key == "NAME":
        if not re.fullmatch(_IDENT, body):
            raise EarthSyntaxError(f"잘못된 모듈 이름: {body}", name, lineno)
        decls.name = body
    elif key == "META":
        if not body.isdigit():
            raise EarthSyntaxError(f"META 는 linename 정수여야 합니다: {body}", name, lineno)
        decls.meta = int(body)
    elif key in STORAGE_KEYWORDS:
        storage_type = STORAGE_KEYWORDS[key]
        if storage_type in decls.categories:
            raise EarthSyntaxError(f"{key} 선언이 중복되었습니다", name, lineno)
        decls.categories.append(storage_type)
        for entry in body.split(","):
            parts = entry.split()
            if len(parts) != 2 or not re.fullmatch(_IDENT, parts[0]):
                raise EarthSyntaxError(f"잘못된 저장소 선언: '{entry.strip()}'", name, lineno)
            try:
                interface = Interface(parts[1])
            except ValueError:
                raise EarthSyntaxError(f"알 수 없는 인터페이스 범주: {parts[1]}", name, lineno)
            if parts[0] in seen:
                raise EarthSyntaxError(f"저장소 이름 중복: {parts[0]}", name, lineno)
            seen.add(parts[0])
            decls.storage.append(StorageDecl(parts[0], storage_type, interface, lineno))
    elif key == "TIME":
        match = _TIME.match(body)
        if not match:
            raise EarthSyntaxError(f"잘못된 TIME 선언: {body}", name, lineno)
        low, high = int(match.group(1)), int(match.group(2))
        if low > high:
            raise EarthSyntaxError(f"TIME 최소값이 최대값보다 큽니다: {body}", name, lineno)
        decls.time = (low, high)
    else:
        raise EarthSyntaxError(f"알 수 없는 선언: {key}", name, lineno)


def _check_declarations(decls: EarthDeclarations, lineno: int):
    bits = [d.name for d in decls.storage if d.type == StorageType.BIT]
    if StorageType.BIT not in decls.categories or BUSY not in bits:
        raise EarthSyntaxError("BITS 선언에 busy 비트가 필요합니다", decls.name, lineno)
    if decls.meta is not None and META_BUSY not in bits:
        raise EarthSyntaxError("메타 모듈은 mbsy 비트를 선언해야 합니다", decls.name, lineno)


def _parse_instruction(match: re.Match, module: str, lineno: int) -> EarthInstr:
    label, op, rest = match.groups()
    linename = parse_numex(label) if label else None
    rest = (rest or "").strip()
    if op == "endc":
        if rest or linename is not None:
            raise EarthSyntaxError("endc 에는 피연산자가 없습니다", module, lineno)
        return EarthInstr("endc", line=lineno)
    if op == "jump":
        parts = rest.split()
        if len(parts) != 2:
            raise EarthSyntaxError(f"jump 는 상대 jump 번호와 offset 이 필요합니다: {rest}", module, lineno)
        return EarthInstr(
            op, linename, AddressMode.RELATIVE, x=parse_numex(parts[0]), y=parse_numex(parts[1]), line=lineno
        )
    bracket = _BRACKET.match(rest)
    if bracket:
        return EarthInstr(
            op,
            linename,
            AddressMode.BRACKET,
            x=parse_numex(bracket.group(1)),
            y=parse_numex(bracket.group(2)),
            line=lineno,
        )
    parts = rest.split()
    if len(parts) == 2:
        return EarthInstr(
            op, linename, AddressMode.ABSOLUTE, x=parse_numex(parts[0]), y=parse_numex(parts[1]), line=lineno
        )
    named = _NAMED.match(rest)
    if len(parts) != 1 or not named:
        raise EarthSyntaxError(f"잘못된 destination: '{rest}'", module, lineno)
    index = parse_numex(named.group(2)) if named.group(2) is not None else None
    return EarthInstr(op, linename, AddressMode.NAME, target=named.group(1), y=index, line=lineno)


def _with_context(fn, module: Optional[str], lineno: int):
    try:
        return fn()
    except EarthSyntaxError as e:
        if e.line is None:
            raise EarthSyntaxError(e.message, module, lineno)
        raise


def parse_earth(text: str) -> EarthSource:
    """Earth 모듈 소스 파싱

    Args:
        text: .dat 소스 텍스트

    Returns:
        선언과 코드 구성요소

    Raises:
        EarthSyntaxError: NAME/TIME/busy/endc 누락, 잘못된 numex, 알 수 없는 선언
    """
    decls = EarthDeclarations(name="")
    seen: set = set()
    lines = text.splitlines()
    index = 0
    in_declarations = True
    last_lineno = 0

    while index < len(lines) and in_declarations:
        lineno = index + 1
        line = _clean(lines[index])
        index += 1
        if not line:
            continue
        match = _DECL.match(line)
        if not match:
            raise EarthSyntaxError(f"선언 구문 오류: {line}", decls.name or None, lineno)
        key, body = match.groups()
        if not decls.name and key != "NAME":
            raise EarthSyntaxError("선언은 NAME 으로 시작해야 합니다", None, lineno)
        _parse_declaration(decls, key, body, lineno, seen)
        last_lineno = lineno
        if key == "TIME":
            in_declarations = False

    if not decls.name:
        raise EarthSyntaxError("NAME 선언이 없습니다")
    if in_declarations:
        raise EarthSyntaxError("TIME 선언이 없습니다", decls.name, last_lineno)
    _check_declarations(decls, last_lineno)

    # (열린 구조, 본문) 스택
    stack: List[Tuple[Optional[ReplicativeStructure], List[Construct]]] = [(None, [])]
    ended = False
    while index < len(lines):
        lineno = index + 1
        line = _clean(lines[index])
        index += 1
        if not line:
            continue
        if ended:
            raise EarthSyntaxError(f"endc 뒤에 코드가 있습니다: {line}", decls.name, lineno)
        if line == "}":
            if len(stack) == 1:
                raise EarthSyntaxError("짝이 없는 '}'", decls.name, lineno)
            header, body = stack.pop()
            stack[-1][1].append(header.with_body(body))
            continue
        opened = _OPEN.match(line)
        if opened:
            left, rep, right, dash = opened.groups()
            header = _with_context(
                lambda: ReplicativeStructure(
                    parse_numex(left), rep, parse_numex(right), (), bool(dash), lineno
                ),
                decls.name,
                lineno,
            )
            stack.append((header, []))
            continue
        match = _INSTR.match(line)
        if not match:
            raise EarthSyntaxError(f"알 수 없는 명령어: {line}", decls.name, lineno)
        instr = _with_context(lambda: _parse_instruction(match, decls.name, lineno), decls.name, lineno)
        if instr.op == "endc":
            if len(stack) != 1:
                raise EarthSyntaxError("복제 구조 안의 endc", decls.name, lineno)
            ended = True
        stack[-1][1].append(instr)

    if len(stack) != 1:
        raise EarthSyntaxError("닫히지 않은 복제 구조", decls.name, stack[-1][0].line)
    if not ended:
        raise EarthSyntaxError("endc 가 없습니다", decls.name)
    source = EarthSource(decls, stack[0][1], text)
    logger.debug(f"Earth 파싱 완료: {decls.name} ({len(source.code)} 구성요소)")
    return source
