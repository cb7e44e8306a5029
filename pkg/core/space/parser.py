"""
Space 소스 파서 모듈

선언부는 storage, submodules, contractions, replications, meta, metatime,
time, code 순서로 온다. 코드의 base-line 은 라인 주소로 시작하는 맨 윗줄이
열 경계(::, :>, ;;)를 정하고, 아랫줄의 명령어는 글자 위치로 열에 배정된다.
construct-line 은 ':>' 오른쪽에 온다.
"""

import logging
import re
from typing import List, Optional, Sequence, Set, Tuple

from core.earth.syntax import Interface
from core.errors import SpaceSyntaxError, UnsupportedConstructError
from core.space.indexical import FUNCTIONS, Indexical, parse_indexical
from core.space.syntax import (
    ACTIVATE,
    ARRAY_PARAM,
    BLOCK_PARAM,
    CHARACTER,
    COMPARATORS,
    COND,
    COPY,
    DEEP,
    DIRECT,
    DOWHILE,
    HALT,
    IMMEDIATE,
    JUMP,
    SKIP,
    STORAGE,
    SUBHALT,
    TYPESIZE,
    WAIT,
    WHILE,
    Activate,
    BaseLine,
    Column,
    Cond,
    ConstructLine,
    Copy,
    DeepClause,
    Halt,
    Identifier,
    Jump,
    LineAddress,
    Ref,
    Skip,
    SpaceModuleAST,
    StorageEntry,
    Subhalt,
    SubmoduleDecl,
    Target,
    Wait,
    format_address,
    parse_address,
)
from core.space.types import REGISTER_ALIAS, Aggregate, parse_member

logger = logging.getLogger(__name__)

CELLS = {"destn", "offst", "btadd", "byte0", "byte1", "byte2", "byte3", "word0", "word1"}
UNSUPPORTED_CONSTRUCTS = ("grow", "switch", "para", "for", "prog")

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_ADDR = r"\d+(?:\.\d+)*"
_MODULE = re.compile(rf"\bmodule\s+({_IDENT})\s*\{{")
_SECTIONS = [
    ("storage", re.compile(r"storage\s*\{([^{}]*)\}\s*;")),
    ("submodules", re.compile(r"submodules\s*\{([^{}]*)\}\s*;")),
    ("contractions", re.compile(r"contractions\s*\{([^{}]*)\}\s*;")),
    ("replications", re.compile(r"replic(?:ations|ators)\s*\{([^{}]*)\}\s*;")),
    ("meta", re.compile(r"meta\s*\(\s*(\d+)\s*\)\s*;")),
    ("metatime", re.compile(r"metatime\s*:\s*(\d+)\s*-\s*(\d+)\s*(?:cycles)?\s*;")),
    ("time", re.compile(r"time\s*:\s*(\d+)\s*-\s*(\d+)\s*(?:cycles)?\s*;")),
    ("code", re.compile(r"code\s*\{")),
]
_TOP = re.compile(rf"^(\s*)({_ADDR}):(?=\s|$)")
_BRACE = re.compile(r"::|:>|;;")
_REF = re.compile(rf"^({_IDENT})((?:\[[^\[\]]+\])*)$")
_PAIR = re.compile(rf"^\s*({_ADDR})\s*,\s*(\d+)\s*$")
_DEEP = re.compile(r"^deep\s*<(.*)>$")
_CONSTRUCT = re.compile(rf"^({_ADDR}):\s*(.*?)\s*(\([^()]*\))$")


def _clean(text: str) -> List[str]:
    return [line.split("//", 1)[0].rstrip().expandtabs(8) for line in text.splitlines()]


def _line_of(text: str, position: int) -> int:
    return text.count("\n", 0, position) + 1


# 선언부

def _parse_storage(body: str, module: str) -> List[StorageEntry]:
    entries = []
    for statement in body.split(";"):
        parts = statement.split()
        if not parts:
            continue
        if len(parts) < 3:
            raise SpaceSyntaxError(f"저장소 선언에 인터페이스가 필요합니다: '{statement.strip()}'", module)
        try:
            interface = Interface(parts[-1])
        except ValueError:
            raise SpaceSyntaxError(f"알 수 없는 인터페이스 범주: {parts[-1]}", module)
        member = parse_member(" ".join(parts[:-1]))
        entries.append(StorageEntry(member.type, member.label, interface, member.aggregate, member.dims))
    labels = [e.label for e in entries]
    duplicates = {label for label in labels if labels.count(label) > 1}
    if duplicates:
        raise SpaceSyntaxError(f"저장소 이름 중복: {', '.join(sorted(duplicates))}", module)
    return entries


def _parse_submodules(body: str, module: str) -> List[SubmoduleDecl]:
    decls = []
    for statement in body.split(";"):
        statement = statement.strip()
        if not statement:
            continue
        member = parse_member(statement)
        if member.aggregate not in (Aggregate.SINGLETON, Aggregate.ARRAY):
            raise SpaceSyntaxError(f"서브모듈은 싱글톤이나 배열이어야 합니다: '{statement}'", module)
        decls.append(SubmoduleDecl(member.type, member.label, member.dims))
    labels = [d.label for d in decls]
    if len(set(labels)) != len(labels):
        raise SpaceSyntaxError("서브모듈 이름이 중복되었습니다", module)
    return decls


def _parse_replications(body: str, module: str) -> Tuple[List[str], List[str]]:
    names, _, functions = body.partition("/")
    replicators = [n.strip() for n in names.split(",") if n.strip()]
    fns = [f.strip() for f in functions.split(",") if f.strip()]
    for name in replicators:
        if not re.fullmatch(_IDENT, name):
            raise SpaceSyntaxError(f"잘못된 복제자 이름: '{name}'", module)
    for fn in fns:
        if fn not in FUNCTIONS:
            raise SpaceSyntaxError(f"알 수 없는 색인 함수: '{fn}'", module)
    return replicators, fns


def _parse_declarations(text: str, start: int, ast: SpaceModuleAST) -> int:
    """선언부를 읽고 code 블록 본문의 시작 위치를 돌려준다"""
    order = [name for name, _ in _SECTIONS]
    position = start
    last = -1
    seen: Set[str] = set()
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        for name, pattern in _SECTIONS:
            match = pattern.match(text, position)
            if match:
                break
        else:
            snippet = text[position:position + 30].strip()
            raise SpaceSyntaxError(f"선언 구문 오류: '{snippet}'", ast.name, str(_line_of(text, position)))
        rank = order.index(name)
        if rank <= last:
            raise SpaceSyntaxError(f"{name} 선언의 순서가 잘못되었습니다", ast.name, str(_line_of(text, position)))
        last = rank
        seen.add(name)
        if name == "storage":
            ast.storage = _parse_storage(match.group(1), ast.name)
        elif name == "submodules":
            ast.submodules = _parse_submodules(match.group(1), ast.name)
        elif name == "contractions":
            ast.contractions = [s.strip() for s in match.group(1).split(";") if s.strip()]
        elif name == "replications":
            ast.replicators, ast.functions = _parse_replications(match.group(1), ast.name)
        elif name == "meta":
            ast.meta = int(match.group(1))
        elif name == "metatime":
            ast.metatime = (int(match.group(1)), int(match.group(2)))
        elif name == "time":
            ast.time = (int(match.group(1)), int(match.group(2)))
        else:
            if ast.meta is not None and ast.metatime is None:
                raise SpaceSyntaxError("meta 선언이 있으면 metatime 선언이 필요합니다", ast.name)
            if "time" not in seen:
                raise SpaceSyntaxError("time 선언이 없습니다", ast.name)
            return match.end()
        position = match.end()


# 식별자

def parse_ref(text: str) -> Ref:
    match = _REF.match(text.strip())
    if not match:
        raise SpaceSyntaxError(f"잘못된 이름: '{text}'")
    indices = tuple(parse_indexical(i) for i in re.findall(r"\[([^\[\]]+)\]", match.group(2)))
    if len(indices) > 3:
        raise SpaceSyntaxError(f"색인은 3 차원까지입니다: '{text}'")
    return Ref(match.group(1), indices)


def _field(text: str) -> Tuple[Optional[str], Optional[Indexical]]:
    if text in CELLS:
        return text, None
    return None, parse_indexical(text)


def parse_identifier(text: str, submodules: Set[str]) -> Identifier:
    """복사 식별자 파싱

    Args:
        text: 식별자 원문
        submodules: 서브모듈 이름 (1차/2차 식별자 구분용)
    """
    text = text.strip()
    if not text:
        raise SpaceSyntaxError("빈 식별자")
    if text.startswith("#"):
        body = text[1:].strip()
        if re.fullmatch(r"-?\d+\.\d*", body):
            return Identifier(IMMEDIATE, text, number=float(body))
        return Identifier(IMMEDIATE, text, value=parse_indexical(body))
    if text.startswith("@"):
        if len(text) != 2:
            raise SpaceSyntaxError(f"문자 즉시값은 한 글자여야 합니다: '{text}'")
        return Identifier(CHARACTER, text, value=Indexical(constant=ord(text[1])))
    if text.startswith("$"):
        name = text[1:].strip()
        return Identifier(TYPESIZE, text, name=REGISTER_ALIAS.get(name, name))
    direct = re.fullmatch(r"\(\s*(\d+|storage)\s*\)", text)
    if direct:
        word = direct.group(1)
        if word == "storage":
            return Identifier(DIRECT, text, name="storage")
        return Identifier(DIRECT, text, value=Indexical(constant=int(word)))
    param = re.fullmatch(rf"({_IDENT})\s*(\[\[|<<)\s*(\d+)\s*(\]\]|>>)", text)
    if param:
        kind = ARRAY_PARAM if param.group(2) == "[[" else BLOCK_PARAM
        return Identifier(kind, text, path=(Ref(param.group(1)),), value=Indexical(constant=int(param.group(3))))

    address = text.startswith("&")
    body = text[1:] if address else text
    segments = body.split(".")
    first = parse_ref(segments[0])
    if first.name in submodules:
        if len(segments) not in (2, 3):
            raise SpaceSyntaxError(f"2차 식별자는 서브모듈.저장소[.칸] 형식입니다: '{text}'")
        path = (first, parse_ref(segments[1]))
        rest = segments[2:]
    else:
        if len(segments) > 2:
            raise SpaceSyntaxError(f"잘못된 식별자: '{text}'")
        path = (first,)
        rest = segments[1:]
    cell, bit = _field(rest[0]) if rest else (None, None)
    return Identifier(STORAGE, text, path=path, cell=cell, bit=bit, address=address)


# 명령어

def _target(text: str, line: str) -> Optional[Target]:
    text = text.strip()
    if text in ("", "()"):
        return None
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    match = _PAIR.match(text)
    if not match:
        raise SpaceSyntaxError(f"잘못된 (라인 주소, offset): '{text}'", line=line)
    return parse_address(match.group(1)), int(match.group(2))


def parse_instruction(text: str, submodules: Set[str], line: str) -> Tuple[str, object]:
    """명령어 하나를 (열 종류, 명령어) 로 파싱"""
    text = text.strip()
    if text in ("HALT", "-HALT"):
        return HALT, Halt(meta=text.startswith("-"))
    match = re.fullmatch(r"jump\s*\((.*)\)", text)
    if match:
        return JUMP, Jump(_target(match.group(1), line))
    match = re.fullmatch(r"cond_(\S+)\s*(\([^()]*\))\s*(\([^()]*\))", text)
    if match:
        bit = parse_identifier(match.group(1), submodules)
        return COND, Cond(bit, _target(match.group(2), line), _target(match.group(3), line))
    match = re.fullmatch(rf"skip\s*\(\s*({_ADDR})\s*\)", text)
    if match:
        return SKIP, Skip(parse_address(match.group(1)))
    match = re.fullmatch(r"wait\s*\(\s*(\d+)\s*\)", text)
    if match:
        return WAIT, Wait(int(match.group(1)))
    match = re.fullmatch(rf"subhalt\s*\(\s*({_ADDR})\s*\)", text)
    if match:
        return SUBHALT, Subhalt(parse_address(match.group(1)))
    if "->" in text:
        source, _, target = text.partition("->")
        return COPY, Copy(parse_identifier(source, submodules), parse_identifier(target, submodules))
    match = re.fullmatch(r"(__|_|-)(.+)", text)
    if match:
        prefix = match.group(1)
        ref = parse_ref(match.group(2))
        return ACTIVATE, Activate(ref, phase=2 if prefix == "-" else 1, exclusive=prefix == "__")
    raise SpaceSyntaxError(f"알 수 없는 명령어: '{text}'", line=line)


def _column(texts: Sequence[str], submodules: Set[str], line: str) -> Column:
    kinds = set()
    items = []
    for text in texts:
        kind, item = parse_instruction(text, submodules, line)
        kinds.add(kind)
        items.append(item)
    if len(kinds) != 1:
        raise SpaceSyntaxError(f"한 열에 여러 종류의 명령어가 있습니다: {sorted(kinds)}", line=line)
    kind = kinds.pop()
    if kind in (WAIT, HALT, COND) and len(items) > 1:
        raise SpaceSyntaxError(f"{kind} 열에는 명령어가 하나만 옵니다", line=line)
    return Column(kind, items)


def _deep_clause(text: str, line: str) -> DeepClause:
    match = _DEEP.match(text.strip())
    if not match:
        raise SpaceSyntaxError(f"잘못된 deep 절: '{text.strip()}'", line=line)
    parts = [p.strip() for p in match.group(1).split(";")]
    if len(parts) != 3:
        raise SpaceSyntaxError(f"deep 절은 세 부분입니다: '{text.strip()}'", line=line)
    init = re.fullmatch(rf"({_IDENT})\s*=\s*(\S+)", parts[0])
    test = re.fullmatch(rf"({_IDENT})\s*(>=|<=|<<|>)\s*(\S+)", parts[1])
    if not init or not test:
        raise SpaceSyntaxError(f"잘못된 deep 절: '{text.strip()}'", line=line)
    replicator = init.group(1)
    if test.group(1) != replicator:
        raise SpaceSyntaxError(f"deep 절의 복제자가 일치하지 않습니다: '{text.strip()}'", line=line)
    comparator = test.group(2)
    if comparator not in COMPARATORS:
        raise SpaceSyntaxError(f"알 수 없는 비교자: {comparator}", line=line)
    function = parts[2]
    if function not in FUNCTIONS:
        raise SpaceSyntaxError(f"알 수 없는 색인 함수: '{function}'", line=line)
    return DeepClause(replicator, parse_indexical(init.group(2)), comparator, parse_indexical(test.group(3)), function)


def _construct(texts: Sequence[str], submodules: Set[str], lineno: int) -> ConstructLine:
    head = texts[0].strip()
    match = _CONSTRUCT.match(head)
    if not match:
        raise SpaceSyntaxError(f"잘못된 construct-line: '{head}'", line=str(lineno))
    address = parse_address(match.group(1))
    label = format_address(address)
    body = match.group(2)
    egress = _target(match.group(3), label)
    keyword = re.match(r"[A-Za-z]+", body)
    word = keyword.group(0) if keyword else ""
    if word in UNSUPPORTED_CONSTRUCTS:
        raise UnsupportedConstructError(f"{word} construct 는 지원하지 않습니다", line=label)
    if word == "deep":
        clauses = [_deep_clause(body, label)] + [_deep_clause(t, label) for t in texts[1:]]
        names = [c.replicator for c in clauses]
        if len(set(names)) != len(names):
            raise SpaceSyntaxError("여러 줄 deep 의 복제자가 중복되었습니다", line=label)
        return ConstructLine(address, DEEP, clauses=clauses, egress=egress, source_line=lineno)
    loop = re.fullmatch(r"(while|dowhile)_(\S+)", body)
    if not loop:
        raise SpaceSyntaxError(f"알 수 없는 construct: '{body}'", line=label)
    if len(texts) > 1:
        raise SpaceSyntaxError(f"{loop.group(1)} construct 는 한 줄이어야 합니다", line=label)
    kind = WHILE if loop.group(1) == "while" else DOWHILE
    return ConstructLine(address, kind, bit=parse_identifier(loop.group(2), submodules), egress=egress, source_line=lineno)


def _split_top(row: str, lineno: int):
    """맨 윗줄의 (주소, base 열 구간, construct 열 구간, 경계 위치, ;; 위치)"""
    top = _TOP.match(row)
    address = parse_address(top.group(2))
    label = format_address(address)
    left = top.end()
    base: List[Tuple[int, Optional[int]]] = []
    constructs: List[Tuple[int, Optional[int]]] = []
    braces: List[int] = []
    in_construct = False
    terminated = False
    for match in _BRACE.finditer(row, left):
        if terminated:
            raise SpaceSyntaxError(";; 뒤에 글자가 있습니다", line=label)
        token = match.group(0)
        braces.append(match.start())
        span = (left, match.start())
        if token == ":>":
            if in_construct:
                raise SpaceSyntaxError("construct 괄호 ':>' 가 두 번 나왔습니다", line=label)
            base.append(span)
            in_construct = True
        elif in_construct:
            constructs.append(span)
        else:
            base.append(span)
        if token == ";;":
            terminated = True
        left = match.end()
    if not terminated:
        raise SpaceSyntaxError("라인 종결자 ';;' 가 없습니다", line=label)
    if row[left:].strip():
        raise SpaceSyntaxError(f";; 뒤에 글자가 있습니다: '{row[left:].strip()}'", line=label)
    # 마지막 열은 오른쪽으로 열려 있다
    if constructs:
        constructs[-1] = (constructs[-1][0], None)
    elif base:
        base[-1] = (base[-1][0], None)
    return address, base, constructs, braces[:-1], braces[-1]


def _slice(row: str, span: Tuple[int, Optional[int]]) -> str:
    start, end = span
    return row[start:end] if end is not None else row[start:]


def _parse_group(rows: List[Tuple[int, str]], submodules: Set[str]) -> Tuple[BaseLine, List[ConstructLine]]:
    lineno, top = rows[0]
    address, base, constructs, braces, terminator = _split_top(top, lineno)
    label = format_address(address)
    spans = base + constructs
    # 맨 윗줄의 마지막 열은 ;; 에서 끝난다
    cells: List[List[str]] = [[top[start:terminator if end is None else end].strip()] for start, end in spans]
    for number, row in rows[1:]:
        for position in braces:
            if row[position:position + 2].strip():
                raise SpaceSyntaxError(f"명령어가 열 경계를 넘습니다 (소스 줄 {number})", line=label)
        for k, span in enumerate(spans):
            text = _slice(row, span).strip()
            if text:
                cells[k].append(text)

    columns = []
    for k in range(len(base)):
        if not cells[k][0]:
            raise SpaceSyntaxError(f"{k + 1} 번째 열의 맨 윗줄이 비어 있습니다", line=label)
        columns.append(_column(cells[k], submodules, label))
    if not columns:
        raise SpaceSyntaxError("열이 없는 base-line", line=label)
    line = BaseLine(address, columns, lineno)

    found: List[ConstructLine] = []
    dependent = address
    for k in range(len(base), len(spans)):
        texts = [t for t in cells[k] if t]
        if not texts:
            continue
        construct = _construct(texts, submodules, lineno)
        if construct.first_dependent != dependent:
            raise SpaceSyntaxError(
                f"construct-line {construct.label} 의 첫 의존 라인은 {format_address(construct.first_dependent)} 이어야 합니다",
                line=format_address(dependent),
            )
        found.append(construct)
        dependent = construct.address
    return line, found


def _parse_code(rows: List[Tuple[int, str]], ast: SpaceModuleAST):
    submodules = {d.label for d in ast.submodules}
    groups: List[List[Tuple[int, str]]] = []
    for lineno, row in rows:
        if not row.strip():
            continue
        if _TOP.match(row):
            groups.append([(lineno, row)])
        elif not groups:
            raise SpaceSyntaxError(f"라인 주소로 시작하지 않는 코드: '{row.strip()}'", ast.name, str(lineno))
        else:
            groups[-1].append((lineno, row))
    seen = set()
    for group in groups:
        line, constructs = _parse_group(group, submodules)
        for address in [line.address] + [c.address for c in constructs]:
            if address in seen:
                raise SpaceSyntaxError(f"라인 주소 {format_address(address)} 가 중복되었습니다", ast.name)
            seen.add(address)
        ast.lines.append(line)
        ast.constructs.extend(constructs)


def parse_space(text: str) -> SpaceModuleAST:
    """Space 모듈 소스 파싱 (라이브러리 검사 전)

    Raises:
        SpaceSyntaxError: 구문 오류
        UnsupportedConstructError: grow, switch 등
    """
    cleaned = "\n".join(_clean(text))
    match = _MODULE.search(cleaned)
    if not match:
        raise SpaceSyntaxError("module 선언이 없습니다")
    ast = SpaceModuleAST(name=match.group(1), text=text)
    try:
        code_start = _parse_declarations(cleaned, match.end(), ast)
        code_end = cleaned.find("}", code_start)
        if code_end < 0:
            raise SpaceSyntaxError("code 블록이 닫히지 않았습니다")
        trailer = re.sub(r"\s+", "", cleaned[code_end:])
        if trailer != "};};":
            raise SpaceSyntaxError("모듈은 '};' 두 개로 끝나야 합니다")
        first = _line_of(cleaned, code_start)
        line_start = cleaned.rfind("\n", 0, code_start) + 1
        block = " " * (code_start - line_start) + cleaned[code_start:code_end]
        rows = list(enumerate(block.split("\n"), start=first))
        _parse_code(rows, ast)
    except SpaceSyntaxError as e:
        if e.module is None:
            raise type(e)(e.message, ast.name, e.line)
        raise
    logger.debug(f"Space 파싱: {ast.name} (base-line {len(ast.lines)}, construct-line {len(ast.constructs)})")
    return ast
