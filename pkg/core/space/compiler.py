"""
Space 컴파일러 모듈

읽기 단계 (파싱과 검사) -> construct 전개 -> 코드 생성 순서로 진행한다.
"""

import bisect
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from core.aram.instruction import MachineConfig
from core.earth.module import BUSY, META_BUSY, CompiledModule
from core.errors import LibraryError, SpaceCompileError, UnsupportedConstructError
from core.space.codegen import SpaceCodegen, storage_base
from core.space.expand import expand
from core.space.identifiers import Resolver, make_slot
from core.space.parser import parse_space
from core.space.syntax import ACTIVATE, COND, COPY, TERMINAL, SpaceModuleAST
from core.space.types import TypeTable

logger = logging.getLogger(__name__)

Library = Mapping[str, CompiledModule]


def _check_lines(ast: SpaceModuleAST, resolver: Resolver):
    for line in ast.lines:
        label = line.label
        for k, column in enumerate(line.columns):
            if column.kind in TERMINAL and k != len(line.columns) - 1:
                raise SpaceCompileError(f"종결 열 뒤에 열이 있습니다: {column}", ast.name, label)
            if column.kind == COPY:
                targets = set()
                for item in column.items:
                    source = resolver.operand(item.source, None, label)
                    target = resolver.operand(item.target, None, label)
                    resolver.compatible(source, target, label)
                    key = item.target.text.replace(" ", "")
                    if key in targets:
                        raise SpaceCompileError(f"한 열에 같은 오른쪽 식별자가 반복됩니다: {item.target}", ast.name, label)
                    targets.add(key)
            elif column.kind == ACTIVATE:
                seen = set()
                for n, item in enumerate(column.items):
                    if item.exclusive and n > 0:
                        raise SpaceCompileError(f"'__' 는 열의 첫 활성화에만 쓸 수 있습니다: {item}", ast.name, label)
                    resolver.submodule(item.ref, None, label)
                    key = (str(item.ref), item.phase)
                    if key in seen:
                        raise SpaceCompileError(f"같은 서브모듈을 두 번 활성화합니다: {item}", ast.name, label)
                    seen.add(key)
            elif column.kind == COND:
                for item in column.items:
                    resolver.bit(item.bit, None, label)
    for construct in ast.constructs:
        if construct.bit is not None:
            resolver.bit(construct.bit, None, construct.label)


def check_module(
    ast: SpaceModuleAST, types: TypeTable, library: Library, config: Optional[MachineConfig] = None
) -> SpaceModuleAST:
    """라이브러리에 기대는 읽기 단계 검사

    Raises:
        UnsupportedConstructError: contraction 문장
        LibraryError: 라이브러리에 없는 서브모듈 클래스
        SpaceCompileError: 타입 오류, private 저장소 접근, 중복된 오른쪽 식별자, 중복 활성화
    """
    config = config or MachineConfig()
    if ast.contractions:
        raise UnsupportedConstructError("contraction 은 지원하지 않습니다", ast.name)
    for decl in ast.submodules:
        if decl.module not in library:
            raise LibraryError(f"{ast.name}: 서브모듈 클래스 '{decl.module}' 를 찾을 수 없습니다")
    slots = {}
    for entry in ast.storage:
        if entry.label in (BUSY, META_BUSY):
            raise SpaceCompileError(f"'{entry.label}' 는 예약된 저장소 이름입니다", ast.name)
        try:
            slots[entry.label] = make_slot(entry, types, f"sym:{entry.label}")
        except SpaceCompileError as e:
            raise SpaceCompileError(e.message, ast.name)
    resolver = Resolver(ast.name, slots, {d.label: d for d in ast.submodules}, dict(library), types, storage_base(config))
    _check_lines(ast, resolver)
    return ast


def read_phase(
    text: str, types: TypeTable, library: Library, config: Optional[MachineConfig] = None
) -> SpaceModuleAST:
    """Space 소스를 읽고 검사한 구문 트리"""
    return check_module(parse_space(text), types, library, config)


def compile_space(
    text: str, types: TypeTable, library: Library, config: Optional[MachineConfig] = None
) -> CompiledModule:
    """Space 소스 텍스트 컴파일

    Args:
        text: 모듈 소스
        types: 타입 표
        library: 모듈 클래스 이름 -> 컴파일된 모듈
        config: 대상 기계 설정 ('(storage)' 주소와 크기 검사에 쓴다)

    Raises:
        SpaceSyntaxError: 구문 오류
        SpaceCompileError: 의미 오류
        LibraryError: 없는 서브모듈
    """
    config = config or MachineConfig()
    ast = read_phase(text, types, library, config)
    lines = expand(ast)
    return SpaceCodegen(ast, lines, types, dict(library), config).generate()


def trace_lines(compiled: CompiledModule, trace: Sequence[Sequence[int]], base: int = 1) -> List[FrozenSet[str]]:
    """marking 기록을 사이클별 살아 있는 base-line 집합으로 바꾼다

    서브모듈 사본 안의 레지스터는 어느 라인에도 속하지 않는다.
    """
    spans: List[Tuple[int, int, str]] = sorted(
        (start + base - 1, end + base - 1, line) for line, ranges in compiled.lines.items() for start, end in ranges
    )
    starts = [s for s, _, _ in spans]
    result = []
    for marking in trace:
        live = set()
        for register in marking:
            k = bisect.bisect_right(starts, register) - 1
            if k >= 0 and spans[k][0] <= register <= spans[k][1]:
                live.add(spans[k][2])
        result.append(frozenset(live))
    return result


@dataclass(frozen=True)
class MapNode:
    """서브모듈 지도의 노드

    Attributes:
        module: 모듈 클래스 이름
        index: 라이브러리 색인
        level: 모듈 레벨
        arguments: (자식 모듈 이름, 사본 수)
    """

    module: str
    index: Optional[int]
    level: int
    arguments: Tuple[Tuple[str, int], ...] = ()


def submodule_map(compiled: CompiledModule, library: Library) -> List[List[MapNode]]:
    """레벨별 열로 나눈 서브모듈 지도 (맨 왼쪽이 레벨 0, 맨 오른쪽이 compiled)"""
    nodes: Dict[str, MapNode] = {}

    def visit(module: CompiledModule):
        if module.name in nodes:
            return
        counts = Counter(i["module"] for i in module.instances)
        for name in counts:
            if name not in library:
                raise LibraryError(f"서브모듈 클래스 '{name}' 를 찾을 수 없습니다")
            visit(library[name])
        nodes[module.name] = MapNode(module.name, module.index, module.level, tuple(sorted(counts.items())))

    visit(compiled)
    columns: List[List[MapNode]] = [[] for _ in range(compiled.level + 1)]
    for node in nodes.values():
        columns[node.level].append(node)
    for column in columns:
        column.sort(key=lambda n: n.module)
    return columns
