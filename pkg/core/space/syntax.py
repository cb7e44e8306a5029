"""
Space 구문 트리 모듈

라인 주소는 정수 튜플이다 ("2.1" -> (2, 1)). 열(column)은 한 종류의
명령어만 담는다.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from core.earth.syntax import Interface
from core.errors import SpaceSyntaxError
from core.space.indexical import Indexical
from core.space.types import Aggregate

LineAddress = Tuple[int, ...]
Target = Tuple[LineAddress, int]

COPY = "copy"
ACTIVATE = "activate"
COND = "cond"
JUMP = "jump"
SKIP = "skip"
WAIT = "wait"
SUBHALT = "subhalt"
HALT = "halt"

TERMINAL = (COND, JUMP, SUBHALT, HALT)

DEEP = "deep"
WHILE = "while"
DOWHILE = "dowhile"
COMPARATORS = (">=", "<=", "<<", ">")


def parse_address(text: str) -> LineAddress:
    parts = text.strip().split(".")
    if not parts or not all(p.isdigit() for p in parts):
        raise SpaceSyntaxError(f"잘못된 라인 주소: '{text}'")
    return tuple(int(p) for p in parts)


def format_address(address: LineAddress) -> str:
    return ".".join(str(a) for a in address)


def format_target(target: Optional[Target]) -> str:
    if target is None:
        return "()"
    return f"({format_address(target[0])},{target[1]})"


@dataclass(frozen=True)
class StorageEntry:
    """storage 선언 한 줄"""

    type: str
    label: str
    interface: Interface
    aggregate: Aggregate = Aggregate.SINGLETON
    dims: Tuple[int, ...] = ()


@dataclass(frozen=True)
class SubmoduleDecl:
    """submodules 선언 한 줄 (배열은 3 차원까지)"""

    module: str
    label: str
    dims: Tuple[int, ...] = ()


@dataclass(frozen=True)
class Ref:
    """이름과 색인식 목록: sub[i][2], A[i/2*]"""

    name: str
    indices: Tuple[Indexical, ...] = ()

    def __str__(self) -> str:
        return self.name + "".join(f"[{i}]" for i in self.indices)


# 복사 식별자 종류
STORAGE = "storage"
IMMEDIATE = "immediate"
CHARACTER = "char"
DIRECT = "direct"
TYPESIZE = "typesize"
ARRAY_PARAM = "arrayparam"
BLOCK_PARAM = "blockparam"


@dataclass(frozen=True)
class Identifier:
    """복사 식별자

    Attributes:
        kind: storage, immediate, char, direct, typesize, arrayparam, blockparam
        path: 저장소 경로 (1차 식별자는 Ref 하나, 2차는 서브모듈 Ref + 저장소 Ref)
        cell: 칸 식별자 (destn, offst, btadd, byte0-3, word0-1)
        bit: 비트 색인식
        address: & 주소 연산자
        value: 즉시값 색인식, 매개변수 번호
        number: float 즉시값
        name: 타입 이름 ($type), 직접 주소 (storage)
        text: 원문
    """

    kind: str
    text: str
    path: Tuple[Ref, ...] = ()
    cell: Optional[str] = None
    bit: Optional[Indexical] = None
    address: bool = False
    value: Optional[Indexical] = None
    number: Optional[float] = None
    name: Optional[str] = None

    @property
    def is_storage(self) -> bool:
        return self.kind == STORAGE

    @property
    def is_secondary(self) -> bool:
        return self.kind == STORAGE and len(self.path) == 2

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class Copy:
    source: Identifier
    target: Identifier

    def __str__(self) -> str:
        return f"{self.source} -> {self.target}"


@dataclass(frozen=True)
class Activate:
    """서브모듈 활성화. phase 2 는 '-', exclusive 는 '__'."""

    ref: Ref
    phase: int = 1
    exclusive: bool = False

    def __str__(self) -> str:
        prefix = "-" if self.phase == 2 else ("__" if self.exclusive else "_")
        return f"{prefix}{self.ref}"


@dataclass(frozen=True)
class Cond:
    """비트가 0 이면 zero, 1 이면 one 으로 간다. None 이면 아무 곳도 가지 않는다."""

    bit: Identifier
    zero: Optional[Target]
    one: Optional[Target]

    def __str__(self) -> str:
        return f"cond_{self.bit} {format_target(self.zero)} {format_target(self.one)}"


@dataclass(frozen=True)
class Jump:
    target: Target

    def __str__(self) -> str:
        return f"jump {format_target(self.target)}"


@dataclass(frozen=True)
class Skip:
    address: LineAddress

    def __str__(self) -> str:
        return f"skip({format_address(self.address)})"


@dataclass(frozen=True)
class Wait:
    cycles: int

    def __str__(self) -> str:
        return f"wait({self.cycles})"


@dataclass(frozen=True)
class Subhalt:
    address: LineAddress

    def __str__(self) -> str:
        return f"subhalt({format_address(self.address)})"


@dataclass(frozen=True)
class Halt:
    meta: bool = False

    def __str__(self) -> str:
        return "-HALT" if self.meta else "HALT"


@dataclass
class Column:
    kind: str
    items: List = field(default_factory=list)

    def __str__(self) -> str:
        return ", ".join(str(item) for item in self.items)


@dataclass
class BaseLine:
    """base-line: 라인 주소와 열 목록"""

    address: LineAddress
    columns: List[Column]
    source_line: int = 0

    @property
    def label(self) -> str:
        return format_address(self.address)

    @property
    def terminal(self) -> Optional[Column]:
        if self.columns and self.columns[-1].kind in TERMINAL:
            return self.columns[-1]
        return None

    def with_address(self, address: LineAddress) -> "BaseLine":
        return replace(self, address=address)

    def render(self) -> str:
        return f"{self.label}: " + " :: ".join(str(c) for c in self.columns) + " ;;"


@dataclass(frozen=True)
class DeepClause:
    """deep<rep = left; rep cmp right; function>"""

    replicator: str
    left: Indexical
    comparator: str
    right: Indexical
    function: str

    def __str__(self) -> str:
        return f"deep<{self.replicator}={self.left}; {self.replicator}{self.comparator}{self.right}; {self.function}>"


@dataclass
class ConstructLine:
    """construct-line

    Attributes:
        address: 라인 주소 (첫 의존 라인은 address + (1,))
        kind: deep, while, dowhile
        clauses: deep 절 목록 (여러 줄 deep 은 바깥 절이 먼저)
        bit: while/dowhile 검사 비트
        egress: 끝난 뒤 활성화할 (라인 주소, offset)
    """

    address: LineAddress
    kind: str
    clauses: List[DeepClause] = field(default_factory=list)
    bit: Optional[Identifier] = None
    egress: Optional[Target] = None
    source_line: int = 0

    @property
    def label(self) -> str:
        return format_address(self.address)

    @property
    def first_dependent(self) -> LineAddress:
        return self.address + (1,)


@dataclass
class SpaceModuleAST:
    """읽기 단계 결과

    Attributes:
        name: 모듈 이름
        storage: 저장소 선언 (busy 는 컴파일러가 붙인다)
        submodules: 서브모듈 선언
        contractions: contraction 문장 원문
        replicators: 복제자 이름
        functions: 색인 함수 이름
        meta: 2 단계 진입 라인 번호
        metatime, time: (최소, 최대) 사이클
        lines: base-line 목록
        constructs: construct-line 목록
        text: 소스 텍스트
    """

    name: str
    storage: List[StorageEntry] = field(default_factory=list)
    submodules: List[SubmoduleDecl] = field(default_factory=list)
    contractions: List[str] = field(default_factory=list)
    replicators: List[str] = field(default_factory=list)
    functions: List[str] = field(default_factory=list)
    meta: Optional[int] = None
    metatime: Optional[Tuple[int, int]] = None
    time: Tuple[int, int] = (0, 0)
    lines: List[BaseLine] = field(default_factory=list)
    constructs: List[ConstructLine] = field(default_factory=list)
    text: str = ""

    def storage_entry(self, label: str) -> Optional[StorageEntry]:
        for entry in self.storage:
            if entry.label == label:
                return entry
        return None

    def submodule(self, label: str) -> Optional[SubmoduleDecl]:
        for decl in self.submodules:
            if decl.label == label:
                return decl
        return None

    def line_map(self) -> Dict[LineAddress, BaseLine]:
        return {line.address: line for line in self.lines}
