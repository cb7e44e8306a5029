"""
Earth 구문 트리 모듈
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Dict, List, Optional, Tuple, Union

from core.earth.numex import Numex


class Interface(str, Enum):
    """저장소 인터페이스 범주"""
    INPUT = "input"
    OUTPUT = "output"
    IOPUT = "ioput"
    PRIVATE = "private"


class StorageType(str, Enum):
    """레벨 0 타입"""
    BIT = "BIT"
    BYTE = "BYTE"
    WORD = "WORD"
    REG = "REG"
    OFST = "OFST"
    DSTN = "DSTN"
    BITA = "BITA"


# 선언 키워드 -> 타입
STORAGE_KEYWORDS: Dict[str, StorageType] = {
    "BITS": StorageType.BIT,
    "BYTES": StorageType.BYTE,
    "WORDS": StorageType.WORD,
    "REGS": StorageType.REG,
    "OFSTS": StorageType.OFST,
    "DSTNS": StorageType.DSTN,
    "BITAS": StorageType.BITA,
}


class AddressMode(str, Enum):
    """destination 표기 방식"""
    NAME = "name"          # busy, input.3
    BRACKET = "bracket"    # [3] 0
    ABSOLUTE = "absolute"  # 120 4
    RELATIVE = "relative"  # jump 의 상대 jump 번호


@dataclass(frozen=True)
class StorageDecl:
    name: str
    type: StorageType
    interface: Interface
    line: int = 0


@dataclass
class EarthDeclarations:
    """모듈 선언부

    Attributes:
        name: 모듈 이름
        meta: 2 단계 진입 linename (메타 모듈이 아니면 None)
        storage: 선언 순서대로의 저장소 목록
        categories: 선언된 저장소 키워드 순서
        time: (최소, 최대) 사이클
    """

    name: str
    meta: Optional[int] = None
    storage: List[StorageDecl] = field(default_factory=list)
    categories: List[StorageType] = field(default_factory=list)
    time: Tuple[int, int] = (0, 0)

    def find(self, name: str) -> Optional[StorageDecl]:
        for decl in self.storage:
            if decl.name == name:
                return decl
        return None


@dataclass(frozen=True)
class EarthInstr:
    """Earth 명령어

    jump 는 x 가 상대 jump 번호, y 가 offset 이다. cond/wrt 는 mode 에 따라
    target.y (NAME), [x] y (BRACKET), x y (ABSOLUTE) 이다.
    """

    op: str
    linename: Optional[Numex] = None
    mode: Optional[AddressMode] = None
    target: Optional[str] = None
    x: Optional[Numex] = None
    y: Optional[Numex] = None
    line: int = 0

    def numexes(self) -> List[Numex]:
        return [n for n in (self.linename, self.x, self.y) if n is not None]

    def map_numex(self, fn: Callable[[str, Numex], Numex]) -> "EarthInstr":
        """numex 역할(linename, ref, operand) 별로 fn 을 적용한 사본"""
        linename = fn("linename", self.linename) if self.linename is not None else None
        x = self.x
        if x is not None:
            role = "ref" if self.mode in (AddressMode.RELATIVE, AddressMode.BRACKET) else "operand"
            x = fn(role, x)
        y = fn("operand", self.y) if self.y is not None else None
        return replace(self, linename=linename, x=x, y=y)

    def operand_text(self) -> str:
        if self.op == "endc":
            return ""
        if self.mode == AddressMode.NAME:
            return self.target if self.y is None else f"{self.target}.{self.y}"
        if self.mode == AddressMode.BRACKET:
            return f"[{self.x}] {self.y}"
        return f"{self.x} {self.y}"

    def __str__(self) -> str:
        body = f"{self.op} {self.operand_text()}".rstrip()
        return f"{self.linename} {body}" if self.linename is not None else body


@dataclass(frozen=True)
class ReplicativeStructure:
    """<left;replicator;right>{ ... } 복제 구조

    dashed 이면 구조 안의 복제 jump 목적지 선두 수를 증가시키지 않는다.
    """

    left: Numex
    replicator: str
    right: Numex
    body: Tuple["Construct", ...]
    dashed: bool = False
    line: int = 0

    def with_body(self, body: List["Construct"]) -> "ReplicativeStructure":
        return replace(self, body=tuple(body))


Construct = Union[EarthInstr, ReplicativeStructure]


@dataclass
class EarthSource:
    """파싱된 Earth 모듈 (선언 + 코드 구성요소)"""

    declarations: EarthDeclarations
    code: List[Construct]
    text: str = ""

    @property
    def name(self) -> str:
        return self.declarations.name


def linenames(construct: Construct) -> List[Numex]:
    """구성요소 안의 모든 linename numex (중첩 포함, 등장 순서)"""
    if isinstance(construct, EarthInstr):
        return [construct.linename] if construct.linename is not None else []
    found: List[Numex] = []
    for inner in construct.body:
        found.extend(linenames(inner))
    return found


def render_source(constructs: List[Construct], indent: str = "    ") -> str:
    """구성요소 목록을 Earth 코드 텍스트로"""
    lines: List[str] = []

    def emit(items, depth: int):
        pad = indent * depth
        for c in items:
            if isinstance(c, EarthInstr):
                if c.linename is not None:
                    lines.append(f"{pad}{c.linename} {c.op} {c.operand_text()}".rstrip())
                else:
                    lines.append(f"{pad}{indent}{c.op} {c.operand_text()}".rstrip())
            else:
                dash = "-" if c.dashed else ""
                lines.append(f"{pad}<{c.left};{c.replicator};{c.right}>{dash}{{")
                emit(c.body, depth + 1)
                lines.append(f"{pad}}}")

    emit(constructs, 0)
    return "\n".join(lines)
