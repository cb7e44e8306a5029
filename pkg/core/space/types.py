"""
Space 타입 모듈

레벨 0 타입 일곱 개와 레벨 1 타입 unsigned, int, char, float 가 미리
적재된다. 새 타입은 이미 있는 타입의 멤버로만 만들며, 있는 타입은 고칠 수
없다. 배열과 blockstring 은 머리 레지스터 4 개 뒤에 원소를 한 레지스터
단위로 놓는다 (BYTE 배열도 원소마다 레지스터 하나).
"""

import logging
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Tuple

from core.earth.storage import LEVEL0_LAYOUT
from core.errors import LibraryError, SpaceSyntaxError

logger = logging.getLogger(__name__)

MAX_LEVEL = 50
ARRAY_HEADER = 4
REGISTER_ALIAS = {"REGISTER": "REG"}

_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_MEMBER = re.compile(rf"^({_IDENT})\s+({_IDENT})\s*(\*|(?:\[\s*\d+\s*\])+|<\s*\d+\s*>)?$")
_TYPE = re.compile(rf"({_IDENT})\s*\{{([^{{}}]*)\}}\s*;?")


class Aggregate(str, Enum):
    """집합 구성 방식"""
    SINGLETON = "singleton"
    ARRAY = "array"
    POINTER = "pointer"
    BLOCKSTRING = "blockstring"


@dataclass(frozen=True)
class Cell:
    """타입 안의 잎 칸 (레지스터 오프셋, 최하위 비트, 폭, 레벨 0 타입)"""

    offset: int
    low: int
    width: int
    type: str


@dataclass(frozen=True)
class Member:
    """타입 멤버

    Attributes:
        type: 멤버 타입 이름
        label: 멤버 이름
        aggregate: 집합 구성 방식
        dims: 배열 차원 (blockstring 이면 블록 길이 하나)
    """

    type: str
    label: str
    aggregate: Aggregate = Aggregate.SINGLETON
    dims: Tuple[int, ...] = ()

    @property
    def count(self) -> int:
        total = 1
        for d in self.dims:
            total *= d
        return total

    def to_dict(self) -> Dict:
        return {"type": self.type, "label": self.label, "aggregate": self.aggregate.value, "dims": list(self.dims)}

    @classmethod
    def from_dict(cls, data: Dict) -> "Member":
        return cls(data["type"], data["label"], Aggregate(data["aggregate"]), tuple(data.get("dims", ())))

    def __str__(self) -> str:
        if self.aggregate == Aggregate.POINTER:
            return f"{self.type} {self.label}*"
        if self.aggregate == Aggregate.BLOCKSTRING:
            return f"{self.type} {self.label}<{self.dims[0]}>"
        return f"{self.type} {self.label}" + "".join(f"[{d}]" for d in self.dims)


@dataclass
class TypeDef:
    """타입 정의

    Attributes:
        name: 타입 이름
        members: 멤버 목록 (레벨 0 이면 빈 목록)
        level: 1 + 멤버 최대 레벨
        size: 레지스터 수
        cells: 잎 칸 목록
    """

    name: str
    members: List[Member] = field(default_factory=list)
    level: int = 0
    size: int = 1
    cells: List[Cell] = field(default_factory=list)

    @property
    def is_level0(self) -> bool:
        return self.level == 0

    @property
    def width(self) -> int:
        """칸이 하나면 그 폭, 아니면 32"""
        return self.cells[0].width if len(self.cells) == 1 else 32

    @property
    def low(self) -> int:
        return self.cells[0].low if len(self.cells) == 1 else 0

    @property
    def wrapped(self) -> Optional[str]:
        """레벨 0 싱글톤 멤버 하나뿐인 레벨 1 타입이면 그 레벨 0 타입 이름"""
        if len(self.members) == 1:
            member = self.members[0]
            if member.aggregate == Aggregate.SINGLETON and member.type in LEVEL0_LAYOUT:
                return member.type
        return None

    def render(self) -> str:
        body = " ".join(f"{m};" for m in self.members)
        return f"{self.name}{{ {body} }};"


def _level0(name: str) -> TypeDef:
    _, width, low = LEVEL0_LAYOUT[name]
    return TypeDef(name, [], 0, 1, [Cell(0, low, width, name)])


def _header_cells(offset: int) -> List[Cell]:
    return [Cell(offset + k, 0, 32, "REG") for k in range(ARRAY_HEADER)]


def member_size(member: Member, member_type: TypeDef) -> int:
    if member.aggregate == Aggregate.POINTER:
        return 1
    if member.aggregate == Aggregate.SINGLETON:
        return member_type.size
    return member_type.size * member.count + ARRAY_HEADER


def parse_member(text: str) -> Member:
    """'TYPE label', 'TYPE label[3][5]', 'TYPE label*', 'TYPE label<16>'"""
    match = _MEMBER.match(text.strip())
    if not match:
        raise SpaceSyntaxError(f"잘못된 멤버 선언: '{text.strip()}'")
    type_name, label, aggregate = match.groups()
    type_name = REGISTER_ALIAS.get(type_name, type_name)
    if not aggregate:
        return Member(type_name, label)
    if aggregate == "*":
        return Member(type_name, label, Aggregate.POINTER)
    dims = tuple(int(d) for d in re.findall(r"\d+", aggregate))
    if any(d < 1 for d in dims):
        raise SpaceSyntaxError(f"배열 크기는 1 이상이어야 합니다: '{text.strip()}'")
    if aggregate.startswith("<"):
        return Member(type_name, label, Aggregate.BLOCKSTRING, dims)
    if len(dims) > 3:
        raise SpaceSyntaxError(f"배열은 3 차원까지입니다: '{text.strip()}'")
    return Member(type_name, label, Aggregate.ARRAY, dims)


def parse_typedefs(text: str) -> List[Tuple[str, List[Member]]]:
    """begintypes ... endtypes 블록 파싱

    Returns:
        (타입 이름, 멤버 목록) 목록, 선언 순서
    """
    body = "\n".join(line.split("//", 1)[0] for line in text.splitlines())
    start = body.find("begintypes")
    end = body.find("endtypes")
    if start < 0 or end < start:
        raise SpaceSyntaxError("타입 선언은 begintypes 와 endtypes 사이에 있어야 합니다")
    inner = body[start + len("begintypes"):end]
    found = []
    consumed = 0
    for match in _TYPE.finditer(inner):
        gap = inner[consumed:match.start()].strip()
        if gap:
            raise SpaceSyntaxError(f"타입 선언 구문 오류: '{gap}'")
        members = [parse_member(m) for m in match.group(2).split(";") if m.strip()]
        if not members:
            raise SpaceSyntaxError(f"멤버가 없는 타입: {match.group(1)}")
        found.append((match.group(1), members))
        consumed = match.end()
    rest = inner[consumed:].strip()
    if rest:
        raise SpaceSyntaxError(f"타입 선언 구문 오류: '{rest}'")
    return found


class TypeTable:
    """이름 -> 타입 정의 표

    레벨 0 과 레벨 1 기본 타입을 미리 적재한다.
    """

    PRELOADED = (
        ("unsigned", "REG register"),
        ("int", "REG register"),
        ("char", "BYTE byte"),
        ("float", "REG register"),
    )

    def __init__(self):
        self._types: Dict[str, TypeDef] = {name: _level0(name) for name in LEVEL0_LAYOUT}
        for name, member in self.PRELOADED:
            self.define(name, [parse_member(member)])

    def __contains__(self, name: str) -> bool:
        return REGISTER_ALIAS.get(name, name) in self._types

    def __iter__(self):
        return iter(self._types.values())

    def names(self) -> List[str]:
        return list(self._types)

    def get(self, name: str) -> TypeDef:
        name = REGISTER_ALIAS.get(name, name)
        if name not in self._types:
            raise LibraryError(f"타입 '{name}' 이 라이브러리에 없습니다")
        return self._types[name]

    def build(self, name: str, members: Iterable[Member]) -> TypeDef:
        """멤버로 타입 정의를 계산 (표에 넣지 않음)"""
        if name in self._types:
            raise LibraryError(f"타입 '{name}' 이 이미 있습니다 (타입 수정은 허용되지 않습니다)")
        members = list(members)
        labels = [m.label for m in members]
        if len(set(labels)) != len(labels):
            raise LibraryError(f"타입 '{name}' 에 멤버 이름이 중복되었습니다")
        size = 0
        level = 0
        cells: List[Cell] = []
        for member in members:
            member_type = self.get(member.type)
            level = max(level, member_type.level)
            if member.aggregate == Aggregate.POINTER:
                cells.append(Cell(size, 0, 32, "REG"))
            elif member.aggregate == Aggregate.SINGLETON:
                cells.extend(Cell(size + c.offset, c.low, c.width, c.type) for c in member_type.cells)
            else:
                cells.extend(_header_cells(size))
                for k in range(member.count):
                    base = size + ARRAY_HEADER + k * member_type.size
                    cells.extend(Cell(base + c.offset, c.low, c.width, c.type) for c in member_type.cells)
            size += member_size(member, member_type)
        level += 1
        if level > MAX_LEVEL:
            raise LibraryError(f"타입 '{name}' 의 레벨 {level} 이 {MAX_LEVEL} 을 넘습니다")
        return TypeDef(name, members, level, size, cells)

    def define(self, name: str, members: Iterable[Member]) -> TypeDef:
        typedef = self.build(name, members)
        self._types[name] = typedef
        logger.debug(f"타입 추가: {name} (레벨 {typedef.level}, {typedef.size} 레지스터)")
        return typedef

    def add_text(self, text: str) -> List[TypeDef]:
        """typedef 텍스트의 타입을 차례로 추가"""
        return [self.define(name, members) for name, members in parse_typedefs(text)]
