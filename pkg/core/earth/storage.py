"""
Earth 저장소 배치 모듈

저장소 레지스터는 코드 영역 바로 뒤에 놓인다. BITS 가 먼저 (busy 가 비트 0,
메타 모듈이면 mbsy 다음), 나머지 범주는 선언 줄 순서대로 배치한다.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Dict, List, Tuple

from core.earth.syntax import EarthDeclarations, Interface, StorageDecl, StorageType
from core.errors import EarthCompileError

logger = logging.getLogger(__name__)

# 타입 이름 -> (레지스터당 개수, 폭, 최하위 비트)
LEVEL0_LAYOUT: Dict[str, Tuple[int, int, int]] = {
    StorageType.BIT.value: (32, 1, 0),
    StorageType.BYTE.value: (4, 8, 0),
    StorageType.WORD.value: (2, 16, 0),
    StorageType.REG.value: (1, 32, 0),
    StorageType.OFST.value: (1, 5, 0),
    StorageType.DSTN.value: (1, 25, 5),
    StorageType.BITA.value: (1, 30, 0),
}


@dataclass(frozen=True)
class Symbol:
    """저장소 기호

    Attributes:
        name: 저장소 이름
        type: 타입 이름 (레벨 0 이면 BIT, REG 등)
        interface: 인터페이스 범주
        register: 모듈 기준 레지스터 (코드 첫 줄이 1)
        low: 최하위 비트
        width: 비트 폭
        size: 원소 하나의 레지스터 수
        dims: 배열 차원 (배열이 아니면 빈 튜플)
        pointer: 포인터 여부
    """

    name: str
    type: str
    interface: Interface
    register: int
    low: int
    width: int
    size: int = 1
    dims: Tuple[int, ...] = ()
    pointer: bool = False

    @property
    def is_bit(self) -> bool:
        return self.type == StorageType.BIT.value and not self.dims and not self.pointer

    @property
    def is_level0(self) -> bool:
        return self.type in LEVEL0_LAYOUT

    @property
    def count(self) -> int:
        """원소 개수"""
        total = 1
        for d in self.dims:
            total *= d
        return total

    def bit_of(self, index: int = 0) -> int:
        """색인 index 의 레지스터 내 비트 번호"""
        if not 0 <= index < self.width:
            raise EarthCompileError(f"{self.name} 의 비트 색인 {index} 가 범위(0-{self.width - 1})를 벗어났습니다")
        return self.low + index

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["interface"] = self.interface.value
        data["dims"] = list(self.dims)
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "Symbol":
        type_name = data["type"]
        return cls(
            name=data["name"],
            type="REG" if type_name == "REGISTER" else type_name,
            interface=Interface(data["interface"]),
            register=int(data["register"]),
            low=int(data["low"]),
            width=int(data["width"]),
            size=int(data.get("size", 1)),
            dims=tuple(int(d) for d in data.get("dims", ())),
            pointer=bool(data.get("pointer", False)),
        )


def _ordered_bits(decls: EarthDeclarations) -> List[StorageDecl]:
    bits = [d for d in decls.storage if d.type == StorageType.BIT]
    front = ["busy"] + (["mbsy"] if decls.meta is not None else [])
    head = [d for name in front for d in bits if d.name == name]
    return head + [d for d in bits if d.name not in front]


def allocate_storage(decls: EarthDeclarations, base: int) -> Tuple[Dict[str, Symbol], int]:
    """저장소 레지스터 배치

    Args:
        decls: 모듈 선언
        base: 첫 저장소 레지스터 (코드 줄 수 + 1)

    Returns:
        (이름 -> 기호, 저장소 레지스터 수)
    """
    symbols: Dict[str, Symbol] = {}
    register = base
    order = [StorageType.BIT] + [t for t in decls.categories if t != StorageType.BIT]
    for storage_type in order:
        per_register, width, low = LEVEL0_LAYOUT[storage_type.value]
        if storage_type == StorageType.BIT:
            entries = _ordered_bits(decls)
        else:
            entries = [d for d in decls.storage if d.type == storage_type]
        for k, decl in enumerate(entries):
            slot = k % per_register
            symbols[decl.name] = Symbol(
                decl.name, storage_type.value, decl.interface, register + k // per_register, low + width * slot, width
            )
        register += -(-len(entries) // per_register)
    count = register - base
    logger.debug(f"저장소 배치: {len(symbols)} 개 이름, 레지스터 {base}-{register - 1}")
    return symbols, count
