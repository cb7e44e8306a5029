"""
Space 식별자 해석 모듈

복사 식별자를 비트 단위 피연산자(Operand)로 바꾸고, 복사 양쪽의 타입
호환성을 검사한다. 레지스터는 label 주소로 표현하므로 배치 전에도
해석할 수 있다.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.earth.module import CompiledModule
from core.earth.storage import Symbol
from core.earth.syntax import Interface
from core.errors import LibraryError, SpaceCompileError
from core.space.assembler import Addr, Constant, shifted
from core.space.indexical import Indexical, eval_indexical
from core.space.syntax import (
    ARRAY_PARAM,
    BLOCK_PARAM,
    CHARACTER,
    DIRECT,
    IMMEDIATE,
    STORAGE,
    TYPESIZE,
    Identifier,
    Ref,
    StorageEntry,
    SubmoduleDecl,
)
from core.space.types import ARRAY_HEADER, Aggregate, Cell, TypeTable

logger = logging.getLogger(__name__)

Bit = Tuple[Addr, int]
Env = Dict[str, int]

ADDRESS = "&addr"
IMMEDIATE_TYPE = "imm"

# 칸 이름 -> (최하위 비트, 폭, 타입)
CELL_FIELDS: Dict[str, Tuple[int, int, str]] = {
    "destn": (5, 25, "DSTN"),
    "offst": (0, 5, "OFST"),
    "btadd": (0, 30, "BITA"),
    "byte0": (0, 8, "BYTE"),
    "byte1": (8, 8, "BYTE"),
    "byte2": (16, 8, "BYTE"),
    "byte3": (24, 8, "BYTE"),
    "word0": (0, 16, "WORD"),
    "word1": (16, 16, "WORD"),
}

_WIDENED = {"BIT", "BYTE", "WORD", "BITA", "DSTN", "OFST"}
_WIDE = {"REG", "int", "unsigned"}
_TRUNCATED = {"BYTE", "WORD", "OFST", "BIT"}
_ADDRESS_TARGETS = {"BITA", "DSTN", "REG", "unsigned"}
_POINTER_PARTNERS = {"REG", "unsigned"}


@dataclass(frozen=True)
class Slot:
    """저장소 하나의 배치 정보

    Attributes:
        name: 저장소 이름
        type: 타입 이름 (포인터면 가리키는 타입)
        interface: 인터페이스 범주
        register: 첫 레지스터 주소
        low, width: 싱글톤 칸의 비트 범위 (여러 칸이면 0, 32)
        size: 원소 하나의 레지스터 수
        dims: 배열 차원 (blockstring 이면 블록 길이)
        aggregate: 집합 구성 방식
    """

    name: str
    type: str
    interface: Interface
    register: Addr
    low: int
    width: int
    size: int = 1
    dims: Tuple[int, ...] = ()
    aggregate: Aggregate = Aggregate.SINGLETON

    @property
    def pointer(self) -> bool:
        return self.aggregate == Aggregate.POINTER

    @property
    def count(self) -> int:
        total = 1
        for d in self.dims:
            total *= d
        return total

    @property
    def registers(self) -> int:
        if self.aggregate in (Aggregate.ARRAY, Aggregate.BLOCKSTRING):
            return ARRAY_HEADER + self.size * self.count
        return 1 if self.pointer else self.size

    def symbol(self, register: int) -> Symbol:
        return Symbol(self.name, self.type, self.interface, register, self.low, self.width,
                      self.size, self.dims, self.pointer)


def make_slot(entry: StorageEntry, types: TypeTable, register: Addr) -> Slot:
    """storage 선언 한 줄의 배치 정보"""
    try:
        typedef = types.get(entry.type)
    except LibraryError as e:
        raise SpaceCompileError(f"저장소 {entry.label}: {e}")
    if entry.aggregate == Aggregate.POINTER:
        return Slot(entry.label, typedef.name, entry.interface, register, 0, 32, 1, (), entry.aggregate)
    return Slot(entry.label, typedef.name, entry.interface, register, typedef.low, typedef.width,
                typedef.size, entry.dims, entry.aggregate)


def slot_from_symbol(symbol: Symbol, base: Addr) -> Slot:
    """서브모듈 기호를 base 에 놓인 사본 기준 배치 정보로"""
    if symbol.pointer:
        aggregate = Aggregate.POINTER
    elif symbol.dims:
        aggregate = Aggregate.ARRAY
    else:
        aggregate = Aggregate.SINGLETON
    return Slot(symbol.name, symbol.type, symbol.interface, shifted(base, symbol.register - 1),
                symbol.low, symbol.width, symbol.size, symbol.dims, aggregate)


def instance_key(label: str, indices: Tuple[int, ...]) -> str:
    return label + "".join(f"[{i}]" for i in indices)


@dataclass
class Operand:
    """해석된 복사 피연산자

    Attributes:
        type: 타입 이름 ('&addr' 은 주소 상수, 'imm' 은 즉시값)
        width: 비트 수
        bits: 저장소 비트 (비트 0 부터)
        constant: 즉시값
        value: 즉시값의 원래 정수 (부호 포함)
        absolute: 절대 레지스터를 쓰는지
        pointer: 포인터 저장소인지
        bit_address: 주소 상수가 비트 주소인지
        multi: 여러 칸을 가진 저장소인지
        text: 원문
    """

    type: str
    width: int
    bits: List[Bit] = field(default_factory=list)
    constant: Optional[Constant] = None
    value: int = 0
    absolute: bool = False
    pointer: bool = False
    bit_address: bool = False
    multi: bool = False
    text: str = ""
    address: Optional[Bit] = None

    @property
    def is_immediate(self) -> bool:
        return self.constant is not None


class Resolver:
    """모듈 하나의 식별자 해석기

    Args:
        module: 모듈 이름 (오류 메시지용)
        slots: 자기 저장소 이름 -> 배치 정보
        submodules: 서브모듈 이름 -> 선언
        library: 모듈 클래스 이름 -> 컴파일된 모듈
        types: 타입 표
        storage_base: '(storage)' 가 가리키는 절대 레지스터
    """

    def __init__(
        self,
        module: str,
        slots: Dict[str, Slot],
        submodules: Dict[str, SubmoduleDecl],
        library: Dict[str, CompiledModule],
        types: TypeTable,
        storage_base: int = 0,
    ):
        self.module = module
        self.slots = slots
        self.submodules = submodules
        self.library = library
        self.types = types
        self.storage_base = storage_base

    def _error(self, message: str, line: Optional[str]) -> SpaceCompileError:
        return SpaceCompileError(message, self.module, line)

    def _index(self, expr: Indexical, env: Optional[Env], line: Optional[str]) -> Optional[int]:
        if env is None and not expr.is_constant:
            return None
        try:
            return eval_indexical(expr, env or {})
        except SpaceCompileError as e:
            raise self._error(e.message, line)

    def _position(self, ref: Ref, dims: Tuple[int, ...], env: Optional[Env], line: Optional[str]) -> Optional[int]:
        """행 우선 원소 번호 (색인이 묶이지 않았으면 None)"""
        if len(ref.indices) != len(dims):
            raise self._error(f"'{ref}' 의 색인 수가 차원 {list(dims)} 과 맞지 않습니다", line)
        position = 0
        unbound = False
        for expr, size in zip(ref.indices, dims):
            value = self._index(expr, env, line)
            if value is None:
                unbound = True
                continue
            if not 0 <= value < size:
                raise self._error(f"'{ref}' 의 색인 {value} 가 범위(0-{size - 1})를 벗어났습니다", line)
            position = position * size + value
        return None if unbound else position

    # 서브모듈

    def submodule(self, ref: Ref, env: Optional[Env], line: Optional[str]) -> Tuple[str, CompiledModule]:
        """서브모듈 참조 -> (사본 key, 모듈 클래스)"""
        decl = self.submodules.get(ref.name)
        if decl is None:
            raise self._error(f"선언되지 않은 서브모듈: {ref.name}", line)
        if decl.module not in self.library:
            raise self._error(f"서브모듈 클래스 '{decl.module}' 이 라이브러리에 없습니다", line)
        if len(ref.indices) != len(decl.dims):
            raise self._error(f"서브모듈 '{ref}' 의 색인 수가 선언 {list(decl.dims)} 과 맞지 않습니다", line)
        indices = []
        for expr, size in zip(ref.indices, decl.dims):
            value = self._index(expr, env, line)
            if value is None:
                value = 0
            elif not 0 <= value < size:
                raise self._error(f"서브모듈 '{ref}' 의 색인 {value} 가 범위(0-{size - 1})를 벗어났습니다", line)
            indices.append(value)
        return instance_key(decl.label, tuple(indices)), self.library[decl.module]

    def _slot(self, ident: Identifier, env: Optional[Env], line: Optional[str]) -> Tuple[Slot, Ref]:
        if ident.is_secondary:
            key, module = self.submodule(ident.path[0], env, line)
            ref = ident.path[1]
            symbol = module.symbols.get(ref.name)
            if symbol is None:
                raise self._error(f"서브모듈 {module.name} 에 저장소 '{ref.name}' 가 없습니다", line)
            if symbol.interface == Interface.PRIVATE:
                raise self._error(f"서브모듈의 private 저장소에 접근할 수 없습니다: {ident}", line)
            return slot_from_symbol(symbol, f"inst:{key}"), ref
        ref = ident.path[0]
        slot = self.slots.get(ref.name)
        if slot is None:
            raise self._error(f"선언되지 않은 저장소: {ref.name}", line)
        return slot, ref

    def _cells(self, type_name: str, low: int, width: int) -> List[Cell]:
        if type_name in self.types:
            typedef = self.types.get(type_name)
            if len(typedef.cells) > 1:
                return list(typedef.cells)
        return [Cell(0, low, width, type_name)]

    def operand(self, ident: Identifier, env: Optional[Env] = None, line: Optional[str] = None) -> Operand:
        """식별자 해석

        env 가 None 이면 검사 모드로, 묶이지 않은 색인은 범위 검사 없이 0 으로 본다.
        """
        if ident.kind == IMMEDIATE:
            if ident.number is not None:
                bits = int(np.array([ident.number], dtype=np.float32).view(np.uint32)[0])
                return Operand("float", 32, constant=Constant(bits), value=bits, text=ident.text)
            value = self._index(ident.value, env, line)
            value = 0 if value is None else value
            if not -(1 << 31) <= value < (1 << 32):
                raise self._error(f"즉시값 {value} 가 32 비트를 넘습니다", line)
            return Operand(IMMEDIATE_TYPE, 32, constant=Constant(value & 0xFFFFFFFF), value=value, text=ident.text)
        if ident.kind == CHARACTER:
            value = ident.value.constant
            return Operand("char", 8, constant=Constant(value), value=value, text=ident.text)
        if ident.kind == TYPESIZE:
            try:
                size = self.types.get(ident.name).size
            except LibraryError as e:
                raise self._error(str(e), line)
            return Operand(IMMEDIATE_TYPE, 32, constant=Constant(size), value=size, text=ident.text)
        if ident.kind == DIRECT:
            register = self.storage_base if ident.name == "storage" else ident.value.constant
            if register <= 0:
                raise self._error(f"잘못된 직접 주소: {ident}", line)
            return Operand("REG", 32, [(register, k) for k in range(32)], absolute=True, text=ident.text)
        if ident.kind in (ARRAY_PARAM, BLOCK_PARAM):
            return self._parameter(ident, line)
        if ident.kind != STORAGE:
            raise self._error(f"알 수 없는 식별자: {ident}", line)
        return self._storage(ident, env, line)

    def _parameter(self, ident: Identifier, line: Optional[str]) -> Operand:
        slot = self.slots.get(ident.path[0].name)
        wanted = Aggregate.ARRAY if ident.kind == ARRAY_PARAM else Aggregate.BLOCKSTRING
        if slot is None or slot.aggregate != wanted:
            raise self._error(f"{wanted.value} 저장소가 아닙니다: {ident}", line)
        k = ident.value.constant
        if not 0 <= k < ARRAY_HEADER:
            raise self._error(f"매개변수 번호는 0-{ARRAY_HEADER - 1} 입니다: {ident}", line)
        register = shifted(slot.register, k)
        return Operand("unsigned", 32, [(register, b) for b in range(32)], text=ident.text)

    def _storage(self, ident: Identifier, env: Optional[Env], line: Optional[str]) -> Operand:
        slot, ref = self._slot(ident, env, line)
        register = slot.register
        whole_array = False
        if slot.aggregate in (Aggregate.ARRAY, Aggregate.BLOCKSTRING):
            if not ref.indices:
                whole_array = True
            else:
                position = self._position(ref, slot.dims, env, line) or 0
                register = shifted(slot.register, ARRAY_HEADER + position * slot.size)
        elif ref.indices:
            raise self._error(f"배열이 아닌 저장소에 색인이 있습니다: {ident}", line)

        if ident.address:
            if ident.cell is not None:
                raise self._error(f"칸에는 주소 연산자를 쓸 수 없습니다: {ident}", line)
            if slot.type in ("BYTE", "WORD") and not slot.pointer and not whole_array:
                raise self._error(f"BYTE/WORD 저장소에는 주소 연산자를 쓸 수 없습니다: {ident}", line)
            if ident.bit is not None or (slot.type == "BIT" and not slot.pointer and not whole_array):
                bit = 0
                if ident.bit is not None:
                    bit = self._index(ident.bit, env, line) or 0
                    self._check_bit(bit, slot.width, ident, line)
                bit += slot.low
                return Operand(ADDRESS, 30, constant=Constant(bit, register, 32), bit_address=True,
                               text=ident.text, address=(register, bit))
            return Operand(ADDRESS, 25, constant=Constant(0, register, 1), text=ident.text, address=(register, 0))

        if whole_array:
            raise self._error(f"배열 전체는 복사할 수 없습니다: {ident}", line)
        if ident.cell is not None:
            if slot.low != 0 or slot.width < 30 or slot.size != 1:
                raise self._error(f"칸 식별자는 32 비트 저장소에만 쓸 수 있습니다: {ident}", line)
            low, width, type_name = CELL_FIELDS[ident.cell]
            if low + width > slot.width:
                raise self._error(f"{slot.type} 저장소에 {ident.cell} 칸이 없습니다: {ident}", line)
            return Operand(type_name, width, [(register, low + k) for k in range(width)], text=ident.text)
        if ident.bit is not None:
            if slot.size != 1:
                raise self._error(f"여러 레지스터 저장소의 비트는 지정할 수 없습니다: {ident}", line)
            bit = self._index(ident.bit, env, line) or 0
            self._check_bit(bit, slot.width, ident, line)
            return Operand("BIT", 1, [(register, slot.low + bit)], text=ident.text)
        if slot.pointer:
            return Operand(slot.type, 32, [(register, k) for k in range(32)], pointer=True, text=ident.text)
        cells = self._cells(slot.type, slot.low, slot.width)
        bits = [(shifted(register, c.offset), c.low + k) for c in cells for k in range(c.width)]
        return Operand(slot.type, len(bits), bits, multi=len(cells) > 1, text=ident.text)

    def _check_bit(self, bit: int, width: int, ident: Identifier, line: Optional[str]):
        if not 0 <= bit < width:
            raise self._error(f"비트 색인 {bit} 가 범위(0-{width - 1})를 벗어났습니다: {ident}", line)

    def bit(self, ident: Identifier, env: Optional[Env] = None, line: Optional[str] = None) -> Tuple[Bit, bool]:
        """cond 비트 해석 -> ((레지스터, 비트), 절대 주소 여부)"""
        operand = self.operand(ident, env, line)
        if operand.is_immediate or operand.width != 1:
            raise self._error(f"cond 는 비트 하나를 검사해야 합니다: {ident}", line)
        return operand.bits[0], operand.absolute

    # 타입 호환성

    def _wrapped(self, name: str) -> Optional[str]:
        if name in self.types:
            return self.types.get(name).wrapped
        return None

    def compatible(self, source: Operand, target: Operand, line: Optional[str] = None):
        """복사 source -> target 의 타입 검사

        Raises:
            SpaceCompileError: 호환되지 않는 타입
        """
        if target.is_immediate or target.type == ADDRESS:
            raise self._error(f"오른쪽 식별자는 저장소여야 합니다: {target.text}", line)
        if source.is_immediate:
            if source.type == ADDRESS:
                if target.pointer or target.type in _ADDRESS_TARGETS:
                    if target.type == "DSTN" and source.bit_address:
                        raise self._error(f"비트 주소를 DSTN 에 넣을 수 없습니다: {source.text}", line)
                    return
                raise self._error(f"주소는 BITA, DSTN, REG, unsigned 에만 넣을 수 있습니다: {target.text}", line)
            if target.multi:
                raise self._error(f"즉시값은 칸 하나에만 넣을 수 있습니다: {target.text}", line)
            value = source.value
            fits = 0 <= value < (1 << target.width) or (value < 0 and target.width == 32)
            if not fits:
                raise self._error(f"즉시값 {value} 가 {target.text} ({target.width} 비트)에 맞지 않습니다", line)
            return
        s, t = source.type, target.type
        if source.pointer or target.pointer:
            if source.pointer and target.pointer and s == t:
                return
            other = target if source.pointer else source
            if not other.pointer and other.type in _POINTER_PARTNERS:
                return
            raise self._error(f"포인터 복사 타입 불일치: {source.text} -> {target.text}", line)
        if s == t:
            return
        if self._wrapped(s) == t or self._wrapped(t) == s:
            return
        if s in _WIDENED and t in _WIDE:
            return
        if s == "unsigned" and t in _TRUNCATED:
            return
        raise self._error(f"타입 불일치: {source.text} ({s}) -> {target.text} ({t})", line)
