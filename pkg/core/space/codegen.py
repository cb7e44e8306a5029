"""
Space 코드 생성 모듈

독립 base-line 목록을 Synchronic A-Ram 코드로 내린다. 모듈 배치는 다음과
같다 (모듈 레지스터 1 부터).

    1   wrt1 busy
    2   jump (라인 1 진입) 0
    3   wrt1 mbsy              메타 모듈만
    4   jump (메타 라인 진입) 0
        진입 표                 같은 부모 주소의 라인끼리 주소 순으로 연속
        라인 코드
        end: wrt0 sink          끝난 thread 가 모이는 곳
        제어 레지스터           busy, mbsy, sink, skip 비트, barrier 완료 비트
        저장소
        서브모듈 사본           사본마다 앞에 빈 레지스터 하나

열은 차례로 실행되고, 각 열은 끝나면 다음 열의 진입 레지스터를 표시한다.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from config.settings import get_setting
from core.aram.instruction import MachineConfig, Opcode
from core.earth.module import BUSY, META_BUSY, SPACE, CompiledModule, Fixup
from core.earth.storage import Symbol
from core.earth.syntax import Interface
from core.errors import SpaceCompileError
from core.space.assembler import Addr, Assembler, Constant, shifted
from core.space.identifiers import Bit, Resolver, Slot, instance_key, make_slot
from core.space.scheduling import ControlBits, emit_barrier, emit_delay, emit_jump_tree, register_runs
from core.space.syntax import (
    ACTIVATE,
    COND,
    COPY,
    HALT,
    JUMP,
    SKIP,
    SUBHALT,
    WAIT,
    BaseLine,
    Column,
    LineAddress,
    SpaceModuleAST,
    Target,
    format_address,
)
from core.space.types import ARRAY_HEADER, Aggregate, TypeTable

logger = logging.getLogger(__name__)

END = "end"


def storage_base(config: MachineConfig) -> int:
    """메모리 블록 끝의 데이터 영역 (기본 마지막 4 분의 1) 이 시작하는 레지스터"""
    registers = config.registers
    return registers - int(registers * float(get_setting("space.storage_fraction", 0.25)))


def _canonical(addr: Addr) -> Tuple:
    if isinstance(addr, int):
        return ("", addr)
    if isinstance(addr, str):
        return (addr, 0)
    return addr


@dataclass
class _Instance:
    key: str
    module: CompiledModule


class SpaceCodegen:
    """Space 모듈 하나의 코드 생성기

    Args:
        ast: 읽기 단계 결과 (선언)
        lines: 전개된 base-line 목록
        types: 타입 표
        library: 모듈 클래스 이름 -> 컴파일된 모듈
        config: 대상 기계 설정
    """

    def __init__(
        self,
        ast: SpaceModuleAST,
        lines: List[BaseLine],
        types: TypeTable,
        library: Dict[str, CompiledModule],
        config: MachineConfig,
    ):
        self.ast = ast
        self.lines = lines
        self.types = types
        self.library = library
        self.config = config
        self.asm = Assembler()
        self.control = ControlBits()
        self.busy = self.control.allocate()
        self.mbsy = self.control.allocate() if ast.meta is not None else None
        self.sink = self.control.allocate()
        self.slots: Dict[str, Slot] = {
            entry.label: make_slot(entry, types, f"sym:{entry.label}") for entry in ast.storage
        }
        self.resolver = Resolver(
            ast.name, self.slots, {d.label: d for d in ast.submodules}, library, types, storage_base(config)
        )
        self.instances = self._instances()
        self.groups = self._groups()
        self.skipbits: Dict[LineAddress, Bit] = {}
        self.ranges: Dict[str, List[Tuple[int, int]]] = {}

    def _error(self, message: str, line: Optional[str] = None) -> SpaceCompileError:
        return SpaceCompileError(message, self.ast.name, line)

    def _instances(self) -> List[_Instance]:
        found = []
        for decl in self.ast.submodules:
            module = self.library.get(decl.module)
            if module is None:
                raise self._error(f"서브모듈 클래스 '{decl.module}' 이 라이브러리에 없습니다")
            for indices in itertools.product(*(range(d) for d in decl.dims)):
                found.append(_Instance(instance_key(decl.label, tuple(indices)), module))
        return found

    def _groups(self) -> Dict[LineAddress, List[LineAddress]]:
        groups: Dict[LineAddress, List[LineAddress]] = {}
        for line in self.lines:
            groups.setdefault(line.address[:-1], []).append(line.address)
        for members in groups.values():
            members.sort()
        return groups

    # 진입 표와 라인 대상

    def _target(self, target: Target, line: str) -> List[Tuple[Addr, int]]:
        """(라인 주소, offset) -> 진입 표를 덮는 잎 jump 목록"""
        address, offset = target
        group = self.groups.get(address[:-1], [])
        if address not in group:
            raise self._error(f"없는 라인 주소: {format_address(address)}", line)
        if group.index(address) + offset >= len(group):
            raise self._error(
                f"({format_address(address)},{offset}) 이 같은 부모의 라인 수를 넘습니다", line
            )
        entry = f"entry:{format_address(address)}"
        fanout = 1 << self.config.p
        leaves = []
        for k in range(0, offset + 1, fanout):
            leaves.append((shifted(entry, k), min(fanout - 1, offset - k)))
        return leaves

    def _consequent(self, target: Optional[Target], line: str, trees: Dict) -> Tuple[Opcode, Addr, int]:
        if target is None:
            return Opcode.JUMP, END, 0
        leaves = self._target(target, line)
        if len(leaves) == 1:
            return (Opcode.JUMP,) + leaves[0]
        return Opcode.JUMP, trees[target], 0

    # 열

    def _copy(self, column: Column, cont: Addr, line: str) -> int:
        asm = self.asm
        immediates: List[Tuple[List[Bit], Constant, bool]] = []
        triplets: List[Tuple[Bit, bool, Bit, bool]] = []
        written: Set[Tuple] = set()
        for item in column.items:
            source = self.resolver.operand(item.source, {}, line)
            target = self.resolver.operand(item.target, {}, line)
            self.resolver.compatible(source, target, line)
            for register, bit in target.bits:
                key = (_canonical(register), bit)
                if key in written:
                    raise self._error(f"한 열에서 같은 비트에 두 번 씁니다: {item.target}", line)
                written.add(key)
            if source.is_immediate:
                immediates.append((target.bits, source.constant, target.absolute))
                continue
            n = min(source.width, target.width)
            for k in range(n):
                triplets.append((source.bits[k], source.absolute, target.bits[k], target.absolute))
            if target.width > n:
                immediates.append((target.bits[n:], Constant(0), target.absolute))

        registers: List[int] = []
        for bits, constant, absolute in immediates:
            first = asm.here
            for k, (register, bit) in enumerate(bits):
                registers.append(asm.emit_constant_bit(register, bit, constant, k, absolute))
            asm.immediate_fixup(first, len(bits), constant)
        conds = []
        for (source, source_absolute, (register, bit), absolute) in triplets:
            conds.append(asm.emit(Opcode.COND, source[0], source[1], absolute=source_absolute))
            asm.emit(Opcode.WRT0, register, bit, absolute=absolute)
            asm.emit(Opcode.WRT1, register, bit, absolute=absolute)
        # 삼중 명령의 쓰기가 끝난 다음 사이클에 다음 열을 시작한다
        if triplets:
            second = asm.emit(Opcode.JUMP, cont, 0)
            tail = asm.emit(Opcode.JUMP, second, 0)
        else:
            tail = asm.emit(Opcode.JUMP, cont, 0)
        leaves = register_runs(registers, self.config.p) + [(c, 0) for c in conds] + [(tail, 0)]
        return emit_jump_tree(asm, leaves, self.config.p).entry

    def _activate(self, column: Column, cont: Addr, line: str) -> int:
        leaves: List[Tuple[Addr, int]] = []
        watched: List[Bit] = []
        seen: Set[Tuple[str, int]] = set()
        for k, item in enumerate(column.items):
            if item.exclusive and k > 0:
                raise self._error(f"'__' 는 열의 첫 활성화에만 쓸 수 있습니다: {item}", line)
            key, module = self.resolver.submodule(item.ref, {}, line)
            if (key, item.phase) in seen:
                raise self._error(f"같은 서브모듈을 두 번 활성화합니다: {item}", line)
            seen.add((key, item.phase))
            if item.phase == 2 and not module.is_meta:
                raise self._error(f"{module.name} 은 메타 모듈이 아니라서 2 단계가 없습니다: {item}", line)
            base = f"inst:{key}"
            leaves.append((shifted(base, 2 if item.phase == 2 else 0), 1))
            symbol = module.symbol(META_BUSY if item.phase == 2 else BUSY)
            watched.append((shifted(base, symbol.register - 1), symbol.low))
        if column.items[0].exclusive:
            watched = watched[:1]
        barrier = emit_barrier(self.asm, watched, cont, self.control, self.config.p)
        leaves.append((barrier.entry, 0))
        return emit_jump_tree(self.asm, leaves, self.config.p).entry

    def _cond(self, column: Column, line: str) -> int:
        asm = self.asm
        trees: Dict[Target, int] = {}
        for item in column.items:
            for target in (item.zero, item.one):
                if target is not None and target not in trees and len(self._target(target, line)) > 1:
                    trees[target] = emit_jump_tree(asm, self._target(target, line), self.config.p).entry
        conds = []
        for item in column.items:
            (register, bit), absolute = self.resolver.bit(item.bit, {}, line)
            conds.append(asm.emit(Opcode.COND, register, bit, absolute=absolute))
            asm.emit(*self._consequent(item.zero, line, trees))
            asm.emit(*self._consequent(item.one, line, trees))
        return emit_jump_tree(asm, [(c, 0) for c in conds], self.config.p).entry

    def _jump(self, column: Column, line: str) -> int:
        leaves: List[Tuple[Addr, int]] = []
        for item in column.items:
            for leaf in self._target(item.target, line):
                if leaf not in leaves:
                    leaves.append(leaf)
        return emit_jump_tree(self.asm, leaves, self.config.p).entry

    def _skip(self, column: Column, cont: Addr, line: str) -> int:
        bits = []
        for item in column.items:
            if item.address not in self.skipbits:
                raise self._error(f"skip 대상 라인이 없습니다: {format_address(item.address)}", line)
            bits.append(self.skipbits[item.address])
        return emit_barrier(self.asm, bits, cont, self.control, self.config.p).entry

    def _column(self, column: Column, cont: Addr, line: str) -> int:
        kind = column.kind
        if kind == COPY:
            return self._copy(column, cont, line)
        if kind == ACTIVATE:
            return self._activate(column, cont, line)
        if kind == COND:
            return self._cond(column, line)
        if kind == JUMP:
            return self._jump(column, line)
        if kind == SKIP:
            return self._skip(column, cont, line)
        if kind == WAIT:
            entry = emit_delay(self.asm, column.items[0].cycles, cont)
            return entry if entry is not None else self.asm.emit(Opcode.JUMP, cont, 0)
        if kind == HALT:
            if column.items[0].meta:
                if self.mbsy is None:
                    raise self._error("메타 모듈이 아닌데 -HALT 가 있습니다", line)
                return self.asm.emit(Opcode.WRT0, *self.mbsy)
            return self.asm.emit(Opcode.WRT0, *self.busy)
        if kind == SUBHALT:
            raise self._error(f"전개되지 않은 subhalt: {column}", line)
        raise self._error(f"알 수 없는 열 종류: {kind}", line)

    # 라인

    def _line(self, line: BaseLine):
        asm = self.asm
        label = line.label
        start = asm.here
        for k, column in enumerate(line.columns):
            if column.kind in (COND, JUMP, HALT, SUBHALT) and k != len(line.columns) - 1:
                raise self._error(f"종결 열 뒤에 열이 있습니다: {column}", label)
        skip = self.skipbits.get(line.address)
        end: Addr = END
        if skip is not None:
            terminal = line.terminal
            if terminal is not None and terminal.kind in (COND, JUMP):
                raise self._error("skip 대상 라인은 cond 나 jump 로 끝날 수 없습니다", label)
            asm.mark(f"skip:{label}")
            asm.emit(Opcode.WRT1, *skip)
            asm.emit(Opcode.JUMP, f"first:{label}", 0)
            end = f"lineend:{label}"
        count = len(line.columns)
        for k, column in enumerate(line.columns):
            cont = f"col:{label}:{k + 1}" if k + 1 < count else end
            entry = self._column(column, cont, label)
            asm.label(f"col:{label}:{k}", entry)
        asm.label(f"first:{label}", asm.labels[f"col:{label}:0"])
        if skip is not None:
            asm.mark(end)
            asm.emit(Opcode.WRT0, *skip)
        self.ranges.setdefault(label, []).append((start, asm.here - 1))

    def _entry_table(self):
        asm = self.asm
        for parent in sorted(self.groups):
            for address in self.groups[parent]:
                label = format_address(address)
                register = asm.mark(f"entry:{label}")
                if address in self.skipbits:
                    asm.emit(Opcode.JUMP, f"skip:{label}", 1)
                else:
                    asm.emit(Opcode.JUMP, f"first:{label}", 0)
                self.ranges[label] = [(register, register)]

    def _storage(self) -> Dict[str, Slot]:
        asm = self.asm
        for slot in self.slots.values():
            name = f"sym:{slot.name}"
            asm.mark(name)
            if slot.aggregate in (Aggregate.ARRAY, Aggregate.BLOCKSTRING):
                asm.data(Constant(0, (name, ARRAY_HEADER), 1))
                if slot.aggregate == Aggregate.ARRAY:
                    asm.data(slot.size)
                    asm.data(slot.count)
                    asm.data(len(slot.dims))
                else:
                    asm.data(slot.dims[0])
                    asm.data(0)
                    asm.data(0)
                for _ in range(slot.size * slot.count):
                    asm.data(0)
            else:
                for _ in range(slot.registers):
                    asm.data(0)
        return self.slots

    def generate(self) -> CompiledModule:
        """코드 생성

        Returns:
            컴파일된 Space 모듈

        Raises:
            SpaceCompileError: 없는 라인 주소, 타입 오류, 모듈 크기 초과
        """
        ast = self.ast
        asm = self.asm
        name = ast.name
        for reserved in (BUSY, META_BUSY):
            if reserved in self.slots:
                raise self._error(f"'{reserved}' 는 예약된 저장소 이름입니다")
        addresses = {line.address for line in self.lines}
        if (1,) not in addresses:
            raise self._error("라인 1 이 없습니다")
        if ast.meta is not None and (ast.meta,) not in addresses:
            raise self._error(f"메타 진입 라인 {ast.meta} 이 없습니다")
        for line in self.lines:
            for column in line.columns:
                if column.kind == SKIP:
                    for item in column.items:
                        if item.address in addresses and item.address not in self.skipbits:
                            self.skipbits[item.address] = self.control.allocate()

        asm.emit(Opcode.WRT1, *self.busy)
        asm.emit(Opcode.JUMP, "entry:1", 0)
        if self.mbsy is not None:
            asm.emit(Opcode.WRT1, *self.mbsy)
            asm.emit(Opcode.JUMP, f"entry:{ast.meta}", 0)
        self._entry_table()
        for line in self.lines:
            self._line(line)
        asm.mark(END)
        asm.emit(Opcode.WRT0, *self.sink)
        code_length = asm.here - 1

        asm.mark(self.control.label)
        for _ in range(self.control.registers):
            asm.data(0)
        self._storage()

        segments: List[Tuple[int, int]] = [(1, code_length)]
        absolute: List[int] = []
        fixups: List[Fixup] = []
        instances: List[Dict] = []
        full = MachineConfig(p=self.config.p)
        for instance in self.instances:
            asm.data(0)
            base = asm.mark(f"inst:{instance.key}")
            module = instance.module
            asm.block(module.relocated(base, full))
            offset = base - 1
            segments.extend((s + offset, e + offset) for s, e in module.code_segments)
            absolute.extend(a + offset for a in module.absolute)
            fixups.extend(f.moved(offset) for f in module.fixups)
            instances.append({"label": instance.key, "module": module.name, "index": module.index, "base": base})

        words, own_absolute, own_fixups = asm.finalize(self.config)
        if len(words) + 1 > self.config.registers:
            raise self._error(
                f"컴파일된 크기 {len(words)} 가 레지스터 수 {self.config.registers} 를 넘습니다"
            )

        symbols: Dict[str, Symbol] = {
            BUSY: Symbol(BUSY, "BIT", Interface.PRIVATE, asm.resolve(self.busy[0]), self.busy[1], 1)
        }
        if self.mbsy is not None:
            symbols[META_BUSY] = Symbol(META_BUSY, "BIT", Interface.PRIVATE, asm.resolve(self.mbsy[0]), self.mbsy[1], 1)
        for slot in self.slots.values():
            symbols[slot.name] = slot.symbol(asm.resolve(slot.register))

        level = 1 + max((i.module.level for i in self.instances), default=0)
        compiled = CompiledModule(
            name=name,
            kind=SPACE,
            code_length=code_length,
            words=words,
            symbols=symbols,
            level=level,
            meta=ast.meta,
            time=ast.time,
            metatime=ast.metatime,
            source=ast.text,
            absolute=own_absolute + absolute,
            segments=segments,
            fixups=own_fixups + fixups,
            lines=self.ranges,
            instances=instances,
        )
        logger.info(
            f"Space 컴파일 완료: {name} (코드 {code_length} 줄, 전체 {len(words)} 레지스터, 서브모듈 사본 {len(instances)} 개)"
        )
        return compiled


