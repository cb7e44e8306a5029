"""
Earth 컴파일러 모듈

파싱 -> 복제 구조 전개 -> 저장소 배치 -> 이름 해석 -> 기계어 부호화 순서로
진행한다. endc 는 코드를 만들지 않는다.
"""

import logging
from typing import Dict, List, Optional

import numpy as np

from core.aram.instruction import MachineConfig, Opcode, decode, disassemble, make_word
from core.earth.module import EARTH, CompiledModule
from core.earth.parser import parse_earth
from core.earth.replicate import replicate
from core.earth.storage import Symbol, allocate_storage
from core.earth.syntax import AddressMode, EarthInstr, EarthSource
from core.errors import EarthCompileError

logger = logging.getLogger(__name__)

EARTH_P = 5
META_ENTRY_REGISTER = 3

_OPCODES: Dict[str, Opcode] = {
    "wrt0": Opcode.WRT0,
    "wrt1": Opcode.WRT1,
    "cond": Opcode.COND,
    "jump": Opcode.JUMP,
}


def _linename_map(code: List[EarthInstr], module: str) -> Dict[int, int]:
    registers: Dict[int, int] = {}
    for register, instr in enumerate(code, start=1):
        if instr.linename is None:
            continue
        value = instr.linename.constant
        if value in registers:
            raise EarthCompileError(f"linename {value} 중복", module, instr.line)
        registers[value] = register
    return registers


def _line_register(registers: Dict[int, int], value: int, module: str, line: int) -> int:
    if value not in registers:
        raise EarthCompileError(f"존재하지 않는 linename {value}", module, line)
    return registers[value]


def _named(instr: EarthInstr, symbols: Dict[str, Symbol], module: str):
    symbol = symbols.get(instr.target)
    if symbol is None:
        raise EarthCompileError(f"선언되지 않은 저장소: {instr.target}", module, instr.line)
    if symbol.is_bit:
        if instr.y is not None:
            raise EarthCompileError(f"BIT 저장소 {symbol.name} 에는 색인이 없습니다", module, instr.line)
        return symbol.register, symbol.low
    if instr.y is None:
        raise EarthCompileError(f"{symbol.type} 저장소 {symbol.name} 에는 비트 색인이 필요합니다", module, instr.line)
    index = instr.y.constant
    if index >= symbol.width:
        raise EarthCompileError(
            f"{symbol.name} 의 비트 색인 {index} 가 {symbol.type} 범위(0-{symbol.width - 1})를 벗어났습니다",
            module,
            instr.line,
        )
    return symbol.register, symbol.low + index


def resolve(source: EarthSource, code: List[EarthInstr], config: Optional[MachineConfig] = None) -> CompiledModule:
    """전개된 코드의 이름과 linename 을 해석해 기계어 생성

    Args:
        source: 파싱된 소스 (선언)
        code: replicate 결과 (endc 포함 가능)
        config: 대상 기계 설정 (p=5)

    Returns:
        컴파일된 모듈

    Raises:
        EarthCompileError: 선언되지 않은 저장소, 비트 색인 범위, 없는 linename, 중복 linename
    """
    config = config or MachineConfig(p=EARTH_P)
    decls = source.declarations
    name = decls.name
    code = [instr for instr in code if instr.op != "endc"]
    registers = _linename_map(code, name)
    if decls.meta is not None:
        entry = registers.get(decls.meta)
        if entry != META_ENTRY_REGISTER:
            raise EarthCompileError(
                f"META linename {decls.meta} 는 세 번째 코드 줄이어야 합니다 (현재 {entry})", name
            )

    symbols, storage_count = allocate_storage(decls, len(code) + 1)
    words = np.zeros(len(code) + storage_count, dtype=np.uint32)
    absolute: List[int] = []

    for register, instr in enumerate(code, start=1):
        if instr.op == "jump":
            x = _line_register(registers, instr.x.constant, name, instr.line)
            y = instr.y.constant
        elif instr.mode == AddressMode.BRACKET:
            x = _line_register(registers, instr.x.constant, name, instr.line)
            y = instr.y.constant
        elif instr.mode == AddressMode.ABSOLUTE:
            x, y = instr.x.constant, instr.y.constant
            absolute.append(register)
        else:
            x, y = _named(instr, symbols, name)
        if y > config.y_mask:
            raise EarthCompileError(f"offset {y} 가 {config.y_mask} 를 넘습니다", name, instr.line)
        if x > config.x_mask:
            raise EarthCompileError(f"destination {x} 가 범위를 벗어났습니다", name, instr.line)
        words[register - 1] = make_word(_OPCODES[instr.op], x, y, config)

    if absolute:
        logger.warning(f"{name}: 절대 주소 명령어 {len(absolute)} 개 (레지스터 {absolute[0]} 부터)")

    compiled = CompiledModule(
        name=name,
        kind=EARTH,
        code_length=len(code),
        words=words,
        symbols=symbols,
        level=0,
        meta=decls.meta,
        time=decls.time,
        source=source.text,
        absolute=absolute,
    )
    logger.info(f"Earth 컴파일 완료: {name} (코드 {len(code)} 줄, 저장소 {storage_count} 레지스터)")
    return compiled


def compile_earth(text: str, config: Optional[MachineConfig] = None) -> CompiledModule:
    """Earth 소스 텍스트 컴파일

    Raises:
        EarthSyntaxError: 구문 오류
        EarthCompileError: 의미 오류
    """
    source = parse_earth(text)
    flat = replicate(source.code, source.name)
    return resolve(source, flat, config)


def expand_earth(text: str) -> List[EarthInstr]:
    """복제 구조만 전개한 명령어 목록 (endc 제외)"""
    source = parse_earth(text)
    return [instr for instr in replicate(source.code, source.name) if instr.op != "endc"]


def listing(compiled: CompiledModule, config: Optional[MachineConfig] = None) -> str:
    """코드 영역의 번호 붙은 어셈블리 목록"""
    config = config or MachineConfig(p=EARTH_P)
    return disassemble(compiled.words[: compiled.code_length], config)


def code_instructions(compiled: CompiledModule, config: Optional[MachineConfig] = None):
    config = config or MachineConfig(p=EARTH_P)
    return [decode(w, config) for w in compiled.words[: compiled.code_length]]
