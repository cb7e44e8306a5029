"""
컴파일된 모듈 모듈

컴파일된 모듈은 기계어 코드로 시작하고, 그 뒤에 저장소 레지스터가 온다.
모듈 레지스터 1 이 코드 첫 줄이며, 적재 위치 base 에서 모듈 레지스터 r 은
기계 레지스터 base + r - 1 이다. Space 모듈은 서브모듈 사본을 자기 저장소
뒤에 품으므로 코드 영역(segments)이 여러 개일 수 있다.
"""

import logging
from dataclasses import asdict, dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.aram.instruction import MachineConfig, Opcode
from core.aram.machine import MemoryBlock
from core.aram.runner import DEFAULT_MAX_CYCLES, PHASE1_MARKING, PHASE2_MARKING, Outcome, run_module
from core.earth.storage import Symbol
from core.earth.syntax import Interface
from core.errors import MachineError

logger = logging.getLogger(__name__)

EARTH = "earth"
SPACE = "space"
BUSY = "busy"
META_BUSY = "mbsy"

# cond 가 마지막 두 레지스터에 오지 않도록 남기는 여유
_SLACK = 4

IMMEDIATE = "imm"
DATA = "data"


@dataclass(frozen=True)
class Fixup:
    """적재 위치에 따라 값이 바뀌는 주소 상수

    imm 이면 register 부터 width 개의 wrt 명령어가 value 의 비트를 하나씩
    쓰고 (비트 1 이면 wrt1), data 이면 register 의 [low, low + width) 필드가
    value 를 담는다. scale 은 레지스터 주소면 1, 비트 주소면 32 이다.
    """

    kind: str
    register: int
    width: int
    value: int
    scale: int = 1
    low: int = 0

    def moved(self, offset: int) -> "Fixup":
        """모듈 안 offset 만큼 옮겨 박힌 사본 (값은 이미 적용된 상태)"""
        return replace(self, register=self.register + offset, value=self.value + offset * self.scale)

    def apply(self, words: np.ndarray, delta: int, config: MachineConfig):
        value = (self.value + delta * self.scale) & ((1 << self.width) - 1)
        if self.kind == IMMEDIATE:
            shift = config.opcode_shift
            clear = config.word_mask ^ (3 << shift)
            for k in range(self.width):
                op = Opcode.WRT1 if (value >> k) & 1 else Opcode.WRT0
                index = self.register - 1 + k
                words[index] = (int(words[index]) & clear) | (int(op) << shift)
            return
        index = self.register - 1
        mask = ((1 << self.width) - 1) << self.low
        words[index] = (int(words[index]) & (config.word_mask ^ mask)) | (value << self.low)

    @classmethod
    def from_dict(cls, data: Dict) -> "Fixup":
        return cls(**{k: (int(v) if k != "kind" else v) for k, v in data.items()})


@dataclass
class CompiledModule:
    """컴파일된 Earth/Space 모듈

    Attributes:
        name: 모듈 이름
        kind: earth 또는 space
        level: 타입 레벨 (Earth 는 0)
        code_length: 자기 코드 레지스터 수
        words: 코드 + 저장소 (+ 서브모듈) 레지스터 초기값 (uint32)
        symbols: 저장소 이름 -> 기호
        meta: 2 단계 진입 linename (메타 모듈이 아니면 None)
        time: 선언된 (최소, 최대) 사이클
        source: 소스 텍스트
        index: 라이브러리 색인
        absolute: 절대 주소를 쓰는 코드 레지스터 (재배치 제외)
        segments: 재배치할 코드 구간 [(시작, 끝)] (비면 1..code_length)
        fixups: 주소 상수
        lines: Space 라인 주소 -> 그 라인 코드 구간
        instances: Space 서브모듈 사본 (label, index, module, base)
        metatime: 2 단계 (최소, 최대) 사이클
    """

    name: str
    kind: str
    code_length: int
    words: np.ndarray
    symbols: Dict[str, Symbol]
    level: int = 0
    meta: Optional[int] = None
    time: Tuple[int, int] = (0, 0)
    source: str = ""
    index: Optional[int] = None
    absolute: List[int] = field(default_factory=list)
    segments: List[Tuple[int, int]] = field(default_factory=list)
    fixups: List[Fixup] = field(default_factory=list)
    lines: Dict[str, List[Tuple[int, int]]] = field(default_factory=dict)
    instances: List[Dict] = field(default_factory=list)
    metatime: Optional[Tuple[int, int]] = None

    @property
    def size(self) -> int:
        return len(self.words)

    @property
    def storage_length(self) -> int:
        return self.size - self.code_length

    @property
    def is_meta(self) -> bool:
        return self.meta is not None

    @property
    def code_segments(self) -> List[Tuple[int, int]]:
        return list(self.segments) if self.segments else [(1, self.code_length)]

    @property
    def entry_markings(self) -> List[Tuple[int, int]]:
        return [PHASE1_MARKING, PHASE2_MARKING] if self.is_meta else [PHASE1_MARKING]

    def symbol(self, name: str) -> Symbol:
        if name not in self.symbols:
            raise MachineError(f"{self.name} 에 저장소 '{name}' 가 없습니다")
        return self.symbols[name]

    def busy_bit(self, phase: int = 1, base: int = 1) -> Tuple[int, int]:
        """단계별 busy 비트의 기계 (레지스터, 비트)"""
        symbol = self.symbol(META_BUSY if phase == 2 else BUSY)
        return base + symbol.register - 1, symbol.low

    def interface(self, *kinds: Interface) -> List[Symbol]:
        return [s for s in self.symbols.values() if s.interface in kinds]

    @property
    def inputs(self) -> List[Symbol]:
        return self.interface(Interface.INPUT, Interface.IOPUT)

    @property
    def outputs(self) -> List[Symbol]:
        return self.interface(Interface.OUTPUT, Interface.IOPUT)

    def relocated(self, base: int, config: Optional[MachineConfig] = None) -> np.ndarray:
        """기계 레지스터 base 에 적재할 단어열

        절대 주소 명령어를 제외한 코드 구간 명령어의 destination 에 base - 1 을
        더하고 주소 상수를 고친다.
        """
        config = config or MachineConfig()
        words = self.words.astype(config.dtype).copy()
        delta = base - 1
        if delta == 0:
            return words
        mask = np.zeros(len(words), dtype=bool)
        for start, end in self.code_segments:
            mask[start - 1:end] = True
        if self.absolute:
            mask[np.asarray(self.absolute, dtype=np.int64) - 1] = False
        if mask.any():
            top = int(((words[mask] >> config.p) & config.x_mask).max())
            if top + delta > config.x_mask:
                raise MachineError(f"{self.name} 을 레지스터 {base} 에 재배치할 수 없습니다")
            words[mask] += np.asarray(delta << config.p, dtype=config.dtype)
        for fixup in self.fixups:
            fixup.apply(words, delta, config)
        return words

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "level": self.level,
            "code_length": self.code_length,
            "words": [int(w) for w in self.words],
            "symbols": {name: s.to_dict() for name, s in self.symbols.items()},
            "meta": self.meta,
            "time": list(self.time),
            "metatime": list(self.metatime) if self.metatime else None,
            "source": self.source,
            "index": self.index,
            "absolute": list(self.absolute),
            "segments": [list(s) for s in self.segments],
            "fixups": [asdict(f) for f in self.fixups],
            "lines": {a: [list(r) for r in ranges] for a, ranges in self.lines.items()},
            "instances": list(self.instances),
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "CompiledModule":
        metatime = data.get("metatime")
        return cls(
            name=data["name"],
            kind=data.get("kind", EARTH),
            level=int(data.get("level", 0)),
            code_length=int(data["code_length"]),
            words=np.asarray(data["words"], dtype=np.uint32),
            symbols={name: Symbol.from_dict(s) for name, s in data.get("symbols", {}).items()},
            meta=data.get("meta"),
            time=tuple(data.get("time", (0, 0))),
            metatime=tuple(metatime) if metatime else None,
            source=data.get("source", ""),
            index=data.get("index"),
            absolute=list(data.get("absolute", [])),
            segments=[tuple(s) for s in data.get("segments", [])],
            fixups=[Fixup.from_dict(f) for f in data.get("fixups", [])],
            lines={a: [tuple(r) for r in ranges] for a, ranges in data.get("lines", {}).items()},
            instances=list(data.get("instances", [])),
        )


def module_config(module: CompiledModule, extra: int = 0, p: int = 5) -> MachineConfig:
    """모듈과 추가 레지스터 extra 개가 들어가는 기계 설정"""
    return MachineConfig(p=p, register_count=max(module.size + 1 + extra + _SLACK, 64))


def load_module(module: CompiledModule, memory: MemoryBlock, base: int = 1):
    """메모리의 base 에 모듈 적재"""
    if base < 1 or base + module.size > len(memory):
        raise MachineError(f"모듈 {module.name} ({module.size}) 을 레지스터 {base} 에 적재할 수 없습니다")
    memory.words[base:base + module.size] = module.relocated(base, memory.config)


def _cells(symbol: Symbol) -> List[Tuple[int, int, int]]:
    """원소별 (모듈 레지스터, 최하위 비트, 폭). 배열은 머리 4 레지스터 뒤에 원소가 온다."""
    if not symbol.dims:
        return [(symbol.register, symbol.low, symbol.width)]
    first = symbol.register + 4
    return [(first + k * symbol.size, symbol.low, symbol.width) for k in range(symbol.count)]


def write_symbol(memory: MemoryBlock, module: CompiledModule, name: str, value, base: int = 1):
    """저장소 값 쓰기. 배열이면 value 는 원소 값 목록 (행 우선)."""
    symbol = module.symbol(name)
    cells = _cells(symbol)
    values: Sequence[int] = list(value) if symbol.dims else [value]
    if len(values) != len(cells):
        raise MachineError(f"{name} 에는 값 {len(cells)} 개가 필요합니다 (받은 값 {len(values)} 개)")
    for (register, low, width), v in zip(cells, values):
        v = int(v)
        if v < 0 or v >> width:
            raise MachineError(f"{name} 의 값 {v} 가 {width} 비트를 넘습니다")
        memory.set_field(base + register - 1, low, width, v)


def read_symbol(memory: MemoryBlock, module: CompiledModule, name: str, base: int = 1):
    """저장소 값 읽기. 배열이면 원소 값 목록."""
    symbol = module.symbol(name)
    values = [memory.field(base + r - 1, low, width) for r, low, width in _cells(symbol)]
    return values if symbol.dims else values[0]


@dataclass
class ModuleRun:
    """모듈 실행 결과"""

    outcome: Outcome
    memory: MemoryBlock
    outputs: Dict[str, int]

    @property
    def cycles(self) -> int:
        return self.outcome.cycles


def execute(
    module: CompiledModule,
    inputs: Optional[Dict[str, int]] = None,
    phase: int = 1,
    memory: Optional[MemoryBlock] = None,
    max_cycles: int = DEFAULT_MAX_CYCLES,
    trace: bool = False,
    extra: int = 0,
    config: Optional[MachineConfig] = None,
) -> ModuleRun:
    """모듈을 레지스터 1 에 적재하고 한 단계 실행

    memory 가 주어지면 이미 적재된 것으로 보고 입력만 쓴다 (메타 모듈의
    1 단계 뒤 2 단계 실행, 반복 실행).

    Args:
        module: 컴파일된 모듈
        inputs: 저장소 이름 -> 값
        phase: 1 ({1,2}) 또는 2 ({3,4})
        memory: 재사용할 메모리
        max_cycles: 최대 사이클 수
        trace: marking 기록 여부
        extra: 모듈 뒤에 둘 추가 레지스터 수
        config: 새 메모리의 기계 설정 (절대 주소를 쓰는 모듈)

    Returns:
        실행 결과와 출력 값
    """
    if phase == 2 and not module.is_meta:
        raise MachineError(f"{module.name} 은 메타 모듈이 아닙니다")
    if memory is None:
        memory = MemoryBlock(config or module_config(module, extra))
        load_module(module, memory)
    for name, value in (inputs or {}).items():
        write_symbol(memory, module, name, value)
    marking = PHASE2_MARKING if phase == 2 else PHASE1_MARKING
    outcome = run_module(memory, module.busy_bit(phase), marking, max_cycles, trace)
    outputs = {s.name: read_symbol(memory, module, s.name) for s in module.outputs}
    logger.debug(f"{module.name} {phase} 단계 실행: {outcome.describe()} ({outcome.cycles} 사이클)")
    return ModuleRun(outcome, memory, outputs)
