"""
Space 코드 조립 모듈

코드 생성기는 레지스터 주소를 label 로 적고, 배치가 끝난 뒤 finalize 에서
정수로 바꾼다. 주소(Addr)는 정수, label, 또는 (label, 더할 값) 이다.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from core.aram.instruction import MachineConfig, Opcode, make_word
from core.earth.module import DATA, IMMEDIATE, Fixup
from core.errors import SpaceCompileError

logger = logging.getLogger(__name__)

Addr = Union[int, str, Tuple[str, int]]


def shifted(addr: Addr, delta: int) -> Addr:
    """addr + delta"""
    if delta == 0:
        return addr
    if isinstance(addr, int):
        return addr + delta
    if isinstance(addr, str):
        return (addr, delta)
    return (addr[0], addr[1] + delta)


@dataclass(frozen=True)
class Constant:
    """배치 뒤에 정해지는 상수: addr * scale + offset

    addr 가 None 이면 고정값이고, 아니면 모듈 안 주소 상수라서 적재 위치에
    따라 고쳐야 한다.
    """

    offset: int = 0
    addr: Optional[Addr] = None
    scale: int = 1

    @property
    def relocatable(self) -> bool:
        return self.addr is not None


@dataclass
class _Word:
    op: Opcode
    x: Addr
    y: int
    value: Optional[Tuple[Constant, int]] = None


@dataclass
class _PendingFixup:
    kind: str
    register: int
    width: int
    constant: Constant
    low: int = 0


class Assembler:
    """label 을 쓰는 A-Ram 코드 조립기

    Args:
        start: 첫 레지스터 번호 (모듈 레지스터 1)
    """

    def __init__(self, start: int = 1):
        self._start = start
        self._words: List[Union[_Word, int, Constant]] = []
        self._absolute: List[int] = []
        self._fixups: List[_PendingFixup] = []
        self._counter = 0
        self.labels: Dict[str, int] = {}

    @property
    def here(self) -> int:
        """다음에 채울 레지스터"""
        return self._start + len(self._words)

    def fresh(self, prefix: str = "L") -> str:
        self._counter += 1
        return f"{prefix}#{self._counter}"

    def mark(self, name: str) -> int:
        return self.label(name, self.here)

    def label(self, name: str, register: int) -> int:
        if name in self.labels:
            raise SpaceCompileError(f"label 중복: {name}")
        self.labels[name] = register
        return register

    def emit(self, op: Opcode, x: Addr, y: int = 0, absolute: bool = False) -> int:
        register = self.here
        self._words.append(_Word(op, x, y))
        if absolute:
            self._absolute.append(register)
        return register

    def emit_constant_bit(self, x: Addr, y: int, constant: Constant, bit: int, absolute: bool = False) -> int:
        """constant 의 bit 번째 비트를 쓰는 wrt0/wrt1"""
        register = self.here
        self._words.append(_Word(Opcode.WRT0, x, y, (constant, bit)))
        if absolute:
            self._absolute.append(register)
        return register

    def data(self, value: Union[int, Constant] = 0) -> int:
        register = self.here
        self._words.append(value)
        if isinstance(value, Constant) and value.relocatable:
            self._fixups.append(_PendingFixup(DATA, register, 32, value))
        return register

    def block(self, words: Sequence[int]) -> int:
        """이미 부호화된 단어열을 그대로 붙인다"""
        register = self.here
        self._words.extend(int(w) for w in words)
        return register

    def immediate_fixup(self, register: int, width: int, constant: Constant):
        """register 부터 width 개의 wrt 가 주소 상수를 쓴다"""
        if constant.relocatable:
            self._fixups.append(_PendingFixup(IMMEDIATE, register, width, constant))

    def resolve(self, addr: Addr) -> int:
        if isinstance(addr, int):
            return addr
        name, delta = (addr, 0) if isinstance(addr, str) else addr
        if name not in self.labels:
            raise SpaceCompileError(f"정의되지 않은 label: {name}")
        return self.labels[name] + delta

    def value(self, constant: Constant) -> int:
        if constant.addr is None:
            return constant.offset
        return self.resolve(constant.addr) * constant.scale + constant.offset

    def finalize(self, config: MachineConfig) -> Tuple[np.ndarray, List[int], List[Fixup]]:
        """(단어열, 절대 주소 레지스터, 주소 상수 목록)"""
        words = np.zeros(len(self._words), dtype=np.uint32)
        for k, word in enumerate(self._words):
            if isinstance(word, _Word):
                op = word.op
                if word.value is not None:
                    constant, bit = word.value
                    op = Opcode.WRT1 if (self.value(constant) >> bit) & 1 else Opcode.WRT0
                x = self.resolve(word.x)
                if not 0 <= x <= config.x_mask or not 0 <= word.y <= config.y_mask:
                    raise SpaceCompileError(f"레지스터 {self._start + k} 의 명령어 인자 범위 오류 ({x}, {word.y})")
                words[k] = make_word(op, x, word.y, config)
            elif isinstance(word, Constant):
                words[k] = self.value(word) & 0xFFFFFFFF
            else:
                words[k] = word
        fixups = [
            Fixup(f.kind, f.register, f.width, self.value(f.constant), f.constant.scale, f.low)
            for f in self._fixups
        ]
        logger.debug(f"조립 완료: {len(words)} 레지스터, label {len(self.labels)} 개, 주소 상수 {len(fixups)} 개")
        return words, list(self._absolute), fixups
