"""
Sequential B-Ram 범용 튜링 기계 모듈

튜링 기계와 테이프를 B-Ram 메모리로 인코딩하고 corpus 의 utm.basm 을
실행한 뒤 테이프와 success 비트를 읽어낸다.

메모리 배치 (q = 실패가 아닌 상태 수):
    - 테이프 칸 i: 블록 i+1 레지스터 0 비트 1/0 (0=00, 1=01, ⊥=10)
    - 단항 상수 q+1, 2q+2, 3q+3: 레지스터 1, 2, 3 비트 0, 블록 2 부터
    - 상태 n 의 delta 블록: 블록 1+3n(q+1) 부터 3q+3 블록
    - 기호 t 의 tape 블록: a = 1+(3n+t)(q+1), 레지스터 5 와 6
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from core.aram.machine import Status
from core.aram.runner import Outcome
from core.bram.instruction import BConfig, assemble_b
from core.bram.machine import BMemory, CursorMap
from core.bram.runner import DEFAULT_B_MAX_CYCLES, run_b
from core.bram.tm import BLANK, FAILURE, SYMBOLS, TuringMachine, normalize_tape
from core.corpus import read_corpus
from core.errors import TuringMachineError

logger = logging.getLogger(__name__)

UTM_LISTING = "utm.basm"
TAPE_REGISTER = 0
ONE_Q, TWO_Q, THREE_Q = 1, 2, 3
DELTA_REGISTER = 5
STATEMOVE_REGISTER = 6

# 블록 1 레지스터 0 의 고정 변수
SUCCESS_BIT = 6

# 코드 세그먼트 대표 레지스터 (커서 위치 확인용)
TAPECODE_REGISTER = 63
STATECODE_REGISTER = 59

SYMBOL_BITS: Dict[str, int] = {"0": 0b00, "1": 0b01, BLANK: 0b10}
_BITS_SYMBOL = {bits: symbol for symbol, bits in SYMBOL_BITS.items()}
DIRECTION_BITS: Dict[str, int] = {"L": 0b00, "R": 0b01, "C": 0b10}

# tape 블록 레지스터 5 의 비트
FINALSTATE_BIT = 7
VALID_BIT = 0
TAPEDIR_LOW = 1
NEWSYMBOL_LOW = 3
STATEDIR_LOW = 5

_program_cache: Dict[int, Dict[int, int]] = {}


def utm_program(config: BConfig) -> Dict[int, int]:
    """UTM 코드 블록 (레지스터 -> 단어)"""
    if config.p not in _program_cache:
        _program_cache[config.p] = assemble_b(read_corpus("bram", UTM_LISTING), config)
    return _program_cache[config.p]


def delta_block(n: int, q: int) -> int:
    """상태 n 의 delta 블록 첫 메모리 블록"""
    return 1 + 3 * n * (q + 1)


def tape_block(n: int, symbol: str, q: int) -> int:
    """상태 n, 기호 symbol 의 tape 블록 첫 메모리 블록"""
    return 1 + (3 * n + SYMBOLS.index(symbol)) * (q + 1)


def _set_field(memory: BMemory, block: int, register: int, low: int, width: int, value: int):
    for k in range(width):
        memory.set_bit(block, register, low + k, (value >> k) & 1)


def _write_unary(memory: BMemory, register: int, count: int):
    # 블록 1 은 왼쪽 경계 0, 블록 2..count+1 이 1
    for block in range(2, count + 2):
        memory.set_bit(block, register, 0, 1)


def encode_tm(
    tm: TuringMachine,
    tape: Sequence[str],
    config: Optional[BConfig] = None,
    tape_length: Optional[int] = None,
) -> BMemory:
    """튜링 기계와 테이프를 UTM 메모리로 인코딩

    Args:
        tm: 튜링 기계
        tape: 초기 테이프 기호열
        config: B-Ram 설정 (p=4)
        tape_length: ⊥ 로 채울 테이프 칸 수 (기본 len(tape)+64)

    Returns:
        코드 블록에 UTM 이 적재된 메모리
    """
    config = config or BConfig()
    if config.p != 4:
        raise TuringMachineError("UTM 목록은 p=4 B-Ram 용입니다")
    tm.validate()
    for symbol in tape:
        if symbol not in SYMBOLS:
            raise TuringMachineError(f"알 수 없는 테이프 기호: {symbol}")
    length = tape_length if tape_length is not None else len(tape) + 64
    if length < len(tape):
        raise TuringMachineError(f"tape_length {length} 가 테이프보다 짧습니다")

    q = tm.q
    memory = BMemory(config)
    memory.load(utm_program(config))

    for i in range(length):
        symbol = tape[i] if i < len(tape) else BLANK
        _set_field(memory, i + 1, TAPE_REGISTER, 0, 2, SYMBOL_BITS[symbol])

    _write_unary(memory, ONE_Q, q + 1)
    _write_unary(memory, TWO_Q, 2 * q + 2)
    _write_unary(memory, THREE_Q, 3 * q + 3)

    for n, state in enumerate(tm.states):
        if state == tm.success:
            memory.set_bit(delta_block(n, q), DELTA_REGISTER, FINALSTATE_BIT, 1)
            continue
        for symbol in SYMBOLS:
            a = tape_block(n, symbol, q)
            move = tm.delta.get((state, symbol))
            if move is None or move[0] == FAILURE:
                continue
            target, written, direction = move
            memory.set_bit(a, DELTA_REGISTER, VALID_BIT, 1)
            _set_field(memory, a, DELTA_REGISTER, TAPEDIR_LOW, 2, DIRECTION_BITS[direction])
            _set_field(memory, a, DELTA_REGISTER, NEWSYMBOL_LOW, 2, SYMBOL_BITS[written])
            m = tm.index(target)
            if m == n:
                statedir = DIRECTION_BITS["C"]
            else:
                statedir = DIRECTION_BITS["R"] if m > n else DIRECTION_BITS["L"]
            _set_field(memory, a, DELTA_REGISTER, STATEDIR_LOW, 2, statedir)
            for k in range(1, abs(m - n) + 1):
                memory.set_bit(a + k, STATEMOVE_REGISTER, 0, 1)

    logger.debug(f"튜링 기계 인코딩: q={q}, 테이프 {length} 칸, {len(memory.blocks)} 블록")
    return memory


def decode_tape(memory: BMemory, tape_length: int) -> List[str]:
    """메모리에서 테이프 기호열 읽기 (끝의 ⊥ 제거)

    Raises:
        TuringMachineError: 11 비트 쌍
    """
    squares = []
    for i in range(tape_length):
        bits = (memory.bit(i + 1, TAPE_REGISTER, 1) << 1) | memory.bit(i + 1, TAPE_REGISTER, 0)
        if bits not in _BITS_SYMBOL:
            raise TuringMachineError(f"테이프 칸 {i} 의 인코딩 오류: {bits:02b}")
        squares.append(_BITS_SYMBOL[bits])
    return normalize_tape(squares)


@dataclass
class UTMResult:
    """UTM 실행 결과"""

    success: bool
    tape: List[str]
    head: int
    outcome: Outcome

    @property
    def halted(self) -> bool:
        return self.outcome.succeeded


def run_utm(
    tm: TuringMachine,
    tape: Sequence[str],
    config: Optional[BConfig] = None,
    max_cycles: int = DEFAULT_B_MAX_CYCLES,
    tape_length: Optional[int] = None,
) -> UTMResult:
    """UTM 으로 튜링 기계 실행

    Raises:
        TuringMachineError: 테이프 헤드가 ⊥ 로 채운 영역을 벗어난 경우
    """
    length = tape_length if tape_length is not None else len(tape) + 64
    memory = encode_tm(tm, tape, config, length)
    cursors = CursorMap()
    outcome = run_b(memory, cursors, max_cycles=max_cycles)
    head = cursors.get(0, TAPECODE_REGISTER) - 1
    if head >= length:
        raise TuringMachineError(f"테이프 헤드 {head} 가 인코딩된 {length} 칸을 벗어났습니다")
    if outcome.status == Status.FAIL:
        logger.error(f"UTM 기계 실패: {outcome.describe()}")
    success = outcome.succeeded and memory.bit(1, TAPE_REGISTER, SUCCESS_BIT) == 1
    result = UTMResult(success, decode_tape(memory, length), head, outcome)
    logger.info(f"UTM 실행 종료: success={success}, {outcome.cycles} 사이클")
    return result
