import pytest

from core.aram import ErrorKind, MachineConfig, MemoryBlock, Opcode, Status, make_word
from core.aram.machine import step_sequential, step_synchronic
from core.errors import MachineError

CONFIG = MachineConfig(p=5, register_count=4096)
R = CONFIG.registers


def w(op, x, y=0):
    return make_word(op, x, y, CONFIG)


WRT0, WRT1, COND, JUMP = Opcode.WRT0, Opcode.WRT1, Opcode.COND, Opcode.JUMP


def block(program):
    memory = MemoryBlock(CONFIG)
    memory.load(program)
    return memory


# --- 9 개 오류 각각 ---

ERROR_CASES = [
    (ErrorKind.MARKING, {5: w(JUMP, 10)}, [5, 5]),
    (ErrorKind.WRITE, {5: w(WRT1, 100, 3), 6: w(WRT0, 100, 3)}, [5, 6]),
    (ErrorKind.HALT, {5: 0, 6: w(JUMP, 10)}, [5, 6]),
    (ErrorKind.COND, {R - 2: w(COND, 100)}, [R - 2]),
    (ErrorKind.CONSEQUENT, {5: w(COND, 100), 6: w(JUMP, 10)}, [5, 6]),
    (ErrorKind.ACTIVE, {5: w(WRT1, 6, 0), 6: w(JUMP, 10)}, [5, 6]),
    (ErrorKind.JUMP, {5: w(JUMP, R - 3, 5)}, [5]),
    (ErrorKind.ERROR, {5: w(WRT1, 0, 5)}, [5]),
]


@pytest.mark.parametrize("kind, program, marking", ERROR_CASES, ids=lambda v: getattr(v, "name", ""))
def test_each_error_sets_its_bit(kind, program, marking):
    memory = block(program)
    result = step_synchronic(memory, marking)
    assert result.status == Status.FAIL
    assert result.error == kind
    assert result.marking == []
    assert memory.error_bits() == [kind]


def test_live_fail_on_empty_marking_while_busy():
    memory = block({})
    memory.set_bit(0, 0, 1)
    result = step_synchronic(memory, [])
    assert result.error == ErrorKind.LIVE
    assert memory.bit(0, 4) == 1


def test_empty_marking_after_error_terminates_without_live_fail():
    memory = block({})
    memory.set_bit(0, 0, 1)
    memory.set_bit(0, 2, 1)
    assert step_synchronic(memory, []).status == Status.HALTED
    assert memory.bit(0, 4) == 0


def test_jump_to_register_zero_is_jump_fail():
    memory = block({5: w(JUMP, 0, 0)})
    assert step_synchronic(memory, [5]).error == ErrorKind.JUMP


def test_consequent_pair_without_marked_cond():
    # 4 는 marking 되지 않았지만 5, 6 은 cond 4 의 두 결과 명령어이다
    memory = block({4: w(COND, 100), 5: w(JUMP, 10), 6: w(JUMP, 20)})
    assert step_synchronic(memory, [5, 6]).error == ErrorKind.CONSEQUENT


def test_self_write_is_not_active_fail():
    memory = block({5: w(WRT1, 5, 3)})
    result = step_synchronic(memory, [5])
    assert result.status == Status.RUNNING
    assert memory.bit(5, 3) == 1


def test_success_resets_busy():
    memory = block({7: 0})
    memory.set_bit(0, 0, 1)
    result = step_synchronic(memory, [7])
    assert result.status == Status.SUCCESS
    assert memory.bit(0, 0) == 0


def test_reads_precede_writes():
    memory = block({5: w(COND, 100, 2), 9: w(WRT1, 100, 2), 10: w(JUMP, 30)})
    result = step_synchronic(memory, [5, 9])
    # cond 는 쓰기 전 값 0 을 본다
    assert result.marking == [6]
    assert memory.bit(100, 2) == 1


def test_jump_marks_inclusive_range():
    memory = block({5: w(JUMP, 40, 3)})
    assert step_synchronic(memory, [5]).marking == [40, 41, 42, 43]


def test_duplicate_activation_becomes_multiset():
    memory = block({5: w(JUMP, 40, 1), 6: w(JUMP, 41, 0), 7: w(WRT1, 3, 0)})
    result = step_synchronic(memory, [5, 7])
    assert result.marking == [40, 41]
    result = step_synchronic(block({5: w(JUMP, 40, 1), 8: w(JUMP, 41, 0)}), [5, 8])
    assert result.marking == [40, 41, 41]


def test_frame_property(rng):
    for _ in range(50):
        memory = MemoryBlock(CONFIG)
        for r in range(200, 260):
            memory.set_word(r, rng.getrandbits(32))
        targets = rng.sample([(x, y) for x in range(200, 260) for y in range(32)], 6)
        program = {}
        for k, (x, y) in enumerate(targets):
            program[10 + 3 * k] = w(rng.choice([WRT0, WRT1]), x, y)
        memory.load(program)
        before = memory.words.copy()
        step_synchronic(memory, sorted(program))
        changed = {(r, b) for r in range(200, 260) for b in range(32)
                   if ((int(before[r]) ^ memory.word(r)) >> b) & 1}
        assert changed <= set(targets)


# --- 다중 오류 상태의 우선순위 ---

def _op(word):
    return word >> 30


def _x(word):
    return (word >> 5) & ((1 << 25) - 1)


def _y(word):
    return word & 31


def reference_errors(words, marking):
    """상태 변환 함수 정의의 조건들을 문자 그대로 평가"""
    found = []
    mu = set(marking)
    pairs = [(i, j) for i in mu for j in mu if i != j]
    if len(mu) != len(marking):
        found.append(ErrorKind.MARKING)
    if any(_op(words[i]) < 2 and _op(words[j]) < 2 and _x(words[i]) == _x(words[j])
           and _y(words[i]) == _y(words[j]) for i, j in pairs):
        found.append(ErrorKind.WRITE)
    if any(words[i] == 0 for i, j in pairs):
        found.append(ErrorKind.HALT)
    if any(_op(words[i]) == 2 and i == R - 2 for i in mu):
        found.append(ErrorKind.COND)
    for k in range(0, 40):
        if _op(words[k]) != 2:
            continue
        if any((i == k + 1 and j == k + 2) or (i == k and j in (k + 1, k + 2)) for i, j in pairs):
            found.append(ErrorKind.CONSEQUENT)
            break
    if any(_op(words[j]) < 2 and _x(words[j]) == i for i, j in pairs):
        found.append(ErrorKind.ACTIVE)
    if any(_op(words[i]) == 3 and (_x(words[i]) == 0 or _x(words[i]) + _y(words[i]) >= R) for i in mu):
        found.append(ErrorKind.JUMP)
    if any(_x(words[i]) == 0 and _y(words[i]) != 0 for i in mu):
        found.append(ErrorKind.ERROR)
    return found


def test_error_precedence_on_random_states(rng):
    multi = 0
    for _ in range(600):
        words = [0] * 40
        for r in range(1, 40):
            if rng.random() < 0.08:
                continue
            words[r] = (rng.randrange(4) << 30) | (rng.randrange(0, 14) << 5) | rng.randrange(4)
        size = rng.randrange(2, 6)
        marking = sorted(rng.choice(range(1, 14)) for _ in range(size))
        memory = MemoryBlock(CONFIG)
        memory.load(dict(enumerate(words)))
        expected = reference_errors(words, marking)
        result = step_synchronic(memory, marking)
        if expected:
            assert result.error == expected[0], (words, marking, expected)
            multi += len(expected) > 1
        else:
            assert result.status == Status.RUNNING
    assert multi >= 100


# --- Sequential ---

def test_sequential_halt_fail_in_last_register():
    memory = block({R - 1: w(JUMP, 5)})
    result = step_sequential(memory, [R - 1])
    assert result.error == ErrorKind.HALT
    assert memory.bit(0, 1) == 1


def test_sequential_error_fail():
    memory = block({9: w(WRT1, 0, 5)})
    result = step_sequential(memory, [9])
    assert result.error == ErrorKind.ERROR
    assert memory.bit(0, 3) == 1


def test_sequential_cond_fail():
    memory = block({R - 2: w(COND, 100, 0)})
    assert step_sequential(memory, [R - 2]).error == ErrorKind.COND
    assert memory.bit(0, 2) == 1


def test_sequential_write_advances():
    memory = block({9: w(WRT1, 100, 7)})
    assert step_sequential(memory, [9]).marking == [10]
    assert memory.bit(100, 7) == 1


def test_sequential_rejects_plural_marking():
    with pytest.raises(MachineError):
        step_sequential(block({}), [1, 2])
