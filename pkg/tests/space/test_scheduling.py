import pytest

from core.aram import MachineConfig, MemoryBlock, Opcode, Status, make_word
from core.aram.runner import run_module
from core.errors import SpaceCompileError
from core.space import emit_barrier, emit_jump_tree, jump_tree
from core.space.assembler import Assembler
from core.space.scheduling import GATE_INPUTS, ControlBits, emit_delay, register_runs


def launch(asm_words, root, registers):
    """레지스터 1 의 jump 로 root 를 표시하는 메모리"""
    config = MachineConfig(p=5, register_count=registers)
    memory = MemoryBlock(config)
    memory.words[1] = make_word(Opcode.JUMP, root, 0, config)
    memory.words[2:2 + len(asm_words)] = asm_words
    return memory


@pytest.mark.parametrize(
    "n, registers, cycles",
    [(1, 1, 1), (31, 32, 2), (32, 33, 2), (33, 36, 3), (1000, 1033, 3), (1024, 1057, 3), (65536, 67651, 5)],
)
def test_jump_tree_size(n, registers, cycles):
    assert jump_tree(n) == (registers, cycles)


def test_jump_tree_is_smaller_than_twice_n():
    for n in range(1, 100001, 997):
        assert jump_tree(n)[0] < 2 * n


def test_jump_tree_rejects_zero():
    with pytest.raises(SpaceCompileError):
        jump_tree(0)


def build_tree(n):
    asm = Assembler(start=2)
    tree = emit_jump_tree(asm, [(("target", k), 0) for k in range(n)])
    asm.mark("target")
    for k in range(n):
        asm.emit(Opcode.WRT1, ("data", k // 32), k % 32)
    asm.mark("data")
    for _ in range(-(-n // 32) + 1):
        asm.data(0)
    return asm, tree


@pytest.mark.parametrize("n", [1, 31, 32, 33, 1000])
def test_jump_tree_starts_all_threads_together(n):
    asm, tree = build_tree(n)
    config = MachineConfig(p=5, register_count=asm.here + 8)
    words, _, _ = asm.finalize(config)
    assert tree.registers == jump_tree(n)[0]
    assert tree.cycles == jump_tree(n)[1]

    memory = launch(words, tree.entry, config.registers)
    idle = (asm.labels["data"] + (-(-n // 32)), 0)
    outcome = run_module(memory, idle, marking=[1], trace=True)
    assert outcome.succeeded
    # 시작 jump 1 사이클, 나무 층마다 1 사이클, 쓰기 1 사이클
    assert outcome.cycles == 1 + tree.cycles + 1
    writes = outcome.trace[-2]
    assert len(writes) == n
    data = asm.labels["data"]
    assert all(memory.bit(data + k // 32, k % 32) == 1 for k in range(n))


@pytest.mark.slow
def test_jump_tree_65536_threads():
    n = 65536
    asm, tree = build_tree(n)
    config = MachineConfig(p=5, register_count=asm.here + 8)
    words, _, _ = asm.finalize(config)
    memory = launch(words, tree.entry, config.registers)
    outcome = run_module(memory, (asm.labels["data"] + n // 32, 0), marking=[1])
    assert outcome.succeeded
    assert outcome.cycles == 1 + 5 + 1


def test_register_runs_groups_consecutive_registers():
    assert register_runs([5, 6, 7, 9, 10]) == [(5, 2), (9, 1)]
    assert register_runs(list(range(1, 41))) == [(1, 31), (33, 7)]


def build_barrier(n):
    """감시 비트 n 개 barrier. 끝나면 busy 비트를 내린다."""
    asm = Assembler(start=2)
    control = ControlBits()
    watched = [(("watch", k // 32), k % 32) for k in range(n)]
    fragment = emit_barrier(asm, watched, "done", control)
    asm.mark("done")
    asm.emit(Opcode.WRT0, "busy", 0)
    asm.mark("busy")
    asm.data(1)
    asm.mark(control.label)
    for _ in range(control.registers):
        asm.data(0)
    asm.mark("watch")
    for _ in range(-(-n // 32)):
        asm.data(0)
    return asm, fragment


@pytest.mark.parametrize("n", [1, 8, 9, 64, 1024])
def test_barrier_releases_when_bits_are_reset(n):
    asm, fragment = build_barrier(n)
    config = MachineConfig(p=5, register_count=asm.here + 8)
    words, _, _ = asm.finalize(config)
    memory = launch(words, fragment.entry, config.registers)
    outcome = run_module(memory, (asm.labels["busy"], 0), marking=[1])
    assert outcome.succeeded
    assert outcome.cycles <= 100
    assert fragment.registers <= 14 * n


def build_released_barrier(n, wait):
    """마지막 감시 비트가 켜진 채 시작하고, 따로 도는 thread 가 wait 사이클 뒤 그 비트를 내린다"""
    asm = Assembler(start=2)
    control = ControlBits()
    watched = [(("watch", k // 32), k % 32) for k in range(n)]
    fragment = emit_barrier(asm, watched, "done", control)
    delay = emit_delay(asm, wait, "release")
    fork = asm.emit(Opcode.JUMP, fragment.entry, 0)
    asm.emit(Opcode.JUMP, delay, 0)
    asm.mark("release")
    asm.emit(Opcode.WRT0, watched[-1][0], watched[-1][1])
    asm.mark("done")
    asm.emit(Opcode.WRT0, "busy", 0)
    asm.mark("busy")
    asm.data(1)
    asm.mark(control.label)
    for _ in range(control.registers):
        asm.data(0)
    asm.mark("watch")
    for _ in range(-(-n // 32)):
        asm.data(0)
    return asm, fork


def chain_levels(n):
    levels, width = 1, n
    while width > GATE_INPUTS:
        width = -(-width // GATE_INPUTS)
        levels += 1
    return levels


@pytest.mark.parametrize("n", [1, 9, 64, 1024])
@pytest.mark.parametrize("wait", [5, 40])
def test_barrier_release_latency(n, wait):
    asm, fork = build_released_barrier(n, wait)
    config = MachineConfig(p=5, register_count=asm.here + 8)
    words, _, _ = asm.finalize(config)
    memory = launch(words, fork, config.registers)
    # 레지스터 1 이 barrier 와 지연 사슬을 함께 표시한다
    memory.words[1] = make_word(Opcode.JUMP, fork, 1, config)
    memory.set_bit(asm.labels["watch"] + (n - 1) // 32, (n - 1) % 32, 1)
    outcome = run_module(memory, (asm.labels["busy"], 0), marking=[1])
    assert outcome.succeeded
    released = 1 + 1 + wait + 1
    assert outcome.cycles > released
    # 비트가 내려간 뒤에는 사슬 층마다 한 바퀴 검사가 남는다 (상수는 reset/launch tree 와 완료 jump)
    assert outcome.cycles <= released + chain_levels(n) * (2 * GATE_INPUTS + 4) + 16


def test_single_bit_barrier_is_one_chain():
    asm, fragment = build_barrier(1)
    # cond, 다음 jump, 대기 jump, 뿌리 jump
    assert fragment.registers == 4


def test_barrier_waits_while_a_bit_is_set():
    asm, fragment = build_barrier(64)
    config = MachineConfig(p=5, register_count=asm.here + 8)
    words, _, _ = asm.finalize(config)
    memory = launch(words, fragment.entry, config.registers)
    memory.set_bit(asm.labels["watch"] + 1, 17, 1)
    outcome = run_module(memory, (asm.labels["busy"], 0), marking=[1], max_cycles=500)
    assert outcome.status == Status.CYCLE_LIMIT
    assert memory.bit(asm.labels["busy"], 0) == 1


def test_barrier_rejects_empty_bit_list():
    with pytest.raises(SpaceCompileError):
        emit_barrier(Assembler(), [], "done", ControlBits())
