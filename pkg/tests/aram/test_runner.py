import pytest

from core.aram import ErrorKind, MachineConfig, MemoryBlock, Opcode, Status, assemble, decode, make_word, run
from core.aram.image import load_image, save_image
from core.aram.runner import format_trace, run_module, trace_frame
from core.corpus import read_corpus
from core.errors import MachineError

CONFIG = MachineConfig(p=5, register_count=1024)


def load(name):
    memory = MemoryBlock(CONFIG)
    memory.load(assemble(read_corpus("aram", name), CONFIG))
    return memory


def set_bits(memory, register, bits):
    for k, b in enumerate(reversed(bits)):
        memory.set_bit(register, k, int(b))


def test_sequential_incrementer_register_sequence():
    memory = load("incrementer4.asm")
    set_bits(memory, 27, "0111")
    outcome = run(memory, mode="sequential", trace=True)
    assert outcome.status == Status.SUCCESS
    executed = [m[0] for m in outcome.trace if m]
    assert executed == [1, 2, 4, 7, 8, 10, 13, 14, 16, 19, 20, 21, 23, 24]
    assert memory.field(27, 0, 4) == 8
    assert memory.bit(28, 0) == 0


def test_sequential_incrementer_overflow():
    memory = load("incrementer4.asm")
    set_bits(memory, 27, "1111")
    outcome = run(memory, mode="sequential")
    assert outcome.succeeded
    # 적힌 목록대로면 bit 3 은 wrt0 27 3 없이 overflow 로 빠지므로 1 로 남는다
    assert memory.field(27, 0, 4) == 8
    assert memory.bit(28, 0) == 1


def test_and4_trace_1011():
    memory = load("and4.asm")
    set_bits(memory, 24, "1011")
    outcome = run(memory, trace=True)
    assert outcome.status == Status.SUCCESS
    assert outcome.trace == [[1, 2], [3, 4], [5, 10], [7, 11], [9], [15], [16], [20, 21], [23], []]
    assert memory.bit(24, 5) == 0


def test_and4_trace_1110():
    memory = load("and4.asm")
    set_bits(memory, 24, "1110")
    outcome = run(memory, trace=True)
    assert outcome.status == Status.SUCCESS
    # bit 0 이 0 이면 첫 cond 의 음의 결과 명령어 6 을 거친다
    assert outcome.trace == [[1, 2], [3, 4], [5, 10], [6, 12], [14, 18], [19], [20, 21], [23], []]
    assert memory.bit(24, 5) == 0


@pytest.mark.parametrize("value", range(16))
def test_and4_all_inputs(value):
    memory = load("and4.asm")
    memory.set_field(24, 0, 4, value)
    outcome = run(memory)
    assert outcome.succeeded
    assert memory.bit(24, 5) == int(value == 15)
    assert memory.error_bits() == []


def test_minimal_halting_program():
    memory = MemoryBlock(CONFIG)
    memory.load(assemble("wrt1 0 0\njump 3 0\nwrt0 0 0", CONFIG))
    outcome = run(memory)
    assert outcome.succeeded
    assert outcome.cycles == 2


def test_halt_beside_busy_write_is_write_fail():
    memory = MemoryBlock(CONFIG)
    memory.load(assemble("wrt1 0 0\nwrt0 0 0", CONFIG))
    outcome = run(memory)
    # 두 명령어 모두 (0,0) 에 쓴다
    assert outcome.error == ErrorKind.WRITE
    assert outcome.describe() == "Fail(WriteFail)"


def test_live_fail_when_marking_dies():
    memory = MemoryBlock(CONFIG)
    memory.load(assemble("wrt1 0 0\nwrt1 100 0", CONFIG))
    outcome = run(memory)
    assert outcome.error == ErrorKind.LIVE
    assert memory.bit(0, 4) == 1


def test_cycle_limit():
    memory = MemoryBlock(CONFIG)
    memory.load(assemble("wrt1 0 0\njump 3 0\njump 3 0", CONFIG))
    outcome = run(memory, max_cycles=50)
    assert outcome.status == Status.CYCLE_LIMIT
    assert outcome.cycles == 50


def test_runs_are_deterministic():
    traces = []
    for _ in range(2):
        memory = load("and4.asm")
        memory.set_field(24, 0, 4, 0b0111)
        traces.append((run(memory, trace=True).trace, memory.words.tobytes()))
    assert traces[0] == traces[1]


def test_module_run_until_busy_reset():
    memory = MemoryBlock(CONFIG)
    busy = (50, 0)
    memory.load({
        1: make_word(Opcode.WRT1, 50, 0, CONFIG),
        2: make_word(Opcode.JUMP, 3, 0, CONFIG),
        3: make_word(Opcode.WRT0, 50, 0, CONFIG),
    })
    outcome = run_module(memory, busy)
    assert outcome.succeeded
    assert outcome.cycles == 2


def test_module_run_without_reset_is_live_fail():
    memory = MemoryBlock(CONFIG)
    memory.load({1: make_word(Opcode.WRT1, 50, 0, CONFIG), 2: make_word(Opcode.WRT1, 51, 0, CONFIG)})
    outcome = run_module(memory, (50, 0))
    assert outcome.error == ErrorKind.LIVE


def test_trace_rendering():
    trace = [[1, 2], [3, 4], []]
    assert format_trace(trace) == "1,2\n3,4\n"
    frame = trace_frame(trace)
    assert list(frame["size"]) == [2, 2, 0]


def test_image_round_trip(tmp_path):
    memory = load("and4.asm")
    path = tmp_path / "and4.img"
    save_image(memory, path)
    assert path.stat().st_size == CONFIG.registers * 4
    restored = load_image(path, CONFIG)
    assert (restored.words == memory.words).all()
    listing = [str(decode(restored.word(r), CONFIG)) for r in range(1, 24)]
    assert listing[0] == "wrt1 0 0"
    assert listing[22] == "wrt0 0 0"
    assert len(listing) == 23


def test_all_zero_image_is_halts(tmp_path):
    path = tmp_path / "zero.img"
    save_image(MemoryBlock(CONFIG), path)
    restored = load_image(path, CONFIG)
    assert all(str(decode(restored.word(r), CONFIG)) == "wrt0 0 0" for r in range(1, 50))


def test_image_wrong_size(tmp_path):
    path = tmp_path / "bad.img"
    path.write_bytes(b"\x00" * 12)
    with pytest.raises(MachineError):
        load_image(path, CONFIG)
