import pytest

from core.aram import MachineConfig, Opcode, assemble, decode, disassemble, encode
from core.aram.instruction import Instruction
from core.errors import MachineError


@pytest.mark.parametrize(
    "word, expected",
    [
        (0x40000000, Instruction(Opcode.WRT1, 0, 0)),
        (0x00000000, Instruction(Opcode.WRT0, 0, 0)),
        (0xC0000061, Instruction(Opcode.JUMP, 3, 1)),
    ],
)
def test_decode_known_words(word, expected):
    assert decode(word, MachineConfig()) == expected


def test_encode_inverts_decode_on_random_words(rng):
    config = MachineConfig()
    for _ in range(500):
        word = rng.getrandbits(32)
        assert encode(decode(word, config), config) == word


def test_full_machine_size():
    config = MachineConfig()
    assert config.n == 32
    assert config.full_register_count == 33_554_432
    assert config.registers == 33_554_432


def test_p_below_three_rejected():
    with pytest.raises(MachineError):
        MachineConfig(p=2)


def test_encode_rejects_wide_offset():
    with pytest.raises(MachineError):
        encode(Instruction(Opcode.COND, 1, 32), MachineConfig())


def test_assemble_numbering_and_comments():
    config = MachineConfig()
    program = assemble("wrt1 0 0  // busy\n\n5 jump 7\ncond 9 3\n", config)
    assert sorted(program) == [1, 5, 6]
    assert decode(program[5], config) == Instruction(Opcode.JUMP, 7, 0)
    assert decode(program[6], config) == Instruction(Opcode.COND, 9, 3)


def test_assemble_rejects_duplicate_register():
    with pytest.raises(MachineError):
        assemble("1 wrt1 0 0\n1 wrt0 0 0", MachineConfig())


def test_disassemble_reassembles():
    config = MachineConfig()
    text = "1 wrt1 0 0\n2 jump 3 1\n3 cond 24 0\n4 wrt0 24 5"
    program = assemble(text, config)
    listing = disassemble([program[r] for r in sorted(program)], config)
    assert listing == text
    assert assemble(listing, config) == program
