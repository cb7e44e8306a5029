import pytest

from core.aram import MachineConfig, Opcode, decode
from core.corpus import read_corpus
from core.earth import (
    CompiledModule,
    compile_earth,
    eval_numex,
    expand_earth,
    listing,
    parse_earth,
    parse_numex,
    replicate,
)
from core.earth.numex import NumexKind
from core.errors import EarthCompileError, EarthSyntaxError

CONFIG = MachineConfig(p=5)

HEADER = """NAME: tiny;
BITS: busy private, flag output;
BYTES: value input;
TIME: 1-4 cycles;
"""


def source(code):
    return HEADER + "\n" + code + "\n    endc\n"


@pytest.mark.parametrize(
    "text, kind, env, expected",
    [
        ("7", NumexKind.INT, {}, 7),
        ("i", NumexKind.REP, {"i": 5}, 5),
        ("(2*i)", NumexKind.INT_TIMES_REP, {"i": 4}, 8),
        ("(1+i)", NumexKind.INT_PLUS_REP, {"i": 4}, 5),
        ("(3+2*i)", NumexKind.INT_PLUS_INT_TIMES_REP, {"i": 4}, 11),
        ("(1+i+j)", NumexKind.INT_PLUS_REP_PLUS_REP, {"i": 2, "j": 3}, 6),
        ("(31-i)", NumexKind.INT_MINUS_REP, {"i": 0}, 31),
        ("(i+8*j)", NumexKind.REP_PLUS_INT_TIMES_REP, {"i": 1, "j": 2}, 17),
    ],
)
def test_numex_forms(text, kind, env, expected):
    numex = parse_numex(text)
    assert numex.kind == kind
    assert eval_numex(numex, env) == expected
    assert str(numex) == text


def test_numex_whitespace_inside_parentheses():
    assert parse_numex("( 3 + 2 * i )") == parse_numex("(3+2*i)")


@pytest.mark.parametrize("text", ["(i*2)", "(i-3)", "(1+2+i)", "i+1", "(2*i*j)", "-3"])
def test_numex_rejects_other_shapes(text):
    with pytest.raises(EarthSyntaxError):
        parse_numex(text)


def test_numex_leading_number():
    assert parse_numex("(12+3*i)").leading == 12
    assert parse_numex("(31-k)").leading == 31
    # (f*r), r, (r1+f*r2) 에는 선두 수가 없다
    assert parse_numex("(2*i)").leading is None
    assert parse_numex("i").leading is None


def test_numex_unbound_and_negative():
    with pytest.raises(EarthCompileError):
        parse_numex("(1+i)").evaluate({})
    with pytest.raises(EarthCompileError):
        parse_numex("(3-i)").evaluate({"i": 4})


def test_numex_bind_one_of_two_replicators():
    bound = parse_numex("(1+i+j)").bind("i", 3)
    assert bound.kind == NumexKind.INT_PLUS_REP
    assert bound.leading == 4
    assert bound.evaluate({"j": 2}) == 6
    assert parse_numex("(2+i)").bind("i", 5).evaluate({}) == 7


def test_seqand8_expansion():
    text = read_corpus("earth", "seqand8.dat")
    code = expand_earth(text)
    assert len(code) == 15
    # endc 를 포함하면 16 줄
    assert len(replicate(parse_earth(text).code)) == 16
    assert str(code[0]) == "wrt1 busy"
    conds = [str(instr) for instr in code if instr.op == "cond"]
    assert conds == ["cond input.0", "cond input.1", "cond input.2", "cond input.3"]


def test_jumpchain_dashed_expansion():
    code = expand_earth(read_corpus("earth", "jumpchain.dat"))
    jumps = [instr for instr in code if instr.op == "jump"]
    assert len(jumps) == 33
    chain = [instr for instr in code if instr.op == "jump" and instr.linename is not None]
    assert [instr.linename.constant for instr in chain] == list(range(1, 33))
    assert [instr.x.constant for instr in chain] == list(range(2, 34))
    # 구조 뒤의 linename 2 는 복제된 linename 수만큼 밀려난다
    assert code[-1].op == "wrt0" and code[-1].linename.constant == 33


def test_nested_replication_counts():
    code = expand_earth(
        source(
            """    wrt1 busy
<0;i;2>{
    <0;j;3>{
    cond value.j
    }
}
    wrt0 busy"""
        )
    )
    assert len(code) == 1 + 3 * 4 + 1
    assert [str(instr) for instr in code[1:5]] == [f"cond value.{j}" for j in range(4)]


def test_nested_replication_shifts_later_linenames():
    # 앞 구조의 증가분이 적용된 목록에서 다음 구조의 floor 를 계산해야 한다
    code = expand_earth(read_corpus("earth", "parand32.dat"))
    named = {instr.linename.constant: str(instr) for instr in code if instr.linename is not None}
    assert named[11] == "jump 16 0"
    names = [instr.linename.constant for instr in code if instr.linename is not None]
    assert len(names) == len(set(names))
    assert compile_earth(read_corpus("earth", "parand32.dat")).code_length == 96


def test_replication_with_equal_limits_runs_once():
    code = expand_earth(source("    wrt1 busy\n<2;i;2>{\n    cond value.i\n}\n    wrt0 busy"))
    assert [str(instr) for instr in code] == ["wrt1 busy", "cond value.2", "wrt0 busy"]


def test_replication_left_above_right_fails():
    with pytest.raises(EarthCompileError):
        compile_earth(source("    wrt1 busy\n<3;i;2>{\n    cond value.i\n}\n    wrt0 busy"))


def test_compile_tiny_module_layout():
    compiled = compile_earth(
        source(
            """    wrt1 busy
    cond value.2
    jump 1 0
    jump 2 0
1   wrt1 flag
    jump 2 0
2   wrt0 busy"""
        )
    )
    assert isinstance(compiled, CompiledModule)
    assert compiled.name == "tiny"
    assert compiled.code_length == 7
    assert compiled.time == (1, 4)
    code = [decode(w, CONFIG) for w in compiled.words[: compiled.code_length]]
    assert code[0].opcode == Opcode.WRT1
    # linename 1 은 레지스터 5, linename 2 는 레지스터 7
    assert (code[2].opcode, code[2].x) == (Opcode.JUMP, 5)
    assert (code[3].opcode, code[3].x) == (Opcode.JUMP, 7)
    assert code[1].y == compiled.symbol("value").bit_of(2)
    assert listing(compiled).splitlines()[0].startswith("1 wrt1 ")


def test_relocation_moves_relative_destinations_only():
    compiled = compile_earth(
        source(
            """    wrt1 busy
    wrt1 3 4
    jump 1 0
1   wrt0 busy"""
        )
    )
    assert compiled.absolute == [2]
    moved = compiled.relocated(10, CONFIG)
    original = [decode(w, CONFIG) for w in compiled.words]
    shifted = [decode(w, CONFIG) for w in moved]
    assert shifted[0].x == original[0].x + 9
    assert (shifted[1].x, shifted[1].y) == (3, 4)
    assert shifted[2].x == 4 + 9


def test_dict_round_trip_keeps_words():
    compiled = compile_earth(read_corpus("earth", "inceq5bit.dat"))
    again = CompiledModule.from_dict(compiled.to_dict())
    assert list(again.words) == list(compiled.words)
    assert again.symbols == compiled.symbols
    assert again.time == compiled.time


@pytest.mark.parametrize(
    "code, error",
    [
        ("    wrt1 busy\n    cond nothing.0\n    wrt0 busy", EarthCompileError),
        ("    wrt1 busy\n    cond value.9\n    wrt0 busy", EarthCompileError),
        ("    wrt1 busy\n    cond flag.0\n    wrt0 busy", EarthCompileError),
        ("    wrt1 busy\n    jump 4 0\n    wrt0 busy", EarthCompileError),
        ("    wrt1 busy\n1   jump 1 0\n1   wrt0 busy", EarthCompileError),
        ("    wrt1 busy\n    move value\n    wrt0 busy", EarthSyntaxError),
        ("    wrt1 busy\n<0;i;3>{\n    cond value.i\n    wrt0 busy", EarthSyntaxError),
    ],
)
def test_compile_errors(code, error):
    with pytest.raises(error):
        compile_earth(source(code))


def test_declaration_errors():
    with pytest.raises(EarthSyntaxError):
        compile_earth("BITS: busy private;\nTIME: 1-1 cycles;\n    wrt0 busy\n    endc\n")
    with pytest.raises(EarthSyntaxError):
        compile_earth("NAME: nobusy;\nBITS: flag output;\nTIME: 1-1 cycles;\n    wrt0 flag\n    endc\n")
    with pytest.raises(EarthSyntaxError):
        compile_earth("NAME: slow;\nBITS: busy private;\nTIME: 9-1 cycles;\n    wrt0 busy\n    endc\n")


def test_compile_error_carries_module_and_line():
    with pytest.raises(EarthCompileError) as info:
        compile_earth(source("    wrt1 busy\n    cond nothing.0\n    wrt0 busy"))
    assert info.value.module == "tiny"
    assert "tiny" in str(info.value)
