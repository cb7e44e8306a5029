import pytest

from core.aram.instruction import MachineConfig, assemble
from core.console import (
    cmd_add_earth,
    cmd_add_space,
    cmd_add_types,
    cmd_disasm,
    cmd_inspect,
    cmd_list,
    cmd_run,
    open_workspace,
    parse_machine,
    parse_value,
    render_value,
)
from core.corpus import corpus_path
from core.earth.compiler import EARTH_P
from core.earth.storage import Symbol
from core.earth.syntax import Interface
from core.errors import InputError, LibraryError


@pytest.fixture
def workspace():
    return open_workspace("sqlite://", "p=5,regs=65536")


@pytest.fixture
def inceq(workspace):
    cmd_add_earth(workspace, corpus_path("earth", "inceq5bit.dat"))
    return workspace


@pytest.mark.parametrize("value, expected, overflow", [("7", "8", "0"), ("31", "0", "1")])
def test_run_inceq5bit(inceq, value, expected, overflow):
    report = cmd_run(inceq, "inceq5bit", [f"ioput={value}"])
    assert report.succeeded
    assert report.outcome == "Success"
    assert dict(report.outputs) == {"ioput": expected, "overflow": overflow}
    assert 4 <= report.cycles <= 12
    assert report.error_bits == []


def test_run_by_index(inceq):
    report = cmd_run(inceq, "1", ["ioput=0"])
    assert report.module == "inceq5bit"
    assert dict(report.outputs)["ioput"] == "1"


def test_cycle_limit_report():
    workspace = open_workspace("sqlite://", max_cycles=1)
    cmd_add_earth(workspace, corpus_path("earth", "adder32.dat"))
    report = cmd_run(workspace, "adder32", ["addend=1", "addendum=2"])
    assert not report.succeeded
    assert report.outcome == "CycleLimit"
    assert report.cycles == 1


def test_prompted_inputs(inceq):
    asked = []

    def prompt(text):
        asked.append(text)
        return "30"

    report = cmd_run(inceq, "inceq5bit", prompt=prompt)
    assert len(asked) == 1 and asked[0].startswith("ioput")
    assert dict(report.outputs) == {"ioput": "31", "overflow": "0"}


def test_unknown_input_name(inceq):
    with pytest.raises(InputError, match="busy"):
        cmd_run(inceq, "inceq5bit", ["busy=1"])


def test_malformed_input(inceq):
    with pytest.raises(InputError):
        cmd_run(inceq, "inceq5bit", ["ioput=seven"])
    with pytest.raises(InputError):
        cmd_run(inceq, "inceq5bit", ["ioput"])


def test_phase2_needs_meta_module(inceq):
    with pytest.raises(InputError, match="메타"):
        cmd_run(inceq, "inceq5bit", ["ioput=1"], phase2=True)


def test_phase2_runs_both_phases(workspace):
    cmd_add_earth(workspace, corpus_path("earth", "progcopybit.dat"))
    data = workspace.modules["progcopybit"].size + 2
    report = cmd_run(workspace, "progcopybit", [f"source={(data << 5) | 3}", f"target={(data << 5) | 7}"], phase2=True)
    assert report.succeeded
    assert report.phase1_cycles is not None
    assert report.outputs == []


def test_trace_file(inceq, tmp_path):
    text_path = tmp_path / "trace.txt"
    report = cmd_run(inceq, "inceq5bit", ["ioput=0"], trace_path=str(text_path))
    lines = text_path.read_text(encoding="utf-8").splitlines()
    assert report.trace_path == str(text_path)
    assert lines[0] == "1,2"
    assert len(lines) == report.cycles + 1
    assert lines[-1] == ""

    csv_path = tmp_path / "trace.csv"
    cmd_run(inceq, "inceq5bit", ["ioput=0"], trace_path=str(csv_path))
    assert csv_path.read_text(encoding="utf-8").splitlines()[0] == "cycle,size,marking"


def test_run_does_not_change_library(inceq):
    before = inceq.modules["inceq5bit"].words.copy()
    cmd_run(inceq, "inceq5bit", ["ioput=5"])
    assert (inceq.modules.find("inceq5bit").words == before).all()


def test_inspect_parand32(workspace):
    cmd_add_earth(workspace, corpus_path("earth", "parand32.dat"))
    text = cmd_inspect(workspace, "parand32")
    assert "96 code lines" in text
    assert "entry markings: {1,2}" in text


def test_inspect_unknown_module(workspace):
    with pytest.raises(LibraryError):
        cmd_inspect(workspace, "nosuchmodule")


def test_list_on_empty_library(workspace):
    text = cmd_list(workspace)
    types, modules = text.split("[modules]")
    for name in ("unsigned", "int", "char", "float"):
        assert name in types
    assert modules.strip() == "(없음)"


def test_disasm_reassembles(inceq):
    module = inceq.modules["inceq5bit"]
    words = assemble(cmd_disasm(inceq, "inceq5bit"), MachineConfig(p=EARTH_P))
    assert [words[r] for r in sorted(words)] == [int(w) for w in module.words[: module.code_length]]


def test_duplicate_add(inceq):
    with pytest.raises(LibraryError):
        cmd_add_earth(inceq, corpus_path("earth", "inceq5bit.dat"))


def test_space_submodule_order(workspace):
    cmd_add_types(workspace, corpus_path("space", "typedef.dat"))
    for name in ("fullsubtractor", "inceq5bit", "progcopybit", "paror32"):
        cmd_add_earth(workspace, corpus_path("earth", f"{name}.dat"))
    with pytest.raises(LibraryError, match="서브모듈"):
        cmd_add_space(workspace, corpus_path("space", "euclid.dat"))
    cmd_add_space(workspace, corpus_path("space", "SUBTRACT32.dat"))
    cmd_add_space(workspace, corpus_path("space", "modulus.dat"))
    assert cmd_add_space(workspace, corpus_path("space", "euclid.dat")).startswith("euclid:")
    report = cmd_run(workspace, "euclid", ["a=12", "b=8"])
    assert report.succeeded
    assert dict(report.outputs)["gcd"] == "4"


def test_parse_machine():
    config = parse_machine("p=5,regs=1024")
    assert config.p == 5 and config.register_count == 1024
    with pytest.raises(InputError):
        parse_machine("q=3")
    with pytest.raises(InputError):
        parse_machine("p=five")


@pytest.mark.parametrize(
    "type_name, width, text, stored, shown",
    [
        ("BIT", 1, "1", 1, "1"),
        ("unsigned", 32, "4000000000", 4000000000, "4000000000"),
        ("int", 32, "-5", 0xFFFFFFFB, "-5"),
        ("REG", 32, "0xff", 255, "0x000000FF"),
        ("char", 8, "'A'", 65, "'A'"),
    ],
)
def test_value_rendering(type_name, width, text, stored, shown):
    symbol = Symbol("v", type_name, Interface.IOPUT, 1, 0, width)
    assert parse_value(symbol, text) == stored
    assert render_value(symbol, stored) == shown


@pytest.mark.parametrize("type_name, width, text", [("BIT", 1, "2"), ("unsigned", 32, "-1"), ("unsigned", 8, "256")])
def test_value_out_of_range(type_name, width, text):
    with pytest.raises(InputError):
        parse_value(Symbol("v", type_name, Interface.INPUT, 1, 0, width), text)


def test_array_values():
    symbol = Symbol("a", "unsigned", Interface.INPUT, 1, 0, 32, dims=(3,))
    assert parse_value(symbol, "[1, 2, 3]") == [1, 2, 3]
    assert render_value(symbol, [1, 2, 3]) == "[1, 2, 3]"
    with pytest.raises(InputError):
        parse_value(symbol, "1,2")
