import pytest

from core.aram import MachineConfig, MemoryBlock, Opcode, decode
from core.aram.runner import run_module
from core.corpus import read_corpus
from core.earth import execute, load_module, read_symbol, write_symbol
from core.errors import LibraryError, SpaceCompileError, UnsupportedConstructError
from core.space import compile_space, read_phase, submodule_map, trace_lines
from core.space.codegen import storage_base

CONFIG = MachineConfig(p=5, register_count=16384)

CHECKS = """module checks{{
  storage{{
    unsigned x ioput;
    unsigned y ioput;
    BIT flag output;
    BYTE small input;
    char letter output;
    OFST count input;
    unsigned ptr* input;
  }};
  submodules{{
    paror32 neqz;
    progcopybit pcopy;
  }};
  time: 0-0 cycles;
  code{{
    1: {copy} :: HALT ;;
  }};
}};
"""

SWAP = """module swap{
  storage{
    unsigned x ioput;
    unsigned y ioput;
    BIT b ioput;
    BIT c ioput;
  };
  time: 0-0 cycles;
  code{
    1: x -> y :: HALT ;;
       y -> x
       b -> c
       c -> b
  };
};
"""


def checks(copy):
    return CHECKS.format(copy=copy)


@pytest.mark.parametrize(
    "copy",
    [
        "x -> y",
        "small -> letter",
        "count -> x",
        "x -> count",
        "flag -> x",
        "x -> flag",
        "&flag -> pcopy.source",
        "&x -> pcopy.target.destn",
        "x -> ptr",
        "ptr -> y",
        "#7 -> count",
        "#-1 -> x",
        "$pair -> x",
        "(storage) -> y",
        "x -> neqz.input",
        "neqz.output -> flag",
    ],
)
def test_accepted_copies(types, library, copy):
    read_phase(checks(copy), types, library)


@pytest.mark.parametrize(
    "copy",
    [
        "#0 -> neqz.temp",
        "small -> x.destn",
        "#32 -> count",
        "x -> #3",
        "letter -> x",
        "&small -> x",
        "&flag -> pcopy.source.destn",
        "zzz -> x",
        "x -> pcopy[1].source",
        "$nothing -> x",
        "x.40 -> flag",
    ],
)
def test_rejected_copies(types, library, copy):
    with pytest.raises(SpaceCompileError):
        read_phase(checks(copy), types, library)


def test_repeated_right_identifier(types, library):
    text = checks("x -> y").replace("1: x -> y :: HALT ;;", "1: x -> y       :: HALT ;;\n       flag -> y")
    with pytest.raises(SpaceCompileError):
        read_phase(text, types, library)


def test_repeated_activation(types, library):
    text = checks("x -> y").replace("1: x -> y :: HALT ;;", "1: _neqz :: HALT ;;\n       _neqz")
    with pytest.raises(SpaceCompileError):
        read_phase(text, types, library)


def test_missing_submodule_class(types, library):
    text = checks("x -> y").replace("paror32 neqz;", "nosuchmodule neqz;")
    with pytest.raises(LibraryError):
        read_phase(text, types, library)


def test_contractions_are_rejected(types, library):
    text = checks("x -> y").replace("  time:", "  contractions{ neqz.input = pcopy.source; };\n  time:")
    with pytest.raises(UnsupportedConstructError):
        read_phase(text, types, library)


def test_crossing_copies_swap(types, library):
    module = compile_space(SWAP, types, library)
    run = execute(module, {"x": 11, "y": 22, "b": 1, "c": 0})
    assert run.outcome.succeeded
    assert run.outputs == {"x": 22, "y": 11, "b": 0, "c": 1}


def test_layout_of_plain_module(library):
    module = library.space("ADDER32")
    code = [decode(w, MachineConfig()) for w in module.words[:4]]
    busy = module.symbol("busy")
    assert (code[0].opcode, code[0].x, code[0].y) == (Opcode.WRT1, busy.register, busy.low)
    assert code[1].opcode == Opcode.JUMP
    assert not module.is_meta
    assert module.level == 1
    assert sorted(module.lines) == ["1", "2", "3", "4", "5"]
    assert [i["label"] for i in module.instances] == ["fadder", "inceq", "pcopy[0]", "pcopy[1]", "pcopy[2]"]
    bases = [i["base"] for i in module.instances]
    assert bases == sorted(bases) and bases[0] > module.code_length


def test_layout_of_meta_module(library):
    module = library.space("arrayreturn")
    code = [decode(w, MachineConfig()) for w in module.words[:4]]
    mbsy = module.symbol("mbsy")
    assert module.is_meta
    assert (code[2].opcode, code[2].x, code[2].y) == (Opcode.WRT1, mbsy.register, mbsy.low)
    assert code[3].opcode == Opcode.JUMP
    assert module.entry_markings == [(1, 2), (3, 4)]


def test_module_too_large_for_machine(types, library):
    source = library.space("ADDER32").source
    with pytest.raises(SpaceCompileError):
        compile_space(source, types, library, MachineConfig(p=5, register_count=64))


def test_submodule_map(library):
    columns = submodule_map(library.space("modulus"), library)
    assert [[n.module for n in column] for column in columns] == [
        ["fullsubtractor", "inceq5bit", "paror32", "progcopybit"],
        ["SUBTRACT32"],
        ["modulus"],
    ]
    assert columns[2][0].arguments == (("SUBTRACT32", 1), ("paror32", 1))
    assert columns[1][0].arguments == (("fullsubtractor", 1), ("inceq5bit", 1), ("progcopybit", 3))


def test_adder_line_sets_follow_state_machine(library):
    module = library.space("ADDER32")
    run = execute(module, {"addend": 0x0F0F0F0F, "addendum": 0x01010101}, trace=True)
    assert run.outcome.succeeded
    allowed = [{"1"}, {"2", "3"}, {"4"}, {"5"}]
    live = [s for s in trace_lines(module, run.outcome.trace) if s]
    assert all(any(s <= group for group in allowed) for s in live)
    order = [min(s) for s in live]
    assert order[0] == "1" and order[-1] == "5"
    assert set().union(*live) == {"1", "2", "3", "4", "5"}


def test_relocated_module_runs(library):
    module = library.space("ADDER32")
    base = 300
    memory = MemoryBlock(MachineConfig(p=5, register_count=base + module.size + 16))
    load_module(module, memory, base)
    write_symbol(memory, module, "addend", 123456, base)
    write_symbol(memory, module, "addendum", 654321, base)
    outcome = run_module(memory, module.busy_bit(1, base), (base, base + 1))
    assert outcome.succeeded
    assert read_symbol(memory, module, "sum", base) == 777777


def test_repeated_runs_give_equal_outputs(library):
    module = library.space("ADDER32")
    first = execute(module, {"addend": 0xFFFFFFFF, "addendum": 2})
    again = execute(module, {"addend": 0xFFFFFFFF, "addendum": 2}, memory=first.memory)
    assert first.outputs == again.outputs == {"sum": 1, "carrybit": 1}


def test_storage_allocator(types, library):
    module = compile_space(read_corpus("space", "unsignedmalloc.dat"), types, library, CONFIG)
    top = storage_base(CONFIG)
    memory = MemoryBlock(CONFIG)
    load_module(module, memory)
    memory.set_field(top, 0, 32, 12500)
    first = execute(module, memory=memory)
    assert first.outcome.succeeded
    assert first.outputs["newpointer"] == 12500
    second = execute(module, memory=memory)
    assert second.outputs["newpointer"] == 12501
    assert memory.field(top, 0, 32) == 12502


def test_pointer_dereference(types, library):
    module = compile_space(read_corpus("space", "derefunsigned.dat"), types, library, CONFIG)
    memory = MemoryBlock(CONFIG)
    load_module(module, memory)
    memory.set_field(10000, 0, 32, 0xCAFEF00D)
    run = execute(module, {"newpointer": 10000}, memory=memory)
    assert run.outcome.succeeded
    assert run.outputs["value"] == 0xCAFEF00D


def test_array_return_meta_phases(types, library):
    module = library.space("arrayreturn")
    memory = MemoryBlock(CONFIG)
    load_module(module, memory)
    data = [1000 + 7 * k for k in range(8)]
    for k, value in enumerate(data):
        memory.set_field(10000 + k, 0, 32, value)
    first = execute(module, {"address": 10000, "index": 5}, memory=memory)
    assert first.outcome.succeeded
    second = execute(module, phase=2, memory=memory)
    assert second.outcome.succeeded
    assert read_symbol(memory, module, "value") == data[5]
