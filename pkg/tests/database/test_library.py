import numpy as np
import pytest

from core.corpus import read_corpus
from core.database.library import (
    ModuleLibrary,
    TypeLibrary,
    export_module,
    import_module,
    load_corpus,
    open_libraries,
)
from core.earth import compile_earth, execute
from core.errors import LibraryError

INCEQ = read_corpus("earth", "inceq5bit.dat")
PARAND = read_corpus("earth", "parand32.dat")


@pytest.fixture
def modules():
    return ModuleLibrary("sqlite://")


def test_add_then_get_same_words(tmp_path):
    url = f"sqlite:///{tmp_path / 'lib.db'}"
    compiled = compile_earth(INCEQ)
    index = ModuleLibrary(url).add(compiled)
    # 새 라이브러리 객체는 레코드에서 다시 읽는다
    fresh = ModuleLibrary(url)
    stored = fresh["inceq5bit"]
    assert np.array_equal(stored.words, compiled.words)
    assert stored.index == index
    assert stored.time == (4, 12)
    assert stored.symbols.keys() == compiled.symbols.keys()
    assert fresh.find(index).name == "inceq5bit"


def test_indices_increase(modules):
    first = modules.add(compile_earth(INCEQ))
    second = modules.add(compile_earth(PARAND))
    assert second == first + 1
    assert list(modules) == ["inceq5bit", "parand32"]
    assert len(modules) == 2


def test_duplicate_name_rejected(modules):
    modules.add_earth(INCEQ)
    with pytest.raises(LibraryError):
        modules.add_earth(INCEQ)
    assert len(modules) == 1


def test_find_unknown(modules):
    with pytest.raises(LibraryError):
        modules.find("nosuchmodule")
    with pytest.raises(LibraryError):
        modules.find(99)
    assert "nosuchmodule" not in modules


def test_find_accepts_digit_string(modules):
    index = modules.add_earth(INCEQ).index
    assert modules.find(str(index)).name == "inceq5bit"


def test_stored_module_runs(earth_library):
    run = execute(earth_library.find("inceq5bit"), {"ioput": 31})
    assert run.outcome.succeeded
    assert run.outputs["ioput"] == 0
    assert run.outputs["overflow"] == 1


def test_stored_meta_module_keeps_phases(earth_library):
    module = earth_library["progcopybit"]
    assert module.is_meta
    assert module.entry_markings == [(1, 2), (3, 4)]
    assert module.code_length == 379


def test_records_list(earth_library):
    records = earth_library.records()
    assert [r.name for r in records] == list(earth_library)
    parand = next(r for r in records if r.name == "parand32")
    assert parand.code_length == 96
    assert parand.kind == "earth"


def test_type_library_preloaded():
    types = TypeLibrary("sqlite://")
    for name in ("BIT", "BYTE", "WORD", "REGISTER", "unsigned", "int", "char"):
        assert name in types
    assert types.get("REGISTER").level == 0


def test_type_library_persists(tmp_path):
    url = f"sqlite:///{tmp_path / 'lib.db'}"
    types = TypeLibrary(url)
    added = types.add_text(read_corpus("space", "typedef.dat"))
    assert "pair" in [t.name for t in added]
    reopened = TypeLibrary(url)
    assert reopened.get("pair").size == 2
    assert reopened.get("matrix4").size == 20
    with pytest.raises(LibraryError):
        reopened.add_text("begintypes pair{ unsigned a; }; endtypes")


def test_module_indices_stable_across_sessions(tmp_path):
    url = f"sqlite:///{tmp_path / 'lib.db'}"
    ModuleLibrary(url).add_earth(INCEQ)
    reopened = ModuleLibrary(url)
    assert reopened.add_earth(PARAND).index == 2
    assert reopened.find(1).name == "inceq5bit"


def test_space_needs_submodules_first():
    modules, types = open_libraries("sqlite://")
    types.add_text(read_corpus("space", "typedef.dat"))
    with pytest.raises(LibraryError, match="서브모듈"):
        modules.add_space(read_corpus("space", "euclid.dat"), types.table)


@pytest.mark.slow
def test_load_corpus_dependency_order():
    modules, types = open_libraries("sqlite://")
    added = load_corpus(modules, types)
    assert added.index("modulus") < added.index("euclid")
    assert "ADDER32" in modules and "inceq5bit" in modules
    # 다시 적재하면 아무것도 추가하지 않는다
    assert load_corpus(modules, types) == []


def test_export_and_import(tmp_path, earth_library):
    module = earth_library["adder32"]
    image = export_module(module, tmp_path)
    assert image.stat().st_size == 4 * module.size
    assert (tmp_path / "adder32.json").exists()
    words = np.fromfile(image, dtype="<u4")
    assert np.array_equal(words, module.words)
    restored = import_module(image)
    assert restored.code_length == 138
    assert restored.symbols.keys() == module.symbols.keys()
