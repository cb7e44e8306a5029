import logging

import pytest

from config.logging_config import setup_logging
from core.corpus import corpus_path
from main import EXIT_MACHINE, EXIT_OK, EXIT_USAGE, main


@pytest.fixture
def db(tmp_path):
    return f"sqlite:///{tmp_path / 'library.db'}"


def spatiale(db, *args):
    return main(["--db", db, "--log-level", "WARNING", *args])


def test_add_and_run(db, capsys):
    assert spatiale(db, "add-earth", str(corpus_path("earth", "inceq5bit.dat"))) == EXIT_OK
    assert "inceq5bit: index 1" in capsys.readouterr().out

    assert spatiale(db, "run", "inceq5bit", "--in", "ioput=31") == EXIT_OK
    out = capsys.readouterr().out
    assert "outcome: Success" in out
    assert "error bits: -" in out


def test_duplicate_add_exits_1(db, capsys):
    source = str(corpus_path("earth", "inceq5bit.dat"))
    assert spatiale(db, "add-earth", source) == EXIT_OK
    assert spatiale(db, "add-earth", source) == EXIT_USAGE
    assert "이미" in capsys.readouterr().err


def test_cycle_limit_exits_2(db, capsys):
    spatiale(db, "add-earth", str(corpus_path("earth", "adder32.dat")))
    code = spatiale(db, "run", "adder32", "--in", "addend=1", "--in", "addendum=2", "--max-cycles", "1")
    assert code == EXIT_MACHINE
    assert "outcome: CycleLimit" in capsys.readouterr().out


def test_compile_error_exits_1(db, tmp_path):
    broken = tmp_path / "broken.dat"
    broken.write_text("NAME: broken;\n\n    wrt1 nowhere\n", encoding="utf-8")
    assert spatiale(db, "add-earth", str(broken)) == EXIT_USAGE


def test_missing_file_exits_1(db, tmp_path):
    assert spatiale(db, "add-earth", str(tmp_path / "missing.dat")) == EXIT_USAGE


def test_usage_error_exits_1(db):
    with pytest.raises(SystemExit) as excinfo:
        spatiale(db, "run")
    assert excinfo.value.code == EXIT_USAGE


def test_unknown_module_exits_1(db):
    assert spatiale(db, "inspect", "nosuchmodule") == EXIT_USAGE


def test_library_survives_sessions(db, capsys):
    spatiale(db, "add-earth", str(corpus_path("earth", "inceq5bit.dat")))
    spatiale(db, "add-earth", str(corpus_path("earth", "parand32.dat")))
    capsys.readouterr()
    assert spatiale(db, "inspect", "2") == EXIT_OK
    assert "96 code lines" in capsys.readouterr().out


def test_report_is_reproducible(db, capsys):
    spatiale(db, "add-earth", str(corpus_path("earth", "inceq5bit.dat")))
    capsys.readouterr()
    spatiale(db, "run", "inceq5bit", "--in", "ioput=13")
    first = capsys.readouterr().out
    spatiale(db, "run", "inceq5bit", "--in", "ioput=13")
    assert capsys.readouterr().out == first


def test_setup_logging_is_idempotent(tmp_path):
    setup_logging(str(tmp_path))
    marked = [h for h in logging.getLogger().handlers if getattr(h, "_spatiale_handler", False)]
    setup_logging(str(tmp_path), console_level="ERROR")
    again = [h for h in logging.getLogger().handlers if getattr(h, "_spatiale_handler", False)]
    assert len(again) == len(marked) == 4
