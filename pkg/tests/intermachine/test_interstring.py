import pytest

from core.errors import InterstringError
from core.intermachine import (
    AlphaColumn,
    BetaColumn,
    Interstring,
    VCMemory,
    Var,
    cycle,
    denote,
    integer_model,
    parse_interstring,
    render_interstring,
    step_column,
)

MODEL = integer_model()


def test_alpha_id_preserves_first_input():
    sigma = [0, 4, 5, 0, 1, 1, 1]
    after = step_column(sigma, AlphaColumn((("Id", 1),)), MODEL)
    assert after == [0, 4, 5, 4, 1, 1, 1]
    # 원래 메모리는 그대로
    assert sigma[3] == 0


def test_alpha_writes_each_fu_output():
    sigma = [0, 2, 3, 0, 10, 4, 0]
    after = step_column(sigma, AlphaColumn((("*", 1), ("-", 2))), MODEL)
    assert after == [0, 2, 3, 6, 10, 4, 6]


def test_beta_copy_to_output_cell():
    after = step_column([0, 1, 2, 9], BetaColumn(((3, 0),)), MODEL)
    assert after == [9, 1, 2, 9]


def test_beta_is_read_then_write():
    after = step_column([0, 1, 2, 3], BetaColumn(((1, 2), (2, 1))), MODEL)
    assert after[1:3] == [2, 1]
    # 차례로 읽고 쓰면 두 셀이 같은 값이 된다
    sequential = [0, 1, 2, 3]
    for source, target in ((1, 2), (2, 1)):
        sequential[target] = sequential[source]
    assert sequential[1:3] == [1, 1]


@pytest.mark.parametrize(
    "column",
    [
        AlphaColumn((("+", 1), ("*", 1))),
        AlphaColumn((("+", 0),)),
        AlphaColumn((("+", 2),)),
        BetaColumn(((1, 2), (3, 2))),
        BetaColumn(((0, 2),)),
        BetaColumn(((1, 4),)),
    ],
)
def test_column_constraints(column):
    with pytest.raises(InterstringError):
        step_column([0, 1, 2, 3], column, MODEL)


def test_base_pair_denotes_leaf():
    psi = VCMemory([Var("x")] * 4)
    y = Interstring(1, [AlphaColumn((("Id", 1),)), BetaColumn(((3, 0),))])
    y.validate()
    assert denote(psi, y, MODEL, {"x": 42}) == 42


def test_validate_rules():
    alpha = AlphaColumn((("Id", 1),))
    with pytest.raises(InterstringError):
        Interstring(1, []).validate()
    with pytest.raises(InterstringError):
        Interstring(1, [alpha]).validate()
    with pytest.raises(InterstringError):
        Interstring(1, [BetaColumn(((3, 0),)), alpha]).validate()
    with pytest.raises(InterstringError):
        Interstring(1, [alpha, BetaColumn(((2, 0),))]).validate()
    with pytest.raises(InterstringError):
        Interstring(1, [alpha, BetaColumn(((3, 0), (1, 2)))]).validate()


def test_memory_size():
    with pytest.raises(InterstringError):
        VCMemory([Var("x")] * 5)


def test_dimension_mismatch():
    psi = VCMemory([Var("x")] * 7)
    y = Interstring(1, [AlphaColumn((("Id", 1),)), BetaColumn(((3, 0),))])
    with pytest.raises(InterstringError):
        denote(psi, y, MODEL, {"x": 1})


def test_cycle_prefix():
    y = parse_interstring("+(1) :: 3->1 :: +(1) :: 3->0 ;;", 1)
    assert cycle(1, [0, 2, 5, 0], y, MODEL) == [0, 2, 5, 7]
    assert cycle(3, [0, 2, 5, 0], y, MODEL) == [0, 7, 5, 12]
    with pytest.raises(InterstringError):
        cycle(5, [0, 2, 5, 0], y, MODEL)


def test_render_and_parse():
    text = "+(1) *(2) :: 3->1 6->2 :: +(1) :: _ :: _ :: 3->0 ;;"
    y = parse_interstring(text, 2)
    assert len(y) == 6
    assert y.alpha_entries == 3
    assert render_interstring(y) == text


@pytest.mark.parametrize("text", ["+(1) :: 3->0", "+(1) :: 3-0 ;;", "3->1 :: 3->0 ;;", "+(3) :: 3->0 ;;"])
def test_parse_errors(text):
    with pytest.raises(InterstringError):
        parse_interstring(text, 1)
