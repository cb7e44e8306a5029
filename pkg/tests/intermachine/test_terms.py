import random

import pytest

from core.errors import InterstringError
from core.intermachine import (
    Apply,
    Const,
    Var,
    addgraph,
    addtree,
    eval_term,
    fib,
    height,
    integer_model,
    random_term,
    read_term,
    write_term,
    xyfib_counts,
    xyfib_term,
)
from core.intermachine.terms import wrap64

MODEL = integer_model()
FIG_TERM = "(* (+ (+ x y) (* y z)) (- (+ x y) (* y z)))"


def test_eval_dataflow_term():
    assert eval_term(read_term(FIG_TERM), MODEL, {"x": 1, "y": 2, "z": 3}) == -27


def test_eval_const_and_id():
    assert eval_term(Const("7"), MODEL, {}) == 7
    term = Apply("Id", Var("x"), Var("y"))
    assert eval_term(term, MODEL, {"x": 5, "y": 9}) == 5


def test_eval_errors():
    with pytest.raises(InterstringError):
        eval_term(Var("q"), MODEL, {"x": 1})
    with pytest.raises(InterstringError):
        eval_term(Apply("/", Var("x"), Var("x")), MODEL, {"x": 1})
    with pytest.raises(InterstringError):
        eval_term(Const("pi"), MODEL, {})


def test_wrap64():
    assert wrap64(2**63) == -(2**63)
    assert wrap64(-1) == -1
    assert eval_term(read_term("(* x x)"), MODEL, {"x": 2**40}) == 0


def test_read_write():
    term = read_term("  (+ x\n (* y 3))")
    assert term == Apply("+", Var("x"), Apply("*", Var("y"), Const("3")))
    assert write_term(term) == "(+ x (* y 3))"
    assert str(term) == "(+ x (* y 3))"
    assert height(term) == 2


@pytest.mark.parametrize("text", ["", "(+ x)", "(+ x y z)", "(+ x y", ")", "x y", "(( x y)", "Id"])
def test_read_errors(text):
    with pytest.raises(InterstringError):
        read_term(text)


def test_random_term_reproducible():
    first = [write_term(random_term(random.Random(7), 6)) for _ in range(3)]
    second = [write_term(random_term(random.Random(7), 6)) for _ in range(3)]
    assert first == second
    assert all(height(read_term(t)) <= 6 for t in first)


@pytest.mark.parametrize("n, expected", [(0, (0, 0)), (1, (0, 0)), (2, (1, 1)), (5, (7, 4))])
def test_xyfib_counts(n, expected):
    assert xyfib_counts(n) == expected


def test_addtree_counts_tree_additions():
    # 트리 항의 '+' 개수와 점화식이 같다
    for n in range(12):
        assert write_term(xyfib_term(n)).count("+") == addtree(n)


def test_growth_law():
    for n in range(4, 31):
        assert addtree(n) > fib(n)
        assert addgraph(n) == n - 1
    assert addtree(10) > fib(10) == 55


def test_xyfib_five():
    # xyfib(5) = ((((x+y)+y)+(x+y))+((x+y)+y)) 와 같은 값
    assert eval_term(xyfib_term(5), MODEL, {"x": 1, "y": 10}) == 3 * 1 + 5 * 10


def test_negative_n():
    with pytest.raises(ValueError):
        addtree(-1)
