"""
인터머신 패키지: 트리 항 언어, kVC 메모리와 인터스트링, 항 컴파일러
"""

from core.intermachine.compiler import compile_term, conjoin
from core.intermachine.growth import addgraph, addtree, fib, xyfib_counts, xyfib_term
from core.intermachine.interstring import (
    AlphaColumn,
    BetaColumn,
    Interstring,
    VCMemory,
    cycle,
    denote,
    lift,
    parse_interstring,
    render_interstring,
    step_column,
)
from core.intermachine.sharing import dedup_columns
from core.intermachine.terms import (
    ID,
    Apply,
    Const,
    Model,
    Var,
    eval_term,
    height,
    integer_model,
    random_term,
    read_term,
    variables,
    write_term,
)

__all__ = [
    "compile_term",
    "conjoin",
    "addgraph",
    "addtree",
    "fib",
    "xyfib_counts",
    "xyfib_term",
    "AlphaColumn",
    "BetaColumn",
    "Interstring",
    "VCMemory",
    "cycle",
    "denote",
    "lift",
    "parse_interstring",
    "render_interstring",
    "step_column",
    "dedup_columns",
    "ID",
    "Apply",
    "Const",
    "Model",
    "Var",
    "eval_term",
    "height",
    "integer_model",
    "random_term",
    "read_term",
    "variables",
    "write_term",
]
