import pytest

from core.corpus import read_corpus
from core.earth import execute
from core.space import compile_space

MASK = 0xFFFFFFFF


def run(library, name, inputs):
    result = execute(library.space(name), inputs)
    assert result.outcome.succeeded, result.outcome.describe()
    return result.outputs


@pytest.mark.parametrize(
    "addend, addendum",
    [(0, 0), (5, 7), (0xFFFFFFFF, 1), (0x89ABCDEF, 0x76543210), (0x80000000, 0x80000000)],
)
def test_adder32_space(library, addend, addendum):
    outputs = run(library, "ADDER32", {"addend": addend, "addendum": addendum})
    total = addend + addendum
    assert outputs == {"sum": total & MASK, "carrybit": total >> 32}


@pytest.mark.parametrize("minuend, subtrahend", [(17, 5), (5, 17), (0, 0), (0, 1), (0xFFFFFFFF, 0xFFFFFFFF)])
def test_subtract32(library, minuend, subtrahend):
    outputs = run(library, "SUBTRACT32", {"minuend": minuend, "subtrahend": subtrahend})
    assert outputs["result"] == (minuend - subtrahend) & MASK
    assert outputs["borrow"] == int(minuend < subtrahend)


@pytest.mark.parametrize(
    "dividend, divisor, remainder",
    [(17, 5, 2), (5, 17, 5), (20, 5, 0), (0, 3, 0), (1000003, 1000000, 3)],
)
def test_modulus(library, dividend, divisor, remainder):
    outputs = run(library, "modulus", {"dividend": dividend, "divisor": divisor})
    assert outputs == {"remainder": remainder, "dividebyzero": 0}


def test_modulus_by_zero(library):
    outputs = run(library, "modulus", {"dividend": 17, "divisor": 0})
    assert outputs["dividebyzero"] == 1


@pytest.mark.parametrize("a, b, gcd", [(12, 8, 4), (9, 6, 3), (7, 0, 7), (13, 13, 13), (8, 12, 4)])
def test_euclid(library, a, b, gcd):
    assert run(library, "euclid", {"a": a, "b": b})["gcd"] == gcd


@pytest.mark.parametrize(
    "a, b",
    [(3, 5), (0, 0x1234), (0x1234, 0), (0xFFFF, 0x10001), (0x10000, 0x10000), (0x80000000, 2), (2, 0x80000000), (7, 0x40000000)],
)
def test_mult32(library, a, b):
    outputs = run(library, "mult32", {"inputa": a, "inputb": b})
    product = a * b
    assert outputs["overflow"] == int(product > MASK)
    if product <= MASK:
        assert outputs["output"] == product


@pytest.mark.slow
def test_mult32_random(library, rng):
    for _ in range(200):
        a = rng.getrandbits(rng.choice([8, 16, 24, 32]))
        b = rng.getrandbits(rng.choice([8, 16, 24, 32]))
        outputs = run(library, "mult32", {"inputa": a, "inputb": b})
        assert outputs["overflow"] == int(a * b > MASK)
        if a * b <= MASK:
            assert outputs["output"] == a * b


def test_add32array(library, rng):
    values = [rng.getrandbits(32) for _ in range(32)]
    assert run(library, "add32array", {"A": values})["sum"] == sum(values) & MASK


def test_arrayserialadd(library, rng):
    values = [rng.getrandbits(28) for _ in range(32)]
    assert run(library, "arrayserialadd", {"A": values})["sum"] == sum(values) & MASK


def narrow_bigaddition(width):
    text = read_corpus("space", "bigaddition.dat")
    return text.replace("[256]", f"[{width}]").replace("i<=255", f"i<={width - 1}")


def test_bigaddition_reduced_width(types, library):
    module = compile_space(narrow_bigaddition(16), types, library)
    result = execute(module)
    assert result.outcome.succeeded
    assert result.outputs["output"] == [3 * i for i in range(16)]


@pytest.mark.slow
def test_bigaddition(library):
    outputs = run(library, "bigaddition", {})
    assert outputs["output"] == [3 * i for i in range(256)]


@pytest.mark.slow
def test_matrixmultiply(library, rng):
    a = [[rng.randrange(16) for _ in range(4)] for _ in range(4)]
    b = [[rng.randrange(16) for _ in range(4)] for _ in range(4)]
    outputs = run(library, "matrixmultiply", {"A": sum(a, []), "B": sum(b, [])})
    expected = [sum(a[i][k] * b[k][j] for k in range(4)) for i in range(4) for j in range(4)]
    assert outputs["C"] == expected
