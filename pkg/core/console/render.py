"""
콘솔 출력 모듈

값 표기는 타입을 따른다: unsigned/int 는 10 진수, BIT 는 0/1, REG 는 16 진수,
char 는 문자 리터럴. 표는 pandas DataFrame.to_string 으로 만든다.
"""

from typing import Iterable, List, Sequence

import pandas as pd

from core.database.models.library_models import ModuleRecord
from core.earth.module import CompiledModule
from core.earth.storage import Symbol
from core.errors import InputError
from core.space.types import TypeDef

HEX_TYPES = {"REG", "REGISTER", "float"}
SIGNED_TYPES = {"int"}
CHAR_TYPES = {"char"}


def _frame_text(frame: pd.DataFrame) -> str:
    if frame.empty:
        return "(없음)"
    return frame.to_string(index=False)


def render_scalar(symbol: Symbol, value: int) -> str:
    if symbol.type == "BIT":
        return str(value)
    if symbol.type in HEX_TYPES:
        return f"0x{value:0{max(symbol.width // 4, 1)}X}"
    if symbol.type in SIGNED_TYPES and value >> (symbol.width - 1):
        return str(value - (1 << symbol.width))
    if symbol.type in CHAR_TYPES and 32 <= value < 127:
        return repr(chr(value))
    return str(value)


def render_value(symbol: Symbol, value) -> str:
    """저장소 값 표기 (배열이면 [a, b, ...])"""
    if symbol.dims:
        return "[" + ", ".join(render_scalar(symbol, v) for v in value) + "]"
    return render_scalar(symbol, value)


def parse_scalar(symbol: Symbol, text: str) -> int:
    text = text.strip()
    try:
        if symbol.type in CHAR_TYPES and len(text) == 3 and text[0] == text[-1] and text[0] in "'\"":
            value = ord(text[1])
        else:
            value = int(text, 0)
    except ValueError as e:
        raise InputError(f"{symbol.name} ({symbol.type}) 값 형식 오류: '{text}'") from e
    if symbol.type == "BIT" and value not in (0, 1):
        raise InputError(f"{symbol.name} 은 BIT 이므로 0 또는 1 이어야 합니다: '{text}'")
    if value < 0:
        if symbol.type not in SIGNED_TYPES or value < -(1 << (symbol.width - 1)):
            raise InputError(f"{symbol.name} 에 음수 {value} 를 쓸 수 없습니다")
        value += 1 << symbol.width
    if value >> symbol.width:
        raise InputError(f"{symbol.name} 의 값 {value} 가 {symbol.width} 비트를 넘습니다")
    return value


def parse_value(symbol: Symbol, text: str):
    """입력 문자열을 저장소 값으로 (배열은 쉼표 구분, 대괄호 선택)"""
    if not symbol.dims:
        return parse_scalar(symbol, text)
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    values = [parse_scalar(symbol, part) for part in body.split(",") if part.strip()]
    if len(values) != symbol.count:
        raise InputError(f"{symbol.name} 에는 값 {symbol.count} 개가 필요합니다 (받은 값 {len(values)} 개)")
    return values


def modules_frame(records: Iterable[ModuleRecord]) -> pd.DataFrame:
    rows = [
        {
            "index": r.id,
            "name": r.name,
            "kind": r.kind,
            "level": r.level,
            "code": r.code_length,
            "storage": r.storage_length,
            "time": f"{r.time_min}-{r.time_max}",
        }
        for r in records
    ]
    return pd.DataFrame(rows, columns=["index", "name", "kind", "level", "code", "storage", "time"])


def types_frame(types: Iterable[TypeDef]) -> pd.DataFrame:
    rows = [
        {"name": t.name, "level": t.level, "size": t.size, "members": " ".join(f"{m};" for m in t.members)}
        for t in types
    ]
    return pd.DataFrame(rows, columns=["name", "level", "size", "members"])


def symbols_frame(module: CompiledModule) -> pd.DataFrame:
    rows = [
        {
            "name": s.name,
            "type": s.type + ("*" if s.pointer else ""),
            "interface": s.interface.value,
            "register": s.register,
            "bits": f"{s.low}-{s.low + s.width - 1}",
            "dims": "x".join(str(d) for d in s.dims),
        }
        for s in module.symbols.values()
    ]
    return pd.DataFrame(rows, columns=["name", "type", "interface", "register", "bits", "dims"])


def library_text(records: Sequence[ModuleRecord], types: Iterable[TypeDef]) -> str:
    return "\n".join(
        ["[types]", _frame_text(types_frame(types)), "", "[modules]", _frame_text(modules_frame(records))]
    )


def inspect_text(module: CompiledModule) -> str:
    markings = " ".join("{" + ",".join(str(r) for r in m) + "}" for m in module.entry_markings)
    lines = [
        f"module: {module.name} (index {module.index}, {module.kind}, level {module.level})",
        f"{module.code_length} code lines",
        f"{module.storage_length} storage registers ({module.size} total)",
        f"time: {module.time[0]}-{module.time[1]} cycles",
        f"entry markings: {markings}",
    ]
    if module.metatime:
        lines.append(f"metatime: {module.metatime[0]}-{module.metatime[1]} cycles")
    if module.instances:
        names = ", ".join(f"{i['label']}={i['module']}" for i in module.instances)
        lines.append(f"submodules: {names}")
    lines += ["", _frame_text(symbols_frame(module))]
    return "\n".join(lines)


def report_lines(report) -> List[str]:
    """RunReport 표기"""
    lines = [f"module: {report.module}", f"outcome: {report.outcome}", f"cycles: {report.cycles}"]
    if report.phase1_cycles is not None:
        lines.append(f"phase 1 cycles: {report.phase1_cycles}")
    frame = pd.DataFrame(report.outputs, columns=["output", "value"])
    lines.append(_frame_text(frame))
    lines.append("error bits: " + (", ".join(report.error_bits) or "-"))
    if report.trace_path:
        lines.append(f"trace: {report.trace_path}")
    return lines
