"""
콘솔 명령 모듈

main.py 의 하위 명령이 부르는 함수들. 각 명령은 출력할 텍스트(또는 실행
보고서)를 돌려주고, 출력과 종료 코드는 main.py 가 맡는다.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from config.settings import get_setting
from core.aram.instruction import MachineConfig
from core.aram.runner import format_trace, trace_frame
from core.console.render import inspect_text, library_text, parse_value, render_value
from core.database.library import ModuleLibrary, TypeLibrary, load_corpus, open_libraries
from core.earth.compiler import listing
from core.earth.module import CompiledModule, execute
from core.errors import InputError

logger = logging.getLogger(__name__)

Prompt = Callable[[str], str]


@dataclass
class Workspace:
    """라이브러리 두 개와 기계 설정"""

    modules: ModuleLibrary
    types: TypeLibrary
    config: MachineConfig
    max_cycles: int


@dataclass
class RunReport:
    """실행 보고서

    outputs 는 output/ioput 저장소만 (이름, 타입별 표기) 로 담는다.
    """

    module: str
    outcome: str
    succeeded: bool
    cycles: int
    outputs: List[Tuple[str, str]] = field(default_factory=list)
    error_bits: List[str] = field(default_factory=list)
    phase1_cycles: Optional[int] = None
    trace_path: Optional[str] = None


def parse_machine(text: Optional[str]) -> MachineConfig:
    """'p=K,regs=N' 형식의 기계 설정 (빠진 값은 설정 파일 값)"""
    p = int(get_setting("machine.p", 5))
    registers = get_setting("machine.register_count")
    for item in (text or "").split(","):
        if not item.strip():
            continue
        key, _, value = item.partition("=")
        key = key.strip().lower()
        try:
            number = int(value, 0)
        except ValueError as e:
            raise InputError(f"--machine 값 형식 오류: '{item}'") from e
        if key == "p":
            p = number
        elif key in ("regs", "registers"):
            registers = number
        else:
            raise InputError(f"--machine 에 알 수 없는 항목: '{key}' (p, regs 만 가능)")
    return MachineConfig(p=p, register_count=int(registers) if registers else None)


def open_workspace(
    url: Optional[str] = None, machine: Optional[str] = None, max_cycles: Optional[int] = None
) -> Workspace:
    modules, types = open_libraries(url)
    config = parse_machine(machine)
    cycles = max_cycles if max_cycles is not None else int(get_setting("machine.max_cycles", 10 ** 8))
    if cycles < 1:
        raise InputError(f"--max-cycles 는 1 이상이어야 합니다: {cycles}")
    return Workspace(modules, types, config, cycles)


def _read(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"파일을 읽을 수 없습니다: {path} ({e.strerror})") from e


def cmd_add_types(workspace: Workspace, path: Union[str, Path]) -> str:
    added = workspace.types.add_text(_read(path))
    return "\n".join(f"type {t.name}: level {t.level}, {t.size} registers" for t in added) or "(추가된 타입 없음)"


def cmd_add_earth(workspace: Workspace, path: Union[str, Path]) -> str:
    module = workspace.modules.add_earth(_read(path))
    return f"{module.name}: index {module.index}, {module.code_length} code lines, TIME {module.time[0]}-{module.time[1]}"


def cmd_add_space(workspace: Workspace, path: Union[str, Path]) -> str:
    module = workspace.modules.add_space(_read(path), workspace.types.table, workspace.config)
    return f"{module.name}: index {module.index}, {module.code_length} code lines, {module.size} registers"


def cmd_load_corpus(workspace: Workspace) -> str:
    added = load_corpus(workspace.modules, workspace.types, workspace.config)
    return f"{len(added)} modules added" + (": " + ", ".join(added) if added else "")


def cmd_list(workspace: Workspace) -> str:
    return library_text(workspace.modules.records(), workspace.types.table)


def cmd_inspect(workspace: Workspace, key: str) -> str:
    return inspect_text(workspace.modules.find(key))


def cmd_disasm(workspace: Workspace, key: str) -> str:
    module = workspace.modules.find(key)
    return listing(module, workspace.config if module.kind == "space" else None)


def _collect_inputs(module: CompiledModule, given: Sequence[str], prompt: Optional[Prompt]) -> Dict[str, object]:
    """--in name=value 목록과 프롬프트로 입력 값 모으기"""
    values: Dict[str, object] = {}
    names = {s.name for s in module.inputs}
    for item in given:
        name, sep, text = item.partition("=")
        name = name.strip()
        if not sep:
            raise InputError(f"--in 은 name=value 형식이어야 합니다: '{item}'")
        if name not in names:
            raise InputError(f"{module.name} 에 입력 저장소 '{name}' 가 없습니다 (입력: {', '.join(sorted(names))})")
        values[name] = parse_value(module.symbols[name], text)
    if prompt is not None:
        for symbol in module.inputs:
            if symbol.name not in values:
                values[symbol.name] = parse_value(symbol, prompt(f"{symbol.name} ({symbol.type}): "))
    return values


def _write_trace(path: Union[str, Path], trace: List[list]) -> str:
    target = Path(path)
    if target.parent and not target.parent.exists():
        target.parent.mkdir(parents=True, exist_ok=True)
    if target.suffix.lower() == ".csv":
        trace_frame(trace).to_csv(target, index=False)
    else:
        target.write_text(format_trace(trace) + "\n", encoding="utf-8")
    logger.info(f"trace 저장: {target} ({len(trace)} 줄)")
    return str(target)


def cmd_run(
    workspace: Workspace,
    key: str,
    inputs: Sequence[str] = (),
    phase2: bool = False,
    trace_path: Optional[str] = None,
    prompt: Optional[Prompt] = None,
) -> RunReport:
    """모듈 실행

    --phase2 는 메타 모듈의 1 단계 ({1,2}) 를 실행한 뒤 같은 메모리에서
    2 단계 ({3,4}) 를 실행한다. 라이브러리는 바꾸지 않는다.
    """
    module = workspace.modules.find(key)
    if phase2 and not module.is_meta:
        raise InputError(f"{module.name} 은 메타 모듈이 아니므로 --phase2 를 쓸 수 없습니다")
    values = _collect_inputs(module, inputs, prompt)
    config = workspace.config if module.absolute else None
    tracing = trace_path is not None

    run = execute(module, values, max_cycles=workspace.max_cycles, trace=tracing, config=config)
    trace = list(run.outcome.trace or [])
    phase1_cycles = None
    if phase2 and run.outcome.succeeded:
        phase1_cycles = run.cycles
        run = execute(module, phase=2, memory=run.memory, max_cycles=workspace.max_cycles, trace=tracing)
        trace += run.outcome.trace or []

    report = RunReport(
        module=module.name,
        outcome=run.outcome.describe(),
        succeeded=run.outcome.succeeded,
        cycles=run.cycles,
        outputs=[(s.name, render_value(s, run.outputs[s.name])) for s in module.outputs],
        error_bits=[f"{kind.name.capitalize()}Fail (bit {int(kind)})" for kind in run.memory.error_bits()],
        phase1_cycles=phase1_cycles,
    )
    if tracing:
        report.trace_path = _write_trace(trace_path, trace)
    logger.info(f"{module.name} 실행: {report.outcome} ({report.cycles} 사이클)")
    return report
