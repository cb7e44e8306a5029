"""
모듈 라이브러리 / 타입 라이브러리 모듈

모듈은 이름이 고유하고 추가 순서대로 색인을 받는다. 추가된 모듈과 타입은
고칠 수 없다. 라이브러리는 Space 컴파일러가 받는 Mapping(이름 -> 모듈)
으로도 쓰인다.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Iterator, List, Mapping, Optional, Union

import numpy as np

from core.aram.instruction import MachineConfig
from core.corpus import list_corpus, read_corpus
from core.database.db_manager import (
    add_module_record,
    add_type_record,
    create_library_engine,
    get_module_record,
    init_db,
    list_module_records,
    list_type_records,
    module_names,
)
from core.database.models.library_models import ModuleRecord
from core.earth import compile_earth
from core.earth.module import CompiledModule
from core.errors import LibraryError
from core.space import TypeDef, TypeTable, compile_space, parse_space, parse_typedefs
from core.space.types import Member

logger = logging.getLogger(__name__)

WORD_DTYPE = np.dtype("<u4")

# to_dict 중 별도 열에 저장하지 않는 항목
_LAYOUT_KEYS = ("meta", "metatime", "absolute", "segments", "fixups", "lines", "instances")


def _record_data(module: CompiledModule) -> Dict:
    data = module.to_dict()
    return {
        "name": module.name,
        "kind": module.kind,
        "level": module.level,
        "code_length": module.code_length,
        "storage_length": module.storage_length,
        "words": module.words.astype(WORD_DTYPE).tobytes(),
        "symbols": data["symbols"],
        "entry_markings": [list(m) for m in module.entry_markings],
        "time_min": int(module.time[0]),
        "time_max": int(module.time[1]),
        "layout": {key: data[key] for key in _LAYOUT_KEYS},
        "source": module.source,
    }


def _from_record(record: ModuleRecord) -> CompiledModule:
    data = dict(record.layout)
    data.update(
        name=record.name,
        kind=record.kind,
        level=record.level,
        code_length=record.code_length,
        words=np.frombuffer(record.words, dtype=WORD_DTYPE).tolist(),
        symbols=record.symbols,
        time=[record.time_min, record.time_max],
        source=record.source or "",
        index=record.id,
    )
    return CompiledModule.from_dict(data)


class ModuleLibrary(Mapping[str, CompiledModule]):
    """SQLite 에 저장되는 모듈 라이브러리

    Args:
        url: SQLAlchemy URL (None 이면 설정 파일의 라이브러리, "sqlite://" 이면 메모리)
    """

    def __init__(self, url: Optional[str] = None):
        self.engine = create_library_engine(url)
        self.factory = init_db(self.engine)
        self._cache: Dict[str, CompiledModule] = {}

    def __getitem__(self, name: str) -> CompiledModule:
        if name not in self._cache:
            record = get_module_record(self.factory, name)
            if record is None:
                raise KeyError(name)
            self._cache[name] = _from_record(record)
        return self._cache[name]

    def __contains__(self, name: object) -> bool:
        if not isinstance(name, str):
            return False
        return name in self._cache or get_module_record(self.factory, name) is not None

    def __iter__(self) -> Iterator[str]:
        return iter(module_names(self.factory))

    def __len__(self) -> int:
        return len(module_names(self.factory))

    def add(self, module: CompiledModule) -> int:
        """모듈 추가

        Returns:
            새 색인 (추가 순서대로 증가)

        Raises:
            LibraryError: 같은 이름의 모듈이 있을 때
        """
        index = add_module_record(self.factory, _record_data(module))
        module.index = index
        self._cache[module.name] = module
        logger.info(f"모듈 추가: {module.name} (색인 {index}, {module.kind}, 코드 {module.code_length} 줄)")
        return index

    def find(self, key: Union[str, int]) -> CompiledModule:
        """이름 또는 색인으로 모듈 조회

        Raises:
            LibraryError: 모듈이 없을 때
        """
        if isinstance(key, str) and key.isdigit():
            key = int(key)
        if isinstance(key, str):
            if key not in self:
                raise LibraryError(f"모듈 '{key}' 이 라이브러리에 없습니다")
            return self[key]
        record = get_module_record(self.factory, key)
        if record is None:
            raise LibraryError(f"색인 {key} 의 모듈이 라이브러리에 없습니다")
        return self[record.name]

    def records(self) -> List[ModuleRecord]:
        return list_module_records(self.factory)

    def add_earth(self, text: str) -> CompiledModule:
        """Earth 소스를 컴파일해 추가"""
        module = compile_earth(text)
        self._reject_duplicate(module.name)
        self.add(module)
        return module

    def add_space(self, text: str, types: TypeTable, config: Optional[MachineConfig] = None) -> CompiledModule:
        """Space 소스를 컴파일해 추가 (서브모듈은 먼저 라이브러리에 있어야 한다)"""
        ast = parse_space(text)
        self._reject_duplicate(ast.name)
        for decl in ast.submodules:
            if decl.module not in self:
                raise LibraryError(f"서브모듈 '{decl.module}' 을 찾을 수 없습니다 ({ast.name})")
        module = compile_space(text, types, self, config)
        self.add(module)
        return module

    def _reject_duplicate(self, name: str):
        if name in self:
            raise LibraryError(f"모듈 '{name}' 이 이미 라이브러리에 있습니다 (모듈 수정은 허용되지 않습니다)")


class TypeLibrary:
    """SQLite 에 저장되는 타입 라이브러리

    레벨 0 타입과 미리 적재되는 레벨 1 타입 위에 저장된 타입을 추가 순서대로
    다시 정의해 TypeTable 을 만든다.
    """

    def __init__(self, url: Optional[str] = None, engine=None):
        self.engine = engine if engine is not None else create_library_engine(url)
        self.factory = init_db(self.engine)
        self.table = TypeTable()
        for record in list_type_records(self.factory):
            self.table.define(record.name, [Member.from_dict(m) for m in record.members])

    def __contains__(self, name: str) -> bool:
        return name in self.table

    def get(self, name: str) -> TypeDef:
        return self.table.get(name)

    def add_text(self, text: str) -> List[TypeDef]:
        """typedef 텍스트의 타입을 추가하고 저장

        Raises:
            LibraryError: 이미 있는 타입을 다시 정의할 때
        """
        added = []
        for typedef in self.table.add_text(text):
            add_type_record(
                self.factory,
                {
                    "name": typedef.name,
                    "level": typedef.level,
                    "size": typedef.size,
                    "members": [m.to_dict() for m in typedef.members],
                },
            )
            added.append(typedef)
            logger.info(f"타입 추가: {typedef.name} (레벨 {typedef.level}, {typedef.size} 레지스터)")
        return added


def open_libraries(url: Optional[str] = None):
    """같은 데이터베이스를 쓰는 (모듈 라이브러리, 타입 라이브러리)"""
    modules = ModuleLibrary(url)
    return modules, TypeLibrary(engine=modules.engine)


def export_module(module: CompiledModule, directory: Union[str, Path]) -> Path:
    """모듈을 <name>.img (리틀엔디언 32 비트 단어열) 와 <name>.json (기호표) 로 내보내기

    Returns:
        .img 파일 경로
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    image = directory / f"{module.name}.img"
    module.words.astype(WORD_DTYPE).tofile(image)
    data = module.to_dict()
    del data["words"]
    data["size"] = module.size
    data["entry_markings"] = [list(m) for m in module.entry_markings]
    with open(directory / f"{module.name}.json", "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=2)
    logger.info(f"모듈 내보내기: {image}")
    return image


def import_module(image: Union[str, Path]) -> CompiledModule:
    """export_module 로 내보낸 .img/.json 쌍 읽기"""
    image = Path(image)
    with open(image.with_suffix(".json"), "r", encoding="utf-8") as f:
        data = json.load(f)
    words = np.fromfile(image, dtype=WORD_DTYPE)
    if len(words) != data["size"]:
        raise LibraryError(f"이미지 크기 불일치: {image} ({len(words)} != {data['size']})")
    data["words"] = words.tolist()
    return CompiledModule.from_dict(data)


def load_corpus(modules: ModuleLibrary, types: TypeLibrary, config: Optional[MachineConfig] = None) -> List[str]:
    """동봉된 말뭉치를 의존 순서대로 라이브러리에 추가

    이미 있는 타입과 모듈은 건너뛴다.

    Returns:
        새로 추가한 모듈 이름
    """
    added: List[str] = []
    typedefs = read_corpus("space", "typedef.dat")
    missing = [name for name, _ in parse_typedefs(typedefs) if name not in types]
    if len(missing) == len(parse_typedefs(typedefs)):
        types.add_text(typedefs)
    elif missing:
        raise LibraryError(f"typedef.dat 의 일부 타입만 라이브러리에 있습니다: 없는 타입 {missing}")
    for filename in list_corpus("earth"):
        text = read_corpus("earth", filename)
        module = compile_earth(text)
        if module.name not in modules:
            modules.add(module)
            added.append(module.name)

    sources = {}
    for filename in list_corpus("space"):
        if filename == "typedef.dat":
            continue
        text = read_corpus("space", filename)
        sources[parse_space(text).name] = text

    def visit(name: str, stack: tuple):
        if name in modules:
            return
        if name in stack:
            raise LibraryError(f"서브모듈 순환: {' -> '.join(stack + (name,))}")
        if name not in sources:
            raise LibraryError(f"서브모듈 '{name}' 을 찾을 수 없습니다")
        for decl in parse_space(sources[name]).submodules:
            visit(decl.module, stack + (name,))
        modules.add_space(sources[name], types.table, config)
        added.append(name)

    for name in sources:
        visit(name, ())
    logger.info(f"말뭉치 적재 완료: 모듈 {len(added)} 개 추가")
    return added
