"""
Space 테스트 픽스처

Earth 말뭉치 전체를 컴파일해 두고, Space 말뭉치 모듈은 처음 쓸 때 서브모듈
부터 차례로 컴파일해 세션 동안 공유한다.
"""

import pytest

from core.corpus import list_corpus, read_corpus
from core.earth import compile_earth
from core.space import TypeTable, compile_space, parse_space


class CorpusLibrary(dict):
    """모듈 클래스 이름 -> 컴파일된 모듈"""

    def __init__(self, types):
        super().__init__()
        self.types = types
        for filename in list_corpus("earth"):
            module = compile_earth(read_corpus("earth", filename))
            self[module.name] = module

    def space(self, name):
        if name in self:
            return self[name]
        text = read_corpus("space", f"{name}.dat")
        for decl in parse_space(text).submodules:
            if decl.module not in self:
                self.space(decl.module)
        module = compile_space(text, self.types, self)
        self[module.name] = module
        return module


@pytest.fixture(scope="session")
def types() -> TypeTable:
    table = TypeTable()
    table.add_text(read_corpus("space", "typedef.dat"))
    return table


@pytest.fixture(scope="session")
def library(types) -> CorpusLibrary:
    return CorpusLibrary(types)
