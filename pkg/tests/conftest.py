"""
공통 테스트 픽스처
"""

import random

import pytest

from core.aram import MachineConfig, MemoryBlock


@pytest.fixture
def small_config() -> MachineConfig:
    return MachineConfig(p=5, register_count=4096)


@pytest.fixture
def memory(small_config) -> MemoryBlock:
    return MemoryBlock(small_config)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240611)


@pytest.fixture(scope="session")
def earth_library():
    """Earth 말뭉치를 미리 넣은 메모리 모듈 라이브러리"""
    from core.corpus import list_corpus, read_corpus
    from core.database.library import ModuleLibrary

    library = ModuleLibrary("sqlite://")
    for filename in list_corpus("earth"):
        library.add_earth(read_corpus("earth", filename))
    return library
