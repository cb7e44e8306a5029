"""
코퍼스 파일 접근 모듈
"""

from pathlib import Path
from typing import List

from config.settings import get_setting, project_path


def corpus_dir() -> Path:
    return project_path(get_setting("library.corpus_dir", "data/corpus"))


def corpus_path(kind: str, name: str) -> Path:
    """코퍼스 파일 경로 (kind: aram, bram, earth, space)"""
    return corpus_dir() / kind / name


def read_corpus(kind: str, name: str) -> str:
    with open(corpus_path(kind, name), "r", encoding="utf-8") as f:
        return f.read()


def list_corpus(kind: str, suffix: str = ".dat") -> List[str]:
    return sorted(p.name for p in (corpus_dir() / kind).glob(f"*{suffix}"))
