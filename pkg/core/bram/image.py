"""
B-Ram 메모리 스냅숏 파일 모듈
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from core.bram.instruction import BConfig
from core.bram.machine import BMemory
from core.errors import MachineError

logger = logging.getLogger(__name__)


def _record_dtype(config: BConfig) -> np.dtype:
    word = "<u2" if config.n <= 16 else "<u4"
    return np.dtype([("block", "<i8"), ("words", word, (config.block_size,))])


def save_snapshot(memory: BMemory, path: Union[str, Path]):
    """0 이 아닌 블록만 (블록 번호, 블록 단어열) 레코드로 저장"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    blocks = list(memory.nonempty())
    records = np.zeros(len(blocks), dtype=_record_dtype(memory.config))
    for k, (index, words) in enumerate(blocks):
        records[k]["block"] = index
        records[k]["words"] = words
    records.tofile(path)
    logger.info(f"B-Ram 스냅숏 저장: {path} ({len(blocks)} 블록)")


def load_snapshot(path: Union[str, Path], config: BConfig) -> BMemory:
    """스냅숏 로드

    Raises:
        MachineError: 파일 크기가 레코드 크기의 배수가 아닐 때
    """
    path = Path(path)
    dtype = _record_dtype(config)
    size = path.stat().st_size
    if size % dtype.itemsize:
        raise MachineError(f"스냅숏 크기 오류: {size} 바이트 (레코드 {dtype.itemsize} 바이트)")
    memory = BMemory(config)
    for record in np.fromfile(path, dtype=dtype):
        memory.block(int(record["block"]))[:] = record["words"]
    logger.info(f"B-Ram 스냅숏 로드: {path}")
    return memory
