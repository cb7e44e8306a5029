"""
메모리 이미지 파일 모듈
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np

from core.aram.instruction import MachineConfig
from core.aram.machine import MemoryBlock
from core.errors import MachineError

logger = logging.getLogger(__name__)


def _file_dtype(config: MachineConfig) -> np.dtype:
    return np.dtype(config.dtype).newbyteorder("<")


def save_image(memory: MemoryBlock, path: Union[str, Path]):
    """메모리 블록을 리틀엔디언 n 비트 단어열로 저장"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    memory.words.astype(_file_dtype(memory.config)).tofile(path)
    logger.info(f"메모리 이미지 저장: {path} ({len(memory)} 레지스터)")


def load_image(path: Union[str, Path], config: MachineConfig) -> MemoryBlock:
    """메모리 이미지 로드

    Raises:
        MachineError: 파일 크기가 레지스터 수와 맞지 않을 때
    """
    path = Path(path)
    dtype = _file_dtype(config)
    expected = config.registers * dtype.itemsize
    actual = path.stat().st_size
    if actual != expected:
        raise MachineError(f"이미지 크기 오류: {actual} 바이트 (기대값 {expected})")
    words = np.fromfile(path, dtype=dtype).astype(config.dtype)
    logger.info(f"메모리 이미지 로드: {path}")
    return MemoryBlock(config, words)
