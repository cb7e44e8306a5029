"""
설정 로드 모듈
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent
SETTINGS_PATH = PROJECT_ROOT / "config" / "settings.json"
ENV_PREFIX = "SPATIALE_"

_cache: Optional[Dict[str, Any]] = None


def _coerce(raw: str, current: Any) -> Any:
    if isinstance(current, bool):
        return raw.strip().lower() in ("1", "true", "yes", "on")
    if isinstance(current, int):
        return int(raw, 0)
    if isinstance(current, float):
        return float(raw)
    return raw


def _apply_env(settings: Dict[str, Any]):
    """SPATIALE_<SECTION>_<KEY> 환경 변수로 스칼라 값 덮어쓰기"""
    for section, values in settings.items():
        if not isinstance(values, dict):
            continue
        for key, current in values.items():
            name = f"{ENV_PREFIX}{section}_{key}".upper()
            if name in os.environ and not isinstance(current, (dict, list)):
                values[key] = _coerce(os.environ[name], current)
                logger.debug(f"환경 변수 적용: {name}")


def load_settings(path: Optional[Path] = None, reload: bool = False) -> Dict[str, Any]:
    """설정 로드

    Args:
        path: 설정 파일 경로 (기본 config/settings.json)
        reload: 캐시 무시 여부

    Returns:
        설정 사전
    """
    global _cache
    if _cache is not None and path is None and not reload:
        return _cache
    load_dotenv()
    with open(path or SETTINGS_PATH, "r", encoding="utf-8") as f:
        settings = json.load(f)
    _apply_env(settings)
    if path is None:
        _cache = settings
    return settings


def get_setting(dotted: str, default: Any = None) -> Any:
    """점 경로로 설정 값 조회 (예: "machine.p")"""
    node: Any = load_settings()
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node


def project_path(relative: str) -> Path:
    """프로젝트 루트 기준 경로"""
    path = Path(relative)
    return path if path.is_absolute() else PROJECT_ROOT / path
