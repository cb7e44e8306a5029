"""
로깅 설정 모듈
"""

import logging
import logging.handlers
import os
import sys
from datetime import datetime
from typing import Optional, Union

from config.settings import get_setting, project_path

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# 두 번째 호출에서 핸들러를 다시 붙이지 않도록 표시
_MARK = "_spatiale_handler"


def setup_logging(log_dir: Optional[str] = None, console_level: Optional[Union[str, int]] = None):
    """루트 로거에 날짜별 파일, 콘솔(stderr), debug.log, error.log 핸들러 설치

    Args:
        log_dir: 로그 디렉토리 (기본: 설정 logging.dir)
        console_level: 콘솔 로그 레벨 (기본: 설정 logging.console_level)
    """
    root_logger = logging.getLogger()
    console_level = console_level or get_setting("logging.console_level", "INFO")
    if isinstance(console_level, str):
        console_level = logging.getLevelName(console_level.upper())

    existing = [h for h in root_logger.handlers if getattr(h, _MARK, False)]
    if existing:
        for handler in existing:
            if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
                handler.setLevel(console_level)
        return

    log_dir = str(project_path(log_dir or get_setting("logging.dir", "logs")))
    os.makedirs(log_dir, exist_ok=True)
    root_logger.setLevel(logging.DEBUG)
    formatter = logging.Formatter(LOG_FORMAT)

    # 날짜별 로그 파일
    today = datetime.now().strftime("%Y-%m-%d")
    file_handler = logging.handlers.TimedRotatingFileHandler(
        os.path.join(log_dir, f"app_{today}.log"),
        when="midnight",
        interval=1,
        backupCount=30,
        encoding="utf-8",
    )
    file_handler.setLevel(logging.DEBUG)

    # 콘솔 (stdout 은 실행 보고서가 쓴다)
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_level)

    # 디버깅 로그 파일 (항상 덮어쓰기)
    debug_handler = logging.FileHandler(os.path.join(log_dir, "debug.log"), mode="w", encoding="utf-8")
    debug_handler.setLevel(logging.DEBUG)

    # 에러 로그 파일 (추가 모드)
    error_handler = logging.FileHandler(os.path.join(log_dir, "error.log"), mode="a", encoding="utf-8")
    error_handler.setLevel(logging.ERROR)

    for handler in (file_handler, console_handler, debug_handler, error_handler):
        handler.setFormatter(formatter)
        setattr(handler, _MARK, True)
        root_logger.addHandler(handler)

    logging.getLogger(__name__).debug(f"로깅 설정 완료: {log_dir}")
