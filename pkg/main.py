#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
Spatiale - 메인 프로그램

타입/모듈 라이브러리 관리, Earth/Space 컴파일, A-Ram 실행 콘솔.
종료 코드: 0 성공, 1 사용법/컴파일 오류, 2 기계 오류.
"""

import argparse
import logging
import sys
import traceback
from typing import List, Optional

from config.logging_config import setup_logging
from config.settings import get_setting
from core.console import (
    cmd_add_earth,
    cmd_add_space,
    cmd_add_types,
    cmd_disasm,
    cmd_inspect,
    cmd_list,
    cmd_load_corpus,
    cmd_run,
    open_workspace,
    report_lines,
)
from core.errors import SpatialeError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_MACHINE = 2


class ConsoleParser(argparse.ArgumentParser):
    """사용법 오류를 종료 코드 1 로 보고하는 파서"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = ConsoleParser(prog="spatiale", description="Spatiale 콘솔")
    parser.add_argument("--db", help="라이브러리 SQLAlchemy URL (기본: 설정 library.database)")
    parser.add_argument("--log-level", help="콘솔 로그 레벨 (기본: 설정 logging.console_level)")
    parser.add_argument("--machine", help="기계 설정 p=K,regs=N")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("add-types", "typedef 파일의 타입 추가"),
        ("add-earth", "Earth 소스 컴파일 후 추가"),
        ("add-space", "Space 소스 컴파일 후 추가"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("file")

    sub.add_parser("list", help="타입과 모듈 목록")
    sub.add_parser("load-corpus", help="동봉된 말뭉치를 의존 순서대로 추가")
    for name, help_text in (("inspect", "모듈 선언과 기호 표"), ("disasm", "코드 영역 역어셈블")):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("module", help="모듈 이름 또는 색인")

    run = sub.add_parser("run", help="모듈 실행")
    run.add_argument("module", help="모듈 이름 또는 색인")
    run.add_argument("--in", dest="inputs", action="append", default=[], metavar="NAME=VALUE")
    run.add_argument("--phase2", action="store_true", help="메타 모듈 1 단계 뒤 2 단계 ({3,4}) 실행")
    run.add_argument("--trace", help="marking 기록 파일 (.csv 이면 표)")
    run.add_argument("--max-cycles", type=int)
    run.add_argument("--prompt", action="store_true", help="--in 으로 주지 않은 입력을 stdin 에서 묻기")
    return parser


def _prompt(text: str) -> str:
    sys.stderr.write(text)
    sys.stderr.flush()
    line = sys.stdin.readline()
    if not line:
        raise SpatialeError("입력이 끝났습니다 (stdin EOF)")
    return line.strip()


def dispatch(args: argparse.Namespace) -> int:
    workspace = open_workspace(args.db, args.machine, getattr(args, "max_cycles", None))
    if args.command == "run":
        report = cmd_run(
            workspace,
            args.module,
            args.inputs,
            phase2=args.phase2,
            trace_path=args.trace,
            prompt=_prompt if args.prompt else None,
        )
        print("\n".join(report_lines(report)))
        return EXIT_OK if report.succeeded else EXIT_MACHINE

    if args.command == "add-types":
        text = cmd_add_types(workspace, args.file)
    elif args.command == "add-earth":
        text = cmd_add_earth(workspace, args.file)
    elif args.command == "add-space":
        text = cmd_add_space(workspace, args.file)
    elif args.command == "list":
        text = cmd_list(workspace)
    elif args.command == "inspect":
        text = cmd_inspect(workspace, args.module)
    elif args.command == "disasm":
        text = cmd_disasm(workspace, args.module)
    else:
        text = cmd_load_corpus(workspace)
    print(text)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """메인 함수"""
    args = build_parser().parse_args(argv)
    setup_logging(console_level=args.log_level)
    logger.debug(f"{get_setting('app.name', 'spatiale')} 시작: {args.command}")
    try:
        return dispatch(args)
    except SpatialeError as e:
        logger.error(f"{args.command} 실패: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as e:
        logger.error(f"예상하지 못한 오류: {e}")
        logger.error(traceback.format_exc())
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
