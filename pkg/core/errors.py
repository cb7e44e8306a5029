"""
공통 예외 모듈
"""

from typing import Optional


class SpatialeError(Exception):
    """툴체인 최상위 오류"""
    pass


class MachineError(SpatialeError):
    """시뮬레이터 사용 오류 (잘못된 레지스터, 이미지 크기, 불법 명령어 등)"""
    pass


class CompileError(SpatialeError):
    """컴파일 오류 기본 클래스"""

    def __init__(self, message: str, module: Optional[str] = None, line: Optional[str] = None):
        """
        Args:
            message: 오류 내용
            module: 모듈 이름
            line: 소스 줄 번호 또는 Space 라인 주소
        """
        self.message = message
        self.module = module
        self.line = line
        super().__init__(self._render())

    def _render(self) -> str:
        where = []
        if self.module:
            where.append(self.module)
        if self.line is not None:
            where.append(f"line {self.line}")
        if where:
            return f"[{':'.join(where)}] {self.message}"
        return self.message


class EarthSyntaxError(CompileError):
    """Earth 구문 오류"""
    pass


class EarthCompileError(CompileError):
    """Earth 의미 오류 (이름 해석, 복제, 저장소 배치)"""
    pass


class SpaceSyntaxError(CompileError):
    """Space 구문 오류"""
    pass


class SpaceCompileError(CompileError):
    """Space 의미 오류 (타입 검사, 서브모듈, 코드 생성)"""
    pass


class UnsupportedConstructError(SpaceCompileError):
    """지원하지 않는 Space 구문 (contraction, grow, switch 등)"""
    pass


class InterstringError(SpatialeError):
    """인터스트링 열 제약 위반 또는 미바인딩 기호"""
    pass


class LibraryError(SpatialeError):
    """라이브러리 오류 (중복 이름, 없는 모듈/타입)"""
    pass


class TuringMachineError(SpatialeError):
    """튜링 기계 인코딩/해석 오류"""
    pass


class InputError(SpatialeError):
    """실행 입력 값 형식 오류"""
    pass
