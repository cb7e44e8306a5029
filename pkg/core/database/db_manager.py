import logging
import os
from contextlib import contextmanager
from typing import Any, Dict, Generator, List, Optional, Union

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import Session, sessionmaker
from sqlalchemy.pool import StaticPool

from config.settings import get_setting, project_path
from core.database.models.library_models import Base, ModuleRecord, TypeRecord
from core.errors import LibraryError

logger = logging.getLogger(__name__)

# 라이브러리 파일 경로 (settings.json 의 library.database, 프로젝트 루트 기준)
DATABASE_PATH = project_path(get_setting("library.database", "data/library/spatiale.db"))
DATABASE_URL = f"sqlite:///{DATABASE_PATH}"
MEMORY_URL = "sqlite://"

_default_engine: Optional[Engine] = None


def create_library_engine(url: Optional[str] = None) -> Engine:
    """라이브러리 엔진 생성

    Args:
        url: SQLAlchemy URL (None 이면 설정 파일의 라이브러리, "sqlite://" 이면 메모리)
    """
    url = url or DATABASE_URL
    if url == MEMORY_URL:
        # 메모리 DB 는 연결 하나를 공유해야 세션 사이에 테이블이 남는다
        return create_engine(url, connect_args={"check_same_thread": False}, poolclass=StaticPool)
    if url.startswith("sqlite:///"):
        os.makedirs(os.path.dirname(url[len("sqlite:///"):]) or ".", exist_ok=True)
    return create_engine(url, connect_args={"check_same_thread": False})


def get_engine() -> Engine:
    """기본 라이브러리 엔진 (처음 호출 시 생성)"""
    global _default_engine
    if _default_engine is None:
        _default_engine = create_library_engine()
    return _default_engine


def init_db(engine: Optional[Engine] = None) -> sessionmaker:
    """테이블 생성 후 세션 팩토리 반환"""
    engine = engine or get_engine()
    Base.metadata.create_all(bind=engine)
    logger.debug(f"라이브러리 테이블 준비: {engine.url}")
    return sessionmaker(autocommit=False, autoflush=False, bind=engine)


@contextmanager
def get_db(factory: sessionmaker) -> Generator[Session, None, None]:
    """DB 세션을 안전하게 사용하고 닫는 컨텍스트 매니저"""
    db = factory()
    try:
        yield db
    finally:
        db.close()


# --- 모듈 레코드 CRUD ---

def add_module_record(factory: sessionmaker, data: Dict[str, Any]) -> int:
    """모듈 레코드 추가

    Returns:
        새 색인

    Raises:
        LibraryError: 같은 이름의 모듈이 있을 때
    """
    with get_db(factory) as db:
        if db.query(ModuleRecord.id).filter(ModuleRecord.name == data["name"]).first():
            raise LibraryError(f"모듈 '{data['name']}' 이 이미 라이브러리에 있습니다 (모듈 수정은 허용되지 않습니다)")
        record = ModuleRecord(**data)
        db.add(record)
        try:
            db.commit()
        except IntegrityError as e:
            db.rollback()
            raise LibraryError(f"모듈 '{data['name']}' 추가 실패: {e.orig}") from e
        db.refresh(record)
        return int(record.id)


def get_module_record(factory: sessionmaker, key: Union[str, int]) -> Optional[ModuleRecord]:
    """이름 또는 색인으로 모듈 레코드 조회"""
    with get_db(factory) as db:
        query = db.query(ModuleRecord)
        if isinstance(key, int):
            return query.filter(ModuleRecord.id == key).first()
        return query.filter(ModuleRecord.name == key).first()


def list_module_records(factory: sessionmaker) -> List[ModuleRecord]:
    """색인 순서의 모듈 레코드 목록"""
    with get_db(factory) as db:
        return db.query(ModuleRecord).order_by(ModuleRecord.id).all()


def module_names(factory: sessionmaker) -> List[str]:
    with get_db(factory) as db:
        return [name for (name,) in db.query(ModuleRecord.name).order_by(ModuleRecord.id)]


# --- 타입 레코드 CRUD ---

def add_type_record(factory: sessionmaker, data: Dict[str, Any]) -> int:
    with get_db(factory) as db:
        if db.query(TypeRecord.id).filter(TypeRecord.name == data["name"]).first():
            raise LibraryError(f"타입 '{data['name']}' 이 이미 라이브러리에 있습니다")
        record = TypeRecord(**data)
        db.add(record)
        db.commit()
        db.refresh(record)
        return int(record.id)


def list_type_records(factory: sessionmaker) -> List[TypeRecord]:
    """추가 순서의 타입 레코드 목록"""
    with get_db(factory) as db:
        return db.query(TypeRecord).order_by(TypeRecord.id).all()
