from datetime import datetime

from sqlalchemy import JSON, Column, DateTime, Integer, LargeBinary, String, Text
from sqlalchemy.orm import declarative_base

# 모듈 라이브러리와 타입 라이브러리가 공유하는 Base
Base = declarative_base()


class ModuleRecord(Base):
    """모듈 라이브러리에 저장된 컴파일된 모듈 (id 가 라이브러리 색인)"""
    __tablename__ = 'modules'

    id = Column(Integer, primary_key=True, autoincrement=True)
    name = Column(String, nullable=False, unique=True)  # 모듈 클래스 이름
    kind = Column(String, nullable=False)  # earth | space
    level = Column(Integer, nullable=False, default=0)
    code_length = Column(Integer, nullable=False)
    storage_length = Column(Integer, nullable=False)
    words = Column(LargeBinary, nullable=False)  # little-endian uint32
    symbols = Column(JSON, nullable=False)
    entry_markings = Column(JSON, nullable=False)
    time_min = Column(Integer, default=0)
    time_max = Column(Integer, default=0)
    layout = Column(JSON, nullable=False)  # 재배치 정보, 라인 구간, 서브모듈 사본
    source = Column(Text, default="")
    created_at = Column(DateTime, default=datetime.now)

    def __repr__(self) -> str:
        return f"<ModuleRecord(id={self.id}, name='{self.name}', kind='{self.kind}')>"


class TypeRecord(Base):
    """타입 라이브러리에 저장된 사용자 타입 (미리 적재되는 타입은 저장하지 않음)"""
    __tablename__ = 'types'

    id = Column(Integer, primary_key=True, autoincrement=True)
    name = Column(String, nullable=False, unique=True)
    level = Column(Integer, nullable=False)
    size = Column(Integer, nullable=False)
    members = Column(JSON, nullable=False)
    created_at = Column(DateTime, default=datetime.now)

    def __repr__(self) -> str:
        return f"<TypeRecord(id={self.id}, name='{self.name}', level={self.level})>"
