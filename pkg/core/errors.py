"""
번역 파이프라인 예외 정의

모든 예외는 AtlscPrefError(ValueError)를 상속합니다.
"""
from typing import Any, Optional


class AtlscPrefError(ValueError):
    """파이프라인 공통 예외"""


class FormulaSyntaxError(AtlscPrefError):
    """논리식 구문 오류 (위치 포함)"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnknownAgentError(AtlscPrefError):
    """선언되지 않은 에이전트"""


class ClassificationError(AtlscPrefError):
    """상태식/경로식 분류 위반"""


class VocabularyError(AtlscPrefError):
    """모델 어휘에 없는 명제"""


class ModelError(AtlscPrefError):
    """모델 구성/로드 오류"""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ClosureError(AtlscPrefError):
    """목표식 closure가 tail에 대해 닫혀 있지 않음"""


class MissingDescriptionError(AtlscPrefError):
    """선호 기술(description)이 없는 에이전트"""


class FreePathVariableError(AtlscPrefError):
    """묶이지 않은 경로 변수"""


class UnsupportedFormulaError(AtlscPrefError):
    """엔진이 처리할 수 없는 논리식"""


class TranslationError(AtlscPrefError):
    """ATLSC* 번역 오류"""


class BoundedSearchError(AtlscPrefError):
    """유계 탐색 공간 초과"""


class StageAssertionError(AtlscPrefError):
    """단계 사후조건 위반 (문제 노드 포함)"""

    def __init__(self, stage: str, node: Any):
        self.stage = stage
        self.node = node
        super().__init__(f"stage '{stage}' left a forbidden node: {node}")
