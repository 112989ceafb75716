"""
검사 엔진 인터페이스
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Set

from core.formula import Formula, Implies, Pref, desugar
from core.models import CheckerSection, Verdict
from utils.logger import setup_logger


@dataclass
class CheckResult:
    """검사 결과"""
    verdict: Verdict
    per_state: Dict[str, bool] = field(default_factory=dict)
    exact: bool = True
    engine: str = ""
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.TRUE


class BaseChecker(ABC):
    """
    검사 엔진 베이스 클래스

    모든 엔진은 이 클래스를 상속받아 check()를 구현합니다.
    """

    def __init__(self, config: Any = None, logger: Any = None):
        """
        Args:
            config: CheckerSection (None이면 기본값)
            logger: 로거 객체
        """
        self.config = config or CheckerSection()
        self.logger = logger or setup_logger(__name__)

    @abstractmethod
    def check(self, model: Any, formula: Formula, **options) -> CheckResult:
        """
        모델의 초기 상태에서 논리식을 평가

        Args:
            model: KripkeModel 또는 CGM
            formula: 평가할 상태식

        Returns:
            CheckResult (verdict는 초기 상태 값, per_state는 노드별 값)
        """
        pass

    def get_checker_name(self) -> str:
        """엔진 이름 반환"""
        return self.__class__.__name__


def modality_polarities(formula: Formula, is_modality: Callable[[Formula], bool]) -> Set[bool]:
    """is_modality 노드가 등장하는 극성 집합 (True=양, False=음)

    선호 연산자의 피연산자 안은 단조가 아니므로 양쪽 극성으로 본다.
    """
    found: Set[bool] = set()

    def visit(f: Formula, positive: bool, fixed: bool):
        if is_modality(f):
            found.update((True, False) if fixed else (positive,))
        match f:
            case Implies(left, right):
                visit(left, not positive, fixed)
                visit(right, positive, fixed)
                return
            case Pref(_, _, left, right):
                visit(left, positive, True)
                visit(right, positive, True)
                return
        for child in f.children():
            visit(child, positive, fixed)

    visit(desugar(formula), True, False)
    return found


def bounded_verdict(value: bool, formula: Formula, sufficient: bool,
                    is_modality: Callable[[Formula], bool]) -> tuple:
    """유계 탐색 값 → (Verdict, exact)

    - 양화 대상 모달리티가 없으면 정확한 값
    - sufficient이면 유계 값을 그대로 보고
    - 모두 양의 위치이면 True만, 모두 음의 위치이면 False만 확정
    """
    polarities = modality_polarities(formula, is_modality)
    if not polarities:
        return Verdict.of(value), True
    if sufficient:
        return Verdict.of(value), False
    if polarities == {True} and value:
        return Verdict.TRUE, False
    if polarities == {False} and not value:
        return Verdict.FALSE, False
    return Verdict.UNKNOWN, False
