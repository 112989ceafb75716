"""
검사 엔진 팩토리

설정 파일이나 CLI에서 지정한 엔진 이름으로 검사기를 생성합니다.
"""

from typing import Optional, Any
from .base_checker import BaseChecker


class CheckerFactory:
    """검사 엔진 생성 팩토리"""

    # 등록된 검사 엔진
    _checkers = {}

    @classmethod
    def register_checker(cls, name: str, checker_class: type):
        """
        검사 엔진 등록

        Args:
            name: 엔진 이름 (설정 파일/CLI에서 사용)
            checker_class: BaseChecker 하위 클래스
        """
        cls._checkers[name] = checker_class

    @classmethod
    def create_checker(
        cls,
        name: str,
        config: Any = None,
        logger: Any = None
    ) -> Optional[BaseChecker]:
        """
        검사 엔진 생성

        Args:
            name: 엔진 이름
            config: CheckerSection
            logger: 로거

        Returns:
            엔진 인스턴스 또는 None
        """
        checker_class = cls._checkers.get(name)
        if checker_class is None:
            if logger:
                logger.warning(f"알 수 없는 검사 엔진: {name}")
            return None

        try:
            return checker_class(config=config, logger=logger)
        except Exception as e:
            if logger:
                logger.error(f"검사 엔진 생성 실패 ({name}): {e}")
            return None

    @classmethod
    def list_checkers(cls) -> list:
        """등록된 검사 엔진 목록 반환"""
        return list(cls._checkers.keys())


# 기본 엔진 등록
def register_default_checkers():
    """기본 엔진 등록"""
    from .ctlstar_checker import CtlStarChecker
    from .direct_pref_checker import DirectPrefChecker
    from .quant_sem_checker import QuantSemChecker
    from .atlsc_oracle import AtlscOracle
    from .translated_checker import TranslatedChecker

    CheckerFactory.register_checker('ctlstar', CtlStarChecker)

    # 선호 연산자 (M_B 없이 곱 공간에서 직접)
    CheckerFactory.register_checker('direct', DirectPrefChecker)
    CheckerFactory.register_checker('quantsem', QuantSemChecker)

    # 유계 기억 전략 열거
    CheckerFactory.register_checker('oracle', AtlscOracle)
    CheckerFactory.register_checker('translated', TranslatedChecker)


# 모듈 로드 시 기본 엔진 등록
register_default_checkers()
