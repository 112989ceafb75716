"""
검사 엔진 모듈

CTL*, 선호 연산자, 경로 양화자, 유계 기억 ATLSC* 검사기를 정의합니다.
"""

from .base_checker import BaseChecker, CheckResult
from .checker_factory import CheckerFactory

__all__ = [
    'BaseChecker',
    'CheckResult',
    'CheckerFactory',
]
