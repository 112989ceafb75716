"""
핵심 모듈: 식, 모델, 번역 단계, 검사 스위트
"""
