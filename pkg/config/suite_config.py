"""
차등 검사 스위트 설정
"""

from dataclasses import dataclass, replace
from typing import Optional, Tuple


@dataclass
class DifferentialSuiteConfig:
    """차등 검사 스위트 설정"""

    # ===== 공통 =====

    seed: int = 7                      # numpy default_rng 시드
    atoms: Tuple[str, ...] = ("p", "q", "r")

    # ===== GNF =====

    gnf_formulas: int = 500            # 무작위 LTL 식 개수
    gnf_depth: int = 3                 # 식 깊이 상한
    gnf_atoms: int = 2                 # 식에 쓰는 원자 수 (라쏘 수가 |2^atoms|^bound로 늘어남)
    lasso_bound: int = 6               # |prefix| + |loop| 상한

    # ===== 선호 제거 =====

    pref_instances: int = 200          # direct vs M_B + ForMB + CTL*
    max_states: int = 5                # 모델 상태 수 상한
    max_classes: int = 3               # K 상한
    pref_depth: int = 4                # 식 깊이 상한
    axiom_instances: int = 200         # 공리 사례 수
    propagation_lasso_bound: int = 2   # P′를 라쏘로 따로 계산할 때 |prefix| + |loop| 상한

    # ===== 경로 양화자 =====

    path_instances: int = 100          # quantsem vs 경로 양화자 제거 + direct
    path_max_states: int = 4

    # ===== ATLSC* =====

    structure_formulas: int = 20       # 번역 구조 검사 식 개수
    structure_depth: int = 3

    # ===== 실행 =====

    only: Optional[Tuple[str, ...]] = None  # 실행할 스위트 이름 (None이면 전부)
    progress: bool = True                   # tqdm 진행 표시

    def with_counts(self, scale: float) -> "DifferentialSuiteConfig":
        """인스턴스 수를 비율로 줄인 설정 (테스트용)"""
        def scaled(count: int) -> int:
            return max(1, int(count * scale))

        return replace(
            self,
            gnf_formulas=scaled(self.gnf_formulas),
            pref_instances=scaled(self.pref_instances),
            axiom_instances=scaled(self.axiom_instances),
            path_instances=scaled(self.path_instances),
            structure_formulas=scaled(self.structure_formulas),
        )


# 기본 설정 인스턴스
DEFAULT_SUITE_CONFIG = DifferentialSuiteConfig()
