"""
수작업으로 검증한 ATLSC* 인스턴스 모음

각 인스턴스는 표시된 기억 한도 h에서 유계 전략만으로 정답이 나오도록 만든 것입니다.
sufficient=False 항목은 한도가 부족한 경우의 보고(Unknown)를 확인합니다.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import List

from core.formula import Formula
from core.formula_parser import parse_formula
from core.model_loader import parse_model
from core.models import CGM, Verdict

# 1이 혼자 다음 상태를 고르는 게임
SOLE_CONTROLLER = """
agents: 1 2
actions 1: a1 b1
actions 2: a2
states: w0 wp wn
init: w0
label wp: p
outcome w0 a1 a2 -> wp
outcome w0 b1 a2 -> wn
outcome wp a1 a2 -> wp
outcome wp b1 a2 -> wp
outcome wn a1 a2 -> wn
outcome wn b1 a2 -> wn
"""

# 동전 맞추기: 같은 면이면 win
MATCHING_PENNIES = """
agents: 1 2
actions 1: h1 t1
actions 2: h2 t2
states: w0 sw sl
init: w0
label sw: win
outcome w0 h1 h2 -> sw
outcome w0 t1 t2 -> sw
outcome w0 h1 t2 -> sl
outcome w0 t1 h2 -> sl
outcome sw h1 h2 -> sw
outcome sw t1 t2 -> sw
outcome sw h1 t2 -> sw
outcome sw t1 h2 -> sw
outcome sl h1 h2 -> sl
outcome sl t1 t2 -> sl
outcome sl h1 t2 -> sl
outcome sl t1 h2 -> sl
"""

# 1은 go/wt, 2는 blk/idl. go와 idl이 겹쳐야 목표 상태로
RACE = """
agents: 1 2
actions 1: go wt
actions 2: blk idl
states: w0 g
init: w0
label g: goal
outcome w0 go idl -> g
outcome w0 go blk -> w0
outcome w0 wt blk -> w0
outcome w0 wt idl -> w0
outcome g go idl -> g
outcome g go blk -> g
outcome g wt blk -> g
outcome g wt idl -> g
"""

# 2가 y1/y2를 고른 뒤 1이 ga/gb를 고름. 1은 두 걸음 전 선택을 기억해야 맞출 수 있음
MEMORY = """
agents: 1 2
actions 1: a1 b1
actions 2: c2 d2
states: w0 u1 u2 x ga gb
init: w0
label u1: y1
label u2: y2
label ga: ga
label gb: gb
outcome w0 a1 c2 -> u1
outcome w0 b1 c2 -> u1
outcome w0 a1 d2 -> u2
outcome w0 b1 d2 -> u2
outcome u1 a1 c2 -> x
outcome u1 b1 c2 -> x
outcome u1 a1 d2 -> x
outcome u1 b1 d2 -> x
outcome u2 a1 c2 -> x
outcome u2 b1 c2 -> x
outcome u2 a1 d2 -> x
outcome u2 b1 d2 -> x
outcome x a1 c2 -> ga
outcome x a1 d2 -> ga
outcome x b1 c2 -> gb
outcome x b1 d2 -> gb
outcome ga a1 c2 -> ga
outcome ga b1 c2 -> ga
outcome ga a1 d2 -> ga
outcome ga b1 d2 -> ga
outcome gb a1 c2 -> gb
outcome gb b1 c2 -> gb
outcome gb a1 d2 -> gb
outcome gb b1 d2 -> gb
"""

MODELS = {
    "sole_controller": SOLE_CONTROLLER,
    "matching_pennies": MATCHING_PENNIES,
    "race": RACE,
    "memory": MEMORY,
}


@dataclass(frozen=True)
class CuratedInstance:
    """검증된 (모델, 식, 기억 한도, 기대 판정)"""
    name: str
    model_name: str
    formula_text: str
    h: int
    expected: Verdict
    sufficient: bool = True

    @property
    def model(self) -> CGM:
        return load_curated_model(self.model_name)

    @property
    def formula(self) -> Formula:
        return parse_formula(self.formula_text, self.model.agents)


@lru_cache(maxsize=None)
def load_curated_model(name: str) -> CGM:
    return parse_model(MODELS[name])


T, F, U = Verdict.TRUE, Verdict.FALSE, Verdict.UNKNOWN

CURATED_INSTANCES: List[CuratedInstance] = [
    CuratedInstance("sole_1_next_p", "sole_controller", "<<1>> X p", 0, T),
    CuratedInstance("sole_2_next_p", "sole_controller", "<<2>> X p", 0, F),
    CuratedInstance("sole_empty_next_p", "sole_controller", "<<>> X p", 0, F),
    CuratedInstance("sole_co_empty_next_p", "sole_controller", "[[]] X p", 0, T),
    CuratedInstance("sole_co_empty_is_exists", "sole_controller", "([[]] X p) <-> E X p", 0, T),
    CuratedInstance("pennies_1", "matching_pennies", "<<1>> X win", 0, F),
    CuratedInstance("pennies_grand", "matching_pennies", "<<1,2>> X win", 0, T),
    CuratedInstance("pennies_2", "matching_pennies", "<<2>> X win", 0, F),
    CuratedInstance("pennies_nested", "matching_pennies", "<<2>> <<1>> X win", 0, T),
    CuratedInstance("pennies_relaxed", "matching_pennies", "<<2>> ]2[ <<1>> X win", 0, F),
    CuratedInstance("pennies_co_1", "matching_pennies", "[[1]] X win", 0, T),
    CuratedInstance("pennies_deviation", "matching_pennies", "<<1,2>> (X win & <<1>> X !win)", 0, T),
    CuratedInstance("pennies_no_deviation", "matching_pennies", "<<1,2>> (X win & !(<<1>> X !win))", 0, F),
    CuratedInstance("race_1", "race", "<<1>> F goal", 0, F),
    CuratedInstance("race_grand", "race", "<<1,2>> F goal", 0, T),
    CuratedInstance("race_block", "race", "<<2>> G !goal", 0, T),
    CuratedInstance("race_nested", "race", "<<2>> <<1>> F goal", 0, T),
    CuratedInstance("memory_h1", "memory", "<<1>> ((X y1 -> X X X ga) & (X y2 -> X X X gb))", 1, T),
    CuratedInstance("memory_h0", "memory", "<<1>> ((X y1 -> X X X ga) & (X y2 -> X X X gb))", 0, U,
                    sufficient=False),
]


def curated_by_name(name: str) -> CuratedInstance:
    for instance in CURATED_INSTANCES:
        if instance.name == name:
            return instance
    raise KeyError(name)
