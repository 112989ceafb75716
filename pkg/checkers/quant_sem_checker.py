"""
경로 양화자(∃~, ∃1) 의미론 평가기

경로 변수의 값은 현재 목표 목록의 클래스 인덱스 집합으로 표현합니다.
바인더 노드 기준 거리(0, 1, ≥2)를 붙인 공간에서 표시 원자 d를 거리 1에만 두고
𝐩 := d ∧ ⋁_{k∈X} B_k 로 치환하면, 𝐩는 바인더 한 걸음 뒤에서 시작하는 경로에서만 참이 됩니다.
"""
from typing import Any, FrozenSet, List

from checkers.ctlstar_checker import Frame
from checkers.direct_pref_checker import DirectPrefChecker
from checkers.state_space import Node, index_subsets, tagged_space
from core.errors import FreePathVariableError
from core.formula import (
    GAME_NODES, PROP_BINDERS, And, Atom, ExistsPath, Formula, FreshVarSupply, Next, OneQuant, PathAtom,
    SimQuant, all_names, desugar, disj, free_path_vars, substitute,
)


class QuantSemChecker(DirectPrefChecker):
    """∃~ᵢ / ∃1ᵢ / ∀~ᵢ 를 부분집합(단일 클래스) 열거로 평가"""

    engine_name = "quantsem"
    forbidden = GAME_NODES + PROP_BINDERS

    def _require_fragment(self, formula: Formula):
        super()._require_fragment(formula)
        free = free_path_vars(formula)
        if free:
            raise FreePathVariableError(f"free path variables: {sorted(free)}")

    def _sat_extension(self, frame: Frame, f: Formula, env: Any) -> FrozenSet[Node]:
        match f:
            case PathAtom(name):
                raise FreePathVariableError(f"free path variable ~{name}")
            case SimQuant() | OneQuant():
                return self._sat_path_binder(frame, f, env)
        return super()._sat_extension(frame, f, env)

    def _sat_path_binder(self, frame: Frame, f: Formula, env: Any) -> FrozenSet[Node]:
        space = frame.space
        supply = FreshVarSupply(reserved=set(space.props) | all_names(f.body))
        marker = supply.fresh("d")
        inner = Frame(tagged_space(space, marker))
        single = isinstance(f, OneQuant)

        satisfied = set()
        for description, members in self._group_by_description(space, f.agent).items():
            if single:
                choices = [frozenset((k,)) for k in description.indices()]
            else:
                choices = index_subsets(description.indices())
            pending: List[Node] = list(members)
            for chosen in choices:
                if not pending:
                    break
                candidates = pending
                if single:
                    (k,) = chosen
                    nonempty = self.sat(frame, desugar(ExistsPath(Next(description.objective(k)))), env)
                    candidates = [node for node in pending if node in nonempty]
                    if not candidates:
                        continue
                value = And(Atom(marker), disj(description.objective(k) for k in sorted(chosen)))
                instance = desugar(substitute(f.body, {PathAtom(f.var): value}, supply))
                holds = self.sat(inner, instance, env)
                for node in candidates:
                    if (node, 0) in holds:
                        satisfied.add(node)
                pending = [node for node in pending if node not in satisfied]
        return frozenset(satisfied)


def quant_sem_check(k, descriptions, a: Formula, config=None):
    """∃~/∃1 경로 양화자를 포함한 CTL*₍<₎ 식 평가"""
    return QuantSemChecker(config=config).check(k, a, descriptions=descriptions)
