"""
CTL*₍<₎ 직접 평가기

(상태, 에이전트별 현재 목표 목록) 곱을 직접 탐색하고, 선호 노드는
각 클래스 k에 대한 ∃X(B′ ∧ B_k) 의무와 P로 판정합니다 (M_B나 선호 제거를 거치지 않음).
"""
from typing import AbstractSet, Any, Dict, FrozenSet, List, Mapping, Optional, Set

from checkers.ctlstar_checker import CtlStarChecker, Frame, Model, as_kripke
from checkers.state_space import Node, StateSpace, annotated_space
from core.errors import MissingDescriptionError
from core.formula import (
    GAME_NODES, PATH_BINDERS, PROP_BINDERS, And, ExistsPath, Formula, Next, PathAtom, Pref, PrefVariant,
    desugar, subformulas,
)
from core.models import PreferenceDescription

Pairs = AbstractSet[tuple]


def preference_holds(variant: PrefVariant, left: Set[int], right: Set[int], better: Pairs) -> bool:
    """B′, B″가 만나는 클래스 집합과 P로 선호 변형을 판정

    <ff: 모든 (k₁,k₂) ∈ P        <ea: ∃k₁ ∀k₂ (k₁,k₂) ∈ P
    <ae: ∀k₁ ∃k₂ (k₁,k₂) ∈ P     <ee: ∃k₁ ∃k₂ (k₁,k₂) ∈ P
    >ea, >ae: <ea, <ae에서 쌍을 (k₂,k₁)로 뒤집은 것
    """
    match variant:
        case PrefVariant.FF:
            return all((k1, k2) in better for k1 in left for k2 in right)
        case PrefVariant.EA:
            return any(all((k1, k2) in better for k2 in right) for k1 in left)
        case PrefVariant.AE:
            return all(any((k1, k2) in better for k2 in right) for k1 in left)
        case PrefVariant.EE:
            return any((k1, k2) in better for k1 in left for k2 in right)
        case PrefVariant.GEA:
            return any(all((k2, k1) in better for k2 in right) for k1 in left)
        case PrefVariant.GAE:
            return all(any((k2, k1) in better for k2 in right) for k1 in left)
    raise ValueError(f"unknown preference variant {variant}")


def preference_agents(formula: Formula) -> Set[str]:
    """선호 기술이 필요한 에이전트 (선호 연산자와 경로 양화자)"""
    return {node.agent for node in subformulas(formula) if isinstance(node, (Pref,) + PATH_BINDERS)}


def class_obligation(operand: Formula, objective: Formula) -> Formula:
    """∃X(B′ ∧ B_k)"""
    return desugar(ExistsPath(Next(And(operand, objective))))


class DirectPrefChecker(CtlStarChecker):
    """선호 연산자를 곱 공간에서 직접 평가"""

    engine_name = "direct"
    forbidden = (PathAtom,) + PATH_BINDERS + GAME_NODES + PROP_BINDERS

    def _descriptions(self, model: Model, formula: Formula,
                      descriptions: Optional[Mapping[str, PreferenceDescription]]) -> Dict[str, PreferenceDescription]:
        source = descriptions if descriptions is not None else model.prefs
        needed = preference_agents(formula)
        missing = sorted(needed - set(source))
        if missing:
            raise MissingDescriptionError(f"no preference description for agents {missing}")
        return {agent: source[agent] for agent in needed}

    def _build_space(self, model: Model, formula: Formula, descriptions=None, **options) -> StateSpace:
        return annotated_space(as_kripke(model), self._descriptions(model, formula, descriptions))

    def _group_by_description(self, space: StateSpace, agent: str) -> Dict[PreferenceDescription, List[Node]]:
        groups: Dict[PreferenceDescription, List[Node]] = {}
        for node in space.nodes:
            description = space.annotation(node, agent)
            if description is None:
                raise MissingDescriptionError(f"no preference description for agent {agent}")
            groups.setdefault(description, []).append(node)
        return groups

    def _classes_met(self, frame: Frame, operand: Formula, description: PreferenceDescription,
                     env: Any) -> Dict[int, FrozenSet[Node]]:
        return {k: self.sat(frame, class_obligation(operand, description.objective(k)), env)
                for k in description.indices()}

    def _sat_extension(self, frame: Frame, f: Formula, env: Any) -> FrozenSet[Node]:
        if not isinstance(f, Pref):
            return super()._sat_extension(frame, f, env)
        satisfied = set()
        for description, members in self._group_by_description(frame.space, f.agent).items():
            met_left = self._classes_met(frame, f.left, description, env)
            met_right = self._classes_met(frame, f.right, description, env)
            for node in members:
                left = {k for k, nodes in met_left.items() if node in nodes}
                right = {k for k, nodes in met_right.items() if node in nodes}
                if preference_holds(f.variant, left, right, description.better):
                    satisfied.add(node)
        return frozenset(satisfied)


def direct_pref_check(k: Model, descriptions: Optional[Mapping[str, PreferenceDescription]], a: Formula,
                      config: Optional[Any] = None):
    """CTL*₍<₎ 식의 직접 평가 (descriptions가 None이면 모델의 선호 기술 사용)"""
    return DirectPrefChecker(config=config).check(k, a, descriptions=descriptions)
