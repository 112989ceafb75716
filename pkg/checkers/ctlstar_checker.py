"""
명시적 상태 CTL* 검사기

상태식은 노드 집합으로 재귀 계산하고, ∃B는 경로 tableau(state_space.exists_path_nodes)로 계산합니다.
하위 엔진(선호, 경로 양화, 전략 문맥, 명제 양화)은 _sat_extension과 환경(env)으로 확장합니다.
"""
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Optional, Tuple, Union

from checkers.base_checker import BaseChecker, CheckResult
from checkers.state_space import Node, StateSpace, exists_path_nodes, kripke_space
from core.errors import UnsupportedFormulaError, VocabularyError
from core.formula import (
    GAME_NODES, PATH_BINDERS, PROP_BINDERS, Atom, Bot, ExistsPath, Formula, Implies, PathAtom, Pref,
    desugar, find_first,
)
from core.model_builder import to_kripke
from core.models import CGM, KripkeModel, Verdict

Model = Union[KripkeModel, CGM]


@dataclass
class Frame:
    """한 상태 공간 위의 평가 메모"""
    space: StateSpace
    memo: Dict[Tuple[Formula, Any], FrozenSet[Node]] = field(default_factory=dict)


def as_kripke(model: Model) -> KripkeModel:
    return to_kripke(model) if isinstance(model, CGM) else model


class CtlStarChecker(BaseChecker):
    """CTL* (명제 양화, 선호, 경로 변수, 게임 모달리티 없음)"""

    engine_name = "ctlstar"
    forbidden = (Pref, PathAtom) + PATH_BINDERS + GAME_NODES + PROP_BINDERS

    def check(self, model: Model, formula: Formula, **options) -> CheckResult:
        self._require_fragment(formula)
        space = self._build_space(model, formula, **options)
        frame = Frame(space)
        core = desugar(formula)
        satisfied = self.sat(frame, core, self._initial_env(space, **options))
        return self._result(space, satisfied, formula, **options)

    # ===== 준비 =====

    def _require_fragment(self, formula: Formula):
        if not formula.is_state:
            raise UnsupportedFormulaError(f"expected a state formula, got path formula {formula}")
        offending = find_first(formula, *self.forbidden)
        if offending is not None:
            raise UnsupportedFormulaError(
                f"{self.engine_name} engine does not accept {type(offending).__name__} nodes: {offending}")

    def _build_space(self, model: Model, formula: Formula, **options) -> StateSpace:
        return kripke_space(as_kripke(model))

    def _initial_env(self, space: StateSpace, **options) -> Any:
        return None

    def _result(self, space: StateSpace, satisfied: FrozenSet[Node], formula: Formula, **options) -> CheckResult:
        value = space.initial in satisfied
        per_state = {space.names[node]: node in satisfied for node in space.nodes}
        self.logger.debug(f"🔎 {self.engine_name}: {formula} → {value} ({len(space.nodes)}개 노드)")
        return CheckResult(Verdict.of(value), per_state, exact=True, engine=self.engine_name)

    # ===== 평가 =====

    def sat(self, frame: Frame, f: Formula, env: Any) -> FrozenSet[Node]:
        """f가 성립하는 노드 집합 (desugar된 상태식)"""
        key = (f, self._env_key(f, env))
        cached = frame.memo.get(key)
        if cached is None:
            cached = frozenset(self._sat(frame, f, env))
            frame.memo[key] = cached
        return cached

    def _env_key(self, f: Formula, env: Any) -> Any:
        return None

    def _successors(self, frame: Frame, env: Any):
        return frame.space.successors

    def _atom(self, frame: Frame, name: str, env: Any) -> FrozenSet[Node]:
        space = frame.space
        if name not in space.props:
            raise VocabularyError(f"proposition '{name}' is not in the model vocabulary")
        return frozenset(node for node in space.nodes if name in space.labels[node])

    def _sat(self, frame: Frame, f: Formula, env: Any) -> FrozenSet[Node]:
        match f:
            case Bot():
                return frozenset()
            case Atom(name):
                return self._atom(frame, name, env)
            case Implies(left, right) if f.is_state:
                everything = frozenset(frame.space.nodes)
                return (everything - self.sat(frame, left, env)) | self.sat(frame, right, env)
            case ExistsPath(body):
                return exists_path_nodes(frame.space.nodes, self._successors(frame, env), body,
                                         lambda leaf: self.sat(frame, leaf, env))
        return self._sat_extension(frame, f, env)

    def _sat_extension(self, frame: Frame, f: Formula, env: Any) -> FrozenSet[Node]:
        raise UnsupportedFormulaError(f"{self.engine_name} engine cannot evaluate {f}")


def ctlstar_check(k: Model, a: Formula, config: Optional[Any] = None) -> CheckResult:
    """CTL* 식의 상태별 진리값"""
    return CtlStarChecker(config=config).check(k, a)
