"""
유계 기억 ATLSC* 오라클

게임 공간 노드 = (최근 h+1개 모델 상태 창, 목표 목록). 전략은 창 → 행동 함수이고,
에이전트가 혼자 다음 상태를 바꿀 수 있는 창에서만 선택지를 열거합니다 (나머지는 첫 행동).

- ⟨Γ⟩B: 어떤 ρ′(Γ의 창 전략)에 대해 문맥 ρ∘ρ′로 제한한 그래프에서 ∃¬B가 거짓
- ⟩Γ⟨A: 문맥에서 Γ의 전략 제거
- ∃B, 선호, 경로 양화자: 제한 없는 그래프, 문맥은 유지
"""
from itertools import product
from math import prod
from typing import Any, Dict, FrozenSet, List, Optional, Tuple

from checkers.base_checker import CheckResult, bounded_verdict
from checkers.ctlstar_checker import Frame, Model
from checkers.quant_sem_checker import QuantSemChecker
from checkers.state_space import Node, StateSpace, exists_path_nodes, game_space
from core.errors import BoundedSearchError, ModelError, UnknownAgentError
from core.formula import (
    BOT, GAME_NODES, PROP_BINDERS, Atom, Bot, Formula, Implies, Relax, StratMod, agents_of, sort_agents,
)
from core.models import CGM, StrategyProfile, Verdict

Window = Tuple[str, ...]
WindowStrategy = Dict[Window, str]


def window_domain(space: StateSpace, agent: str) -> List[Window]:
    """agent의 선택이 결과에 영향을 주는 창들 (전략 열거 정의역)"""
    windows = {space.windows[node] for node in space.nodes if space.influential(node, agent)}
    return sorted(windows)


def enumerate_window_strategies(domain: List[Window], actions: Tuple[str, ...]):
    for choice in product(actions, repeat=len(domain)):
        yield dict(zip(domain, choice))


class AtlscOracle(QuantSemChecker):
    """유계 기억 전략 열거로 ATLSC*(선호, 경로 양화자 포함)를 평가"""

    engine_name = "oracle"
    forbidden = PROP_BINDERS

    def __init__(self, config: Any = None, logger: Any = None):
        super().__init__(config=config, logger=logger)
        self._ctx_agents: Dict[Formula, FrozenSet[str]] = {}
        self._domains: Dict[str, List[Window]] = {}
        self._all_agents: FrozenSet[str] = frozenset()

    # ===== 준비 =====

    def _bound(self, bound: Optional[int]) -> int:
        return self.config.history_bound if bound is None else bound

    def _build_space(self, model: Model, formula: Formula, descriptions=None, bound=None, **options) -> StateSpace:
        if not isinstance(model, CGM):
            raise ModelError("the oracle needs a concurrent game model")
        unknown = agents_of(formula) - set(model.agents)
        if unknown:
            raise UnknownAgentError(f"agents not declared in the model: {sorted(unknown)}")
        self._all_agents = frozenset(model.agents)
        self._ctx_agents.clear()
        self._domains.clear()
        h = self._bound(bound)
        space = game_space(model, h + 1, self._descriptions(model, formula, descriptions))
        self.logger.debug(f"🎲 게임 공간: h={h}, {len(space.nodes)}개 노드")
        return space

    def _initial_env(self, space: StateSpace, bound=None, **options) -> StrategyProfile:
        return StrategyProfile(self._bound(bound))

    def _result(self, space: StateSpace, satisfied: FrozenSet[Node], formula: Formula,
                sufficient: Optional[bool] = None, **options) -> CheckResult:
        value = space.initial in satisfied
        sufficient = self.config.sufficient if sufficient is None else sufficient
        verdict, exact = bounded_verdict(value, formula, sufficient, lambda f: isinstance(f, GAME_NODES))
        per_state = {space.names[node]: node in satisfied for node in space.nodes}
        self.logger.debug(f"🔎 oracle: {formula} → {verdict.value} (bounded value {value})")
        return CheckResult(verdict, per_state, exact=exact, engine=self.engine_name,
                           detail=f"bounded value {value}")

    # ===== 문맥 =====

    def context_agents(self, f: Formula) -> FrozenSet[str]:
        """f의 값이 의존하는 문맥 에이전트"""
        cached = self._ctx_agents.get(f)
        if cached is not None:
            return cached
        match f:
            case Atom() | Bot():
                result = frozenset()
            case StratMod(coalition, _):
                result = self._all_agents - coalition
            case Relax(coalition, body):
                result = self.context_agents(body) - coalition
            case _:
                result = frozenset().union(*(self.context_agents(child) for child in f.children()))
        self._ctx_agents[f] = result
        return result

    def _env_key(self, f: Formula, env: StrategyProfile) -> Any:
        return env.key(self.context_agents(f))

    def _domain(self, frame: Frame, agent: str) -> List[Window]:
        # 한 검사 안의 모든 공간은 같은 게임 공간에서 파생되어 창 집합이 같다
        if agent not in self._domains:
            self._domains[agent] = window_domain(frame.space, agent)
        return self._domains[agent]

    # ===== 평가 =====

    def _sat_extension(self, frame: Frame, f: Formula, env: Any) -> FrozenSet[Node]:
        match f:
            case StratMod(coalition, body):
                return self._sat_strategic(frame, coalition, body, env)
            case Relax(coalition, body):
                return self.sat(frame, body, env.drop(coalition))
        return super()._sat_extension(frame, f, env)

    def _sat_strategic(self, frame: Frame, coalition: FrozenSet[str], body: Formula,
                       env: StrategyProfile) -> FrozenSet[Node]:
        space = frame.space
        agents = sort_agents(coalition)
        domains = [self._domain(frame, agent) for agent in agents]
        count = prod(len(space.actions[agent]) ** len(domain) for agent, domain in zip(agents, domains))
        if count > self.config.max_profiles:
            raise BoundedSearchError(f"{count} strategy profiles for coalition {list(agents)} exceed the limit "
                                     f"{self.config.max_profiles}")

        everything = frozenset(space.nodes)
        negated = Implies(body, BOT)
        satisfied: FrozenSet[Node] = frozenset()
        per_agent = [list(enumerate_window_strategies(domain, space.actions[agent]))
                     for agent, domain in zip(agents, domains)]
        for choice in product(*per_agent):
            profile = env.override(dict(zip(agents, choice)),
                                   {agent: space.actions[agent][0] for agent in agents})
            successors = self._restricted(space, profile)
            bad = exists_path_nodes(space.nodes, successors, negated,
                                    lambda leaf: self.sat(frame, leaf, profile))
            satisfied |= everything - bad
            if satisfied == everything:
                break
        return satisfied

    def _restricted(self, space: StateSpace, profile: StrategyProfile):
        bound = [(space.agents.index(agent), agent) for agent in sorted(profile.bound_agents())]

        def allowed(node: Node, move) -> bool:
            window = space.windows[node]
            return all(move[index] == profile.action(agent, window) for index, agent in bound)

        return space.restricted_successors(allowed)


def atlsc_bounded_check(m: CGM, a: Formula, h: int = 0, sufficient: bool = False,
                        descriptions=None, config=None) -> Verdict:
    """유계 기억 h 전략으로 ATLSC* 식 평가 (True / False / Unknown)"""
    result = AtlscOracle(config=config).check(m, a, descriptions=descriptions, bound=h, sufficient=sufficient)
    return result.verdict
