"""
번역된 QCTL* 식의 유계 평가기

대상은 unfold1(M) (또는 작은 Kripke 모델). 곱 노드는 M♭의 최근 h+2개 상태이므로
각 노드에서 "직전 결정 상태의 M 창"과 "현재 M 창"을 알 수 있습니다.

- 번역기가 등록한 전략 변수 묶음(StrategyBlock)의 ∃는 h 기억 창 전략이 만드는 라벨링만 열거
  · dest: 노드에 저장된 수의 소유자 성분 == f(직전 M 창)
  · log: 비트 = code(f(현재 M 창))
- 등록되지 않은 명제 양화는 곱 노드 위 모든 라벨링 (max_free_labelings 이하)
"""
from itertools import product
from math import prod
from typing import Any, Dict, FrozenSet, List, Mapping, Optional, Tuple

from checkers.atlsc_oracle import Window, enumerate_window_strategies
from checkers.base_checker import CheckResult, bounded_verdict
from checkers.ctlstar_checker import CtlStarChecker, Frame, Model
from checkers.state_space import Node, StateSpace, game_space, kripke_space
from core.errors import BoundedSearchError, TranslationError
from core.formula import GAME_NODES, PATH_BINDERS, ExistsProp, Formula, PathAtom, Pref, free_props
from core.model_builder import unfold1
from core.models import CGM, StrategyBlock, TranslationResult, Verdict

Env = Dict[str, FrozenSet[Node]]


class TranslatedChecker(CtlStarChecker):
    """QCTL* (명제 양화 포함) 유계 평가"""

    engine_name = "translated"
    forbidden = (Pref, PathAtom) + PATH_BINDERS + GAME_NODES

    def __init__(self, config: Any = None, logger: Any = None):
        super().__init__(config=config, logger=logger)
        self._registry: Dict[str, StrategyBlock] = {}
        self._bound_value = 0
        self._domains: Dict[str, List[Window]] = {}

    # ===== 준비 =====

    def _build_space(self, model: Model, formula: Formula, registry: Optional[Mapping[str, StrategyBlock]] = None,
                     bound: Optional[int] = None, **options) -> StateSpace:
        self._registry = dict(registry or {})
        self._bound_value = self.config.history_bound if bound is None else bound
        self._domains.clear()
        if not isinstance(model, CGM):
            if self._registry:
                raise TranslationError("strategy variables need a game model")
            return kripke_space(model)
        if not model.stores_moves:
            model = unfold1(model)
        space = game_space(model, self._bound_value + 2)
        self.logger.debug(f"🎲 번역 검사 공간: h={self._bound_value}, {len(space.nodes)}개 노드")
        return space

    def _initial_env(self, space: StateSpace, **options) -> Env:
        return {}

    def _result(self, space: StateSpace, satisfied: FrozenSet[Node], formula: Formula,
                sufficient: Optional[bool] = None, **options) -> CheckResult:
        value = space.initial in satisfied
        sufficient = self.config.sufficient if sufficient is None else sufficient
        verdict, exact = bounded_verdict(value, formula, sufficient,
                                         lambda f: isinstance(f, ExistsProp) and f.prop in self._registry)
        per_state = {space.names[node]: node in satisfied for node in space.nodes}
        return CheckResult(verdict, per_state, exact=exact, engine=self.engine_name,
                           detail=f"bounded value {value}")

    # ===== 환경 =====

    def _env_key(self, f: Formula, env: Env) -> Any:
        names = sorted(free_props(f) & set(env))
        return tuple((name, env[name]) for name in names)

    def _atom(self, frame: Frame, name: str, env: Env) -> FrozenSet[Node]:
        if name in env:
            return env[name]
        return super()._atom(frame, name, env)

    # ===== M 창 =====

    def _base_window(self, space: StateSpace, states: Tuple[str, ...]) -> Window:
        return tuple(space.origins[state][0] for state in states)[-(self._bound_value + 1):]

    def _deciding_window(self, space: StateSpace, node: Node) -> Optional[Window]:
        """노드에 저장된 수를 고른 상태의 M 창 (뿌리이면 None)"""
        window = space.windows[node]
        if space.origins[window[-1]][1] is None:
            return None
        return self._base_window(space, window[:-1])

    def _current_window(self, space: StateSpace, node: Node) -> Window:
        return self._base_window(space, space.windows[node])

    def _domain(self, space: StateSpace, agent: str) -> List[Window]:
        """agent가 혼자 다음 M 상태를 바꿀 수 있는 M 창들"""
        if agent not in self._domains:
            index = space.agents.index(agent)
            windows = set()
            for node in space.nodes:
                outcomes: Dict[Tuple[str, ...], str] = {}
                for move, target in space.moves[node].items():
                    rest = move[:index] + move[index + 1:]
                    state = space.origins[space.windows[target][-1]][0]
                    if outcomes.setdefault(rest, state) != state:
                        windows.add(self._current_window(space, node))
                        break
            self._domains[agent] = sorted(windows)
        return self._domains[agent]

    # ===== 평가 =====

    def _sat_extension(self, frame: Frame, f: Formula, env: Env) -> FrozenSet[Node]:
        if isinstance(f, ExistsProp):
            if f.prop in self._registry:
                return self._sat_strategy_block(frame, f, env)
            return self._sat_free_labelings(frame, f, env)
        return super()._sat_extension(frame, f, env)

    def _sat_free_labelings(self, frame: Frame, f: ExistsProp, env: Env) -> FrozenSet[Node]:
        nodes = frame.space.nodes
        count = 2 ** len(nodes)
        if count > self.config.max_free_labelings:
            raise BoundedSearchError(f"{count} labelings of '{f.prop}' exceed the limit "
                                     f"{self.config.max_free_labelings}")
        everything = frozenset(nodes)
        satisfied: FrozenSet[Node] = frozenset()
        for mask in range(count):
            labeling = frozenset(node for i, node in enumerate(nodes) if mask >> i & 1)
            satisfied |= self.sat(frame, f.body, {**env, f.prop: labeling})
            if satisfied == everything:
                break
        return satisfied

    def _block_body(self, f: ExistsProp, block: StrategyBlock) -> Formula:
        body: Formula = f
        for name in block.variables:
            if not isinstance(body, ExistsProp) or body.prop != name:
                raise TranslationError(f"strategy variables {list(block.variables)} must be bound consecutively")
            body = body.body
        return body

    def _sat_strategy_block(self, frame: Frame, f: ExistsProp, env: Env) -> FrozenSet[Node]:
        space = frame.space
        if not space.is_game:
            raise TranslationError("strategy variables need a game model")
        block = self._registry[f.prop]
        body = self._block_body(f, block)
        owners = block.owners
        domains = [self._domain(space, agent) for agent in owners]
        count = prod(len(space.actions[agent]) ** len(domain) for agent, domain in zip(owners, domains))
        if count > self.config.max_profiles:
            raise BoundedSearchError(f"{count} strategies for {list(owners)} exceed the limit "
                                     f"{self.config.max_profiles}")

        everything = frozenset(space.nodes)
        satisfied: FrozenSet[Node] = frozenset()
        per_agent = [list(enumerate_window_strategies(domain, space.actions[agent]))
                     for agent, domain in zip(owners, domains)]
        for choice in product(*per_agent):
            labeling = self._block_labeling(space, block, dict(zip(owners, choice)))
            satisfied |= self.sat(frame, body, {**env, **labeling})
            if satisfied == everything:
                break
        return satisfied

    def _block_labeling(self, space: StateSpace, block: StrategyBlock,
                        strategies: Dict[str, Dict[Window, str]]) -> Env:
        def act(agent: str, window: Window) -> str:
            return strategies[agent].get(window, space.actions[agent][0])

        truth: Dict[str, set] = {name: set() for name in block.variables}
        for node in space.nodes:
            if block.encoding == "log":
                window = self._current_window(space, node)
                bits = block.code(tuple(act(agent, window) for agent in block.owners))
                for name, bit in zip(block.variables, bits):
                    if bit:
                        truth[name].add(node)
                continue
            window = self._deciding_window(space, node)
            if window is None:
                continue
            stored = space.origins[space.windows[node][-1]][1]
            if all(stored[space.agents.index(agent)] == act(agent, window) for agent in block.owners):
                truth[block.variables[0]].add(node)
        return {name: frozenset(nodes) for name, nodes in truth.items()}


def translated_check(result: TranslationResult, h: int = 0, sufficient: bool = False, config=None) -> Verdict:
    """번역 결과(식, M♭, 전략 변수 목록)를 유계 기억 h로 평가"""
    checker = TranslatedChecker(config=config)
    return checker.check(result.model, result.formula, registry=result.registry, bound=h,
                         sufficient=sufficient).verdict
