"""
유한 상태 공간과 CTL* 경로 tableau

검사 엔진들은 모두 StateSpace 위에서 동작합니다.
- kripke_space: Kripke 모델 그대로
- annotated_space: (상태, 에이전트별 현재 목표 목록) 곱
- game_space: (최근 상태 창, 목표 목록) 곱 + 전역 수별 후속 노드
- tagged_space: 경로 변수 바인더 기준 거리(0, 1, ≥2) 표시
"""
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

import networkx as nx

from core.errors import FreePathVariableError, UnsupportedFormulaError
from core.formula import Formula, Implies, Next, PathAtom, Until, sort_agents
from core.gnf import normalize_description
from core.models import CGM, KripkeModel, Move, PreferenceDescription

Node = Hashable


@dataclass
class StateSpace:
    """검사 대상 유한 그래프"""
    nodes: Tuple[Node, ...]
    initial: Node
    successors: Dict[Node, Tuple[Node, ...]]
    labels: Dict[Node, FrozenSet[str]]
    props: FrozenSet[str]
    names: Dict[Node, str]
    annotations: Dict[Node, Dict[str, PreferenceDescription]] = field(default_factory=dict)
    moves: Dict[Node, Dict[Move, Node]] = field(default_factory=dict)      # 게임 공간만
    windows: Dict[Node, Tuple[str, ...]] = field(default_factory=dict)     # 게임 공간만
    agents: Tuple[str, ...] = ()
    actions: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    origins: Dict[str, Tuple[str, Optional[Move]]] = field(default_factory=dict)

    @property
    def is_game(self) -> bool:
        return bool(self.moves)

    def annotation(self, node: Node, agent: str) -> Optional[PreferenceDescription]:
        return self.annotations.get(node, {}).get(agent)

    def influential(self, node: Node, agent: str) -> bool:
        """agent 혼자 행동을 바꿔 다음 모델 상태를 바꿀 수 있는지"""
        index = self.agents.index(agent)
        outcomes: Dict[Move, str] = {}
        for move, target in self.moves[node].items():
            rest = move[:index] + move[index + 1:]
            state = self.windows[target][-1]
            if rest in outcomes and outcomes[rest] != state:
                return True
            outcomes.setdefault(rest, state)
        return False

    def restricted_successors(self, allowed: Callable[[Node, Move], bool]) -> Dict[Node, Tuple[Node, ...]]:
        """allowed(node, move)인 수만 남긴 후속 관계"""
        return {node: tuple(dict.fromkeys(target for move, target in self.moves[node].items()
                                          if allowed(node, move)))
                for node in self.nodes}


def kripke_space(k: KripkeModel) -> StateSpace:
    nodes = tuple(k.states)
    return StateSpace(
        nodes=nodes,
        initial=k.initial,
        successors={state: tuple(sorted(k.successors(state))) for state in nodes},
        labels=dict(k.valuation),
        props=k.props,
        names={state: state for state in nodes},
    )


def _start_annotation(agents: Sequence[str], descriptions: Mapping[str, PreferenceDescription]):
    return tuple(normalize_description(descriptions[agent]) for agent in agents)


def _step_annotation(annotation, letter: FrozenSet[str]):
    return tuple(d.updated(letter) for d in annotation)


def annotated_space(k: KripkeModel, descriptions: Mapping[str, PreferenceDescription]) -> StateSpace:
    """도달 가능한 (상태, 목표 목록) 곱. 이름은 "w/i" (i는 발견 순서)."""
    if not descriptions:
        return kripke_space(k)
    agents = sort_agents(descriptions)
    start = (k.initial, _start_annotation(agents, descriptions))
    order = [start]
    seen = {start}
    successors: Dict[Node, Tuple[Node, ...]] = {}
    for node in order:
        state, annotation = node
        targets = []
        for target in sorted(k.successors(state)):
            child = (target, _step_annotation(annotation, k.label(target)))
            targets.append(child)
            if child not in seen:
                seen.add(child)
                order.append(child)
        successors[node] = tuple(dict.fromkeys(targets))
    return StateSpace(
        nodes=tuple(order),
        initial=start,
        successors=successors,
        labels={node: k.label(node[0]) for node in order},
        props=k.props,
        names={node: f"{node[0]}/{i}" for i, node in enumerate(order)},
        annotations={node: dict(zip(agents, node[1])) for node in order},
    )


def game_space(m: CGM, window: int, descriptions: Optional[Mapping[str, PreferenceDescription]] = None
               ) -> StateSpace:
    """(최근 window개 상태, 목표 목록) 곱

    window = h+1이면 유계 기억 h 전략이 보는 이력 창과 같다.
    """
    descriptions = descriptions or {}
    agents = sort_agents(descriptions)
    start = ((m.initial,), _start_annotation(agents, descriptions))
    order = [start]
    seen = {start}
    moves: Dict[Node, Dict[Move, Node]] = {}
    for node in order:
        history, annotation = node
        table = {}
        for move in m.moves():
            target = m.successor(history[-1], move)
            child = ((history + (target,))[-window:], _step_annotation(annotation, m.label(target)))
            table[move] = child
            if child not in seen:
                seen.add(child)
                order.append(child)
        moves[node] = table

    def name(i: int, node) -> str:
        text = ">".join(node[0])
        return f"{text}/{i}" if agents else text

    return StateSpace(
        nodes=tuple(order),
        initial=start,
        successors={node: tuple(dict.fromkeys(moves[node].values())) for node in order},
        labels={node: m.label(node[0][-1]) for node in order},
        props=m.props,
        names={node: name(i, node) for i, node in enumerate(order)},
        annotations={node: dict(zip(agents, node[1])) for node in order},
        moves=moves,
        windows={node: node[0] for node in order},
        agents=m.agents,
        actions=dict(m.actions),
        origins=dict(m.origins),
    )


def tagged_space(space: StateSpace, marker: str) -> StateSpace:
    """바인더 노드로부터의 거리(0, 1, ≥2)를 붙인 공간. marker는 거리 1에서만 참."""
    nodes = tuple((node, tag) for tag in (0, 1, 2) for node in space.nodes)

    def shift(tag: int) -> int:
        return min(tag + 1, 2)

    successors = {(node, tag): tuple((target, shift(tag)) for target in space.successors[node])
                  for node, tag in nodes}
    moves = {}
    if space.is_game:
        moves = {(node, tag): {move: (target, shift(tag)) for move, target in space.moves[node].items()}
                 for node, tag in nodes}
    return StateSpace(
        nodes=nodes,
        initial=(space.initial, 0),
        successors=successors,
        labels={(node, tag): space.labels[node] | ({marker} if tag == 1 else frozenset())
                for node, tag in nodes},
        props=space.props | {marker},
        names={(node, tag): f"{space.names[node]}^{tag}" for node, tag in nodes},
        annotations={(node, tag): space.annotations.get(node, {}) for node, tag in nodes},
        moves=moves,
        windows={(node, tag): space.windows[node] for node, tag in nodes} if space.windows else {},
        agents=space.agents,
        actions=space.actions,
        origins=space.origins,
    )


def index_subsets(indices: Iterable[int]) -> List[FrozenSet[int]]:
    """{1..K}의 모든 부분집합 (공집합 포함, 크기 순)"""
    items = list(indices)
    return [frozenset(chosen) for size in range(len(items) + 1) for chosen in combinations(items, size)]


# ===== CTL* 경로 tableau =====

def _path_order(body: Formula) -> List[Formula]:
    """경로식 골격의 후위 순서 (최대 상태 부분식은 잎)"""
    order: List[Formula] = []
    seen: Set[Formula] = set()

    def visit(f: Formula):
        if f in seen:
            return
        seen.add(f)
        if not f.is_state:
            match f:
                case Implies(left, right) | Until(left, right):
                    visit(left)
                    visit(right)
                case Next(inner):
                    visit(inner)
                case PathAtom(name):
                    raise FreePathVariableError(f"free path variable ~{name}")
                case _:
                    raise UnsupportedFormulaError(f"path formula must be desugared first: {f}")
        order.append(f)

    visit(body)
    return order


def exists_path_nodes(nodes: Sequence[Node], successors: Mapping[Node, Sequence[Node]], body: Formula,
                      leaf_sat: Callable[[Formula], FrozenSet[Node]]) -> FrozenSet[Node]:
    """∃body가 성립하는 노드 집합

    원자 = (노드, 참인 X-의무 집합). 후속 원자의 값이 의무와 일치하는 간선만 남기고,
    U마다 "무한히 자주 ¬U 또는 오른쪽 참"인 공정 SCC에 도달 가능한 원자를 찾는다.
    """
    if body.is_state:
        return frozenset(leaf_sat(body))

    order = _path_order(body)
    leaves = {f: leaf_sat(f) for f in order if f.is_state}
    obligations: List[Formula] = []
    for f in order:
        if isinstance(f, Next):
            obligations.append(f)
        elif isinstance(f, Until):
            obligations.append(Next(f))
    obligations = list(dict.fromkeys(obligations))
    bit = {f: 1 << i for i, f in enumerate(obligations)}
    untils = [f for f in order if isinstance(f, Until)]
    width = 1 << len(obligations)

    index = {node: i for i, node in enumerate(nodes)}
    holds: Dict[int, bool] = {}
    required: Dict[int, int] = {}
    fair: Dict[int, int] = {}
    for node in nodes:
        for mask in range(width):
            value: Dict[Formula, bool] = {}
            for f in order:
                if f.is_state:
                    value[f] = node in leaves[f]
                    continue
                match f:
                    case Implies(left, right):
                        value[f] = (not value[left]) or value[right]
                    case Next():
                        value[f] = bool(mask & bit[f])
                    case Until(left, right):
                        value[f] = value[right] or (value[left] and bool(mask & bit[Next(f)]))
            atom = index[node] * width + mask
            holds[atom] = value[body]
            required[atom] = sum(bit[g] for g in obligations if value[g.body])
            fair[atom] = sum(1 << i for i, u in enumerate(untils) if (not value[u]) or value[u.right])

    graph = nx.DiGraph()
    graph.add_nodes_from(holds)
    for node in nodes:
        base = index[node] * width
        for target in successors[node]:
            tbase = index[target] * width
            for mask in range(width):
                graph.add_edge(base + required[tbase + mask], tbase + mask)

    complete = (1 << len(untils)) - 1
    targets: Set[int] = set()
    for component in nx.strongly_connected_components(graph):
        if len(component) == 1:
            (only,) = component
            if not graph.has_edge(only, only):
                continue
        covered = 0
        for atom in component:
            covered |= fair[atom]
        if covered == complete:
            targets |= component

    good = set(targets)
    stack = list(targets)
    while stack:
        atom = stack.pop()
        for source in graph.predecessors(atom):
            if source not in good:
                good.add(source)
                stack.append(source)

    return frozenset(node for node in nodes
                     if any(holds[index[node] * width + mask] and index[node] * width + mask in good
                            for mask in range(width)))
