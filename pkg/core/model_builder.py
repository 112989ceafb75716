"""
모델 구성: CGM → Kripke 사영, 수 저장 펼침(M♭), 선호 라벨 곱(M_B), 경로 따라 선호 갱신
"""
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from core.errors import ClosureError, MissingDescriptionError, ModelError
from core.formula import Formula, sort_agents
from core.gnf import normalize_description
from core.models import CGM, KripkeModel, Move, PreferenceDescription, QNaming
from utils.logger import setup_logger

logger = setup_logger(__name__)

INITIAL_MOVE = "*"

Annotation = Tuple[PreferenceDescription, ...]


def to_kripke(m: CGM) -> KripkeModel:
    """R(w) = { o(w, a) : a 전역 수 }"""
    transitions = {state: m.successors(state) for state in m.states}
    return KripkeModel(m.states, m.initial, transitions, m.valuation, m.props, m.prefs)


def unfold_state_name(state: str, move: Optional[Move]) -> str:
    if move is None:
        return f"{state}@{INITIAL_MOVE}"
    return f"{state}@{'.'.join(move)}"


def unfold1(m: CGM) -> CGM:
    """직전 전역 수를 도착 상태에 저장하는 펼침 M♭

    상태: (w_I, *) 와 W × Act_Ag, o♭(⟨w,b⟩, a) = ⟨o(w,a), a⟩.
    (w, b)의 라벨은 V(w)에 b의 행동 원자를 더한 것.
    """
    moves = list(m.moves())
    origins: Dict[str, Tuple[str, Optional[Move]]] = {}

    initial = unfold_state_name(m.initial, None)
    origins[initial] = (m.initial, None)
    for state in m.states:
        for move in moves:
            origins[unfold_state_name(state, move)] = (state, move)

    valuation = {}
    outcome = {}
    for name, (state, stored) in origins.items():
        valuation[name] = m.label(state) | frozenset(stored or ())
        for move in moves:
            outcome[(name, move)] = unfold_state_name(m.successor(state, move), move)

    states = tuple(origins)
    logger.debug(f"🌳 unfold1: {len(m.states)}개 상태 → {len(states)}개 상태")
    return CGM(states, initial, m.agents, m.actions, outcome, valuation,
               m.props | m.action_atoms, m.prefs, origins)


def _annotation_labels(annotation: Annotation, namings: Sequence[QNaming]) -> frozenset:
    names = set()
    for description, naming in zip(annotation, namings):
        try:
            names |= naming.true_variables(description)
        except KeyError as e:
            raise ClosureError(f"objective {e} of agent {naming.agent} is missing from its closure naming") from None
    return frozenset(names)


def _resolve_descriptions(model: Union[KripkeModel, CGM], agents: Sequence[str],
                          descriptions: Optional[Mapping[str, PreferenceDescription]]):
    source = descriptions if descriptions is not None else model.prefs
    missing = [agent for agent in agents if agent not in source]
    if missing:
        raise MissingDescriptionError(f"no preference description for agents {missing}")
    return tuple(normalize_description(source[agent]) for agent in agents)


def build_mb(model: Union[KripkeModel, CGM], namings: Mapping[str, QNaming],
             descriptions: Optional[Mapping[str, PreferenceDescription]] = None) -> Union[KripkeModel, CGM]:
    """선호 라벨 곱 M_B (도달 가능한 (상태, 목표 목록) 쌍만)

    Args:
        model: Kripke 모델 또는 CGM
        namings: 에이전트별 q/r 변수 명명
        descriptions: 에이전트별 선호 기술 (미지정 시 model.prefs)

    Returns:
        입력과 같은 종류의 모델. 상태 이름은 "w/i" (i는 발견 순서),
        라벨은 V(w)와 현재 목표 목록의 q/r 원자.
    """
    agents = sort_agents(namings)
    ordered = [namings[agent] for agent in agents]
    start: Annotation = _resolve_descriptions(model, agents, descriptions)

    names: Dict[Tuple[str, Annotation], str] = {}
    order: List[Tuple[str, Annotation]] = []

    def visit(state: str, annotation: Annotation) -> str:
        key = (state, annotation)
        if key not in names:
            names[key] = f"{state}/{len(order)}"
            order.append(key)
        return names[key]

    def step(annotation: Annotation, target: str) -> Annotation:
        letter = model.label(target)
        return tuple(d.updated(letter) for d in annotation)

    initial = visit(model.initial, start)
    valuation = {}
    transitions: Dict[str, set] = {}
    outcome: Dict[Tuple[str, Move], str] = {}
    is_game = isinstance(model, CGM)

    for state, annotation in order:
        name = names[(state, annotation)]
        valuation[name] = model.label(state) | _annotation_labels(annotation, ordered)
        if is_game:
            for move in model.moves():
                target = model.successor(state, move)
                outcome[(name, move)] = visit(target, step(annotation, target))
        else:
            transitions[name] = {visit(target, step(annotation, target))
                                 for target in sorted(model.successors(state))}

    states = tuple(names[key] for key in order)
    props = model.props | frozenset(v for naming in ordered for v in naming.variables())
    logger.debug(f"🧩 M_B 구성: {len(model.states)}개 상태 → {len(states)}개 곱 상태")
    if is_game:
        return CGM(states, initial, model.agents, model.actions, outcome, valuation, props, model.prefs)
    return KripkeModel(states, initial, transitions, valuation, props, model.prefs)


def pref_update_path(d: PreferenceDescription, path: Sequence[str],
                     m: Union[KripkeModel, CGM]) -> Tuple[Formula, ...]:
    """경로를 따라간 뒤의 목표식 목록 B_{n,k}

    path[0]은 초기 상태이고, 이후 각 상태로 들어갈 때 그 상태의 valuation으로 tail 갱신.
    빈 경로는 목표식 자체를 돌려준다.
    """
    if not path:
        return d.objectives
    current = normalize_description(d)
    if path[0] != m.initial:
        raise ModelError(f"path must start at the initial state '{m.initial}', got '{path[0]}'")
    for source, target in zip(path, path[1:]):
        if target not in m.successors(source):
            raise ModelError(f"'{target}' is not a successor of '{source}'")
        current = current.updated(m.label(target))
    return current.objectives
