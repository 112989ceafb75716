"""
모델 파일 로더/작성기

UTF-8 텍스트, 줄 단위 섹션 형식:

    agents: 1 2
    actions 1: a b
    actions 2: c d
    states: w0 w1
    init: w0
    props: p q             # 선택
    label w0: p
    outcome w0 a c -> w1   # (상태, 전역 수)마다 한 줄, 전체 정의 필수
    trans w0 -> w1 w0      # Kripke 모델 (outcome 대신)
    pref 1 objective: G p
    pref 1 order: 2 < 1    # 1부터 시작하는 목표 인덱스
    stored w0@a.c: w0 a c # M♭: 원래 상태와 저장된 수 (초기 상태는 수 없이)
"""
from collections import defaultdict
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple, Union

from core.errors import AtlscPrefError, ModelError
from core.formula import Formula, print_formula, sort_agents
from core.formula_parser import parse_formula
from core.models import CGM, KripkeModel, PreferenceDescription
from utils.logger import setup_logger

logger = setup_logger(__name__)

Model = Union[KripkeModel, CGM]


class _ModelText:
    """파싱 중간 결과"""

    def __init__(self):
        self.agents: List[str] = []
        self.actions: Dict[str, List[str]] = {}
        self.states: List[str] = []
        self.initial: str = ""
        self.props: Set[str] = set()
        self.labels: Dict[str, Set[str]] = defaultdict(set)
        self.outcome: Dict[Tuple[str, Tuple[str, ...]], str] = {}
        self.transitions: Dict[str, Set[str]] = defaultdict(set)
        self.objectives: Dict[str, List[Formula]] = defaultdict(list)
        self.orders: Dict[str, Set[Tuple[int, int]]] = defaultdict(set)
        self.order_lines: Dict[str, int] = {}
        self.origins: Dict[str, Tuple[str, Optional[Tuple[str, ...]]]] = {}


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _split_header(line: str, number: int) -> Tuple[List[str], str]:
    if ":" not in line:
        raise ModelError(f"expected 'section: values', got '{line}'", number)
    head, _, rest = line.partition(":")
    return head.split(), rest.strip()


def _parse_arrow(line: str, number: int) -> Tuple[List[str], List[str]]:
    if "->" not in line:
        raise ModelError(f"expected '->' in '{line}'", number)
    left, _, right = line.partition("->")
    return left.split(), right.split()


def _parse_line(text: _ModelText, line: str, number: int):
    keyword = line.split()[0]
    if keyword in ("outcome", "trans"):
        left, right = _parse_arrow(line, number)
        if len(left) < 2 or not right:
            raise ModelError(f"incomplete {keyword} line", number)
        source = left[1]
        if keyword == "trans":
            text.transitions[source].update(right)
            return
        if len(right) != 1:
            raise ModelError("outcome must name exactly one target state", number)
        move = tuple(left[2:])
        if (source, move) in text.outcome:
            raise ModelError(f"duplicate outcome for state '{source}' and move {' '.join(move)}", number)
        text.outcome[(source, move)] = right[0]
        return

    head, rest = _split_header(line, number)
    section = head[0]
    if section == "agents":
        text.agents = rest.split()
    elif section == "actions" and len(head) == 2:
        text.actions[head[1]] = rest.split()
    elif section == "states":
        text.states = rest.split()
    elif section == "init":
        values = rest.split()
        if len(values) != 1:
            raise ModelError("init expects exactly one state", number)
        text.initial = values[0]
    elif section == "props":
        text.props.update(rest.split())
    elif section == "label" and len(head) == 2:
        text.labels[head[1]].update(rest.split())
    elif section == "stored" and len(head) == 2:
        values = rest.split()
        if not values:
            raise ModelError("stored expects the original state", number)
        text.origins[head[1]] = (values[0], tuple(values[1:]) or None)
    elif section == "pref" and len(head) == 3 and head[2] == "objective":
        try:
            text.objectives[head[1]].append(parse_formula(rest))
        except AtlscPrefError as e:
            raise ModelError(f"bad objective for agent {head[1]}: {e}", number) from None
    elif section == "pref" and len(head) == 3 and head[2] == "order":
        parts = rest.replace("<", " < ").split()
        if len(parts) != 3 or parts[1] != "<" or not parts[0].isdigit() or not parts[2].isdigit():
            raise ModelError(f"expected 'k1 < k2', got '{rest}'", number)
        text.orders[head[1]].add((int(parts[0]), int(parts[2])))
        text.order_lines.setdefault(head[1], number)
    else:
        raise ModelError(f"unknown section '{' '.join(head)}'", number)


def parse_model(source: str) -> Model:
    """모델 텍스트 → CGM 또는 KripkeModel

    outcome 줄이 있으면 CGM, trans 줄이 있으면 Kripke 모델.
    """
    text = _ModelText()
    for number, raw in enumerate(source.splitlines(), start=1):
        line = _strip_comment(raw)
        if line:
            _parse_line(text, line, number)

    if not text.states:
        raise ModelError("model declares no states")
    if not text.initial:
        raise ModelError("model declares no initial state")
    if text.outcome and text.transitions:
        raise ModelError("a model uses either outcome or trans lines, not both")
    for state in text.labels:
        if state not in text.states:
            raise ModelError(f"label for undeclared state '{state}'")

    prefs = {}
    for agent in sorted(set(text.objectives) | set(text.orders)):
        if not text.objectives.get(agent):
            raise ModelError(f"preference order for agent {agent} has no objectives", text.order_lines.get(agent))
        prefs[agent] = PreferenceDescription(tuple(text.objectives[agent]), frozenset(text.orders[agent]))
        for issue in prefs[agent].lint():
            logger.warning(f"⚠️ agent {agent} 선호 순서 점검: {issue}")

    valuation = {state: frozenset(text.labels.get(state, ())) for state in text.states}
    if text.transitions:
        return KripkeModel(tuple(text.states), text.initial, dict(text.transitions), valuation,
                           frozenset(text.props), prefs)

    if not text.agents:
        raise ModelError("a game model needs an agents line")
    for agent in prefs:
        if agent not in text.agents:
            raise ModelError(f"preference for undeclared agent '{agent}'")
    for (state, move), _ in text.outcome.items():
        if state not in text.states:
            raise ModelError(f"outcome for undeclared state '{state}'")
        if len(move) != len(text.agents):
            raise ModelError(f"move {' '.join(move)} does not name one action per agent")
    return CGM(tuple(text.states), text.initial, tuple(text.agents),
               {agent: tuple(text.actions.get(agent, ())) for agent in text.agents},
               dict(text.outcome), valuation, frozenset(text.props), prefs, text.origins)


def load_model(path: Union[str, Path]) -> Model:
    """모델 파일 로드"""
    path = Path(path)
    try:
        source = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelError(f"cannot read model file {path}: {e}") from None
    model = parse_model(source)
    kind = "CGM" if isinstance(model, CGM) else "Kripke"
    logger.info(f"📂 모델 로드: {path} ({kind}, {len(model.states)}개 상태)")
    return model


def dump_model(model: Model) -> str:
    """모델 → 파일 텍스트 (parse_model로 다시 읽을 수 있음)"""
    lines: List[str] = []
    if isinstance(model, CGM):
        lines.append(f"agents: {' '.join(model.agents)}")
        for agent in model.agents:
            lines.append(f"actions {agent}: {' '.join(model.actions[agent])}")
    lines.append(f"states: {' '.join(model.states)}")
    lines.append(f"init: {model.initial}")
    lines.append(f"props: {' '.join(sorted(model.props - _action_atoms(model)))}")
    for state in model.states:
        labels = sorted(model.label(state))
        if labels:
            lines.append(f"label {state}: {' '.join(labels)}")
    if isinstance(model, CGM):
        for state in model.states:
            for move in model.moves():
                lines.append(f"outcome {state} {' '.join(move)} -> {model.successor(state, move)}")
        for state, (base, stored) in model.origins.items():
            lines.append(f"stored {state}: {' '.join((base,) + tuple(stored or ()))}")
    else:
        for state in model.states:
            lines.append(f"trans {state} -> {' '.join(sorted(model.successors(state)))}")
    for agent in sort_agents(model.prefs):
        description = model.prefs[agent]
        for objective in description.objectives:
            lines.append(f"pref {agent} objective: {print_formula(objective)}")
        for k1, k2 in sorted(description.better):
            lines.append(f"pref {agent} order: {k1} < {k2}")
    return "\n".join(lines) + "\n"


def _action_atoms(model: Model) -> frozenset:
    # M♭의 행동 원자는 라벨로만 다시 읽힌다
    return model.action_atoms if isinstance(model, CGM) else frozenset()


def save_model(model: Model, path: Union[str, Path]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_model(model), encoding="utf-8")
    logger.info(f"💾 모델 저장: {path}")
