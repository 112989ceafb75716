"""
데이터 모델 정의
"""
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from core.errors import ClassificationError, ModelError
from core.formula import (
    Atom, Formula, Not, PATH_BINDERS, PROP_BINDERS, PathAtom, Pref, GAME_NODES, ExistsPath, ForallPath,
    conj, contains, free_props,
)


class ElimMode(Enum):
    """선호 제거 출력 형식"""
    QVARS = "qvars"      # ∃q…(L ∧ A′)
    LOGVARS = "logvars"  # ∃r…(L ∧ A′), 슬롯당 ⌈log₂|Cl|⌉ 변수
    FORMB = "formb"      # A′만 (M_B 위에서 검사)


class Stage(Enum):
    """파이프라인 단계 (실행 순서대로)"""
    PATHS = "paths"
    PREF = "pref"
    ATLSC = "atlsc"


STAGE_ORDER = (Stage.PATHS, Stage.PREF, Stage.ATLSC)


class Verdict(Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, value: bool) -> "Verdict":
        return cls.TRUE if value else cls.FALSE


class TSepMode(Enum):
    """t⁰ / t¹ 분리 모드"""
    ZERO = 0
    ONE = 1


class Template(Enum):
    """해 개념 템플릿"""
    NASH = "nash"
    SECURE = "secure"


# ===== 모델 =====

def _frozen_labels(valuation: Dict[str, Iterable[str]]) -> Dict[str, FrozenSet[str]]:
    return {state: frozenset(labels) for state, labels in valuation.items()}


@dataclass(frozen=True)
class PreferenceDescription:
    """에이전트 하나의 유한 선호 기술

    objectives: 서로소이고 전체를 덮는 LTL 목표식 B₁..B_K
    better: (k₁, k₂) ∈ P 이면 B_{k₁} < B_{k₂} (1부터 시작하는 인덱스)
    """
    objectives: Tuple[Formula, ...]
    better: FrozenSet[Tuple[int, int]] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "objectives", tuple(self.objectives))
        object.__setattr__(self, "better", frozenset((int(a), int(b)) for a, b in self.better))
        if not self.objectives:
            raise ModelError("preference description needs at least one objective")
        for index, objective in enumerate(self.objectives, start=1):
            if contains(objective, Pref, PathAtom, *PROP_BINDERS, *PATH_BINDERS, *GAME_NODES,
                        ExistsPath, ForallPath):
                raise ClassificationError(f"objective {index} is not a plain LTL formula: {objective}")
        size = len(self.objectives)
        for k1, k2 in self.better:
            if not (1 <= k1 <= size and 1 <= k2 <= size):
                raise ModelError(f"preference pair ({k1}, {k2}) is outside 1..{size}")

    @property
    def size(self) -> int:
        return len(self.objectives)

    @property
    def atoms(self) -> Tuple[str, ...]:
        names: Set[str] = set()
        for objective in self.objectives:
            names |= free_props(objective)
        return tuple(sorted(names))

    def indices(self) -> range:
        return range(1, self.size + 1)

    def objective(self, k: int) -> Formula:
        return self.objectives[k - 1]

    def updated(self, valuation: Iterable[str]) -> "PreferenceDescription":
        """한 상태 진행 후의 기술 (각 목표식을 해당 minterm의 tail로 교체, P는 유지)"""
        from core.gnf import tail
        letter = frozenset(valuation)
        return PreferenceDescription(tuple(tail(b, letter) for b in self.objectives), self.better)

    def induced_pairs(self, nonempty: Iterable[int]) -> FrozenSet[Tuple[int, int]]:
        """갱신 후 의미상 성립하는 쌍 집합 P′ (빈 클래스가 낀 쌍은 자명하게 성립)"""
        alive = set(nonempty)
        vacuous = {(k1, k2) for k1 in self.indices() for k2 in self.indices()
                   if k1 not in alive or k2 not in alive}
        return frozenset(self.better | vacuous)

    def lint(self) -> List[str]:
        """전순서 성질(반반사성, 추이성) 점검 결과"""
        issues = []
        for k in self.indices():
            if (k, k) in self.better:
                issues.append(f"reflexive pair ({k}, {k})")
        for k1, k2 in sorted(self.better):
            for k3, k4 in sorted(self.better):
                if k2 == k3 and (k1, k4) not in self.better:
                    issues.append(f"missing transitive pair ({k1}, {k4}) from ({k1}, {k2}) and ({k3}, {k4})")
        return issues

    def with_better(self, better: Iterable[Tuple[int, int]]) -> "PreferenceDescription":
        return PreferenceDescription(self.objectives, frozenset(better))


@dataclass(frozen=True)
class KripkeModel:
    """유한 직렬 Kripke 모델"""
    states: Tuple[str, ...]
    initial: str
    transitions: Dict[str, FrozenSet[str]]
    valuation: Dict[str, FrozenSet[str]]
    props: FrozenSet[str] = frozenset()
    prefs: Dict[str, PreferenceDescription] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions",
                           {state: frozenset(targets) for state, targets in self.transitions.items()})
        labels = _frozen_labels(self.valuation)
        for state in self.states:
            labels.setdefault(state, frozenset())
        object.__setattr__(self, "valuation", labels)
        declared = frozenset(self.props)
        object.__setattr__(self, "props", declared | frozenset().union(*labels.values()))
        object.__setattr__(self, "prefs", {str(agent): d for agent, d in self.prefs.items()})

        known = set(self.states)
        if len(known) != len(self.states):
            raise ModelError("duplicate state names")
        if self.initial not in known:
            raise ModelError(f"initial state '{self.initial}' is not declared")
        for state in self.states:
            targets = self.transitions.get(state, frozenset())
            if not targets:
                raise ModelError(f"state '{state}' has no successor")
            unknown = targets - known
            if unknown:
                raise ModelError(f"transition from '{state}' to undeclared states {sorted(unknown)}")

    def successors(self, state: str) -> FrozenSet[str]:
        return self.transitions[state]

    def label(self, state: str) -> FrozenSet[str]:
        return self.valuation[state]

    def reachable(self) -> List[str]:
        order = [self.initial]
        seen = {self.initial}
        for state in order:
            for target in sorted(self.transitions[state]):
                if target not in seen:
                    seen.add(target)
                    order.append(target)
        return order

    def with_prefs(self, prefs: Dict[str, PreferenceDescription]) -> "KripkeModel":
        return KripkeModel(self.states, self.initial, self.transitions, self.valuation, self.props, prefs)


Move = Tuple[str, ...]


@dataclass(frozen=True)
class CGM:
    """유한 동시 게임 모델 ⟨W, w_I, ⟨Act_i⟩, o, V⟩

    전역 수(move)는 agents 순서대로 나열한 행동 튜플입니다.
    """
    states: Tuple[str, ...]
    initial: str
    agents: Tuple[str, ...]
    actions: Dict[str, Tuple[str, ...]]
    outcome: Dict[Tuple[str, Move], str]
    valuation: Dict[str, FrozenSet[str]]
    props: FrozenSet[str] = frozenset()
    prefs: Dict[str, PreferenceDescription] = field(default_factory=dict)
    origins: Dict[str, Tuple[str, Optional[Move]]] = field(default_factory=dict)  # M♭: 상태 → (원래 상태, 저장된 수)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "agents", tuple(str(agent) for agent in self.agents))
        object.__setattr__(self, "actions", {str(agent): tuple(acts) for agent, acts in self.actions.items()})
        object.__setattr__(self, "outcome", {(state, tuple(move)): target
                                             for (state, move), target in self.outcome.items()})
        labels = _frozen_labels(self.valuation)
        for state in self.states:
            labels.setdefault(state, frozenset())
        object.__setattr__(self, "valuation", labels)
        object.__setattr__(self, "props", frozenset(self.props) | frozenset().union(*labels.values()))
        object.__setattr__(self, "prefs", {str(agent): d for agent, d in self.prefs.items()})
        self._validate()

    def _validate(self):
        known = set(self.states)
        if len(known) != len(self.states):
            raise ModelError("duplicate state names")
        if self.initial not in known:
            raise ModelError(f"initial state '{self.initial}' is not declared")
        if len(set(self.agents)) != len(self.agents):
            raise ModelError("duplicate agent names")

        seen_actions: Set[str] = set()
        for agent in self.agents:
            acts = self.actions.get(agent, ())
            if not acts:
                raise ModelError(f"agent '{agent}' has no actions")
            for act in acts:
                if act in seen_actions:
                    raise ModelError(f"action '{act}' is declared twice")
                seen_actions.add(act)
        clash = seen_actions & self.props
        if clash and not self.origins:
            raise ModelError(f"action names overlap the propositions: {sorted(clash)}")

        for state in self.states:
            for move in self.moves():
                target = self.outcome.get((state, move))
                if target is None:
                    raise ModelError(f"missing outcome for state '{state}' and move {' '.join(move)}")
                if target not in known:
                    raise ModelError(f"outcome of '{state}' {' '.join(move)} is undeclared state '{target}'")

    @property
    def action_atoms(self) -> FrozenSet[str]:
        return frozenset(act for acts in self.actions.values() for act in acts)

    def moves(self) -> Iterator[Move]:
        """전역 수 전체 (agents 순서 고정)"""
        return product(*(self.actions[agent] for agent in self.agents))

    def successor(self, state: str, move: Move) -> str:
        return self.outcome[(state, tuple(move))]

    def successors(self, state: str) -> FrozenSet[str]:
        return frozenset(self.outcome[(state, move)] for move in self.moves())

    def label(self, state: str) -> FrozenSet[str]:
        return self.valuation[state]

    def agent_index(self, agent: str) -> int:
        return self.agents.index(agent)

    def reachable(self) -> List[str]:
        order = [self.initial]
        seen = {self.initial}
        for state in order:
            for move in self.moves():
                target = self.outcome[(state, move)]
                if target not in seen:
                    seen.add(target)
                    order.append(target)
        return order

    def with_prefs(self, prefs: Dict[str, PreferenceDescription]) -> "CGM":
        return CGM(self.states, self.initial, self.agents, self.actions, self.outcome, self.valuation,
                   self.props, prefs, self.origins)

    @property
    def stores_moves(self) -> bool:
        return bool(self.origins)


# ===== GNF / 라쏘 =====

Letter = FrozenSet[str]


@dataclass(frozen=True)
class LassoWord:
    """궁극적 주기 단어 prefix · loop^ω"""
    prefix: Tuple[Letter, ...]
    loop: Tuple[Letter, ...]

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(frozenset(letter) for letter in self.prefix))
        object.__setattr__(self, "loop", tuple(frozenset(letter) for letter in self.loop))
        if not self.loop:
            raise ModelError("lasso loop must not be empty")

    @property
    def positions(self) -> int:
        return len(self.prefix) + len(self.loop)

    def letter(self, position: int) -> Letter:
        return (self.prefix + self.loop)[position]

    def next_position(self, position: int) -> int:
        return position + 1 if position + 1 < self.positions else len(self.prefix)


@dataclass(frozen=True)
class GnfDisjunct:
    valuation: Letter      # minterm에서 참인 명제
    guard: Formula
    tail: Formula


@dataclass(frozen=True)
class Gnf:
    """⋁ guard ∧ X tail (guard는 atoms 위의 minterm 전체)"""
    atoms: Tuple[str, ...]
    disjuncts: Tuple[GnfDisjunct, ...]

    def tail_for(self, valuation: Iterable[str]) -> Formula:
        letter = frozenset(valuation) & frozenset(self.atoms)
        for disjunct in self.disjuncts:
            if disjunct.valuation == letter:
                return disjunct.tail
        raise KeyError(letter)


@dataclass(frozen=True)
class FullSystemResult:
    """full system 검사 결과 (exact: 명제식 전수 검사, sampled: 유계 라쏘 검사)"""
    exact: bool
    holds: bool
    witness: Optional[Any] = None

    @property
    def kind(self) -> str:
        return "exact" if self.exact else "sampled"


# ===== 선호 라벨 명명 =====

@dataclass(frozen=True)
class SlotNaming:
    """목표 슬롯 k 하나의 closure 원소 → q 변수 (또는 r 비트 코드)"""
    index: int
    closure: Tuple[Formula, ...]
    q: Dict[Formula, str] = field(default_factory=dict)
    r: Tuple[str, ...] = ()
    codes: Dict[Formula, Tuple[bool, ...]] = field(default_factory=dict)
    log_encoded: bool = False

    def label_atom(self, member: Formula) -> Formula:
        """member가 현재 k번째 목표라는 것을 나타내는 식"""
        if not self.log_encoded:
            return Atom(self.q[member])
        bits = self.codes[member]
        return conj(Atom(name) if bit else Not(Atom(name)) for name, bit in zip(self.r, bits))

    def variables(self) -> Tuple[str, ...]:
        if self.log_encoded:
            return self.r
        return tuple(self.q[member] for member in self.closure)


@dataclass(frozen=True)
class QNaming:
    """에이전트별 선호 라벨 변수 명명 규칙"""
    agent: str
    slots: Tuple[SlotNaming, ...]

    def slot(self, k: int) -> SlotNaming:
        return self.slots[k - 1]

    def variables(self) -> Tuple[str, ...]:
        return tuple(name for slot in self.slots for name in slot.variables())

    def label_formula(self, description: PreferenceDescription) -> Formula:
        """q_{B_1,1} ∧ … ∧ q_{B_K,K}"""
        return conj(slot.label_atom(description.objective(slot.index)) for slot in self.slots)

    def holds_in(self, labels: FrozenSet[str], description: PreferenceDescription) -> bool:
        for slot in self.slots:
            member = description.objective(slot.index)
            if slot.log_encoded:
                bits = slot.codes[member]
                if any((name in labels) != bit for name, bit in zip(slot.r, bits)):
                    return False
            elif slot.q[member] not in labels:
                return False
        return True

    def true_variables(self, description: PreferenceDescription) -> FrozenSet[str]:
        """description이 현재 목표일 때 참이 되는 라벨 변수들"""
        names: Set[str] = set()
        for slot in self.slots:
            member = description.objective(slot.index)
            if slot.log_encoded:
                names |= {name for name, bit in zip(slot.r, slot.codes[member]) if bit}
            else:
                names.add(slot.q[member])
        return frozenset(names)

    def decode(self, labels: FrozenSet[str]) -> Optional[Tuple[Formula, ...]]:
        """라벨 집합에서 현재 목표식 목록 복원 (슬롯이 결정되지 않으면 None)"""
        members = []
        for slot in self.slots:
            found = [member for member in slot.closure
                     if (all((name in labels) == bit for name, bit in zip(slot.r, slot.codes[member]))
                         if slot.log_encoded else slot.q[member] in labels)]
            if len(found) != 1:
                return None
            members.append(found[0])
        return tuple(members)


# ===== 전략 =====

@dataclass(frozen=True)
class BindingEntry:
    """문맥 안 전략 하나: 담당 에이전트(병합 가능)와 그 변수들"""
    agents: FrozenSet[str]
    variables: Tuple[str, ...]
    encoding: str = "dest"   # "dest" | "log"


@dataclass(frozen=True)
class ContextBinding:
    """t_{i₁..iₙ}^{p₁..pₙ}의 에이전트/변수 목록"""
    entries: Tuple[BindingEntry, ...] = ()

    def __post_init__(self):
        seen: Set[str] = set()
        names: Set[str] = set()
        for entry in self.entries:
            if entry.agents & seen:
                raise ModelError(f"agents bound twice in context: {sorted(entry.agents & seen)}")
            seen |= entry.agents
            if names & set(entry.variables):
                raise ModelError("context variables must be distinct")
            names |= set(entry.variables)

    @property
    def agents(self) -> FrozenSet[str]:
        return frozenset().union(*(entry.agents for entry in self.entries))

    def override(self, coalition: FrozenSet[str], new_entries: Iterable[BindingEntry]) -> "ContextBinding":
        """Γ 소속 에이전트의 바인딩을 새 항목으로 교체 (ρ′가 ρ를 덮어씀)"""
        kept = tuple(entry for entry in self.entries if not entry.agents & coalition)
        return ContextBinding(kept + tuple(new_entries))

    def drop(self, coalition: FrozenSet[str]) -> "ContextBinding":
        """⟩Γ⟨ : Γ와 겹치는 바인딩 제거"""
        return ContextBinding(tuple(entry for entry in self.entries if not entry.agents & coalition))

    def variables(self) -> Tuple[str, ...]:
        return tuple(name for entry in self.entries for name in entry.variables)


@dataclass(frozen=True)
class StrategyBlock:
    """번역이 도입한 전략 변수 묶음 (유계 평가기가 전략 모양 라벨링을 열거할 때 사용)"""
    owners: Tuple[str, ...]
    variables: Tuple[str, ...]
    encoding: str                              # "dest" | "log"
    joint_actions: Tuple[Tuple[str, ...], ...]  # owners 순서의 행동 튜플, 코드 = 인덱스

    def code(self, joint_action: Tuple[str, ...]) -> Tuple[bool, ...]:
        index = self.joint_actions.index(tuple(joint_action))
        width = len(self.variables)
        return tuple(bool((index >> (width - 1 - bit)) & 1) for bit in range(width))


@dataclass
class StrategyProfile:
    """유계 기억 전략 프로필

    strategies[agent][window] = 행동. window는 최근 h+1개 상태 (h=0이면 무기억).
    window에 없는 이력은 defaults 행동을 사용합니다.
    """
    bound: int
    strategies: Dict[str, Dict[Tuple[str, ...], str]] = field(default_factory=dict)
    defaults: Dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.bound < 0:
            raise ModelError("history bound must be non-negative")

    def window(self, history: Tuple[str, ...]) -> Tuple[str, ...]:
        return tuple(history[-(self.bound + 1):])

    def action(self, agent: str, history: Tuple[str, ...]) -> str:
        table = self.strategies.get(agent, {})
        return table.get(self.window(history), self.defaults[agent])

    def validate(self, model: CGM):
        for agent, table in self.strategies.items():
            allowed = set(model.actions[agent])
            for window, act in table.items():
                if act not in allowed:
                    raise ModelError(f"action '{act}' is not available to agent {agent}")

    def override(self, strategies: Dict[str, Dict[Tuple[str, ...], str]], defaults: Dict[str, str]) -> "StrategyProfile":
        """ρ′가 ρ를 덮어쓴 프로필 (ρ∘ρ′)"""
        return StrategyProfile(self.bound, {**self.strategies, **strategies}, {**self.defaults, **defaults})

    def drop(self, agents: Iterable[str]) -> "StrategyProfile":
        """ρ|_{Ag∖Γ}"""
        removed = set(agents)
        return StrategyProfile(self.bound,
                               {a: s for a, s in self.strategies.items() if a not in removed},
                               {a: d for a, d in self.defaults.items() if a not in removed})

    def bound_agents(self) -> FrozenSet[str]:
        return frozenset(self.strategies)

    def key(self, agents: Iterable[str]) -> Tuple:
        """agents로 제한한 프로필의 해시 가능한 표현 (메모 키)"""
        return tuple((agent, self.defaults.get(agent), tuple(sorted(self.strategies[agent].items())))
                     for agent in sorted(set(agents) & set(self.strategies)))


@dataclass(frozen=True)
class TranslationResult:
    """ATLSC* 번역 결과: 식, 대상 모델(M♭), 전략 변수 목록, 경고"""
    formula: Formula
    model: CGM
    registry: Dict[str, StrategyBlock] = field(default_factory=dict)
    warnings: Tuple[str, ...] = ()

    def blocks(self) -> List[StrategyBlock]:
        unique: Dict[Tuple[str, ...], StrategyBlock] = {}
        for block in self.registry.values():
            unique.setdefault(block.variables, block)
        return list(unique.values())


# ===== 파이프라인 결과 =====

@dataclass(frozen=True)
class StageOutput:
    """단계 하나의 출력 (식, 그 식을 검사할 모델, 라벨 명명, 경고)"""
    stage: Stage
    formula: Formula
    model: Any
    namings: Dict[str, QNaming] = field(default_factory=dict)
    translation: Optional[TranslationResult] = None
    warnings: Tuple[str, ...] = ()


@dataclass(frozen=True)
class PipelineResult:
    source: Formula
    model: Any
    outputs: Tuple[StageOutput, ...] = ()

    @property
    def final(self) -> Formula:
        return self.outputs[-1].formula if self.outputs else self.source

    def output(self, stage: Stage) -> Optional[StageOutput]:
        for output in self.outputs:
            if output.stage is stage:
                return output
        return None


# ===== 파이프라인 설정 =====

@dataclass
class PipelineSection:
    stages: Tuple[Stage, ...] = STAGE_ORDER
    pref_mode: ElimMode = ElimMode.FORMB
    merge: bool = False
    log_actions: bool = False
    collapse_initial: bool = False


@dataclass
class CheckerSection:
    engine: str = "direct"
    history_bound: int = 0
    max_free_labelings: int = 4096
    max_profiles: int = 65536
    sufficient: bool = False


@dataclass
class GnfSection:
    full_system_bound: int = 4


@dataclass
class SuiteSection:
    seed: int = 7
    pref_instances: int = 200
    path_instances: int = 100
    gnf_formulas: int = 500
    lasso_bound: int = 6


@dataclass
class LoggingConfig:
    level: str = "INFO"


@dataclass
class PipelineConfig:
    """파이프라인 설정"""
    pipeline: PipelineSection = field(default_factory=PipelineSection)
    checker: CheckerSection = field(default_factory=CheckerSection)
    gnf: GnfSection = field(default_factory=GnfSection)
    suite: SuiteSection = field(default_factory=SuiteSection)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    model_path: Optional[str] = None
    formula: Optional[str] = None

    def __post_init__(self):
        order = [STAGE_ORDER.index(stage) for stage in self.pipeline.stages]
        if order != sorted(order) or len(set(order)) != len(order):
            raise ValueError(f"stages must follow paths → pref → atlsc: {[s.value for s in self.pipeline.stages]}")

    @property
    def stages(self) -> Tuple[Stage, ...]:
        return self.pipeline.stages

    @property
    def seed(self) -> int:
        return self.suite.seed

    @classmethod
    def from_json(cls, json_data: Dict[str, Any]) -> 'PipelineConfig':
        """JSON 데이터로부터 PipelineConfig 객체 생성"""
        return cls(
            pipeline=PipelineSection(
                stages=tuple(Stage(s) for s in json_data.get('pipeline', {}).get('stages', [s.value for s in STAGE_ORDER])),
                pref_mode=ElimMode(json_data.get('pipeline', {}).get('pref_mode', 'formb')),
                merge=json_data.get('pipeline', {}).get('merge', False),
                log_actions=json_data.get('pipeline', {}).get('log_actions', False),
                collapse_initial=json_data.get('pipeline', {}).get('collapse_initial', False)
            ),
            checker=CheckerSection(
                engine=json_data.get('checker', {}).get('engine', 'direct'),
                history_bound=json_data.get('checker', {}).get('history_bound', 0),
                max_free_labelings=json_data.get('checker', {}).get('max_free_labelings', 4096),
                max_profiles=json_data.get('checker', {}).get('max_profiles', 65536),
                sufficient=json_data.get('checker', {}).get('sufficient', False)
            ),
            gnf=GnfSection(
                full_system_bound=json_data.get('gnf', {}).get('full_system_bound', 4)
            ),
            suite=SuiteSection(
                seed=json_data.get('suite', {}).get('seed', 7),
                pref_instances=json_data.get('suite', {}).get('pref_instances', 200),
                path_instances=json_data.get('suite', {}).get('path_instances', 100),
                gnf_formulas=json_data.get('suite', {}).get('gnf_formulas', 500),
                lasso_bound=json_data.get('suite', {}).get('lasso_bound', 6)
            ),
            logging=LoggingConfig(
                level=json_data.get('logging', {}).get('level', 'INFO')
            ),
            model_path=json_data.get('model_path'),
            formula=json_data.get('formula')
        )
