"""
통합 논리식 AST

LTL, CTL*, QCTL*, ATLSC*(전략 문맥 포함)와 선호 연산자, 경로 변수를
하나의 불변 트리로 표현합니다. 상태식/경로식 분류는 노드 생성 시점에
계산되고, 잘못된 조합은 생성 즉시 ClassificationError로 거부됩니다.

핵심 노드: Bot, Atom, PathAtom, Implies, ExistsPath, ExistsProp, Next, Until,
           StratMod, Relax, Pref, SimQuant, OneQuant
설탕 노드: Top, Not, And, Or, Iff, Finally, Globally, WeakUntil, ForallPath,
           ForallProp, CoStratMod, SimForall  (desugar로 제거)
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Set, Tuple

from core.errors import ClassificationError


class FormulaKind(Enum):
    """논리식 분류"""
    STATE = "state"
    PATH = "path"


class PrefVariant(Enum):
    """이항 선호 연산자 변형 (<∀∀, <∃∀, <∀∃, <∃∃, >∃∀, >∀∃)"""
    FF = "<ff"
    EA = "<ea"
    AE = "<ae"
    EE = "<ee"
    GEA = ">ea"
    GAE = ">ae"

    @classmethod
    def from_symbol(cls, symbol: str) -> "PrefVariant":
        for variant in cls:
            if variant.value == symbol:
                return variant
        raise ValueError(f"unknown preference operator: {symbol}")


def agent_sort_key(agent: str):
    return (0, int(agent), "") if agent.isdigit() else (1, 0, agent)


def sort_agents(agents: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(agents, key=agent_sort_key))


class Formula:
    """모든 논리식 노드의 공통 부모

    dataclass 필드 튜플로 동등성/해시를 계산하고, 해시와 분류를 캐시합니다.
    """

    def __post_init__(self):
        key = tuple(getattr(self, name) for name in self.__dataclass_fields__)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash((type(self).__name__, key)))
        object.__setattr__(self, "_kind", self._classify())

    def _classify(self) -> FormulaKind:
        return FormulaKind.STATE

    @property
    def kind(self) -> FormulaKind:
        return self._kind

    @property
    def is_state(self) -> bool:
        return self._kind is FormulaKind.STATE

    def children(self) -> Tuple["Formula", ...]:
        return tuple(value for value in self._key if isinstance(value, Formula))

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        return self._hash == other._hash and self._key == other._key

    def __hash__(self):
        return self._hash

    def __str__(self):
        return print_formula(self)


def _boolean_kind(*parts: Formula) -> FormulaKind:
    if all(part.is_state for part in parts):
        return FormulaKind.STATE
    return FormulaKind.PATH


def _require_state(node: str, body: Formula):
    if not body.is_state:
        raise ClassificationError(f"{node} expects a state formula, got path formula {body}")


def _freeze_coalition(node: Formula):
    object.__setattr__(node, "coalition", frozenset(str(agent) for agent in node.coalition))


# ===== 핵심 노드 =====

@dataclass(frozen=True, eq=False)
class Bot(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class PathAtom(Formula):
    name: str

    def _classify(self):
        return FormulaKind.PATH


@dataclass(frozen=True, eq=False)
class Implies(Formula):
    left: Formula
    right: Formula

    def _classify(self):
        return _boolean_kind(self.left, self.right)


@dataclass(frozen=True, eq=False)
class ExistsPath(Formula):
    body: Formula


@dataclass(frozen=True, eq=False)
class ExistsProp(Formula):
    prop: str
    body: Formula

    def _classify(self):
        _require_state("exists", self.body)
        return FormulaKind.STATE


@dataclass(frozen=True, eq=False)
class Next(Formula):
    body: Formula

    def _classify(self):
        return FormulaKind.PATH


@dataclass(frozen=True, eq=False)
class Until(Formula):
    left: Formula
    right: Formula

    def _classify(self):
        return FormulaKind.PATH


@dataclass(frozen=True, eq=False)
class StratMod(Formula):
    coalition: FrozenSet[str]
    body: Formula

    def __post_init__(self):
        _freeze_coalition(self)
        super().__post_init__()


@dataclass(frozen=True, eq=False)
class Relax(Formula):
    coalition: FrozenSet[str]
    body: Formula

    def __post_init__(self):
        _freeze_coalition(self)
        super().__post_init__()

    def _classify(self):
        _require_state("relax", self.body)
        return FormulaKind.STATE


@dataclass(frozen=True, eq=False)
class Pref(Formula):
    variant: PrefVariant
    agent: str
    left: Formula
    right: Formula

    def __post_init__(self):
        object.__setattr__(self, "agent", str(self.agent))
        super().__post_init__()


@dataclass(frozen=True, eq=False)
class SimQuant(Formula):
    agent: str
    var: str
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "agent", str(self.agent))
        super().__post_init__()

    def _classify(self):
        _require_state("Es", self.body)
        return FormulaKind.STATE


@dataclass(frozen=True, eq=False)
class OneQuant(Formula):
    agent: str
    var: str
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "agent", str(self.agent))
        super().__post_init__()

    def _classify(self):
        _require_state("E1", self.body)
        return FormulaKind.STATE


# ===== 설탕 노드 =====

@dataclass(frozen=True, eq=False)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Not(Formula):
    body: Formula

    def _classify(self):
        return _boolean_kind(self.body)


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula

    def _classify(self):
        return _boolean_kind(self.left, self.right)


@dataclass(frozen=True, eq=False)
class Or(Formula):
    left: Formula
    right: Formula

    def _classify(self):
        return _boolean_kind(self.left, self.right)


@dataclass(frozen=True, eq=False)
class Iff(Formula):
    left: Formula
    right: Formula

    def _classify(self):
        return _boolean_kind(self.left, self.right)


@dataclass(frozen=True, eq=False)
class Finally(Formula):
    body: Formula

    def _classify(self):
        return FormulaKind.PATH


@dataclass(frozen=True, eq=False)
class Globally(Formula):
    body: Formula

    def _classify(self):
        return FormulaKind.PATH


@dataclass(frozen=True, eq=False)
class WeakUntil(Formula):
    left: Formula
    right: Formula

    def _classify(self):
        return FormulaKind.PATH


@dataclass(frozen=True, eq=False)
class ForallPath(Formula):
    body: Formula


@dataclass(frozen=True, eq=False)
class ForallProp(Formula):
    prop: str
    body: Formula

    def _classify(self):
        _require_state("forall", self.body)
        return FormulaKind.STATE


@dataclass(frozen=True, eq=False)
class CoStratMod(Formula):
    coalition: FrozenSet[str]
    body: Formula

    def __post_init__(self):
        _freeze_coalition(self)
        super().__post_init__()


@dataclass(frozen=True, eq=False)
class SimForall(Formula):
    agent: str
    var: str
    body: Formula

    def __post_init__(self):
        object.__setattr__(self, "agent", str(self.agent))
        super().__post_init__()

    def _classify(self):
        _require_state("As", self.body)
        return FormulaKind.STATE


BOT = Bot()
TOP = Top()
TOP_CORE = Implies(BOT, BOT)

UNARY_TEMPORAL = (Next, Finally, Globally)
BINARY_TEMPORAL = (Until, WeakUntil)
TEMPORAL = UNARY_TEMPORAL + BINARY_TEMPORAL
PROP_BINDERS = (ExistsProp, ForallProp)
PATH_BINDERS = (SimQuant, OneQuant, SimForall)
GAME_NODES = (StratMod, Relax, CoStratMod)


# ===== 기본 도우미 =====

def classify(f: Formula) -> FormulaKind:
    """상태식/경로식 분류 (생성 시 계산된 값)"""
    return f.kind


def map_children(f: Formula, fn: Callable[[Formula], Formula]) -> Formula:
    """자식 노드에 fn을 적용한 새 노드 (변경 없으면 원본 반환)"""
    changed = False
    values = []
    for value in f._key:
        if isinstance(value, Formula):
            new_value = fn(value)
            changed = changed or new_value is not value
            values.append(new_value)
        else:
            values.append(value)
    return type(f)(*values) if changed else f


def conj(items: Iterable[Formula]) -> Formula:
    result: Optional[Formula] = None
    for item in items:
        result = item if result is None else And(result, item)
    return TOP if result is None else result


def disj(items: Iterable[Formula]) -> Formula:
    result: Optional[Formula] = None
    for item in items:
        result = item if result is None else Or(result, item)
    return BOT if result is None else result


def subformulas(f: Formula) -> Iterator[Formula]:
    """전위 순회 (중복 노드는 한 번만)"""
    seen: Set[Formula] = set()
    stack = [f]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        yield node
        stack.extend(reversed(node.children()))


def occurrences(f: Formula) -> Iterator[Formula]:
    """전위 순회 (같은 식이 여러 번 나오면 매번)"""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def contains(f: Formula, *node_types) -> bool:
    return any(isinstance(node, node_types) for node in subformulas(f))


def find_first(f: Formula, *node_types) -> Optional[Formula]:
    for node in subformulas(f):
        if isinstance(node, node_types):
            return node
    return None


def size(f: Formula) -> int:
    """트리 노드 수 (공유 노드도 매번 센다)"""
    return 1 + sum(size(child) for child in f.children())


def modal_depth(f: Formula) -> int:
    inner = max((modal_depth(child) for child in f.children()), default=0)
    return inner + 1 if isinstance(f, TEMPORAL) else inner


@lru_cache(maxsize=65536)
def free_props(f: Formula) -> FrozenSet[str]:
    if isinstance(f, Atom):
        return frozenset((f.name,))
    if isinstance(f, PROP_BINDERS):
        return free_props(f.body) - {f.prop}
    result: FrozenSet[str] = frozenset()
    for child in f.children():
        result |= free_props(child)
    return result


def atoms_of(f: Formula) -> FrozenSet[str]:
    """묶인 명제까지 포함한 원자 이름 전체"""
    return frozenset(node.name for node in subformulas(f) if isinstance(node, Atom))


@lru_cache(maxsize=65536)
def free_path_vars(f: Formula) -> FrozenSet[str]:
    if isinstance(f, PathAtom):
        return frozenset((f.name,))
    if isinstance(f, PATH_BINDERS):
        return free_path_vars(f.body) - {f.var}
    result: FrozenSet[str] = frozenset()
    for child in f.children():
        result |= free_path_vars(child)
    return result


def all_names(f: Formula) -> Set[str]:
    """자유/속박 여부와 무관하게 등장하는 모든 명제·경로 변수 이름"""
    names: Set[str] = set()
    for node in subformulas(f):
        if isinstance(node, (Atom, PathAtom)):
            names.add(node.name)
        elif isinstance(node, PROP_BINDERS):
            names.add(node.prop)
        elif isinstance(node, PATH_BINDERS):
            names.add(node.var)
    return names


def agents_of(f: Formula) -> Set[str]:
    agents: Set[str] = set()
    for node in subformulas(f):
        if isinstance(node, GAME_NODES):
            agents |= node.coalition
        elif isinstance(node, (Pref,) + PATH_BINDERS):
            agents.add(node.agent)
    return agents


def is_propositional(f: Formula) -> bool:
    return all(isinstance(node, (Bot, Top, Atom, Not, And, Or, Implies, Iff)) for node in subformulas(f))


def is_ltl(f: Formula) -> bool:
    allowed = (Bot, Top, Atom, Not, And, Or, Implies, Iff) + TEMPORAL
    return all(isinstance(node, allowed) for node in subformulas(f))


# ===== 신선한 변수 공급 =====

@dataclass
class FreshVarSupply:
    """충돌 없는 새 명제 이름 공급기 (숫자 접미사 유지)"""
    reserved: Set[str] = field(default_factory=set)
    counter: int = 0

    def reserve(self, names: Iterable[str]):
        self.reserved.update(names)

    def fresh(self, prefix: str = "q") -> str:
        base = re.sub(r"\d+$", "", prefix) or "v"
        while True:
            self.counter += 1
            name = f"{base}{self.counter}"
            if name not in self.reserved:
                self.reserved.add(name)
                return name

    @classmethod
    def for_formulas(cls, *formulas: Formula, extra: Iterable[str] = ()) -> "FreshVarSupply":
        supply = cls()
        for f in formulas:
            supply.reserve(all_names(f))
        supply.reserve(extra)
        return supply


# ===== 설탕 제거 =====

@lru_cache(maxsize=65536)
def desugar(f: Formula) -> Formula:
    """⊥, 명제, ⇒, ∃, ∃p, X, U, ⟨·⟩, ⟩·⟨, 선호, 경로 양화자만 남긴다"""
    match f:
        case Top():
            return TOP_CORE
        case Not(body):
            return Implies(desugar(body), BOT)
        case And(left, right):
            return Implies(Implies(desugar(left), Implies(desugar(right), BOT)), BOT)
        case Or(left, right):
            return Implies(Implies(desugar(left), BOT), desugar(right))
        case Iff(left, right):
            return desugar(And(Implies(left, right), Implies(right, left)))
        case Finally(body):
            return Until(TOP_CORE, desugar(body))
        case Globally(body):
            return Implies(Until(TOP_CORE, Implies(desugar(body), BOT)), BOT)
        case WeakUntil(left, right):
            return desugar(Or(Until(left, right), Globally(left)))
        case ForallPath(body):
            return Implies(ExistsPath(Implies(desugar(body), BOT)), BOT)
        case ForallProp(prop, body):
            return Implies(ExistsProp(prop, Implies(desugar(body), BOT)), BOT)
        case CoStratMod(coalition, body):
            return Implies(StratMod(coalition, Implies(desugar(body), BOT)), BOT)
        case SimForall(agent, var, body):
            return Implies(SimQuant(agent, var, Implies(desugar(body), BOT)), BOT)
        case _:
            return map_children(f, desugar)


# ===== 치환 =====

def _binder_key(f: Formula) -> Optional[Formula]:
    if isinstance(f, PROP_BINDERS):
        return Atom(f.prop)
    if isinstance(f, PATH_BINDERS):
        return PathAtom(f.var)
    return None


def _bound_name(f: Formula) -> str:
    return f.prop if isinstance(f, PROP_BINDERS) else f.var


def _with_bound_name(f: Formula, name: str, body: Formula) -> Formula:
    if isinstance(f, PROP_BINDERS):
        return type(f)(name, body)
    return type(f)(f.agent, name, body)


def substitute(f: Formula, replacements: Mapping[Formula, Formula],
               supply: Optional[FreshVarSupply] = None) -> Formula:
    """자유 등장만 치환 ([X/Y]F). 키는 Atom 또는 PathAtom 노드.

    포획이 생기면 속박 변수를 supply로 새 이름으로 바꾼다.
    """
    if not replacements:
        return f
    for key in replacements:
        if not isinstance(key, (Atom, PathAtom)):
            raise TypeError(f"substitution key must be Atom or PathAtom, got {key!r}")
    if supply is None:
        supply = FreshVarSupply.for_formulas(f, *replacements.values(), *replacements.keys())
    return _substitute(f, dict(replacements), supply, {})


def _capturable(replacements: Dict[Formula, Formula]) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    props: FrozenSet[str] = frozenset()
    paths: FrozenSet[str] = frozenset()
    for value in replacements.values():
        props |= free_props(value)
        paths |= free_path_vars(value)
    return props, paths


def _substitute(f: Formula, replacements: Dict[Formula, Formula], supply: FreshVarSupply,
                memo: Dict[Formula, Formula]) -> Formula:
    if f in memo:
        return memo[f]
    if f in replacements:
        return replacements[f]
    if not (free_props(f) | {f"~{v}" for v in free_path_vars(f)}) & _key_names(replacements):
        return f

    key = _binder_key(f)
    if key is None:
        result = map_children(f, lambda child: _substitute(child, replacements, supply, memo))
        memo[f] = result
        return result

    inner = {k: v for k, v in replacements.items() if k != key}
    if not inner:
        return f
    name = _bound_name(f)
    body = f.body
    props, paths = _capturable(inner)
    captured = name in (props if isinstance(f, PROP_BINDERS) else paths)
    if captured:
        new_name = supply.fresh(name)
        renamed = Atom(new_name) if isinstance(key, Atom) else PathAtom(new_name)
        body = _substitute(body, {key: renamed}, supply, {})
        name = new_name
    return _with_bound_name(f, name, _substitute(body, inner, supply, {}))


def _key_names(replacements: Dict[Formula, Formula]) -> Set[str]:
    return {k.name if isinstance(k, Atom) else f"~{k.name}" for k in replacements}


# ===== 상수 접기 =====

def is_true(f: Formula) -> bool:
    return isinstance(f, Top) or f == TOP_CORE


def is_false(f: Formula) -> bool:
    return isinstance(f, Bot)


@lru_cache(maxsize=65536)
def simplify(f: Formula) -> Formula:
    """⊥/⊤ 흡수와 이중 부정 제거. 의미는 바뀌지 않는다."""
    f = map_children(f, simplify)
    match f:
        case Not(body):
            if is_false(body):
                return TOP
            if is_true(body):
                return BOT
            if isinstance(body, Not):
                return body.body
        case Implies(left, right):
            if is_false(left) or is_true(right):
                return TOP
            if is_true(left):
                return right
            if is_false(right):
                return simplify(Not(left))
            if left == right:
                return TOP
        case And(left, right):
            if is_false(left) or is_false(right):
                return BOT
            if is_true(left):
                return right
            if is_true(right) or left == right:
                return left
        case Or(left, right):
            if is_true(left) or is_true(right):
                return TOP
            if is_false(left):
                return right
            if is_false(right) or left == right:
                return left
        case Iff(left, right):
            if left == right:
                return TOP
            if is_true(left):
                return right
            if is_true(right):
                return left
            if is_false(left):
                return simplify(Not(right))
            if is_false(right):
                return simplify(Not(left))
        case Next(body) | Finally(body) | Globally(body) | ExistsPath(body) | ForallPath(body):
            if is_false(body):
                return BOT
            if is_true(body):
                return TOP
        case Until(left, right):
            if is_false(right) or is_true(right):
                return right
            if is_false(left):
                return right
        case WeakUntil(left, right):
            if is_true(left) or is_true(right):
                return TOP
            if is_false(left):
                return right
        case StratMod(_, body) | CoStratMod(_, body):
            if is_false(body):
                return BOT
            if is_true(body):
                return TOP
        case Relax(_, body) | SimQuant(_, _, body) | SimForall(_, _, body):
            if is_false(body) or is_true(body):
                return body
        case ExistsProp(prop, body) | ForallProp(prop, body):
            if prop not in free_props(body):
                return body
    return f


# ===== 출력 =====

_LEVEL_BINDER, _LEVEL_IFF, _LEVEL_IMP, _LEVEL_OR, _LEVEL_AND = 0, 1, 2, 3, 4
_LEVEL_UNTIL, _LEVEL_PREF, _LEVEL_UNARY, _LEVEL_ATOM = 5, 6, 7, 8

_BINARY = {
    Iff: ("<->", _LEVEL_IFF, _LEVEL_IFF, _LEVEL_IMP),
    Implies: ("->", _LEVEL_IMP, _LEVEL_OR, _LEVEL_IMP),
    Or: ("|", _LEVEL_OR, _LEVEL_OR, _LEVEL_AND),
    And: ("&", _LEVEL_AND, _LEVEL_AND, _LEVEL_UNTIL),
    Until: ("U", _LEVEL_UNTIL, _LEVEL_PREF, _LEVEL_UNTIL),
    WeakUntil: ("W", _LEVEL_UNTIL, _LEVEL_PREF, _LEVEL_UNTIL),
}

_UNARY = {Not: "!", Next: "X ", Finally: "F ", Globally: "G ", ExistsPath: "E ", ForallPath: "A "}


def _coalition_text(coalition: FrozenSet[str]) -> str:
    return ",".join(sort_agents(coalition))


def _level(f: Formula) -> int:
    if isinstance(f, tuple(_BINARY)):
        return _BINARY[type(f)][1]
    if isinstance(f, Pref):
        return _LEVEL_PREF
    if isinstance(f, PROP_BINDERS + PATH_BINDERS):
        return _LEVEL_BINDER
    if isinstance(f, (Bot, Top, Atom, PathAtom)):
        return _LEVEL_ATOM
    return _LEVEL_UNARY


def _wrap(f: Formula, required: int) -> str:
    text = print_formula(f)
    return f"({text})" if _level(f) < required else text


def print_formula(f: Formula) -> str:
    """파서가 같은 AST로 다시 읽을 수 있는 ASCII 표기"""
    match f:
        case Bot():
            return "false"
        case Top():
            return "true"
        case Atom(name):
            return name
        case PathAtom(name):
            return f"~{name}"
        case Pref(variant, agent, left, right):
            return f"{_wrap(left, _LEVEL_UNARY)} {variant.value}[{agent}] {_wrap(right, _LEVEL_UNARY)}"
        case StratMod(coalition, body):
            return f"<<{_coalition_text(coalition)}>> {_wrap(body, _LEVEL_UNARY)}"
        case CoStratMod(coalition, body):
            return f"[[{_coalition_text(coalition)}]] {_wrap(body, _LEVEL_UNARY)}"
        case Relax(coalition, body):
            return f"]{_coalition_text(coalition)}[ {_wrap(body, _LEVEL_UNARY)}"
        case ExistsProp(prop, body):
            return f"exists {prop} . {print_formula(body)}"
        case ForallProp(prop, body):
            return f"forall {prop} . {print_formula(body)}"
        case SimQuant(agent, var, body):
            return f"Es[{agent}] ~{var} . {print_formula(body)}"
        case OneQuant(agent, var, body):
            return f"E1[{agent}] ~{var} . {print_formula(body)}"
        case SimForall(agent, var, body):
            return f"As[{agent}] ~{var} . {print_formula(body)}"
    if type(f) in _UNARY:
        return f"{_UNARY[type(f)]}{_wrap(f.body, _LEVEL_UNARY)}"
    symbol, _, left_level, right_level = _BINARY[type(f)]
    return f"{_wrap(f.left, left_level)} {symbol} {_wrap(f.right, right_level)}"
