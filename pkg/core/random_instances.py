"""
무작위 인스턴스 생성기 (numpy Generator 기반)

차등 검사용 모델, 선호 기술, 논리식을 만듭니다. 같은 시드는 같은 인스턴스를 만듭니다.
"""
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Sequence, Union

import numpy as np

from core.formula import (
    BOT, TOP, And, Atom, CoStratMod, ExistsPath, Finally, ForallPath, Formula, Globally, Iff, Implies, Next, Not,
    OneQuant, Or, PathAtom, Pref, PrefVariant, Relax, SimForall, SimQuant, StratMod, Until, WeakUntil, conj,
)
from core.models import CGM, KripkeModel, PreferenceDescription

Model = Union[KripkeModel, CGM]

DEFAULT_ATOMS = ("p", "q", "r")
PREF_VARIANTS = tuple(PrefVariant)


@dataclass(frozen=True)
class RandomInstance:
    """차등 검사 인스턴스 하나"""
    ident: str
    model: Model
    descriptions: Dict[str, PreferenceDescription] = field(default_factory=dict)
    formula: Formula = TOP


def _pick(rng: np.random.Generator, items: Sequence):
    return items[int(rng.integers(len(items)))]


def _literal(rng: np.random.Generator, atoms: Sequence[str]) -> Formula:
    atom = Atom(_pick(rng, atoms))
    return Not(atom) if rng.random() < 0.3 else atom


# ===== 모델 =====

def random_kripke(rng: np.random.Generator, n_states: int, atoms: Sequence[str] = DEFAULT_ATOMS,
                  max_successors: int = 3) -> KripkeModel:
    """직렬 Kripke 모델 (상태 w0..w{n-1}, 초기 상태 w0)"""
    states = [f"w{i}" for i in range(n_states)]
    valuation = {state: {atom for atom in atoms if rng.random() < 0.5} for state in states}
    transitions = {}
    for state in states:
        count = int(rng.integers(1, min(max_successors, n_states) + 1))
        chosen = rng.choice(n_states, size=count, replace=False)
        transitions[state] = {states[int(i)] for i in chosen}
    return KripkeModel(states, states[0], transitions, valuation, frozenset(atoms))


def random_cgm(rng: np.random.Generator, n_states: int, atoms: Sequence[str] = DEFAULT_ATOMS,
               agents: Sequence[str] = ("1", "2"), n_actions: int = 2) -> CGM:
    """동시 게임 모델 (행동 이름은 a1, b1, a2, b2 … 형식)"""
    states = [f"w{i}" for i in range(n_states)]
    actions = {agent: tuple(f"{chr(ord('a') + j)}{agent}" for j in range(n_actions)) for agent in agents}
    outcome = {(state, move): states[int(rng.integers(n_states))]
               for state in states for move in product(*(actions[agent] for agent in agents))}
    valuation = {state: {atom for atom in atoms if rng.random() < 0.5} for state in states}
    return CGM(states, states[0], agents, actions, outcome, valuation, frozenset(atoms))


# ===== LTL / 선호 기술 =====

def random_ltl(rng: np.random.Generator, atoms: Sequence[str] = DEFAULT_ATOMS, depth: int = 2) -> Formula:
    """깊이 depth 이하의 LTL 식"""
    if depth <= 0 or rng.random() < 0.25:
        return _literal(rng, atoms)
    op = int(rng.integers(8))
    sub = depth - 1
    match op:
        case 0:
            return Not(random_ltl(rng, atoms, sub))
        case 1:
            return And(random_ltl(rng, atoms, sub), random_ltl(rng, atoms, sub))
        case 2:
            return Or(random_ltl(rng, atoms, sub), random_ltl(rng, atoms, sub))
        case 3:
            return Next(random_ltl(rng, atoms, sub))
        case 4:
            return Until(random_ltl(rng, atoms, sub), random_ltl(rng, atoms, sub))
        case 5:
            return Finally(random_ltl(rng, atoms, sub))
        case 6:
            return Globally(random_ltl(rng, atoms, sub))
    return WeakUntil(random_ltl(rng, atoms, sub), random_ltl(rng, atoms, sub))


def transitive_closure(pairs) -> frozenset:
    closed = set(pairs)
    while True:
        extra = {(a, d) for a, b in closed for c, d in closed if b == c} - closed
        if not extra:
            return frozenset(closed)
        closed |= extra


def random_order(rng: np.random.Generator, size: int, density: float = 0.6) -> frozenset:
    """무작위 순위에 맞는 쌍을 고른 뒤 추이 폐포 (반반사적 부분 순서)"""
    rank = rng.permutation(size)
    pairs = {(k1, k2) for k1 in range(1, size + 1) for k2 in range(1, size + 1)
             if rank[k1 - 1] < rank[k2 - 1] and rng.random() < density}
    return transitive_closure(pairs)


def random_description(rng: np.random.Generator, atoms: Sequence[str] = DEFAULT_ATOMS, size: int = 2,
                       depth: int = 1) -> PreferenceDescription:
    """φ₁..φ_{K-1}에서 만든 완전 체계

    B₁ = φ₁, B_k = ¬φ₁ ∧ … ∧ ¬φ_{k-1} ∧ φ_k, B_K = ⋀ ¬φ
    """
    bases = [random_ltl(rng, atoms, depth) for _ in range(size - 1)]
    objectives = []
    for k in range(size):
        earlier = [Not(b) for b in bases[:k]]
        if k < size - 1:
            objectives.append(conj(earlier + [bases[k]]))
        else:
            objectives.append(conj(earlier))
    return PreferenceDescription(tuple(objectives), random_order(rng, size))


# ===== 선호 식 =====

def random_path_formula(rng: np.random.Generator, atoms: Sequence[str], depth: int,
                        agents: Sequence[str] = ("1",), pref: bool = True) -> Formula:
    """상태식 잎을 가질 수 있는 경로식"""
    if depth <= 0 or rng.random() < 0.2:
        return _literal(rng, atoms)
    op = int(rng.integers(7))
    sub = depth - 1
    match op:
        case 0:
            return Next(random_path_formula(rng, atoms, sub, agents, pref))
        case 1:
            return Until(random_path_formula(rng, atoms, sub, agents, pref),
                         random_path_formula(rng, atoms, sub, agents, pref))
        case 2:
            return Finally(random_path_formula(rng, atoms, sub, agents, pref))
        case 3:
            return Globally(random_path_formula(rng, atoms, sub, agents, pref))
        case 4:
            return And(random_path_formula(rng, atoms, sub, agents, pref),
                       random_path_formula(rng, atoms, sub, agents, pref))
        case 5:
            return Not(random_path_formula(rng, atoms, sub, agents, pref))
    return random_pref_formula(rng, atoms, sub, agents, pref)


def random_pref_formula(rng: np.random.Generator, atoms: Sequence[str] = DEFAULT_ATOMS, depth: int = 3,
                        agents: Sequence[str] = ("1",), pref: bool = True) -> Formula:
    """CTL*₍<₎ 상태식 (pref=False이면 선호 연산자 없음)"""
    if depth <= 0 or rng.random() < 0.15:
        return _literal(rng, atoms)
    op = int(rng.integers(7 if pref else 5))
    sub = depth - 1
    match op:
        case 0:
            return Not(random_pref_formula(rng, atoms, sub, agents, pref))
        case 1:
            return And(random_pref_formula(rng, atoms, sub, agents, pref),
                       random_pref_formula(rng, atoms, sub, agents, pref))
        case 2:
            return Or(random_pref_formula(rng, atoms, sub, agents, pref),
                      random_pref_formula(rng, atoms, sub, agents, pref))
        case 3:
            return ExistsPath(random_path_formula(rng, atoms, sub, agents, pref))
        case 4:
            return ForallPath(random_path_formula(rng, atoms, sub, agents, pref))
    return Pref(_pick(rng, PREF_VARIANTS), _pick(rng, agents),
                random_path_formula(rng, atoms, sub - 1, agents, pref),
                random_path_formula(rng, atoms, sub - 1, agents, pref))


def random_pref_instance(rng: np.random.Generator, ident: str = "pref", max_states: int = 5, max_classes: int = 3,
                         depth: int = 4, atoms: Sequence[str] = DEFAULT_ATOMS,
                         agents: Sequence[str] = ("1",)) -> RandomInstance:
    """(모델 ≤ max_states, K ≤ max_classes, 깊이 ≤ depth) 선호 인스턴스"""
    model = random_kripke(rng, int(rng.integers(1, max_states + 1)), atoms)
    descriptions = {agent: random_description(rng, atoms, int(rng.integers(1, max_classes + 1)))
                    for agent in agents}
    formula = random_pref_formula(rng, atoms, depth, agents)
    return RandomInstance(ident, model, descriptions, formula)


# ===== 경로 양화자 식 =====

def _anchored_piece(rng: np.random.Generator, atoms: Sequence[str], agent: str, v: str) -> Formula:
    """𝐩가 바인더 한 걸음 뒤에만 나오는 조각"""
    c = PathAtom(v)
    match int(rng.integers(6)):
        case 0:
            return ExistsPath(Next(c))
        case 1:
            return ForallPath(Next(Implies(c, random_ltl(rng, atoms, 1))))
        case 2:
            return ExistsPath(Next(And(c, random_ltl(rng, atoms, 1))))
        case 3:
            return Pref(_pick(rng, PREF_VARIANTS), agent, random_ltl(rng, atoms, 1), c)
        case 4:
            return Pref(_pick(rng, PREF_VARIANTS), agent, c, random_ltl(rng, atoms, 1))
    return ForallPath(Next(Or(c, Next(_literal(rng, atoms)))))


def _binder(kind: int, agent: str, v: str, body: Formula) -> Formula:
    return (SimQuant, OneQuant, SimForall)[kind](agent, v, body)


def random_path_quant_formula(rng: np.random.Generator, atoms: Sequence[str] = DEFAULT_ATOMS, agent: str = "1",
                              v: str = "c", nested: bool = True) -> Formula:
    """바인더 하나(가끔 중첩 하나 더)를 가진 경로 양화자 식"""
    pieces: List[Formula] = [_anchored_piece(rng, atoms, agent, v) for _ in range(int(rng.integers(1, 3)))]
    if rng.random() < 0.4:
        pieces.append(random_pref_formula(rng, atoms, 2, (agent,)))
    if nested and rng.random() < 0.2:
        pieces.append(random_path_quant_formula(rng, atoms, agent, "d", nested=False))
    body = pieces[0]
    for piece in pieces[1:]:
        connective = int(rng.integers(3))
        body = (And, Or, Implies)[connective](body, piece)
    formula = _binder(int(rng.integers(3)), agent, v, body)
    match int(rng.integers(4)):
        case 0:
            return ExistsPath(Next(formula))
        case 1:
            return ForallPath(Globally(formula))
    return formula


def random_path_instance(rng: np.random.Generator, ident: str = "paths", max_states: int = 4,
                         max_classes: int = 3, atoms: Sequence[str] = DEFAULT_ATOMS,
                         agent: str = "1") -> RandomInstance:
    model = random_kripke(rng, int(rng.integers(1, max_states + 1)), atoms)
    descriptions = {agent: random_description(rng, atoms, int(rng.integers(1, max_classes + 1)))}
    return RandomInstance(ident, model, descriptions, random_path_quant_formula(rng, atoms, agent))


def one_via_sim(f: OneQuant, spare: str = "e") -> Formula:
    """∃1𝐩A ⇔ ∃~𝐩(∃X𝐩 ∧ ∀~𝐪(∃X(𝐩∧𝐪) ⇒ ∀X(𝐩⇒𝐪)) ∧ A)"""
    p, q = PathAtom(f.var), PathAtom(spare)
    single = SimForall(f.agent, spare, Implies(ExistsPath(Next(And(p, q))), ForallPath(Next(Implies(p, q)))))
    return SimQuant(f.agent, f.var, conj((ExistsPath(Next(p)), single, f.body)))


# ===== 공리 =====

def axiom_instances(rng: np.random.Generator, d: PreferenceDescription, agent: str = "1",
                    atoms: Sequence[str] = DEFAULT_ATOMS) -> Dict[str, Formula]:
    """선호 공리의 무작위 사례 (초기 상태에서 참이어야 함)"""
    from core.gnf import tail
    from core.pref_elimination import expand_variant

    def ltl() -> Formula:
        return random_ltl(rng, atoms, 2)

    def less(left: Formula, right: Formula) -> Formula:
        return Pref(PrefVariant.FF, agent, left, right)

    b1, b2, c1, c2 = ltl(), ltl(), ltl(), ltl()
    guard = conj(Atom(a) if rng.random() < 0.5 else Not(Atom(a)) for a in atoms)
    letter = frozenset(a for a in d.atoms if rng.random() < 0.5)
    minterm = conj(Atom(a) if a in letter else Not(Atom(a)) for a in d.atoms)
    k1 = int(rng.integers(1, d.size + 1))
    k2 = int(rng.integers(1, d.size + 1))
    tail1, tail2 = tail(d.objective(k1), letter), tail(d.objective(k2), letter)
    variant = _pick(rng, PREF_VARIANTS)
    compared = Pref(variant, agent, ltl(), ltl())

    return {
        "extensionality": Implies(
            And(ForallPath(Next(Implies(b1, b2))), ForallPath(Next(Implies(c1, c2)))),
            Implies(less(b2, c2), less(b1, c1))),
        "disjunction": Iff(less(Or(b1, b2), Or(c1, c2)),
                           conj(less(x, y) for x in (b1, b2) for y in (c1, c2))),
        "bottom": And(less(BOT, b1), less(b1, BOT)),
        "stability": Implies(less(And(guard, Next(b1)), And(guard, Next(c1))),
                             ForallPath(Next(Implies(guard, less(b1, c1))))),
        "recall": Implies(
            And(ExistsPath(Next(conj((minterm, ExistsPath(Next(tail1)), ExistsPath(Next(tail2)))))),
                ForallPath(Next(Implies(minterm, less(tail1, tail2))))),
            less(And(minterm, Next(tail1)), And(minterm, Next(tail2)))),
        "variant": Iff(compared, expand_variant(compared, d.objectives)),
    }


# ===== ATLSC* 식 =====

def _coalition(rng: np.random.Generator, agents: Sequence[str]) -> frozenset:
    return frozenset(agent for agent in agents if rng.random() < 0.5)


def random_atlsc_formula(rng: np.random.Generator, atoms: Sequence[str] = DEFAULT_ATOMS,
                         agents: Sequence[str] = ("1", "2"), depth: int = 3) -> Formula:
    """선호와 경로 양화자가 없는 ATLSC* 상태식"""
    if depth <= 0 or rng.random() < 0.15:
        return _literal(rng, atoms)
    sub = depth - 1

    def path() -> Formula:
        state = random_atlsc_formula(rng, atoms, agents, sub - 1)
        match int(rng.integers(4)):
            case 0:
                return Next(state)
            case 1:
                return Until(state, random_atlsc_formula(rng, atoms, agents, sub - 1))
            case 2:
                return Finally(state)
        return Globally(state)

    match int(rng.integers(7)):
        case 0:
            return Not(random_atlsc_formula(rng, atoms, agents, sub))
        case 1:
            return And(random_atlsc_formula(rng, atoms, agents, sub), random_atlsc_formula(rng, atoms, agents, sub))
        case 2:
            return ExistsPath(path())
        case 3:
            return CoStratMod(_coalition(rng, agents), path())
        case 4:
            return Relax(_coalition(rng, agents), random_atlsc_formula(rng, atoms, agents, sub))
    return StratMod(_coalition(rng, agents), path())
