"""
선호 연산자 제거

1. 파생 변형(<∃∀, <∀∃, <∃∃, >∃∀, >∀∃) → 클래스 의무 ∃X(B′∧B_k)와 목표식 사이의 <∀∀
2. <∀∀ → (B′<B″)_{B₁..B_K,P} = ⋀_{(k₁,k₂)∉P} ¬(∃X(B′∧B_{k₁}) ∧ ∃X(B″∧B_{k₂}))
3. 상태마다 목표 목록이 다르므로 각 등장을 라벨로 보호한 선언으로 교체
   ⋁_{목표 목록 D} (label(D) ∧ (B′<B″)_D)

출력 형식
- FORMB: A′ (라벨 원자 자유, build_mb 결과 위에서 검사)
- QVARS: ∃q…(L ∧ A′)
- LOGVARS: ∃r…(L ∧ A′), 슬롯마다 ⌈log₂|Cl|⌉ 비트
"""
from math import ceil, log2
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from core.errors import MissingDescriptionError, UnsupportedFormulaError
from core.formula import (
    PATH_BINDERS, TEMPORAL, And, Atom, ExistsPath, ExistsProp, ForallPath, Formula, FreshVarSupply,
    Globally, Implies, Next, Not, PathAtom, Pref, PrefVariant, conj, disj, find_first, free_props,
    map_children, simplify, sort_agents, subformulas,
)
from core.gnf import closure, letters_over, minterm, normalize_description, tail
from core.models import ElimMode, PreferenceDescription, QNaming, SlotNaming
from utils.logger import setup_logger

logger = setup_logger(__name__)

Descriptions = Union[PreferenceDescription, Mapping[str, PreferenceDescription]]


def _obligation(operand: Formula, objective: Formula) -> Formula:
    """∃X(B ∧ B_k): 다음 상태에서 시작하는 B-경로 중 k번째 클래스에 속한 것이 있다"""
    return ExistsPath(Next(And(operand, objective)))


# ===== 변형 전개 =====

def expand_variant(f: Pref, objectives: Sequence[Formula]) -> Formula:
    """파생 선호 변형을 목표식 사이의 <∀∀로 전개

    S′, S″ = B′, B″가 만나는 클래스 집합일 때
      <ea: ∃k₁∈S′ ∀k₂∈S″ B_{k₁}<B_{k₂}    <ae: ∀k₁∈S′ ∃k₂∈S″ B_{k₁}<B_{k₂}
      <ee: ∃k₁∈S′ ∃k₂∈S″ B_{k₁}<B_{k₂}    >ea, >ae: 쌍 방향을 뒤집은 것
    """
    if f.variant is PrefVariant.FF:
        return f
    indices = range(len(objectives))
    left = [_obligation(f.left, b) for b in objectives]
    right = [_obligation(f.right, b) for b in objectives]

    def better(k1: int, k2: int) -> Formula:
        if f.variant in (PrefVariant.GEA, PrefVariant.GAE):
            k1, k2 = k2, k1
        return Pref(PrefVariant.FF, f.agent, objectives[k1], objectives[k2])

    match f.variant:
        case PrefVariant.EA | PrefVariant.GEA:
            return disj(And(left[k1], conj(Implies(right[k2], better(k1, k2)) for k2 in indices))
                        for k1 in indices)
        case PrefVariant.AE | PrefVariant.GAE:
            return conj(Implies(left[k1], disj(And(right[k2], better(k1, k2)) for k2 in indices))
                        for k1 in indices)
        case PrefVariant.EE:
            return disj(conj((left[k1], right[k2], better(k1, k2))) for k1 in indices for k2 in indices)
    raise ValueError(f"unknown preference variant {f.variant}")


def elim_pref_at(fprime: Formula, fsecond: Formula, bs: Sequence[Formula],
                 p_pairs) -> Formula:
    """고정된 목표 목록과 P에서 B′ <∀∀ B″의 선호 없는 형태"""
    better = frozenset(p_pairs)
    size = len(bs)
    return conj(
        Not(And(_obligation(fprime, bs[k1 - 1]), _obligation(fsecond, bs[k2 - 1])))
        for k1 in range(1, size + 1) for k2 in range(1, size + 1)
        if (k1, k2) not in better
    )


def _eliminate_ff(f: Formula, description: PreferenceDescription) -> Formula:
    if isinstance(f, Pref):
        return elim_pref_at(f.left, f.right, description.objectives, description.better)
    return map_children(f, lambda child: _eliminate_ff(child, description))


def instantiate(f: Pref, description: PreferenceDescription) -> Formula:
    """목표 목록 D가 현재 목표일 때의 선호 없는 식 (피연산자는 이미 선호 없음)"""
    return _eliminate_ff(expand_variant(f, description.objectives), description)


# ===== 라벨 명명 =====

def make_naming(agent: str, d: PreferenceDescription, supply: FreshVarSupply, log_encoded: bool = False) -> QNaming:
    """슬롯 k마다 Cl(B_{I,k}) 원소에 q 변수 (log_encoded이면 ⌈log₂|Cl|⌉개 r 비트와 코드)"""
    slots = []
    for k in d.indices():
        members = closure(d.objective(k))
        if not log_encoded:
            names = {member: supply.fresh(f"q_{agent}_{k}_") for member in members}
            slots.append(SlotNaming(k, members, q=names))
            continue
        width = ceil(log2(len(members))) if len(members) > 1 else 0
        bits = tuple(supply.fresh(f"r_{agent}_{k}_") for _ in range(width))
        codes = {member: tuple(bool((j >> (width - 1 - bit)) & 1) for bit in range(width))
                 for j, member in enumerate(members)}
        slots.append(SlotNaming(k, members, r=bits, codes=codes, log_encoded=True))
    return QNaming(str(agent), tuple(slots))


def reachable_descriptions(d: PreferenceDescription) -> List[PreferenceDescription]:
    """d에서 출발해 tail 갱신으로 도달하는 목표 목록들 (발견 순서, d가 처음)"""
    start = normalize_description(d)
    letters = list(letters_over(start.atoms))
    order = [start]
    seen = {start}
    for current in order:
        for letter in letters:
            following = current.updated(letter)
            if following not in seen:
                seen.add(following)
                order.append(following)
    return order


def labeling_formula(naming: QNaming, d: PreferenceDescription) -> Formula:
    """L: 초기 라벨, 슬롯별 상호 배제(q 모드), 범위 제한(log 모드), minterm에 따른 ∀X 갱신"""
    d = normalize_description(d)
    initial = [naming.label_formula(d)]
    invariant = []
    for slot in naming.slots:
        members = slot.closure
        if slot.log_encoded:
            if len(members) != 2 ** len(slot.r):
                initial.append(disj(slot.label_atom(member) for member in members))
        else:
            invariant.extend(Not(And(Atom(slot.q[a]), Atom(slot.q[b])))
                             for i, a in enumerate(members) for b in members[i + 1:])
        atoms = tuple(sorted(free_props(d.objective(slot.index))))
        for member in members:
            for letter in letters_over(atoms):
                step = Implies(minterm(atoms, letter), slot.label_atom(tail(member, letter)))
                invariant.append(Implies(slot.label_atom(member), ForallPath(Next(step))))
    return And(conj(initial), ForallPath(Globally(conj(invariant))))


# ===== 전체 제거 =====

def _resolve(a: Formula, descriptions: Descriptions, named=()) -> Dict[str, PreferenceDescription]:
    agents = sort_agents({node.agent for node in subformulas(a) if isinstance(node, Pref)} | set(named))
    if isinstance(descriptions, PreferenceDescription):
        return {agent: normalize_description(descriptions) for agent in agents}
    missing = [agent for agent in agents if agent not in descriptions]
    if missing:
        raise MissingDescriptionError(f"no preference description for agents {missing}")
    return {agent: normalize_description(descriptions[agent]) for agent in agents}


def _rewrite(f: Formula, at_root: bool, collapse_initial: bool, descriptions: Dict[str, PreferenceDescription],
             namings: Dict[str, QNaming], reachable: Dict[str, List[PreferenceDescription]]) -> Formula:
    def again(child: Formula, root: bool) -> Formula:
        return _rewrite(child, root, collapse_initial, descriptions, namings, reachable)

    if isinstance(f, Pref):
        node = Pref(f.variant, f.agent, again(f.left, False), again(f.right, False))
        if at_root and collapse_initial:
            return instantiate(node, descriptions[f.agent])
        naming = namings[f.agent]
        return disj(And(naming.label_formula(candidate), instantiate(node, candidate))
                    for candidate in reachable[f.agent])
    return map_children(f, lambda child: again(child, at_root and not isinstance(f, TEMPORAL)))


def eliminate_preference(a: Formula, descriptions: Descriptions, mode: ElimMode = ElimMode.FORMB,
                         collapse_initial: bool = False, supply: Optional[FreshVarSupply] = None,
                         vocabulary: Sequence[str] = (), namings: Optional[Mapping[str, QNaming]] = None
                         ) -> Tuple[Formula, Dict[str, QNaming]]:
    """모든 선호 연산자를 제거

    Args:
        a: 경로 변수가 없는 식
        descriptions: 선호 기술 (하나면 모든 에이전트가 공유)
        mode: FORMB / QVARS / LOGVARS
        collapse_initial: 시간 깊이 0의 등장은 초기 목표 목록으로 바로 평가
        supply: 새 변수 공급기 (미지정 시 a와 vocabulary 이름을 예약)
        vocabulary: 모델 명제 (새 변수와 겹치지 않도록 예약)
        namings: 경로 양화자 단계가 이미 만든 라벨 명명 (그대로 재사용)

    Returns:
        (선호 없는 식, 에이전트별 라벨 명명)
    """
    if find_first(a, PathAtom, *PATH_BINDERS) is not None:
        raise UnsupportedFormulaError("path variables must be eliminated before preference operators")
    known = dict(namings or {})
    if find_first(a, Pref) is None and (mode is ElimMode.FORMB or not known):
        return a, known
    resolved = _resolve(a, descriptions, known)

    logger.info(f"🔁 선호 제거 시작: 에이전트 {list(resolved)}, 모드 {mode.value}")
    if supply is None:
        supply = FreshVarSupply.for_formulas(a, extra=vocabulary)
    for d in resolved.values():
        supply.reserve(d.atoms)
    for naming in known.values():
        supply.reserve(naming.variables())

    log_encoded = mode is ElimMode.LOGVARS
    namings = {agent: known.get(agent) or make_naming(agent, d, supply, log_encoded)
               for agent, d in resolved.items()}
    reachable = {agent: reachable_descriptions(d) for agent, d in resolved.items()}
    result = simplify(_rewrite(a, True, collapse_initial, resolved, namings, reachable))

    if mode is not ElimMode.FORMB:
        body = And(conj(labeling_formula(namings[agent], d) for agent, d in resolved.items()), result)
        for name in reversed([v for agent in resolved for v in namings[agent].variables()]):
            body = ExistsProp(name, body)
        result = body

    logger.info(f"✅ 선호 제거 완료: 라벨 변수 {sum(len(n.variables()) for n in namings.values())}개")
    return result, namings
