"""
경로 양화자(∃~ᵢ, ∃1ᵢ, ∀~ᵢ) 제거

경로 변수 𝐩는 바인더 상태의 한 걸음 뒤에서 시작하는 경로에서만 참일 수 있습니다.
t¹(바인더 위치)/t⁰(한 걸음 뒤) 분리 후 𝐩에 클래스 합집합을 정의하는 식을 대입합니다.

  ∃~ᵢ𝐩.C ⇝ ⋁_D (label(D) ∧ ⋁_{X⊆{1..K}} [(⋁_{k∈X} B_k)/𝐩] t¹(C))
  ∃1ᵢ𝐩.C ⇝ ⋁_D (label(D) ∧ ⋁_k (∃X B_k ∧ [B_k/𝐩] t¹(C)))
  ∀~ᵢ𝐩.C ⇝ ⋁_D (label(D) ∧ ⋀_{X⊆{1..K}} [(⋁_{k∈X} B_k)/𝐩] t¹(C))

D는 에이전트 i의 도달 가능한 목표 목록, label(D)는 선호 제거 단계와 공유하는 라벨 원자입니다.
∃1의 ∃X B_k 연언은 빈 클래스를 고르지 못하게 하는 보호 조건입니다.
"""
from typing import Dict, Mapping, Optional, Tuple

from core.errors import FreePathVariableError, MissingDescriptionError
from core.formula import (
    BOT, PATH_BINDERS, TEMPORAL, And, ExistsPath, Finally, Formula, FreshVarSupply, Globally, Next, OneQuant,
    Or, PathAtom, Pref, SimForall, SimQuant, Until, WeakUntil, conj, disj, find_first, free_path_vars, map_children,
    simplify, substitute,
)
from core.gnf import normalize_description
from core.models import PreferenceDescription, QNaming, TSepMode
from core.pref_elimination import Descriptions, make_naming, reachable_descriptions
from utils.logger import setup_logger

logger = setup_logger(__name__)


def _erase(f: Formula, v: str) -> Formula:
    """[⊥/𝐩]"""
    return substitute(f, {PathAtom(v): BOT})


def t_sep(f: Formula, v: str, mode: TSepMode) -> Formula:
    """𝐩 등장을 한 걸음 뒤 위치로 분리

    ONE: 바인더 위치 (𝐩는 거짓, X 아래에서 ZERO로)
    ZERO: 한 걸음 뒤 위치 (𝐩 그대로, X 아래에서는 [⊥/𝐩])
    """
    if v not in free_path_vars(f):
        return f

    def same(child: Formula) -> Formula:
        return t_sep(child, v, mode)

    def step(body: Formula) -> Formula:
        if mode is TSepMode.ONE:
            return Next(t_sep(body, v, TSepMode.ZERO))
        return Next(_erase(body, v))

    match f:
        case PathAtom(name) if name == v:
            return BOT if mode is TSepMode.ONE else f
        case Next(body):
            return step(body)
        case Until(left, right) | WeakUntil(left, right):
            return Or(same(right), And(same(left), step(f)))
        case Finally(body):
            return Or(same(body), step(f))
        case Globally(body):
            return And(same(body), step(f))
        case Pref(variant, agent, left, right):
            if mode is TSepMode.ONE:
                return Pref(variant, agent, t_sep(left, v, TSepMode.ZERO), t_sep(right, v, TSepMode.ZERO))
            return Pref(variant, agent, _erase(left, v), _erase(right, v))
        case SimQuant(_, var, _) | OneQuant(_, var, _) | SimForall(_, var, _) if var == v:
            return f
    return map_children(f, same)


def matches_anchored_grammar(f: Formula, v: str) -> bool:
    """𝐩의 모든 자유 등장이 바인더 한 걸음 뒤에 있는지 (∃는 깊이 유지, X와 선호 피연산자는 +1, U 류 금지)"""

    def check(node: Formula, depth: int) -> bool:
        if v not in free_path_vars(node):
            return True
        match node:
            case PathAtom(_):
                return depth == 1
            case Next(body):
                return check(body, depth + 1)
            case Pref(_, _, left, right):
                return check(left, depth + 1) and check(right, depth + 1)
            case Until() | WeakUntil() | Finally() | Globally():
                return False
        return all(check(child, depth) for child in node.children())

    return check(f, 0)


# ===== 제거 =====

def _resolve(descriptions: Descriptions, agent: str) -> PreferenceDescription:
    if isinstance(descriptions, PreferenceDescription):
        return descriptions
    if agent not in descriptions:
        raise MissingDescriptionError(f"no preference description for agent {agent}")
    return descriptions[agent]


def _class_union(d: PreferenceDescription, chosen) -> Formula:
    return disj(d.objective(k) for k in sorted(chosen))


def _subsets(size: int):
    for mask in range(2 ** size):
        yield [k for k in range(1, size + 1) if mask >> (k - 1) & 1]


def instantiate_binder(f: Formula, d: PreferenceDescription, supply: FreshVarSupply) -> Formula:
    """목표 목록 d가 현재 목표일 때 바인더 하나를 없앤 식 (본문에는 다른 바인더 없음)"""
    body = t_sep(f.body, f.var, TSepMode.ONE)
    key = PathAtom(f.var)
    if isinstance(f, OneQuant):
        return disj(And(ExistsPath(Next(d.objective(k))), substitute(body, {key: d.objective(k)}, supply))
                    for k in d.indices())
    copies = (substitute(body, {key: _class_union(d, chosen)}, supply) for chosen in _subsets(d.size))
    return conj(copies) if isinstance(f, SimForall) else disj(copies)


def eliminate_path_quant(a: Formula, descriptions: Descriptions,
                         namings: Optional[Mapping[str, QNaming]] = None,
                         collapse_initial: bool = False, log_encoded: bool = False,
                         supply: Optional[FreshVarSupply] = None,
                         vocabulary=()) -> Tuple[Formula, Dict[str, QNaming]]:
    """∃~/∃1/∀~를 아래에서 위로 제거

    Returns:
        (경로 변수 없는 식, 에이전트별 라벨 명명). 라벨 명명은 선호 제거 단계에 그대로 넘깁니다.
    """
    free = free_path_vars(a)
    if free:
        raise FreePathVariableError(f"free path variables: {sorted(free)}")
    namings = dict(namings or {})
    if find_first(a, *PATH_BINDERS) is None:
        return a, namings
    if supply is None:
        supply = FreshVarSupply.for_formulas(a, extra=vocabulary)
    for naming in namings.values():
        supply.reserve(naming.variables())

    reachable: Dict[str, list] = {}
    eliminated = 0

    def rewrite(f: Formula, at_root: bool) -> Formula:
        nonlocal eliminated
        if isinstance(f, Pref):
            f = Pref(f.variant, f.agent, rewrite(f.left, False), rewrite(f.right, False))
        else:
            f = map_children(f, lambda child: rewrite(child, at_root and not isinstance(f, TEMPORAL)))
        if not isinstance(f, PATH_BINDERS):
            return f

        eliminated += 1
        d = normalize_description(_resolve(descriptions, f.agent))
        supply.reserve(d.atoms)
        if at_root and collapse_initial:
            return instantiate_binder(f, d, supply)
        if f.agent not in namings:
            namings[f.agent] = make_naming(f.agent, d, supply, log_encoded)
        if f.agent not in reachable:
            reachable[f.agent] = reachable_descriptions(d)
        naming = namings[f.agent]
        return disj(And(naming.label_formula(candidate), instantiate_binder(f, candidate, supply))
                    for candidate in reachable[f.agent])

    logger.info("🔁 경로 양화자 제거 시작")
    result = simplify(rewrite(a, True))
    logger.info(f"✅ 경로 양화자 제거 완료: 바인더 {eliminated}개")
    return result, namings
