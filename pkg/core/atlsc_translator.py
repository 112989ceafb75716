"""
ATLSC* → QCTL* 번역 (수 저장 펼침 M♭ 위에서)

전략은 명제 변수로 부호화합니다.
- dest: 에이전트마다 p 하나. p는 전략이 고른 행동으로 도착한 상태에서 참
        ∀□ ⋁_{a∈Act_i} ∀X(p ⇔ a)
- log: 결정 상태에 ⌈log₂|Act_i|⌉ 비트로 행동 코드 저장, 경로 조건 □⋀_a(code_a ⇒ X a)
- merge: 연합 Γ를 한 명의 플레이어로 보고 변수 하나 (행동은 ⋀_{i∈Γ} a_i)

t_ρ(⟨Γ⟩B) = ∃새 변수(⋀ 제약 ∧ ∀(□(문맥 ρ∘ρ′ 추종) ⇒ t_{ρ∘ρ′}(B)))
t_ρ(⟩Γ⟨A) = t_{ρ|Ag∖Γ}(A)
"""
from itertools import product
from math import ceil, log2
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

from core.errors import TranslationError, UnknownAgentError, UnsupportedFormulaError
from core.formula import (
    GAME_NODES, PATH_BINDERS, And, Atom, CoStratMod, ExistsPath, ExistsProp, ForallPath, Formula,
    FreshVarSupply, Globally, Iff, Implies, Next, Not, Or, PathAtom, Pref, PrefVariant, Relax, SimForall,
    StratMod, conj, disj, find_first, map_children, sort_agents, subformulas, agents_of,
)
from core.model_builder import unfold1
from core.models import CGM, BindingEntry, ContextBinding, StrategyBlock, Template, TranslationResult
from utils.logger import setup_logger

logger = setup_logger(__name__)

JointAction = Tuple[str, ...]

PATH_VARIABLE = "c"


def _action_formula(joint: Union[str, JointAction]) -> Formula:
    if isinstance(joint, str):
        return Atom(joint)
    return conj(Atom(action) for action in joint)


def strategy_constraint(owners: Union[str, Sequence[str]], var: str, actions: Sequence[Union[str, JointAction]],
                        nondeterministic: bool = False) -> Formula:
    """var가 전략(owners가 고른 행동)의 도착 상태를 표시하도록 강제

    actions: 단일 에이전트면 행동 원자 목록, 병합 연합이면 owners 순서의 행동 튜플 목록
    nondeterministic: 허용 행동 집합(비어 있지 않음)을 표시하는 완화된 제약
    """
    p = Atom(var)
    moves = [_action_formula(joint) for joint in actions]
    if not nondeterministic:
        return ForallPath(Globally(disj(ForallPath(Next(Iff(p, move))) for move in moves)))
    closed = conj(Implies(ExistsPath(Next(And(p, move))), ForallPath(Next(Implies(move, p)))) for move in moves)
    return ForallPath(Globally(And(ExistsPath(Next(p)), closed)))


def code_formula(block: StrategyBlock, joint: JointAction) -> Formula:
    return conj(Atom(name) if bit else Not(Atom(name)) for name, bit in zip(block.variables, block.code(joint)))


def range_constraint(block: StrategyBlock) -> Formula:
    """사용하지 않는 코드 배제 (행동 수가 2의 거듭제곱이면 ⊤)"""
    if len(block.joint_actions) == 2 ** len(block.variables):
        return conj(())
    return ForallPath(Globally(disj(code_formula(block, joint) for joint in block.joint_actions)))


class AtlscTranslator:
    """ATLSC* 식 하나를 번역하는 동안의 상태 (새 변수 공급, 전략 변수 목록, 경고)"""

    def __init__(self, m: CGM, merge: bool = False, log_actions: bool = False, nondeterministic: bool = False,
                 supply: Optional[FreshVarSupply] = None):
        self.model = m if m.stores_moves else unfold1(m)
        self.merge = merge
        self.log_actions = log_actions
        self.nondeterministic = nondeterministic
        self.supply = supply or FreshVarSupply()
        self.supply.reserve(self.model.props | self.model.action_atoms)
        self.registry: Dict[str, StrategyBlock] = {}
        self.warnings: List[str] = []

    # ===== 전략 변수 =====

    def _joint_actions(self, owners: Sequence[str]) -> Tuple[JointAction, ...]:
        return tuple(product(*(self.model.actions[agent] for agent in owners)))

    def _groups(self, coalition, body: Formula) -> List[Tuple[str, ...]]:
        agents = sort_agents(coalition)
        if not self.merge or len(agents) < 2:
            return [(agent,) for agent in agents]
        for node in subformulas(body):
            if isinstance(node, GAME_NODES) and node.coalition & coalition and not coalition <= node.coalition:
                message = (f"merged coalition {list(agents)} is split by a nested modality over "
                           f"{list(sort_agents(node.coalition))}; using per-agent variables")
                logger.warning(f"⚠️ {message}")
                self.warnings.append(message)
                return [(agent,) for agent in agents]
        return [agents]

    def _new_block(self, owners: Tuple[str, ...]) -> StrategyBlock:
        joint = self._joint_actions(owners)
        tag = "_".join(owners)
        if self.log_actions:
            width = ceil(log2(len(joint))) if len(joint) > 1 else 0
            variables = tuple(self.supply.fresh(f"c_{tag}_") for _ in range(width))
            block = StrategyBlock(owners, variables, "log", joint)
        else:
            block = StrategyBlock(owners, (self.supply.fresh(f"s_{tag}_"),), "dest", joint)
        for name in block.variables:
            self.registry[name] = block
        return block

    def _constraint(self, block: StrategyBlock) -> Formula:
        if block.encoding == "log":
            return range_constraint(block)
        actions = [joint[0] for joint in block.joint_actions] if len(block.owners) == 1 else block.joint_actions
        return strategy_constraint(block.owners, block.variables[0], actions, self.nondeterministic)

    def _follows(self, entry: BindingEntry) -> Formula:
        """경로의 한 걸음이 entry의 전략을 따른다"""
        if entry.encoding == "dest":
            return Next(Atom(entry.variables[0]))
        owners = sort_agents(entry.agents)
        block = self.registry[entry.variables[0]] if entry.variables else StrategyBlock(
            owners, (), "log", self._joint_actions(owners))
        return conj(Implies(code_formula(block, joint), Next(_action_formula(joint)))
                    for joint in block.joint_actions)

    # ===== 번역 =====

    def translate(self, f: Formula, binding: ContextBinding = ContextBinding()) -> Formula:
        match f:
            case StratMod(coalition, body):
                return self._strategic(coalition, body, binding)
            case CoStratMod(coalition, body):
                return Not(self._strategic(coalition, Not(body), binding))
            case Relax(coalition, body):
                return self.translate(body, binding.drop(coalition))
        return map_children(f, lambda child: self.translate(child, binding))

    def _strategic(self, coalition, body: Formula, binding: ContextBinding) -> Formula:
        blocks = [self._new_block(group) for group in self._groups(coalition, body)]
        entries = [BindingEntry(frozenset(block.owners), block.variables, block.encoding) for block in blocks]
        inner = binding.override(coalition, entries)

        translated = self.translate(body, inner)
        if inner.entries:
            guard = Globally(conj(self._follows(entry) for entry in inner.entries))
            translated = Implies(guard, translated)
        result = And(conj(self._constraint(block) for block in blocks), ForallPath(translated)) \
            if blocks else ForallPath(translated)
        for name in reversed([name for block in blocks for name in block.variables]):
            result = ExistsProp(name, result)
        return result


def translate_atlsc(a: Formula, m: CGM, merge: bool = False, log_actions: bool = False,
                    nondeterministic: bool = False, supply: Optional[FreshVarSupply] = None) -> TranslationResult:
    """ATLSC* 식을 unfold1(m) 위의 QCTL* 식으로 번역

    Returns:
        TranslationResult (식, M♭, 전략 변수 목록, 경고)
    """
    offending = find_first(a, Pref, PathAtom, *PATH_BINDERS)
    if offending is not None:
        raise UnsupportedFormulaError(f"preference and path quantifiers must be eliminated first: {offending}")
    unknown = agents_of(a) - set(m.agents)
    if unknown:
        raise UnknownAgentError(f"agents not declared in the model: {sorted(unknown)}")

    supply = supply or FreshVarSupply.for_formulas(a)
    translator = AtlscTranslator(m, merge=merge, log_actions=log_actions, nondeterministic=nondeterministic,
                                 supply=supply)
    logger.info(f"🔁 ATLSC* 번역 시작 (merge={merge}, log_actions={log_actions})")
    formula = translator.translate(a)
    if find_first(formula, *GAME_NODES) is not None:
        raise TranslationError(f"game modality left after translation: {find_first(formula, *GAME_NODES)}")
    logger.info(f"✅ ATLSC* 번역 완료: 전략 변수 {len(translator.registry)}개")
    return TranslationResult(formula, translator.model, translator.registry, tuple(translator.warnings))


# ===== 해 개념 =====

def solution_concept(template: Template, goals: Mapping[str, Formula],
                     agents: Optional[Sequence[str]] = None) -> Formula:
    """Nash / 안전(secure) 균형 템플릿

    Nash:   ⟨Ag⟩ ⋀ᵢ (X Gᵢ ∧ ∀~ᵢ𝐜(Gᵢ <∃∀ᵢ 𝐜 ⇒ ⟦i⟧X¬𝐜))
    Secure: ⟨Ag⟩ ⋀ᵢ (X Gᵢ ∧ ∀~ᵢ𝐜(⋁_{j≠i}(𝐜 <∃∀ⱼ Gⱼ ∨ 𝐜 <∀∃ⱼ Gⱼ) ⇒ ⟦i⟧X¬𝐜))
    """
    everyone = sort_agents(agents if agents is not None else goals)
    missing = [agent for agent in everyone if agent not in goals]
    if missing:
        raise TranslationError(f"no goal formula for agents {missing}")

    c = PathAtom(PATH_VARIABLE)
    parts = []
    for agent in everyone:
        if template is Template.NASH:
            premise = Pref(PrefVariant.EA, agent, goals[agent], c)
        else:
            premise = disj(Or(Pref(PrefVariant.EA, other, c, goals[other]), Pref(PrefVariant.AE, other, c, goals[other]))
                           for other in everyone if other != agent)
        deviation = CoStratMod(frozenset((agent,)), Next(Not(c)))
        parts.append(And(Next(goals[agent]), SimForall(agent, PATH_VARIABLE, Implies(premise, deviation))))
    return StratMod(frozenset(everyone), conj(parts))
