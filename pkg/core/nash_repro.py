"""
Nash 균형 예제 재현

두 에이전트 협조 게임에서 선호/경로 양화자가 있는 Nash 균형 식을 단계별로 번역하고,
각 단계 식과 손으로 정리한 중간 형태들이 모델에서 같은 값을 갖는지 엔진으로 확인합니다.
음성 대조: P에서 (2,3)을 빼면 k-인덱스 형태와 선호 제거 형태의 문맥별 동치가 깨져야 합니다.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from checkers.atlsc_oracle import atlsc_bounded_check
from checkers.translated_checker import translated_check
from core.atlsc_translator import solution_concept
from core.formula import (
    And, Atom, CoStratMod, ExistsPath, ExistsProp, ForallPath, Formula, Iff, Implies, Next, Not,
    Or, Pref, PrefVariant, StratMod, conj, disj, occurrences, print_formula,
)
from core.gnf import full_system_check
from core.model_builder import build_mb
from core.models import (
    CGM, CheckerSection, ElimMode, PipelineConfig, PipelineSection, PreferenceDescription, Stage, Template,
    Verdict,
)
from core.path_quantifiers import eliminate_path_quant
from core.pipeline import run_pipeline
from utils.logger import setup_logger

logger = setup_logger(__name__)

AGENTS = ("1", "2")
ORDER = frozenset({(1, 2), (2, 3), (1, 3)})
MUTATED_ORDER = frozenset({(1, 2), (1, 3)})


# ===== 게임과 선호 =====

def nash_game() -> CGM:
    """w0에서 한 번 동시에 고르고 흡수 상태로

    (a1,a2) → s1 {m1, m2}   둘 다 중간
    (b1,b2) → s2 {h1, h2}   둘 다 최고
    그 외   → s3 {}          둘 다 최저
    """
    outcome = {}
    for state in ("w0", "s1", "s2", "s3"):
        for a1 in ("a1", "b1"):
            for a2 in ("a2", "b2"):
                if state != "w0":
                    target = state
                elif (a1, a2) == ("a1", "a2"):
                    target = "s1"
                elif (a1, a2) == ("b1", "b2"):
                    target = "s2"
                else:
                    target = "s3"
                outcome[(state, (a1, a2))] = target
    valuation = {"w0": set(), "s1": {"m1", "m2"}, "s2": {"h1", "h2"}, "s3": set()}
    actions = {"1": ("a1", "b1"), "2": ("a2", "b2")}
    return CGM(("w0", "s1", "s2", "s3"), "w0", AGENTS, actions, outcome, valuation,
               frozenset({"m1", "h1", "m2", "h2"}))


def objective(agent: str, k: int) -> Formula:
    """B_{i,1} = ¬m∧¬h, B_{i,2} = m∧¬h, B_{i,3} = h"""
    m, h = Atom(f"m{agent}"), Atom(f"h{agent}")
    return (And(Not(m), Not(h)), And(m, Not(h)), h)[k - 1]


def goal(agent: str) -> Formula:
    return Or(objective(agent, 2), objective(agent, 3))


def nash_descriptions(better=ORDER) -> Dict[str, PreferenceDescription]:
    return {agent: PreferenceDescription(tuple(objective(agent, k) for k in (1, 2, 3)), better)
            for agent in AGENTS}


# ===== 손으로 정리한 형태 =====

def _others(agent: str, k: int) -> Formula:
    return disj(objective(agent, j) for j in (1, 2, 3) if j != k)


def k_index_component(agent: str) -> Formula:
    """⋀_{k=2,3} (G <∃∀ B_k ⇒ ⟦i⟧X⋁_{k'≠k}B_{k'})"""
    return conj(Implies(Pref(PrefVariant.EA, agent, goal(agent), objective(agent, k)),
                        CoStratMod(frozenset((agent,)), Next(_others(agent, k))))
                for k in (2, 3))


def eliminated_component(agent: str) -> Formula:
    """⋀_k ((⋁_{k'<k} ∃X(G∧B_{k'})) ⇒ ⟦i⟧X⋁_{k'≠k}B_{k'})"""
    return conj(Implies(disj(ExistsPath(Next(And(goal(agent), objective(agent, j)))) for j in range(1, k)),
                        CoStratMod(frozenset((agent,)), Next(_others(agent, k))))
                for k in (2, 3))


def tollens_component(agent: str) -> Formula:
    return conj(Implies(StratMod(frozenset((agent,)), Next(objective(agent, k))),
                        conj(ForallPath(Next(Not(And(goal(agent), objective(agent, j))))) for j in range(1, k)))
                for k in (2, 3))


def final_component(agent: str) -> Formula:
    """⋀_k (⟨i⟩X B_k ⇒ ∀X(G ⇒ ⋁_{k'≥k} B_{k'}))"""
    return conj(Implies(StratMod(frozenset((agent,)), Next(objective(agent, k))),
                        ForallPath(Next(Implies(goal(agent), disj(objective(agent, j) for j in range(k, 4))))))
                for k in (2, 3))


def _profile(components) -> Formula:
    return StratMod(frozenset(AGENTS), conj(And(Next(goal(agent)), components(agent)) for agent in AGENTS))


def endpoint() -> Formula:
    """⟨1,2⟩(X(B₂∨B₃) ∧ ¬⟨1⟩X B₃ ∧ H₂)"""
    h2 = And(Next(goal("2")), final_component("2"))
    return StratMod(frozenset(AGENTS), conj((Next(goal("1")),
                                             Not(StratMod(frozenset(("1",)), Next(objective("1", 3)))), h2)))


def context_equivalence(agent: str = "1") -> Formula:
    """⟦1,2⟧(k-인덱스 성분 ⇔ 선호 제거 성분): 모든 전략 문맥에서 동치"""
    return CoStratMod(frozenset(AGENTS), Iff(k_index_component(agent), eliminated_component(agent)))


# ===== 보고서 =====

@dataclass
class ReportRow:
    name: str
    value: bool
    expected: Optional[bool]
    formula: Optional[Formula] = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.expected is None or self.value == self.expected

    def to_record(self) -> dict:
        return {
            "row": self.name,
            "value": self.value,
            "expected": self.expected,
            "passed": self.passed,
            "formula": print_formula(self.formula) if self.formula is not None else None,
            "note": self.note,
        }


@dataclass
class NashReport:
    rows: List[ReportRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def add(self, row: ReportRow):
        self.rows.append(row)
        mark = "✅" if row.passed else "❌"
        logger.info(f"{mark} {row.name}: {row.value} (기대값 {row.expected})")

    def to_records(self) -> List[dict]:
        return [row.to_record() for row in self.rows]


def format_report(report: NashReport) -> str:
    lines = ["=" * 60, "Nash 균형 번역 재현", "=" * 60]
    for row in report.rows:
        mark = "✅" if row.passed else "❌"
        expected = "-" if row.expected is None else str(row.expected)
        lines.append(f"{mark} {row.name:<24} 값={str(row.value):<5} 기대={expected:<5} {row.note}")
    lines.append("-" * 60)
    lines.append(f"결과: {'통과' if report.passed else '실패'}")
    return "\n".join(lines)


def _holds(m, formula: Formula, descriptions=None, config: Optional[CheckerSection] = None) -> bool:
    return atlsc_bounded_check(m, formula, h=0, sufficient=True, descriptions=descriptions,
                               config=config) is Verdict.TRUE


def _renamed(m: CGM, rng: np.random.Generator) -> CGM:
    """상태 이름만 무작위로 바꾼 같은 게임"""
    order = rng.permutation(len(m.states))
    names = {state: f"v{int(order[i])}" for i, state in enumerate(m.states)}
    outcome = {(names[state], move): names[target] for (state, move), target in m.outcome.items()}
    valuation = {names[state]: labels for state, labels in m.valuation.items()}
    return CGM(tuple(names[s] for s in m.states), names[m.initial], m.agents, m.actions, outcome, valuation,
               m.props, m.prefs)


def _count_deviation_tests(f: Formula) -> int:
    return sum(1 for node in occurrences(f) if isinstance(node, (StratMod, CoStratMod)) and len(node.coalition) == 1)


def _outer_block(f: Formula) -> List[str]:
    names = []
    while isinstance(f, ExistsProp):
        names.append(f.prop)
        f = f.body
    return names


def repro_nash(seed: int = 7, config: Optional[CheckerSection] = None) -> NashReport:
    """Nash 균형 예제의 모든 단계와 정리 형태를 엔진으로 비교

    Returns:
        NashReport (행마다 엔진 값과 기대값). 불일치가 하나라도 있으면 passed=False
    """
    logger.info("🔁 Nash 균형 재현 시작")
    rng = np.random.default_rng(seed)
    m = nash_game()
    d = nash_descriptions()
    mutated = nash_descriptions(MUTATED_ORDER)
    report = NashReport()

    for agent in AGENTS:
        check = full_system_check(d[agent].objectives, m.props, 1)
        report.add(ReportRow(f"full_system_{agent}", check.holds, True, note=check.kind))

    nash_formula = solution_concept(Template.NASH, {agent: goal(agent) for agent in AGENTS})
    reference = _holds(m, nash_formula, d, config)
    report.add(ReportRow("nash_formula", reference, True, nash_formula, note="(b1,b2) → s2 균형"))

    cfg = PipelineConfig(pipeline=PipelineSection(pref_mode=ElimMode.FORMB, collapse_initial=True))
    result = run_pipeline(cfg, model=m.with_prefs(d), formula=nash_formula)
    paths = result.output(Stage.PATHS)
    pref = result.output(Stage.PREF)
    atlsc = result.output(Stage.ATLSC)
    report.add(ReportRow("paths_stage", _holds(m, paths.formula, d, config), reference, paths.formula))

    guarded, namings = eliminate_path_quant(nash_formula, d, vocabulary=m.props)
    mb = build_mb(m, namings, d)
    report.add(ReportRow("paths_stage_guarded", _holds(mb, guarded, d, config), reference, guarded,
                         note=f"M_B {len(mb.states)}개 상태"))

    report.add(ReportRow("k_index_form", _holds(m, _profile(k_index_component), d, config), reference,
                         _profile(k_index_component)))
    report.add(ReportRow("pref_stage", _holds(m, pref.formula, None, config), reference, pref.formula))
    for name, components in (("pref_eliminated_form", eliminated_component),
                             ("modus_tollens_form", tollens_component),
                             ("final_form", final_component)):
        formula = _profile(components)
        report.add(ReportRow(name, _holds(m, formula, None, config), reference, formula))
    report.add(ReportRow("endpoint", _holds(m, endpoint(), None, config), reference, endpoint()))

    translated = translated_check(atlsc.translation, h=0, sufficient=True, config=config)
    report.add(ReportRow("translated", translated is Verdict.TRUE, reference, atlsc.formula))

    outer = _outer_block(atlsc.formula)
    deviations = _count_deviation_tests(pref.formula)
    blocks = atlsc.translation.blocks()
    report.add(ReportRow("translation_structure", len(outer) == 2 and len(blocks) == 2 + deviations, True,
                         note=f"바깥 변수 {len(outer)}개, 이탈 검사 {deviations}개, 블록 {len(blocks)}개"))

    report.add(ReportRow("context_equivalence", _holds(m, context_equivalence(), d, config), True,
                         context_equivalence()))
    report.add(ReportRow("negative_control", _holds(m, context_equivalence(), mutated, config), False,
                         context_equivalence(), note="P에서 (2,3) 제거"))

    renamed = _renamed(m, rng)
    report.add(ReportRow("state_renaming", _holds(renamed, nash_formula, d, config), reference, nash_formula))

    logger.info(f"{'✅' if report.passed else '❌'} Nash 균형 재현 완료: {len(report.rows)}개 항목")
    return report
