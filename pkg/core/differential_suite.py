"""
차등 검사 스위트

번역 단계마다 독립 구현된 엔진 두 개(또는 기대값)를 무작위/수작업 인스턴스에서 비교합니다.
레코드 형식: {suite, instance, verdicts, agree}
"""
from math import ceil, log2
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from checkers.atlsc_oracle import atlsc_bounded_check
from checkers.ctlstar_checker import ctlstar_check
from checkers.direct_pref_checker import direct_pref_check
from checkers.quant_sem_checker import quant_sem_check
from checkers.translated_checker import translated_check
from config.suite_config import DEFAULT_SUITE_CONFIG, DifferentialSuiteConfig
from core.atlsc_translator import translate_atlsc
from core.curated_instances import CURATED_INSTANCES
from core.formula import (
    GAME_NODES, PATH_BINDERS, CoStratMod, ExistsProp, ForallPath, Formula, Iff, Implies, Next, OneQuant, Pref,
    PrefVariant, SimQuant, StratMod, find_first, is_false, modal_depth, occurrences, subformulas,
)
from core.gnf import closure, enumerate_lassos, gnf, gnf_as_formula, letters_over, ltl_eval, minterm, tail
from core.model_builder import build_mb
from core.models import CGM, ElimMode, LassoWord, Letter, PreferenceDescription, Verdict
from core.nash_repro import repro_nash
from core.path_quantifiers import eliminate_path_quant
from core.pref_elimination import eliminate_preference
from core.random_instances import (
    axiom_instances, one_via_sim, random_atlsc_formula, random_cgm, random_ltl, random_path_instance,
    random_pref_instance,
)
from utils.logger import setup_logger

logger = setup_logger(__name__)

Record = Dict[str, object]
Suite = Callable[[DifferentialSuiteConfig, np.random.Generator], Iterator[Record]]


def make_record(suite: str, instance: str, verdicts: Dict[str, object], agree: bool) -> Record:
    return {"suite": suite, "instance": instance, "verdicts": verdicts, "agree": bool(agree)}


def _progress(iterable: Iterable, total: int, desc: str, cfg: DifferentialSuiteConfig):
    return tqdm(iterable, total=total, desc=desc, disable=not cfg.progress, leave=False)


def _guarded(suite: str, instance: str, run: Callable[[], Optional[Record]]) -> Optional[Record]:
    """인스턴스 하나를 실행하고, 예외는 불일치 레코드로 기록"""
    try:
        return run()
    except Exception as e:
        logger.error(f"❌ {suite}/{instance} 실행 실패: {e}", exc_info=True)
        return make_record(suite, instance, {"error": f"{type(e).__name__}: {e}"}, False)


# ===== GNF =====

def suite_gnf(cfg: DifferentialSuiteConfig, rng: np.random.Generator) -> Iterator[Record]:
    """GNF 건전성(모든 유계 라쏘에서 b ⇔ gnf(b)) + closure 규율(tail 닫힘, 모달 깊이)"""
    atoms = cfg.atoms[:cfg.gnf_atoms]
    lassos = list(enumerate_lassos(atoms, cfg.lasso_bound))
    letters = list(letters_over(atoms))
    logger.info(f"🔁 GNF 스위트: 식 {cfg.gnf_formulas}개, 라쏘 {len(lassos)}개")

    for i in _progress(range(cfg.gnf_formulas), cfg.gnf_formulas, "gnf", cfg):
        b = random_ltl(rng, atoms, cfg.gnf_depth)

        def run() -> Record:
            expanded = gnf_as_formula(gnf(b))
            mismatch = next((word for word in lassos if not ltl_eval(word, Iff(b, expanded))), None)
            members = closure(b)
            known = set(members)
            closed = all(tail(member, letter) in known for member in members for letter in letters)
            depth = modal_depth(b)
            shallow = all(modal_depth(member) <= depth for member in members)
            verdicts = {"sound": mismatch is None, "tail_closed": closed, "depth_bounded": shallow,
                        "closure_size": len(members)}
            if mismatch is not None:
                verdicts["counterexample"] = str(mismatch)
            return make_record("gnf", f"gnf-{i}: {b}", verdicts, mismatch is None and closed and shallow)

        yield _guarded("gnf", f"gnf-{i}", run)


# ===== 선호 제거 / 공리 / P 전파 =====

def _pref_instances(cfg: DifferentialSuiteConfig, rng: np.random.Generator, count: int, prefix: str):
    for i in range(count):
        yield random_pref_instance(rng, f"{prefix}-{i}", cfg.max_states, cfg.max_classes, cfg.pref_depth,
                                   cfg.atoms)


def suite_pref(cfg: DifferentialSuiteConfig, rng: np.random.Generator) -> Iterator[Record]:
    """직접 평가 vs (선호 제거 ForMB + M_B + CTL*)"""
    for inst in _progress(_pref_instances(cfg, rng, cfg.pref_instances, "pref"), cfg.pref_instances, "pref", cfg):

        def run() -> Record:
            direct = direct_pref_check(inst.model, inst.descriptions, inst.formula).holds
            eliminated, namings = eliminate_preference(inst.formula, inst.descriptions, mode=ElimMode.FORMB,
                                                       vocabulary=sorted(inst.model.props))
            mb = build_mb(inst.model, namings, inst.descriptions) if namings else inst.model
            translated = ctlstar_check(mb, eliminated).holds
            return make_record("pref", inst.ident, {"direct": direct, "ctlstar_mb": translated},
                               direct == translated)

        yield _guarded("pref", inst.ident, run)


def suite_axioms(cfg: DifferentialSuiteConfig, rng: np.random.Generator) -> Iterator[Record]:
    """선호 공리 사례는 초기 상태에서 모두 참"""
    for inst in _progress(_pref_instances(cfg, rng, cfg.axiom_instances, "axiom"), cfg.axiom_instances,
                          "axioms", cfg):
        d = inst.descriptions["1"]
        for name, formula in axiom_instances(rng, d, "1", cfg.atoms).items():
            ident = f"{inst.ident}/{name}"

            def run(formula=formula, ident=ident) -> Record:
                holds = direct_pref_check(inst.model, inst.descriptions, formula).holds
                return make_record("axioms", ident, {"direct": holds}, holds)

            yield _guarded("axioms", ident, run)


def lasso_propagated_pairs(d: PreferenceDescription, letter: Letter,
                           bound: int) -> Tuple[FrozenSet[Tuple[int, int]], FrozenSet[int]]:
    """한 걸음 진행 후 성립하는 쌍 집합 P′를 라쏘 단어로 따로 계산

    갱신된 클래스 k에 드는 단어 w마다 letter·w가 원래 목록에서 어느 클래스인지 모은 뒤,
    (k₁, k₂)의 모든 원래 클래스 조합이 P에 있으면 P′에 넣습니다. 단어가 없는 클래스는 자명하게 성립.

    Returns:
        (P′, 단어가 하나라도 든 갱신 클래스)
    """
    updated = d.updated(letter)
    origins: Dict[int, Set[Optional[int]]] = {k: set() for k in d.indices()}
    for word in enumerate_lassos(d.atoms, bound):
        now = next((k for k in d.indices() if ltl_eval(word, updated.objective(k))), None)
        if now is None:
            continue
        shifted = LassoWord((letter,) + word.prefix, word.loop)
        origins[now].add(next((k for k in d.indices() if ltl_eval(shifted, d.objective(k))), None))
    pairs = frozenset((k1, k2) for k1 in d.indices() for k2 in d.indices()
                      if all((j1, j2) in d.better for j1 in origins[k1] for j2 in origins[k2]))
    return pairs, frozenset(k for k, found in origins.items() if found)


def suite_propagation(cfg: DifferentialSuiteConfig, rng: np.random.Generator) -> Iterator[Record]:
    """한 걸음 갱신 후 라쏘로 계산한 P′ ⊇ P, 새 쌍은 빈 클래스에서만

    induced_pairs는 라쏘 P′에 포함되어야 하고, induced_pairs의 쌍은 다음 상태에서 의미상 성립해야 합니다.
    """
    for inst in _progress(_pref_instances(cfg, rng, cfg.pref_instances, "prop"), cfg.pref_instances,
                          "propagation", cfg):
        d = inst.descriptions["1"]
        for letter in letters_over(d.atoms):
            ident = f"{inst.ident}/{{{','.join(sorted(letter))}}}"

            def run(letter=letter, ident=ident) -> Record:
                updated = d.updated(letter)
                nonempty = {k for k in d.indices() if not is_false(updated.objective(k))}
                induced = d.induced_pairs(nonempty)
                propagated, inhabited = lasso_propagated_pairs(d, frozenset(letter), cfg.propagation_lasso_bound)
                superset = d.better <= propagated
                only_empty = all(k1 not in inhabited or k2 not in inhabited for k1, k2 in propagated - d.better)
                covered = induced <= propagated
                guard = minterm(d.atoms, letter)
                semantic = all(
                    direct_pref_check(inst.model, inst.descriptions, ForallPath(Next(Implies(
                        guard, Pref(PrefVariant.FF, "1", updated.objective(k1), updated.objective(k2)))))).holds
                    for k1, k2 in sorted(induced))
                verdicts = {"superset": superset, "only_empty": only_empty, "covered": covered, "semantic": semantic,
                            "new_pairs": sorted(propagated - d.better)}
                return make_record("propagation", ident, verdicts, superset and only_empty and covered and semantic)

            yield _guarded("propagation", ident, run)


# ===== 경로 양화자 =====

def eliminated_holds(inst, formula: Formula) -> bool:
    """경로 양화자를 제거한 식을 M_B 위에서 직접 평가"""
    eliminated, namings = eliminate_path_quant(formula, inst.descriptions, vocabulary=sorted(inst.model.props))
    mb = build_mb(inst.model, namings, inst.descriptions) if namings else inst.model
    return direct_pref_check(mb, inst.descriptions, eliminated).holds


def suite_paths(cfg: DifferentialSuiteConfig, rng: np.random.Generator) -> Iterator[Record]:
    """양화자 의미 평가 vs (경로 양화자 제거 + M_B + 직접 평가), ∃1의 ∃~ 정의 가능성, 제거 후 ∃1 ⇒ ∃~"""
    for i in _progress(range(cfg.path_instances), cfg.path_instances, "paths", cfg):
        inst = random_path_instance(rng, f"paths-{i}", cfg.path_max_states, cfg.max_classes, cfg.atoms)

        def run() -> Record:
            semantic = quant_sem_check(inst.model, inst.descriptions, inst.formula).holds
            rewritten = eliminated_holds(inst, inst.formula)
            return make_record("paths", inst.ident, {"quantsem": semantic, "eliminated": rewritten},
                               semantic == rewritten)

        yield _guarded("paths", inst.ident, run)

        def definability() -> Record:
            binder = find_first(inst.formula, *PATH_BINDERS)
            single = OneQuant(binder.agent, binder.var, binder.body)
            direct = quant_sem_check(inst.model, inst.descriptions, single).holds
            via_sim = quant_sem_check(inst.model, inst.descriptions, one_via_sim(single)).holds
            return make_record("definability", inst.ident, {"one": direct, "via_sim": via_sim}, direct == via_sim)

        yield _guarded("definability", inst.ident, definability)

        def one_implies_sim() -> Record:
            binder = find_first(inst.formula, *PATH_BINDERS)
            one = eliminated_holds(inst, OneQuant(binder.agent, binder.var, binder.body))
            sim = eliminated_holds(inst, SimQuant(binder.agent, binder.var, binder.body))
            return make_record("one_implies_sim", inst.ident, {"one": one, "sim": sim}, sim or not one)

        yield _guarded("one_implies_sim", inst.ident, one_implies_sim)


# ===== ATLSC* 번역 구조 =====

def _split(node: Formula) -> bool:
    """병합 연합이 안쪽 모달리티 때문에 에이전트별로 쪼개지는지"""
    return any(isinstance(inner, GAME_NODES) and inner.coalition & node.coalition
               and not node.coalition <= inner.coalition
               for inner in subformulas(node.body))


def expected_quantifiers(formula: Formula, m: CGM, mode: str) -> int:
    """⟨·⟩Γ / ⟦Γ⟧ 마다 도입되어야 하는 전략 변수 수의 합"""
    total = 0
    for node in occurrences(formula):
        if not isinstance(node, (StratMod, CoStratMod)):
            continue
        coalition = node.coalition
        if mode == "log":
            total += sum(ceil(log2(len(m.actions[agent]))) if len(m.actions[agent]) > 1 else 0
                         for agent in coalition)
        elif mode == "merge" and len(coalition) > 1 and not _split(node):
            total += 1
        else:
            total += len(coalition)
    return total


def count_quantifiers(formula: Formula) -> int:
    return sum(1 for node in occurrences(formula) if isinstance(node, ExistsProp))


def suite_structure(cfg: DifferentialSuiteConfig, rng: np.random.Generator) -> Iterator[Record]:
    """번역이 도입한 양화 변수 수: dest |Γ|, log Σ⌈log₂|Act_i|⌉, merge 연합당 1"""
    for i in _progress(range(cfg.structure_formulas), cfg.structure_formulas, "structure", cfg):
        m = random_cgm(rng, int(rng.integers(2, 4)), cfg.atoms, n_actions=int(rng.integers(2, 5)))
        formula = random_atlsc_formula(rng, cfg.atoms, m.agents, cfg.structure_depth)
        for mode in ("dest", "log", "merge"):
            ident = f"structure-{i}/{mode}"

            def run(mode=mode) -> Record:
                result = translate_atlsc(formula, m, merge=mode == "merge", log_actions=mode == "log")
                counted = count_quantifiers(result.formula)
                expected = expected_quantifiers(formula, m, mode)
                return make_record("structure", ident, {"quantifiers": counted, "expected": expected},
                                   counted == expected)

            yield _guarded("structure", ident, run)


# ===== 수작업 인스턴스 =====

def suite_curated(cfg: DifferentialSuiteConfig, rng: np.random.Generator) -> Iterator[Record]:
    """유계 오라클 vs 기대값 vs 번역식의 유계 평가 (dest / log 부호화)"""
    for inst in _progress(CURATED_INSTANCES, len(CURATED_INSTANCES), "curated", cfg):
        for mode in ("dest", "log"):
            ident = f"{inst.name}/{mode}"

            def run(mode=mode, ident=ident) -> Record:
                oracle = atlsc_bounded_check(inst.model, inst.formula, inst.h, inst.sufficient)
                result = translate_atlsc(inst.formula, inst.model, log_actions=mode == "log")
                translated = translated_check(result, inst.h, inst.sufficient)
                verdicts = {"oracle": oracle.value, "translated": translated.value, "expected": inst.expected.value}
                return make_record("curated", ident, verdicts, oracle is translated is inst.expected)

            yield _guarded("curated", ident, run)


def suite_monotonicity(cfg: DifferentialSuiteConfig, rng: np.random.Generator) -> Iterator[Record]:
    """기억 한도 h에서 참으로 확정된 존재 주장은 h+1에서도 참"""
    for inst in _progress(CURATED_INSTANCES, len(CURATED_INSTANCES), "monotonicity", cfg):

        def run() -> Optional[Record]:
            at_h = atlsc_bounded_check(inst.model, inst.formula, inst.h)
            if at_h is not Verdict.TRUE:
                return None
            above = atlsc_bounded_check(inst.model, inst.formula, inst.h + 1)
            return make_record("monotonicity", inst.name, {f"h={inst.h}": at_h.value,
                                                           f"h={inst.h + 1}": above.value},
                               above is Verdict.TRUE)

        record = _guarded("monotonicity", inst.name, run)
        if record is not None:
            yield record


def suite_nash(cfg: DifferentialSuiteConfig, rng: np.random.Generator) -> Iterator[Record]:
    report = repro_nash(seed=cfg.seed)
    for row in report.rows:
        yield make_record("nash", row.name, {"value": row.value, "expected": row.expected}, row.passed)


SUITES: Dict[str, Suite] = {
    "gnf": suite_gnf,
    "pref": suite_pref,
    "axioms": suite_axioms,
    "propagation": suite_propagation,
    "paths": suite_paths,
    "structure": suite_structure,
    "curated": suite_curated,
    "monotonicity": suite_monotonicity,
    "nash": suite_nash,
}


def run_suites(config: Optional[DifferentialSuiteConfig] = None) -> List[Record]:
    """설정된 스위트를 차례로 실행

    스위트마다 시드에서 파생한 독립 난수 생성기를 씁니다 (일부만 실행해도 같은 인스턴스).
    """
    cfg = config or DEFAULT_SUITE_CONFIG
    names = list(cfg.only) if cfg.only else list(SUITES)
    unknown = [name for name in names if name not in SUITES]
    if unknown:
        raise KeyError(f"unknown suites: {unknown} (available: {list(SUITES)})")

    records: List[Record] = []
    for name in names:
        rng = np.random.default_rng([cfg.seed, list(SUITES).index(name)])
        logger.info(f"🔁 {name} 스위트 시작 (seed={cfg.seed})")
        found = list(SUITES[name](cfg, rng))
        failed = sum(1 for record in found if not record["agree"])
        mark = "✅" if not failed else "⚠️"
        logger.info(f"{mark} {name} 스위트 완료: {len(found)}건, 불일치 {failed}건")
        records.extend(found)
    return records


def summarize(records: List[Record]) -> pd.DataFrame:
    """스위트별 인스턴스 수, 일치 수, 불일치 수, 일치율"""
    if not records:
        return pd.DataFrame(columns=["suite", "instances", "agree", "disagree", "rate"])
    frame = pd.DataFrame({"suite": [r["suite"] for r in records], "agree": [r["agree"] for r in records]})
    summary = frame.groupby("suite", sort=False)["agree"].agg(instances="count", agree="sum").reset_index()
    summary["disagree"] = summary["instances"] - summary["agree"]
    summary["rate"] = (summary["agree"] / summary["instances"]).round(4)
    return summary
