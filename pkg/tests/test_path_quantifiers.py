"""
경로 양화자 제거 테스트

1. t¹/t⁰ 분리와 고정 문법
2. 제거 결과 vs 양화자 의미 평가 (무작위 인스턴스)
3. ∃1의 ∃~ 정의 가능성, 제거 후 ∃1 ⇒ ∃~
4. 바인더 하나를 없앨 때 사본 수와 크기 상한
5. 라벨 명명을 선호 제거 단계와 공유
"""

import sys
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import numpy as np
import pytest

from checkers.direct_pref_checker import direct_pref_check
from checkers.quant_sem_checker import quant_sem_check
from core.differential_suite import eliminated_holds
from core.errors import FreePathVariableError
from core.formula import (
    BOT, PATH_BINDERS, And, Atom, ExistsPath, Finally, ForallPath, FreshVarSupply, Next, OneQuant, Or, PathAtom, Pref,
    PrefVariant, SimForall, SimQuant, disj, find_first, occurrences, simplify, size,
)
from core.formula_parser import parse_formula
from core.model_builder import build_mb
from core.models import PreferenceDescription, TSepMode
from core.path_quantifiers import eliminate_path_quant, instantiate_binder, matches_anchored_grammar, t_sep
from core.pref_elimination import eliminate_preference
from core.random_instances import one_via_sim, random_path_instance
from utils.logger import setup_logger


logger = setup_logger(__name__)

p, q = Atom("p"), Atom("q")
c = PathAtom("c")

D = PreferenceDescription((parse_formula("G p"), parse_formula("!(G p)")), frozenset({(2, 1)}))


# ===== 분리 =====

def test_t_sep_positions():
    assert t_sep(c, "c", TSepMode.ONE) == BOT
    assert t_sep(c, "c", TSepMode.ZERO) == c
    assert t_sep(Next(c), "c", TSepMode.ONE) == Next(c)
    assert simplify(t_sep(Next(Next(c)), "c", TSepMode.ONE)) == BOT
    assert t_sep(Next(p), "c", TSepMode.ONE) == Next(p)


def test_t_sep_unrolls_eventually():
    """F 𝐩 → 바인더 위치에서는 거짓, 한 걸음 뒤에서만 𝐩"""
    assert simplify(t_sep(Finally(c), "c", TSepMode.ONE)) == Next(c)


def test_anchored_grammar():
    assert matches_anchored_grammar(ExistsPath(Next(c)), "c")
    assert matches_anchored_grammar(Pref(PrefVariant.FF, "1", c, p), "c")
    assert not matches_anchored_grammar(c, "c")
    assert not matches_anchored_grammar(ExistsPath(Next(Next(c))), "c")
    assert not matches_anchored_grammar(ExistsPath(Finally(c)), "c")


# ===== 제거 =====

def test_elimination_agrees_with_quantifier_semantics():
    rng = np.random.default_rng(17)
    for i in range(12):
        inst = random_path_instance(rng, f"t-{i}", max_states=3, max_classes=2)
        semantic = quant_sem_check(inst.model, inst.descriptions, inst.formula).holds
        eliminated, namings = eliminate_path_quant(inst.formula, inst.descriptions,
                                                   vocabulary=sorted(inst.model.props))
        assert find_first(eliminated, *PATH_BINDERS) is None
        assert find_first(eliminated, PathAtom) is None
        mb = build_mb(inst.model, namings, inst.descriptions) if namings else inst.model
        assert direct_pref_check(mb, inst.descriptions, eliminated).holds == semantic, inst.formula


def test_single_class_binder_definable_from_simultaneous():
    """∃1𝐩A ⇔ ∃~𝐩(∃X𝐩 ∧ ∀~𝐪(∃X(𝐩∧𝐪) ⇒ ∀X(𝐩⇒𝐪)) ∧ A)"""
    rng = np.random.default_rng(23)
    for i in range(8):
        inst = random_path_instance(rng, f"d-{i}", max_states=3, max_classes=2)
        binder = find_first(inst.formula, *PATH_BINDERS)
        single = OneQuant(binder.agent, binder.var, binder.body)
        direct = quant_sem_check(inst.model, inst.descriptions, single).holds
        via_sim = quant_sem_check(inst.model, inst.descriptions, one_via_sim(single)).holds
        assert direct == via_sim, single


def test_single_class_binder_implies_simultaneous_after_elimination():
    """제거 후 평가에서도 ∃1 ⇒ ∃~ (한 클래스는 클래스 부분집합의 특수한 경우)"""
    rng = np.random.default_rng(31)
    for i in range(10):
        inst = random_path_instance(rng, f"o-{i}", max_states=3, max_classes=3)
        binder = find_first(inst.formula, *PATH_BINDERS)
        one = eliminated_holds(inst, OneQuant(binder.agent, binder.var, binder.body))
        sim = eliminated_holds(inst, SimQuant(binder.agent, binder.var, binder.body))
        assert sim or not one, binder


# ===== 크기 =====

CLASS_LISTS = {
    1: ("true",),
    2: ("F p", "!(F p)"),
    3: ("G F p", "!(G F p) & F q", "!(G F p) & !(F q)"),
}


def _parts(f, kind):
    """최상위 ∨ / ∧ 평탄화"""
    if isinstance(f, kind):
        return _parts(f.left, kind) + _parts(f.right, kind)
    return [f]


@pytest.mark.parametrize("classes", [1, 2, 3])
def test_instantiation_copy_bound(classes):
    """∃~ / ∀~는 t¹(C) 사본 2^K개 이하, ∃1은 K개 이하"""
    d = PreferenceDescription(tuple(parse_formula(b) for b in CLASS_LISTS[classes]), frozenset())
    body = ForallPath(Or(Next(c), Next(And(p, c))))
    separated = t_sep(body, "c", TSepMode.ONE)
    hits = sum(1 for node in occurrences(separated) if node == c)
    assert hits == 2
    copy_bound = size(separated) + hits * (size(disj(d.objectives)) - 1)

    for binder in (SimQuant("1", "c", body), SimForall("1", "c", body)):
        copies = instantiate_binder(binder, d, FreshVarSupply.for_formulas(body, *d.objectives))
        parts = _parts(copies, Or if isinstance(binder, SimQuant) else And)
        assert len(parts) <= 2 ** classes
        assert all(size(part) <= copy_bound for part in parts)
        assert size(copies) <= 2 ** classes * copy_bound + 2 ** classes - 1

    single = instantiate_binder(OneQuant("1", "c", body), d, FreshVarSupply.for_formulas(body, *d.objectives))
    parts = _parts(single, Or)
    assert len(parts) <= classes
    for k, part in enumerate(parts, start=1):
        guard_size = size(ExistsPath(Next(d.objective(k))))
        assert size(part) <= 1 + guard_size + size(separated) + hits * (size(d.objective(k)) - 1)


def test_free_path_variable_rejected():
    with pytest.raises(FreePathVariableError):
        eliminate_path_quant(ExistsPath(Next(c)), D)


def test_formula_without_binders_is_unchanged():
    f = parse_formula("E X (p <ff[1] q)")
    assert eliminate_path_quant(f, D) == (f, {})


def test_namings_shared_with_preference_stage():
    f = parse_formula("Es[1] ~c . (E X ~c & (X p <ea[1] ~c))")
    eliminated, namings = eliminate_path_quant(f, {"1": D})
    assert find_first(eliminated, Pref) is not None
    without_pref, reused = eliminate_preference(eliminated, {"1": D}, namings=namings)
    assert reused["1"] is namings["1"]
    assert find_first(without_pref, Pref) is None
