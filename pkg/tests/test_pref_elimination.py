"""
선호 연산자 제거 테스트

1. 변형 전개와 고정 목표 목록에서의 제거
2. P에 쌍을 더하면 제거 결과가 약해짐
3. ForMB 출력 vs 직접 평가 (무작위 인스턴스)
4. QVARS / LOGVARS 출력 구조
5. 오류 경로
"""

import sys
from itertools import product
from math import ceil, log2
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import numpy as np
import pytest

from checkers.ctlstar_checker import ctlstar_check
from checkers.direct_pref_checker import direct_pref_check
from core.errors import MissingDescriptionError, UnsupportedFormulaError
from core.formula import (
    TOP, And, Atom, ExistsPath, ExistsProp, Implies, Next, Not, PathAtom, Pref, PrefVariant, find_first, free_props,
    subformulas,
)
from core.formula_parser import parse_formula
from core.gnf import closure
from core.model_builder import build_mb
from core.models import ElimMode, PreferenceDescription
from core.pref_elimination import (
    elim_pref_at, eliminate_preference, expand_variant, reachable_descriptions,
)
from core.random_instances import random_description, random_kripke, random_pref_instance
from utils.logger import setup_logger


logger = setup_logger(__name__)

p, q = Atom("p"), Atom("q")

D = PreferenceDescription((parse_formula("F p"), parse_formula("!(F p)")), frozenset({(2, 1)}))


def _ands(f):
    """최상위 ∧ 평탄화"""
    if isinstance(f, And):
        return _ands(f.left) + _ands(f.right)
    return [f]


# ===== 전개 =====

def test_ff_is_not_expanded():
    f = Pref(PrefVariant.FF, "1", p, q)
    assert expand_variant(f, D.objectives) is f


def test_expanded_variants_have_no_derived_operator():
    for variant in (PrefVariant.EA, PrefVariant.AE, PrefVariant.EE, PrefVariant.GEA, PrefVariant.GAE):
        expanded = expand_variant(Pref(variant, "1", Next(p), Next(q)), D.objectives)
        prefs = [node for node in subformulas(expanded) if isinstance(node, Pref)]
        assert all(node.variant is PrefVariant.FF for node in prefs)
        assert find_first(expanded, Pref) is not None


def test_elim_pref_at_counts_missing_pairs():
    """P 밖의 쌍마다 ¬(∃X(B′∧B_k₁) ∧ ∃X(B″∧B_k₂)) 하나"""
    everything = {(k1, k2) for k1 in (1, 2) for k2 in (1, 2)}
    assert elim_pref_at(p, q, D.objectives, everything) == TOP
    conjuncts = _ands(elim_pref_at(p, q, D.objectives, {(2, 1)}))
    assert len(conjuncts) == 3
    assert all(isinstance(c, Not) for c in conjuncts)


def test_reachable_descriptions_start_with_input():
    found = reachable_descriptions(D)
    assert found[0].better == D.better
    assert len(found) == len(set(found))
    # F p는 p를 본 뒤 ⊤, 아니면 그대로
    assert len(found) == 2


def test_adding_a_pair_weakens_elimination():
    """P ⊂ P′이면 elim(P) ⇒ elim(P′), 빠진 쌍 하나마다 연언 하나"""
    rng = np.random.default_rng(37)
    left, right = parse_formula("F p"), parse_formula("G q")
    for _ in range(6):
        d = random_description(rng, ("p", "q"), size=3, depth=1)
        outside = sorted(set(product(d.indices(), repeat=2)) - d.better)
        pair = outside[int(rng.integers(len(outside)))]
        strong = elim_pref_at(left, right, d.objectives, d.better)
        weak = elim_pref_at(left, right, d.objectives, d.better | {pair})
        assert len(_ands(weak)) == len(_ands(strong)) - 1
        for _ in range(3):
            model = random_kripke(rng, 3, ("p", "q"))
            result = ctlstar_check(model, Implies(strong, weak))
            assert all(result.per_state.values()), (d, pair)


# ===== ForMB vs 직접 평가 =====

def test_formb_agrees_with_direct_on_random_instances():
    rng = np.random.default_rng(11)
    for i in range(15):
        inst = random_pref_instance(rng, f"t-{i}", max_states=4, max_classes=3, depth=3)
        direct = direct_pref_check(inst.model, inst.descriptions, inst.formula).holds
        eliminated, namings = eliminate_preference(inst.formula, inst.descriptions, mode=ElimMode.FORMB,
                                                   vocabulary=sorted(inst.model.props))
        assert find_first(eliminated, Pref) is None
        mb = build_mb(inst.model, namings, inst.descriptions) if namings else inst.model
        assert ctlstar_check(mb, eliminated).holds == direct, inst.formula


def test_collapse_initial_needs_no_labels():
    """시간 깊이 0의 선호는 초기 목표 목록으로 바로 평가"""
    rng = np.random.default_rng(5)
    f = parse_formula("(X p <ea[1] X !p) | !(p <ff[1] F q)")
    for _ in range(5):
        model = random_kripke(rng, 3, ("p", "q"))
        eliminated, namings = eliminate_preference(f, {"1": D}, collapse_initial=True,
                                                   vocabulary=sorted(model.props))
        label_atoms = set(namings["1"].variables())
        assert not (free_props(eliminated) & label_atoms)
        assert ctlstar_check(model, eliminated).holds == direct_pref_check(model, {"1": D}, f).holds


# ===== 양화 출력 =====

def test_qvars_binds_every_label_variable():
    f = parse_formula("A X (p <ea[1] q)")
    result, namings = eliminate_preference(f, D, mode=ElimMode.QVARS)
    bound = []
    node = result
    while isinstance(node, ExistsProp):
        bound.append(node.prop)
        node = node.body
    assert bound == list(namings["1"].variables())
    assert find_first(result, Pref) is None
    assert free_props(result) <= {"p", "q"}


def test_logvars_uses_bit_width():
    f = parse_formula("E X (p <ff[1] q)")
    result, namings = eliminate_preference(f, D, mode=ElimMode.LOGVARS)
    for slot in namings["1"].slots:
        size = len(closure(D.objective(slot.index)))
        assert len(slot.r) == (ceil(log2(size)) if size > 1 else 0)
    assert isinstance(result, ExistsProp)


def test_formula_without_preference_is_unchanged():
    f = parse_formula("A G (p -> E X q)")
    assert eliminate_preference(f, D) == (f, {})


# ===== 오류 =====

def test_missing_description():
    with pytest.raises(MissingDescriptionError):
        eliminate_preference(parse_formula("p <ff[2] q"), {"1": D})


def test_path_variables_must_be_gone():
    f = ExistsPath(Next(Pref(PrefVariant.FF, "1", PathAtom("c"), q)))
    with pytest.raises(UnsupportedFormulaError):
        eliminate_preference(f, D)
