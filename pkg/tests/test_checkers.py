"""
검사 엔진 테스트

1. 팩토리 등록/생성
2. CTL* / 선호 직접 평가 (models/light_switch.txt)
3. 유계 판정 규칙 (극성, sufficient)
4. 유계 기억 오라클 vs 수작업 기대값
5. 번역식 평가기의 자유 명제 양화
"""

import sys
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytest

from checkers import CheckerFactory
from checkers.atlsc_oracle import AtlscOracle, atlsc_bounded_check
from checkers.base_checker import bounded_verdict, modality_polarities
from checkers.ctlstar_checker import CtlStarChecker, ctlstar_check
from checkers.direct_pref_checker import direct_pref_check, preference_holds
from checkers.translated_checker import TranslatedChecker
from core.curated_instances import CURATED_INSTANCES, load_curated_model
from core.errors import BoundedSearchError, ModelError, UnsupportedFormulaError
from core.formula import GAME_NODES, Atom, Next, Not, Pref, PrefVariant, StratMod
from core.formula_parser import parse_formula
from core.model_loader import load_model
from core.models import CheckerSection, Verdict
from utils.logger import setup_logger


logger = setup_logger(__name__)

SWITCH = load_model(project_root / "models" / "light_switch.txt")


def _is_game(f):
    return isinstance(f, GAME_NODES)


# ===== 팩토리 =====

def test_factory_registers_default_engines():
    assert set(CheckerFactory.list_checkers()) >= {"ctlstar", "direct", "quantsem", "oracle", "translated"}
    checker = CheckerFactory.create_checker("ctlstar", logger=logger)
    assert isinstance(checker, CtlStarChecker)
    assert checker.get_checker_name() == "CtlStarChecker"
    assert CheckerFactory.create_checker("nonexistent", logger=logger) is None


# ===== CTL* / 선호 =====

def test_ctlstar_on_light_switch():
    assert ctlstar_check(SWITCH, parse_formula("E G F p")).holds
    assert not ctlstar_check(SWITCH, parse_formula("A F q")).holds

    result = ctlstar_check(SWITCH, parse_formula("A G q"))
    assert result.per_state == {"w0": False, "w1": False, "w2": True}
    assert result.exact


def test_ctlstar_rejects_other_fragments():
    with pytest.raises(UnsupportedFormulaError):
        ctlstar_check(SWITCH, parse_formula("F p"))
    with pytest.raises(UnsupportedFormulaError):
        ctlstar_check(SWITCH, parse_formula("p <ff[1] q"))


def test_direct_preference_on_light_switch():
    """q에 도달하는 경로(2번 클래스)는 p를 반복하는 경로(1번 클래스)보다 나쁨"""
    assert direct_pref_check(SWITCH, None, parse_formula("(F q) <ff[1] (G p)")).holds
    assert not direct_pref_check(SWITCH, None, parse_formula("(G p) <ff[1] (F q)")).holds


def test_preference_holds_variants():
    better = {(1, 2), (1, 3)}
    assert preference_holds(PrefVariant.FF, {1}, {2, 3}, better)
    assert not preference_holds(PrefVariant.FF, {1, 2}, {3}, better)
    assert preference_holds(PrefVariant.EA, {1, 2}, {2, 3}, better)
    assert not preference_holds(PrefVariant.AE, {1, 2}, {3}, better)
    assert preference_holds(PrefVariant.EE, {2, 1}, {3}, better)
    assert preference_holds(PrefVariant.GEA, {2, 3}, {1}, better)
    assert not preference_holds(PrefVariant.GAE, {2}, {2}, better)
    # 빈 피연산자: ∀는 자명하게 참, ∃는 거짓
    assert preference_holds(PrefVariant.FF, set(), {1}, better)
    assert not preference_holds(PrefVariant.EE, set(), {1}, better)


# ===== 유계 판정 =====

def test_bounded_verdict_rules():
    positive = StratMod(frozenset({"1"}), Next(Atom("p")))
    negative = Not(positive)
    assert bounded_verdict(True, positive, False, _is_game) == (Verdict.TRUE, False)
    assert bounded_verdict(False, positive, False, _is_game) == (Verdict.UNKNOWN, False)
    assert bounded_verdict(False, negative, False, _is_game) == (Verdict.FALSE, False)
    assert bounded_verdict(True, negative, False, _is_game) == (Verdict.UNKNOWN, False)
    assert bounded_verdict(False, positive, True, _is_game) == (Verdict.FALSE, False)
    assert bounded_verdict(True, Atom("p"), False, _is_game) == (Verdict.TRUE, True)


def test_polarities_inside_preference_operands():
    f = Pref(PrefVariant.FF, "1", StratMod(frozenset({"1"}), Next(Atom("p"))), Atom("q"))
    assert modality_polarities(f, _is_game) == {True, False}
    assert modality_polarities(parse_formula("<<1>> X p -> q"), _is_game) == {False}


# ===== 오라클 =====

@pytest.mark.parametrize("inst", CURATED_INSTANCES, ids=lambda inst: inst.name)
def test_oracle_matches_curated(inst):
    assert atlsc_bounded_check(inst.model, inst.formula, inst.h, inst.sufficient) is inst.expected


def test_oracle_needs_game_model():
    with pytest.raises(ModelError):
        AtlscOracle().check(SWITCH, parse_formula("E X p"))


def test_oracle_profile_limit():
    oracle = AtlscOracle(config=CheckerSection(max_profiles=1))
    with pytest.raises(BoundedSearchError):
        oracle.check(load_curated_model("sole_controller"), parse_formula("<<1>> X p"), bound=0)


# ===== 번역식 평가기 =====

def test_translated_checker_free_labelings():
    """등록되지 않은 명제 양화는 모든 라벨링을 열거 (정확한 값)"""
    checker = TranslatedChecker()
    result = checker.check(SWITCH, parse_formula("exists r . (r & E X !r)"))
    assert result.verdict is Verdict.TRUE
    assert result.exact
    assert not checker.check(SWITCH, parse_formula("exists r . (r & A X r & A X !r)")).holds
