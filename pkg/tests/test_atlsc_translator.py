"""
ATLSC* 번역 테스트

1. 부호화 방식별 전략 변수 수 (dest / log / merge)
2. 병합 연합이 쪼개질 때 경고
3. 수작업 인스턴스에서 번역식의 유계 평가 == 기대값
4. 해 개념 템플릿과 오류 경로
"""

import sys
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import numpy as np
import pytest

from checkers.translated_checker import translated_check
from core.atlsc_translator import range_constraint, solution_concept, strategy_constraint, translate_atlsc
from core.curated_instances import CURATED_INSTANCES, curated_by_name, load_curated_model
from core.differential_suite import count_quantifiers, expected_quantifiers
from core.errors import TranslationError, UnknownAgentError, UnsupportedFormulaError
from core.formula import (
    GAME_NODES, Atom, ExistsProp, Next, SimForall, StratMod, agents_of, find_first, is_true, subformulas,
)
from core.formula_parser import parse_formula
from core.models import StrategyBlock, Template
from core.random_instances import random_atlsc_formula, random_cgm
from utils.logger import setup_logger


logger = setup_logger(__name__)

PENNIES = load_curated_model("matching_pennies")


# ===== 구조 =====

def test_dest_encoding_one_variable_per_agent():
    result = translate_atlsc(parse_formula("<<1,2>> X win"), PENNIES)
    assert count_quantifiers(result.formula) == 2
    assert find_first(result.formula, *GAME_NODES) is None
    assert result.model.stores_moves
    assert {block.encoding for block in result.blocks()} == {"dest"}


def test_log_encoding_bit_width():
    m = random_cgm(np.random.default_rng(0), 2, ("p",), n_actions=3)
    result = translate_atlsc(parse_formula("<<1>> X p"), m, log_actions=True)
    # 행동 3개 → 2비트, 코드 4개 중 하나는 범위 제약으로 배제
    assert count_quantifiers(result.formula) == 2
    block = result.blocks()[0]
    assert block.encoding == "log"
    assert not is_true(range_constraint(block))


def test_merge_uses_one_variable_per_coalition():
    result = translate_atlsc(parse_formula("<<1,2>> X win"), PENNIES, merge=True)
    assert count_quantifiers(result.formula) == 1
    assert result.blocks()[0].owners == ("1", "2")
    assert result.warnings == ()


def test_merge_split_warns():
    result = translate_atlsc(parse_formula("<<1,2>> (X win & <<1>> X !win)"), PENNIES, merge=True)
    assert result.warnings
    assert count_quantifiers(result.formula) == 3


def test_quantifier_counts_on_random_formulas():
    rng = np.random.default_rng(29)
    for _ in range(8):
        m = random_cgm(rng, 2, ("p", "q"), n_actions=int(rng.integers(2, 5)))
        formula = random_atlsc_formula(rng, ("p", "q"), m.agents, 3)
        for mode in ("dest", "log", "merge"):
            result = translate_atlsc(formula, m, merge=mode == "merge", log_actions=mode == "log")
            assert count_quantifiers(result.formula) == expected_quantifiers(formula, m, mode), (formula, mode)


def test_strategy_constraint_mentions_every_action():
    f = strategy_constraint("1", "s", ["h1", "t1"])
    names = {node.name for node in subformulas(f) if isinstance(node, Atom)}
    assert names == {"s", "h1", "t1"}


def test_block_codes_are_distinct():
    block = StrategyBlock(("1",), ("b0", "b1"), "log", (("a",), ("b",), ("c",)))
    codes = {block.code(joint) for joint in block.joint_actions}
    assert len(codes) == 3


# ===== 의미 =====

@pytest.mark.parametrize("name", ["pennies_grand", "pennies_1", "pennies_nested", "pennies_relaxed",
                                  "sole_co_empty_next_p", "race_block"])
def test_translated_matches_expected(name):
    inst = curated_by_name(name)
    for log_actions in (False, True):
        result = translate_atlsc(inst.formula, inst.model, log_actions=log_actions)
        assert translated_check(result, inst.h, inst.sufficient) is inst.expected


def test_curated_instances_are_well_formed():
    names = [inst.name for inst in CURATED_INSTANCES]
    assert len(names) == len(set(names))
    for inst in CURATED_INSTANCES:
        assert agents_of(inst.formula) <= set(inst.model.agents)


# ===== 해 개념 =====

def test_nash_template_shape():
    goals = {"1": Atom("h1"), "2": Atom("h2")}
    f = solution_concept(Template.NASH, goals)
    assert isinstance(f, StratMod)
    assert f.coalition == frozenset({"1", "2"})
    assert sum(1 for node in subformulas(f) if isinstance(node, SimForall)) == 2
    with pytest.raises(TranslationError):
        solution_concept(Template.SECURE, goals, agents=["1", "2", "3"])


# ===== 오류 =====

def test_preference_must_be_eliminated_first():
    with pytest.raises(UnsupportedFormulaError):
        translate_atlsc(parse_formula("<<1>> X (win <ff[1] !win)"), PENNIES)


def test_unknown_agent():
    with pytest.raises(UnknownAgentError):
        translate_atlsc(StratMod(frozenset({"3"}), Next(Atom("win"))), PENNIES)


def test_existing_names_are_not_reused():
    f = parse_formula("exists s_1_1 . (s_1_1 & <<1>> X win)")
    result = translate_atlsc(f, PENNIES)
    bound = [node.prop for node in subformulas(result.formula) if isinstance(node, ExistsProp)]
    assert len(bound) == len(set(bound))
