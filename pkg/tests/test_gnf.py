"""
GNF 테스트

1. tail 계산과 정규화
2. closure 고정점
3. GNF 건전성 (유계 라쏘 단어에서 b ↔ GNF(b))
4. full system 검사 (exact / sampled)
"""

import sys
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import numpy as np
import pytest

from core.errors import UnsupportedFormulaError
from core.formula import BOT, TOP, And, Atom, ExistsPath, Finally, Globally, Iff, Next, Not, Or, Until, is_ltl
from core.formula_parser import parse_formula
from core.gnf import (
    closure, enumerate_lassos, full_system_check, gnf, gnf_as_formula, letters_over, ltl_eval, normalize, tail,
)
from core.models import LassoWord
from core.random_instances import random_ltl
from utils.logger import setup_logger


logger = setup_logger(__name__)

p, q = Atom("p"), Atom("q")


def _word(prefix, loop):
    return LassoWord(tuple(frozenset(x) for x in prefix), tuple(frozenset(x) for x in loop))


# ===== tail =====

def test_tail_of_basic_operators():
    assert tail(p, frozenset({"p"})) == TOP
    assert tail(p, frozenset()) == BOT
    assert tail(Next(q), frozenset()) == q
    assert tail(Finally(p), frozenset({"p"})) == TOP
    assert tail(Finally(p), frozenset()) == normalize(Finally(p))
    assert tail(Until(p, q), frozenset()) == BOT
    assert tail(Until(p, q), frozenset({"p"})) == normalize(Until(p, q))


def test_normalize_is_canonical():
    """교환/결합 순서가 달라도 같은 정규형"""
    assert normalize(And(p, q)) == normalize(And(q, p))
    assert normalize(Or(p, Or(q, p))) == normalize(Or(q, p))
    assert normalize(And(p, Not(p))) == BOT


def test_gnf_table_covers_all_minterms():
    g = gnf(parse_formula("p U q"))
    assert g.atoms == ("p", "q")
    assert len(g.disjuncts) == 4
    assert g.tail_for({"q"}) == TOP
    assert g.tail_for(set()) == BOT


def test_non_ltl_rejected():
    with pytest.raises(UnsupportedFormulaError):
        gnf(ExistsPath(Next(p)))


# ===== closure =====

def test_closure_is_closed_under_tail():
    b = parse_formula("G F p & (q U p)")
    members = closure(b)
    assert members[0] == normalize(b)
    for member in members:
        for letter in letters_over(("p", "q")):
            assert tail(member, letter) in members


def test_closure_of_propositional_formula():
    assert set(closure(p)) == {p, TOP, BOT}


# ===== 라쏘 평가 =====

def test_ltl_eval_on_lassos():
    assert ltl_eval(_word([], [{"p"}]), Globally(p))
    assert not ltl_eval(_word([{"p"}], [set()]), Globally(p))
    assert ltl_eval(_word([set(), set()], [{"p"}, set()]), Globally(Finally(p)))
    assert ltl_eval(_word([{"p"}, {"p"}, {"q"}], [set()]), Until(p, q))
    assert not ltl_eval(_word([], [{"p"}]), Until(p, q))


def test_enumerate_lassos_counts():
    # 글자 2개, 길이 1: 2개 / 길이 2: prefix 1 + loop 1 (4개) + loop 2 (4개)
    words = list(enumerate_lassos(["p"], 2))
    assert len(words) == 2 + 4 + 4


def test_gnf_soundness_on_random_formulas():
    """b ↔ ⋁(guard ∧ X tail) 이 모든 짧은 라쏘 단어에서 성립"""
    rng = np.random.default_rng(3)
    words = list(enumerate_lassos(["p", "q"], 3))
    for _ in range(25):
        b = random_ltl(rng, ("p", "q"), 3)
        assert is_ltl(b)
        equivalence = Iff(b, gnf_as_formula(gnf(b)))
        for word in words:
            assert ltl_eval(word, equivalence), (b, word)


# ===== full system =====

def test_full_system_exact():
    ok = full_system_check([And(p, q), And(p, Not(q)), Not(p)], [], 4)
    assert ok.exact and ok.holds
    overlap = full_system_check([p, q, Not(p)], [], 4)
    assert overlap.exact and not overlap.holds
    assert overlap.witness is not None


def test_full_system_sampled():
    ok = full_system_check([Globally(Finally(p)), Not(Globally(Finally(p)))], [], 3)
    assert ok.kind == "sampled" and ok.holds
    gap = full_system_check([Globally(p), Finally(Not(p)), Finally(q)], [], 3)
    assert not gap.holds
    assert isinstance(gap.witness, LassoWord)
