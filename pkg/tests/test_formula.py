"""
논리식 AST / 파서 테스트

1. 파싱과 출력 (우선순위, 바인더, 선호 연산자)
2. 상태식/경로식 분류
3. 설탕 제거, 치환(포획 회피), 상수 접기
4. 새 변수 공급
"""

import sys
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytest

from core.errors import ClassificationError, FormulaSyntaxError, UnknownAgentError
from core.formula import (
    BOT, TOP, And, Atom, CoStratMod, ExistsPath, ExistsProp, Finally, ForallPath, FormulaKind, FreshVarSupply,
    Globally, Implies, Next, Not, OneQuant, Or, PathAtom, Pref, PrefVariant, Relax, SimQuant, StratMod, Until,
    agents_of, atoms_of, conj, desugar, disj, free_path_vars, free_props, modal_depth, print_formula, simplify, size,
    occurrences, subformulas, substitute,
)
from core.formula_parser import parse_formula
from utils.logger import setup_logger


logger = setup_logger(__name__)

p, q, r = Atom("p"), Atom("q"), Atom("r")


# ===== 파싱 =====

def test_precedence_and_associativity():
    """& 는 | 보다 강하고 -> 는 오른쪽 결합"""
    assert parse_formula("p | q & r") == Or(p, And(q, r))
    assert parse_formula("p -> q -> r") == Implies(p, Implies(q, r))
    assert parse_formula("p U q U r") == Until(p, Until(q, r))
    assert parse_formula("!X p") == Not(Next(p))


def test_path_and_state_quantifiers():
    f = parse_formula("E (p U q) & A G F r")
    assert f == And(ExistsPath(Until(p, q)), ForallPath(Globally(Finally(r))))
    assert f.kind is FormulaKind.STATE


def test_game_modalities():
    f = parse_formula("<<1,2>> X p -> [[1]] F q")
    assert f == Implies(StratMod(frozenset({"1", "2"}), Next(p)), CoStratMod(frozenset({"1"}), Finally(q)))
    assert parse_formula("]2[ <<1>> X p") == Relax(frozenset({"2"}), StratMod(frozenset({"1"}), Next(p)))
    assert parse_formula("<<>> X p") == StratMod(frozenset(), Next(p))


def test_preference_operator():
    f = parse_formula("X p <ea[1] F q")
    assert f == Pref(PrefVariant.EA, "1", Next(p), Finally(q))
    assert f.is_state


def test_binders_extend_right():
    f = parse_formula("Es[1] ~c . E X ~c & p")
    assert isinstance(f, SimQuant)
    assert f.body == And(ExistsPath(Next(PathAtom("c"))), p)
    assert free_path_vars(f) == frozenset()

    g = parse_formula("exists s . A G (s -> p)")
    assert isinstance(g, ExistsProp)
    assert free_props(g) == frozenset({"p"})
    assert atoms_of(g) == frozenset({"s", "p"})


def test_print_parse_roundtrip():
    """출력한 식을 다시 읽으면 같은 AST"""
    texts = [
        "<<1,2>> (X (m1 | h1) & !(<<1>> X h1))",
        "(X p <ff[1] X q) -> A X (p -> q <ae[1] r)",
        "E1[1] ~c . A X (~c -> F p) & E X ~c",
        "exists q1 . q1 & A G (q1 -> A X !q1)",
        "]1[ [[2]] G (p W q)",
    ]
    for text in texts:
        f = parse_formula(text)
        assert parse_formula(print_formula(f)) == f, text


def test_syntax_error_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("p & & q")
    assert info.value.column is not None


def test_unknown_agent():
    with pytest.raises(UnknownAgentError):
        parse_formula("<<3>> X p", universe=["1", "2"])


# ===== 분류 =====

def test_path_formula_under_state_only_node_rejected():
    """선호/전략 바인더 본문은 상태식이어야 함"""
    with pytest.raises(ClassificationError):
        OneQuant("1", "c", Next(p))
    with pytest.raises(ClassificationError):
        ExistsProp("q", Finally(p))


def test_kinds():
    assert Next(p).kind is FormulaKind.PATH
    assert ExistsPath(Next(p)).kind is FormulaKind.STATE
    assert And(p, Next(q)).kind is FormulaKind.PATH


# ===== 도우미 =====

def test_conj_disj_empty():
    assert conj(()) == TOP
    assert disj(()) == BOT
    assert conj((p, q, r)) == And(And(p, q), r)


def test_measures():
    f = parse_formula("X (p U X q) & <<1>> F r")
    assert modal_depth(f) == 3
    assert size(Next(And(p, q))) == 4
    assert agents_of(f) == {"1"}
    assert sum(1 for node in occurrences(And(p, p)) if node == p) == 2
    assert sum(1 for node in subformulas(And(p, p)) if node == p) == 1


def test_desugar_removes_sugar():
    f = desugar(parse_formula("A G p & [[1]] F q"))
    sugar = ("Top", "Not", "And", "Or", "Iff", "Finally", "Globally", "WeakUntil", "ForallPath", "CoStratMod")
    assert all(type(node).__name__ not in sugar for node in subformulas(f))


def test_substitute_avoids_capture():
    """[q/p] exists q . (p & q): 속박 변수 q가 새 이름으로 바뀜"""
    f = ExistsProp("q", And(p, q))
    result = substitute(f, {p: q})
    assert isinstance(result, ExistsProp)
    assert result.prop != "q"
    assert result.body == And(q, Atom(result.prop))


def test_substitute_path_atom():
    f = And(ExistsPath(Next(PathAtom("c"))), Pref(PrefVariant.FF, "1", PathAtom("c"), q))
    result = substitute(f, {PathAtom("c"): Finally(p)})
    assert result == And(ExistsPath(Next(Finally(p))), Pref(PrefVariant.FF, "1", Finally(p), q))


def test_simplify_constants():
    assert simplify(And(TOP, p)) == p
    assert simplify(Or(p, TOP)) == TOP
    assert simplify(Next(BOT)) == BOT
    assert simplify(Until(p, BOT)) == BOT
    assert simplify(Not(Not(p))) == p
    assert simplify(ExistsProp("q", p)) == p


def test_fresh_var_supply():
    supply = FreshVarSupply.for_formulas(parse_formula("q1 & q2"))
    first = supply.fresh("q")
    second = supply.fresh("q")
    assert first not in ("q1", "q2")
    assert first != second
