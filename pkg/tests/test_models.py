"""
모델 테스트

1. 선호 기술 검증 / 점검
2. CGM, Kripke 모델 검증
3. 모델 파일 읽기/쓰기 (models/ 예제 포함)
4. unfold1, M_B 구성, 경로 따라 선호 갱신
"""

import sys
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytest

from core.errors import ClassificationError, ModelError
from core.formula import BOT, TOP, Atom, ExistsPath, Finally, FreshVarSupply, Globally, Next, Not
from core.formula_parser import parse_formula
from core.model_builder import build_mb, pref_update_path, to_kripke, unfold1, unfold_state_name
from core.model_loader import dump_model, load_model, parse_model
from core.models import CGM, KripkeModel, PreferenceDescription
from core.pref_elimination import make_naming
from utils.logger import setup_logger


logger = setup_logger(__name__)

MODELS_DIR = project_root / "models"

p, q = Atom("p"), Atom("q")


def _description(*texts, better=()):
    return PreferenceDescription(tuple(parse_formula(t) for t in texts), frozenset(better))


# ===== 선호 기술 =====

def test_description_rejects_bad_input():
    with pytest.raises(ModelError):
        PreferenceDescription(())
    with pytest.raises(ModelError):
        _description("p", "!p", better={(1, 3)})
    with pytest.raises(ClassificationError):
        PreferenceDescription((ExistsPath(Next(p)), TOP))


def test_lint_reports_order_issues():
    assert _description("p", "!p", better={(1, 2)}).lint() == []
    issues = _description("p & q", "p & !q", "!p", better={(1, 2), (2, 3), (3, 3)}).lint()
    assert any("reflexive" in issue for issue in issues)
    assert any("(1, 3)" in issue for issue in issues)


def test_induced_pairs_adds_vacuous_pairs():
    """빈 클래스가 낀 쌍은 자명하게 성립"""
    d = _description("p & q", "p & !q", "!p", better={(1, 2)})
    pairs = d.induced_pairs([1, 2])
    assert (1, 2) in pairs
    assert (2, 1) not in pairs
    assert {(3, 1), (1, 3), (3, 3)} <= pairs


def test_description_atoms_and_update():
    d = _description("F p", "!(F p)")
    assert d.atoms == ("p",)
    after = d.updated({"p"})
    assert after.objectives == (TOP, BOT)
    assert after.better == d.better


# ===== 모델 검증 =====

def test_cgm_requires_full_outcome_table():
    with pytest.raises(ModelError, match="missing outcome"):
        CGM(("w0",), "w0", ("1",), {"1": ("a", "b")}, {("w0", ("a",)): "w0"}, {})


def test_cgm_rejects_action_prop_clash():
    with pytest.raises(ModelError, match="overlap"):
        CGM(("w0",), "w0", ("1",), {"1": ("p",)}, {("w0", ("p",)): "w0"}, {"w0": {"p"}})


def test_kripke_requires_serial_relation():
    with pytest.raises(ModelError, match="no successor"):
        KripkeModel(("w0", "w1"), "w0", {"w0": {"w1"}}, {})


# ===== 모델 파일 =====

def test_shipped_models_load():
    pennies = load_model(MODELS_DIR / "matching_pennies.txt")
    assert isinstance(pennies, CGM)
    assert pennies.agents == ("1", "2")
    assert pennies.successor("w0", ("h1", "h2")) == "sw"

    switch = load_model(MODELS_DIR / "light_switch.txt")
    assert isinstance(switch, KripkeModel)
    assert switch.successors("w0") == frozenset({"w1", "w2"})
    assert switch.prefs["1"].size == 3
    assert switch.prefs["1"].lint() == []

    nash = load_model(MODELS_DIR / "nash_game.txt")
    assert set(nash.prefs) == {"1", "2"}
    assert nash.props >= {"m1", "h1", "m2", "h2"}


def test_dump_then_parse_keeps_model():
    m = load_model(MODELS_DIR / "nash_game.txt")
    again = parse_model(dump_model(m))
    assert again.states == m.states
    assert again.outcome == m.outcome
    assert again.valuation == m.valuation
    assert again.prefs == m.prefs


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ModelError) as info:
        parse_model("states: w0\ninit: w0\nbogus: 1\n")
    assert info.value.line == 3

    with pytest.raises(ModelError, match="k1 < k2"):
        parse_model("states: w0\ninit: w0\ntrans w0 -> w0\npref 1 objective: p\npref 1 order: 1 > 2\n")


def test_parse_rejects_mixed_relations():
    text = "agents: 1\nactions 1: a\nstates: w0\ninit: w0\noutcome w0 a -> w0\ntrans w0 -> w0\n"
    with pytest.raises(ModelError, match="either"):
        parse_model(text)


# ===== 파생 모델 =====

def test_to_kripke_projects_moves():
    m = load_model(MODELS_DIR / "matching_pennies.txt")
    k = to_kripke(m)
    assert k.successors("w0") == frozenset({"sw", "sl"})
    assert k.successors("sw") == frozenset({"sw"})


def test_unfold1_stores_last_move():
    m = load_model(MODELS_DIR / "matching_pennies.txt")
    flat = unfold1(m)
    assert len(flat.states) == 1 + len(m.states) * 4
    assert flat.initial == unfold_state_name("w0", None)
    assert flat.stores_moves

    target = flat.successor(flat.initial, ("h1", "t2"))
    assert target == unfold_state_name("sl", ("h1", "t2"))
    assert flat.label(target) == frozenset({"h1", "t2"})
    assert flat.label(unfold_state_name("sw", ("t1", "t2"))) == frozenset({"win", "t1", "t2"})
    assert flat.origins[target] == ("sl", ("h1", "t2"))


def test_unfold1_model_survives_dump():
    m = unfold1(load_model(MODELS_DIR / "matching_pennies.txt"))
    again = parse_model(dump_model(m))
    assert again.origins == m.origins
    assert again.outcome == m.outcome


def test_pref_update_path():
    m = load_model(MODELS_DIR / "nash_game.txt")
    d = m.prefs["1"]
    assert pref_update_path(d, [], m) == d.objectives
    assert pref_update_path(d, ["w0", "s1"], m) == (BOT, TOP, BOT)
    assert pref_update_path(d, ["w0", "s2", "s2"], m) == (BOT, BOT, TOP)
    with pytest.raises(ModelError):
        pref_update_path(d, ["s1"], m)
    with pytest.raises(ModelError):
        pref_update_path(d, ["w0", "w0"], m)


def test_build_mb_labels_current_objectives():
    """M_B 상태의 라벨은 V(w)와 현재 목표 목록의 q 원자"""
    m = load_model(MODELS_DIR / "light_switch.txt")
    d = PreferenceDescription((Globally(Finally(p)), Not(Globally(Finally(p)))))
    naming = make_naming("1", d, FreshVarSupply.for_formulas(p, extra=m.props))
    product = build_mb(m, {"1": naming}, {"1": d})

    assert isinstance(product, KripkeModel)
    assert product.initial == "w0/0"
    for state in product.states:
        labels = product.label(state)
        decoded = naming.decode(labels)
        assert decoded is not None
        base = state.split("/")[0]
        assert labels - frozenset(naming.variables()) == m.label(base)
    assert frozenset(naming.variables()) <= product.props
