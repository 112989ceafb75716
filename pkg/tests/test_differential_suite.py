"""
차등 검사 스위트 테스트

인스턴스 수를 줄인 설정으로 스위트마다 한 번씩 실행하고, 레코드 형식과 요약표를 확인합니다.
"""

import sys
from dataclasses import replace
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytest

from config.suite_config import DifferentialSuiteConfig
from core.differential_suite import SUITES, _guarded, lasso_propagated_pairs, make_record, run_suites, summarize
from core.formula_parser import parse_formula
from core.models import PreferenceDescription
from utils.logger import setup_logger


logger = setup_logger(__name__)

SMALL = replace(DifferentialSuiteConfig(seed=3, progress=False).with_counts(0.02), lasso_bound=4)


def _run(*names):
    return run_suites(replace(SMALL, only=names))


def _disagreements(records):
    return [(record["suite"], record["instance"], record["verdicts"]) for record in records if not record["agree"]]


def test_small_config_counts():
    assert SMALL.gnf_formulas == 10
    assert SMALL.pref_instances == 4
    assert SMALL.structure_formulas == 1


def test_gnf_suite():
    records = _run("gnf")
    assert len(records) == SMALL.gnf_formulas
    assert _disagreements(records) == []
    assert all(record["verdicts"]["closure_size"] >= 1 for record in records)


@pytest.mark.parametrize("name", ["pref", "axioms", "propagation", "structure", "curated", "monotonicity"])
def test_suite_agrees(name):
    records = _run(name)
    assert records
    assert {record["suite"] for record in records} == {name}
    assert _disagreements(records) == []


def test_paths_suite_includes_binder_checks():
    records = _run("paths")
    assert {record["suite"] for record in records} == {"paths", "definability", "one_implies_sim"}
    assert _disagreements(records) == []


# ===== P′ 전파 =====

EVENTUALLY = PreferenceDescription((parse_formula("F p"), parse_formula("!(F p)")), frozenset({(2, 1)}))


def test_propagated_pairs_after_seeing_p():
    """p를 보면 !(F p) 클래스가 비므로 2번이 낀 쌍은 자명하게 성립"""
    pairs, inhabited = lasso_propagated_pairs(EVENTUALLY, frozenset({"p"}), 2)
    assert inhabited == {1}
    assert pairs == {(1, 2), (2, 1), (2, 2)}
    assert EVENTUALLY.induced_pairs(inhabited) == pairs


def test_propagated_pairs_without_p():
    pairs, inhabited = lasso_propagated_pairs(EVENTUALLY, frozenset(), 2)
    assert inhabited == {1, 2}
    assert pairs == EVENTUALLY.better


def test_broken_update_is_caught(monkeypatch):
    """tail 갱신이 클래스를 뒤바꾸면 P ⊆ P′가 깨짐"""
    def swapped(self, valuation):
        return PreferenceDescription(tuple(reversed(self.objectives)), self.better)

    monkeypatch.setattr(PreferenceDescription, "updated", swapped)
    pairs, _ = lasso_propagated_pairs(EVENTUALLY, frozenset(), 2)
    assert pairs == {(1, 2)}
    assert not EVENTUALLY.better <= pairs


def test_same_seed_same_instances():
    first = [record["instance"] for record in _run("gnf")]
    second = [record["instance"] for record in _run("gnf")]
    assert first == second


def test_unknown_suite_rejected():
    with pytest.raises(KeyError):
        _run("nope")
    assert "nash" in SUITES


def test_guarded_records_exceptions():
    def broken():
        raise RuntimeError("boom")

    record = _guarded("gnf", "x", broken)
    assert record["agree"] is False
    assert "RuntimeError" in record["verdicts"]["error"]


def test_summarize():
    records = [make_record("a", "1", {}, True), make_record("a", "2", {}, False), make_record("b", "1", {}, True)]
    summary = summarize(records).set_index("suite")
    assert summary.loc["a", "instances"] == 2
    assert summary.loc["a", "disagree"] == 1
    assert summary.loc["a", "rate"] == 0.5
    assert summary.loc["b", "rate"] == 1.0
    assert summarize([]).empty
