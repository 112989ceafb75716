"""
Nash 균형 예제 재현 테스트
"""

import sys
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytest

from core.nash_repro import (
    MUTATED_ORDER, ORDER, NashReport, ReportRow, format_report, nash_descriptions, nash_game, repro_nash,
)
from utils.logger import setup_logger


logger = setup_logger(__name__)


@pytest.fixture(scope="module")
def report():
    return repro_nash(seed=7)


def test_descriptions_are_strict_orders():
    for d in nash_descriptions().values():
        assert d.lint() == []
        assert d.better == ORDER
    assert nash_descriptions(MUTATED_ORDER)["1"].better == MUTATED_ORDER


def test_game_shape():
    m = nash_game()
    assert m.agents == ("1", "2")
    assert len(list(m.moves())) == 4


def test_every_row_passes(report):
    failed = [row.name for row in report.rows if not row.passed]
    assert failed == []
    assert report.passed


def test_expected_rows_present(report):
    names = {row.name for row in report.rows}
    assert {"full_system_1", "full_system_2", "nash_formula", "paths_stage", "pref_stage", "translated",
            "translation_structure", "context_equivalence", "negative_control", "state_renaming"} <= names


def test_reference_formula_holds(report):
    """(b1,b2) → s2는 두 에이전트 모두 최고 클래스인 균형"""
    row = next(row for row in report.rows if row.name == "nash_formula")
    assert row.value is True
    assert row.expected is True


def test_false_reference_fails_report():
    broken = NashReport()
    broken.add(ReportRow("nash_formula", False, True))
    broken.add(ReportRow("paths_stage", False, False))
    assert not broken.passed
    assert "결과: 실패" in format_report(broken)


def test_negative_control_is_false(report):
    row = next(row for row in report.rows if row.name == "negative_control")
    assert row.value is False


def test_report_output(report):
    text = format_report(report)
    assert "결과: 통과" in text
    records = report.to_records()
    assert len(records) == len(report.rows)
    assert set(records[0]) == {"row", "value", "expected", "passed", "formula", "note"}
