"""
파이프라인 / 설정 / CLI 테스트

1. 단계 실행과 사후조건
2. 어휘 검사, 식 파일 읽기
3. 설정 파일 로드와 기본값 대체
4. main(argv) 종료 코드
"""

import argparse
import json
import sys
from pathlib import Path

# 프로젝트 루트 경로 추가
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytest

from checkers.ctlstar_checker import ctlstar_check
from checkers.direct_pref_checker import direct_pref_check
from config.settings import load_pipeline_config
from core.errors import StageAssertionError, VocabularyError
from core.formula import Atom, Pref, PrefVariant, find_first
from core.formula_parser import parse_formula
from core.model_loader import load_model
from core.models import CheckerSection, ElimMode, PipelineConfig, PipelineSection, Stage
from core.pipeline import FORBIDDEN_AFTER, assert_stage, read_formula, run_pipeline
from main import EXIT_ERROR, EXIT_FALSE, EXIT_TRUE, _pipeline_config, main
from utils.logger import setup_logger


logger = setup_logger(__name__)

MODELS_DIR = project_root / "models"
SWITCH_PATH = str(MODELS_DIR / "light_switch.txt")
PENNIES_PATH = str(MODELS_DIR / "matching_pennies.txt")
NASH_PATH = str(MODELS_DIR / "nash_game.txt")


# ===== 단계 =====

def test_kripke_pipeline_matches_direct_evaluation():
    model = load_model(SWITCH_PATH)
    formula = parse_formula("E X ((F q) <ff[1] (G p)) | (X p <ea[1] X q)")
    result = run_pipeline(PipelineConfig(), model=model, formula=formula)

    assert [output.stage for output in result.outputs] == [Stage.PATHS, Stage.PREF, Stage.ATLSC]
    pref_output = result.output(Stage.PREF)
    assert find_first(pref_output.formula, Pref) is None
    expected = direct_pref_check(model, None, formula).holds
    assert ctlstar_check(pref_output.model, pref_output.formula).holds == expected


def test_game_pipeline_leaves_no_forbidden_nodes():
    model = load_model(NASH_PATH)
    formula = read_formula("<<1,2>> X (h1 & h2) & E X (h1 <ea[1] m1)", model)
    result = run_pipeline(PipelineConfig(), model=model, formula=formula)

    final = result.output(Stage.ATLSC)
    assert final.translation is not None
    assert final.model.stores_moves
    assert find_first(result.final, *FORBIDDEN_AFTER[Stage.ATLSC]) is None


def test_stage_subset_and_mode():
    cfg = PipelineConfig(pipeline=PipelineSection(stages=(Stage.PREF,), pref_mode=ElimMode.QVARS))
    model = load_model(SWITCH_PATH)
    result = run_pipeline(cfg, model=model, formula=parse_formula("E X (p <ff[1] q)"))
    assert len(result.outputs) == 1
    # QVARS 출력은 원래 모델 위에서 검사
    assert result.outputs[0].model is model


def test_stages_must_keep_order():
    with pytest.raises(ValueError):
        PipelineConfig(pipeline=PipelineSection(stages=(Stage.PREF, Stage.PATHS)))


def test_assert_stage_reports_node():
    node = Pref(PrefVariant.FF, "1", Atom("p"), Atom("q"))
    with pytest.raises(StageAssertionError) as info:
        assert_stage(Stage.PREF, node)
    assert info.value.node == node
    assert info.value.stage == "pref"


def test_vocabulary_checked_before_stages():
    model = load_model(SWITCH_PATH)
    with pytest.raises(VocabularyError):
        run_pipeline(PipelineConfig(), model=model, formula=parse_formula("E X zzz"))


def test_read_formula_from_file(tmp_path):
    path = tmp_path / "goal.ltl"
    path.write_text("<<1>> X win\n", encoding="utf-8")
    model = load_model(PENNIES_PATH)
    assert read_formula(str(path), model) == parse_formula("<<1>> X win")


# ===== 설정 =====

def test_missing_config_falls_back(tmp_path, capsys):
    config = load_pipeline_config(tmp_path / "missing.json")
    assert config.checker.engine == "direct"
    assert "기본 설정을 사용합니다." in capsys.readouterr().out


def test_config_sections_are_read(tmp_path):
    path = tmp_path / "pipeline.json"
    path.write_text(json.dumps({
        "pipeline": {"stages": ["pref", "atlsc"], "pref_mode": "logvars", "merge": True},
        "checker": {"engine": "oracle", "history_bound": 1},
        "suite": {"seed": 42},
    }), encoding="utf-8")
    config = load_pipeline_config(path)
    assert config.stages == (Stage.PREF, Stage.ATLSC)
    assert config.pipeline.pref_mode is ElimMode.LOGVARS
    assert config.pipeline.merge
    assert config.checker.history_bound == 1
    assert config.seed == 42
    assert config.gnf.full_system_bound == 4


def test_broken_config_falls_back(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{ not json", encoding="utf-8")
    config = load_pipeline_config(path)
    assert config.stages == PipelineConfig().stages
    assert "경고" in capsys.readouterr().out


# ===== CLI =====

def test_cli_gnf(capsys):
    assert main(["gnf", "--formula", "p U q"]) == EXIT_TRUE
    out = capsys.readouterr().out
    assert "atoms: p q" in out
    assert len(out.strip().splitlines()) == 5


def test_cli_check_exit_codes():
    assert main(["check", "--engine", "ctlstar", "--model", SWITCH_PATH, "--formula", "E G F p"]) == EXIT_TRUE
    assert main(["check", "--engine", "ctlstar", "--model", SWITCH_PATH, "--formula", "A F q"]) == EXIT_FALSE
    assert main(["check", "--engine", "oracle", "--model", PENNIES_PATH, "--formula", "<<1,2>> X win"]) == EXIT_TRUE
    assert main(["check", "--engine", "translated", "--model", PENNIES_PATH,
                 "--formula", "<<1,2>> X win"]) == EXIT_TRUE


def test_cli_errors_exit_2(tmp_path):
    assert main(["check", "--engine", "ctlstar", "--model", SWITCH_PATH, "--formula", "E X &"]) == EXIT_ERROR
    assert main(["check", "--engine", "ctlstar", "--model", str(tmp_path / "none.txt"),
                 "--formula", "p"]) == EXIT_ERROR


def test_cli_translate_writes_models(tmp_path, capsys):
    code = main(["translate", "--model", NASH_PATH, "--formula", "E X (h1 <ff[1] m1)", "--out", str(tmp_path)])
    assert code == EXIT_TRUE
    out = capsys.readouterr().out
    assert "[pref]" in out
    assert (tmp_path / "pref_model.txt").exists()


def test_cli_options_leave_loaded_config_untouched():
    base = PipelineConfig()
    args = argparse.Namespace(stage=["pref"], mode="qvars", merge=True, log_actions=False,
                              collapse_initial=False, model=SWITCH_PATH, formula="E X p")
    cfg = _pipeline_config(args, base)

    assert cfg.stages == (Stage.PREF,)
    assert cfg.pipeline.pref_mode is ElimMode.QVARS
    assert cfg.pipeline.merge
    assert cfg.model_path == SWITCH_PATH
    assert base.stages == PipelineSection().stages
    assert base.pipeline.pref_mode is ElimMode.FORMB
    assert not base.pipeline.merge
    assert base.model_path is None


def test_check_options_leave_loaded_config_untouched(monkeypatch):
    shared = PipelineConfig(checker=CheckerSection(engine="ctlstar"))
    monkeypatch.setattr("main.load_pipeline_config", lambda path=None: shared)
    code = main(["check", "--model", SWITCH_PATH, "--formula", "E G F p", "--bound", "2", "--sufficient"])
    assert code == EXIT_TRUE
    assert shared.checker.history_bound == 0
    assert not shared.checker.sufficient
