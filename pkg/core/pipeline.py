"""
단계별 번역 파이프라인

paths(경로 양화자 제거) → pref(선호 제거) → atlsc(QCTL*로 번역)
단계마다 출력 식과 그 식을 검사할 모델을 남기고, 구조적 사후조건을 확인합니다.
"""
from pathlib import Path
from typing import Dict, Optional, Union

from core.atlsc_translator import translate_atlsc
from core.errors import StageAssertionError, VocabularyError
from core.formula import (
    GAME_NODES, PATH_BINDERS, Formula, FreshVarSupply, PathAtom, Pref, find_first, free_props, print_formula,
)
from core.formula_parser import parse_formula
from core.model_builder import build_mb
from core.model_loader import load_model
from core.models import (
    CGM, ElimMode, KripkeModel, PipelineConfig, PipelineResult, PreferenceDescription, QNaming, Stage,
    StageOutput,
)
from core.path_quantifiers import eliminate_path_quant
from core.pref_elimination import eliminate_preference
from utils.logger import setup_logger

logger = setup_logger(__name__)

Model = Union[KripkeModel, CGM]

# 단계 뒤에 남으면 안 되는 노드
FORBIDDEN_AFTER = {
    Stage.PATHS: (PathAtom,) + PATH_BINDERS,
    Stage.PREF: (Pref, PathAtom) + PATH_BINDERS,
    Stage.ATLSC: (Pref, PathAtom) + PATH_BINDERS + GAME_NODES,
}


def assert_stage(stage: Stage, formula: Formula):
    """단계 사후조건: 금지 노드가 남아 있으면 StageAssertionError"""
    offending = find_first(formula, *FORBIDDEN_AFTER[stage])
    if offending is not None:
        raise StageAssertionError(stage.value, offending)


def read_formula(source: str, model: Optional[Model] = None) -> Formula:
    """식 텍스트 또는 식 파일 경로"""
    path = Path(source)
    text = source
    if len(source) < 256 and path.suffix and path.is_file():
        text = path.read_text(encoding="utf-8")
    universe = model.agents if isinstance(model, CGM) else None
    return parse_formula(text.strip(), universe)


def check_vocabulary(formula: Formula, model: Model):
    known = set(model.props)
    if isinstance(model, CGM):
        known |= model.action_atoms
    unknown = free_props(formula) - known
    if unknown:
        raise VocabularyError(f"propositions not in the model vocabulary: {sorted(unknown)}")


def run_pipeline(cfg: PipelineConfig, model: Optional[Model] = None, formula: Optional[Formula] = None,
                 descriptions: Optional[Dict[str, PreferenceDescription]] = None) -> PipelineResult:
    """설정된 단계를 차례로 실행

    Args:
        cfg: 파이프라인 설정 (model/formula 미지정 시 cfg.model_path, cfg.formula 사용)
        model: 입력 모델
        formula: 입력 식
        descriptions: 에이전트별 선호 기술 (미지정 시 model.prefs)

    Returns:
        PipelineResult (단계별 식과 파생 모델)
    """
    if model is None:
        if not cfg.model_path:
            raise VocabularyError("no model given")
        model = load_model(cfg.model_path)
    if formula is None:
        if not cfg.formula:
            raise VocabularyError("no formula given")
        formula = read_formula(cfg.formula, model)
    check_vocabulary(formula, model)

    options = cfg.pipeline
    prefs = descriptions if descriptions is not None else model.prefs
    extra = set(model.props) | (model.action_atoms if isinstance(model, CGM) else set())
    supply = FreshVarSupply.for_formulas(formula, extra=extra)

    current_formula = formula
    current_model = model
    namings: Dict[str, QNaming] = {}
    outputs = []
    logger.info(f"🔁 파이프라인 시작: {[s.value for s in cfg.stages]}")

    for stage in cfg.stages:
        if stage is Stage.PATHS:
            current_formula, namings = eliminate_path_quant(
                current_formula, prefs, namings=namings, collapse_initial=options.collapse_initial,
                log_encoded=options.pref_mode is ElimMode.LOGVARS, supply=supply)
            assert_stage(stage, current_formula)
            outputs.append(StageOutput(stage, current_formula, current_model, dict(namings)))

        elif stage is Stage.PREF:
            current_formula, namings = eliminate_preference(
                current_formula, prefs, mode=options.pref_mode, collapse_initial=options.collapse_initial,
                supply=supply, namings=namings)
            assert_stage(stage, current_formula)
            if options.pref_mode is ElimMode.FORMB and namings:
                current_model = build_mb(current_model, namings, prefs)
            outputs.append(StageOutput(stage, current_formula, current_model, dict(namings)))

        elif stage is Stage.ATLSC:
            if not isinstance(current_model, CGM):
                if find_first(current_formula, *GAME_NODES) is not None:
                    raise VocabularyError("game modalities need a concurrent game model")
                assert_stage(stage, current_formula)
                outputs.append(StageOutput(stage, current_formula, current_model, dict(namings)))
                continue
            result = translate_atlsc(current_formula, current_model, merge=options.merge,
                                     log_actions=options.log_actions, supply=supply)
            current_formula, current_model = result.formula, result.model
            assert_stage(stage, current_formula)
            outputs.append(StageOutput(stage, current_formula, current_model, dict(namings), result,
                                       result.warnings))

        logger.info(f"✅ {stage.value} 단계 완료: {print_formula(current_formula)[:120]}")

    return PipelineResult(formula, model, tuple(outputs))
