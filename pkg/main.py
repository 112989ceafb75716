"""
ATLSCPref* → QCTL* 번역 도구 메인 실행 파일

사용 예:
    python main.py gnf --formula "p U q"
    python main.py translate --model models/nash_game.txt --formula "..." --out out/
    python main.py check --engine oracle --model models/matching_pennies.txt --formula "<<1,2>> X win"
    python main.py repro-nash
    python main.py suite --only gnf pref --out records.jsonl
"""
import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import List, Optional

# 프로젝트 경로 추가
sys.path.append(str(Path(__file__).parent))

from checkers import CheckerFactory
from config.settings import apply_log_level, load_pipeline_config
from config.suite_config import DEFAULT_SUITE_CONFIG
from core.differential_suite import run_suites, summarize
from core.errors import AtlscPrefError
from core.formula import print_formula
from core.formula_parser import parse_formula
from core.gnf import closure, gnf
from core.model_loader import load_model, save_model
from core.models import CGM, ElimMode, PipelineConfig, Stage, Verdict
from core.nash_repro import format_report, repro_nash
from core.pipeline import read_formula, run_pipeline
from utils.logger import setup_logger

logger = setup_logger(__name__)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_ERROR = 2
EXIT_UNKNOWN = 3

VERDICT_EXIT = {Verdict.TRUE: EXIT_TRUE, Verdict.FALSE: EXIT_FALSE, Verdict.UNKNOWN: EXIT_UNKNOWN}


def _configure(args) -> PipelineConfig:
    config = load_pipeline_config(getattr(args, "config", None))
    apply_log_level(config)
    return config


def _write_records(path: str, records: List[dict]):
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False, default=str) + "\n")
    logger.info(f"✅ 레코드 {len(records)}건 저장: {out}")


# ===== 서브커맨드 =====

def cmd_gnf(args) -> int:
    g = gnf(parse_formula(args.formula))
    print(f"atoms: {' '.join(g.atoms) or '-'}")
    for disjunct in g.disjuncts:
        print(f"{print_formula(disjunct.guard)}\t{print_formula(disjunct.tail)}")
    return EXIT_TRUE


def cmd_closure(args) -> int:
    for member in closure(parse_formula(args.formula)):
        print(print_formula(member))
    return EXIT_TRUE


def _pipeline_config(args, base: PipelineConfig) -> PipelineConfig:
    """명령행 옵션을 덮어쓴 새 설정 (base는 그대로)"""
    section = base.pipeline
    pipeline = replace(
        section,
        stages=tuple(Stage(s) for s in args.stage) if args.stage else section.stages,
        pref_mode=ElimMode(args.mode) if args.mode else section.pref_mode,
        merge=section.merge or args.merge,
        log_actions=section.log_actions or args.log_actions,
        collapse_initial=section.collapse_initial or args.collapse_initial,
    )
    return replace(base, pipeline=pipeline, model_path=args.model, formula=args.formula)


def cmd_translate(args) -> int:
    cfg = _pipeline_config(args, _configure(args))
    result = run_pipeline(cfg)
    for output in result.outputs:
        print(f"[{output.stage.value}] {print_formula(output.formula)}")
        for warning in output.warnings:
            print(f"⚠️ {warning}", file=sys.stderr)
        if args.out and output.model is not result.model:
            path = Path(args.out) / f"{output.stage.value}_model.txt"
            path.parent.mkdir(parents=True, exist_ok=True)
            save_model(output.model, path)
            logger.info(f"✅ {output.stage.value} 단계 모델 저장: {path}")
    return EXIT_TRUE


def cmd_check(args) -> int:
    config = _configure(args)
    checker_config = replace(
        config.checker,
        history_bound=args.bound if args.bound is not None else config.checker.history_bound,
        sufficient=config.checker.sufficient or args.sufficient,
    )
    engine = args.engine or checker_config.engine

    checker = CheckerFactory.create_checker(engine, config=checker_config, logger=logger)
    if checker is None:
        print(f"❌ 검사 엔진을 만들 수 없습니다: {engine} (사용 가능: {CheckerFactory.list_checkers()})")
        return EXIT_ERROR

    model = load_model(args.model)
    formula = read_formula(args.formula, model)
    options = {"bound": checker_config.history_bound, "sufficient": checker_config.sufficient}
    if engine == "translated":
        if not isinstance(model, CGM):
            print("❌ translated 엔진에는 동시 게임 모델이 필요합니다")
            return EXIT_ERROR
        cfg = PipelineConfig(pipeline=config.pipeline, checker=checker_config)
        final = run_pipeline(cfg, model=model, formula=formula).output(Stage.ATLSC)
        if final is None or final.translation is None:
            print("❌ translated 엔진은 atlsc 단계 출력이 필요합니다")
            return EXIT_ERROR
        result = checker.check(final.model, final.formula, registry=final.translation.registry, **options)
    else:
        result = checker.check(model, formula, **options)

    print(result.verdict.value)
    logger.info(f"🔎 {checker.get_checker_name()}: {result.verdict.value} ({result.detail or 'exact'})")
    return VERDICT_EXIT[result.verdict]


def cmd_repro_nash(args) -> int:
    _configure(args)
    report = repro_nash(seed=args.seed)
    print(format_report(report))
    if args.out:
        _write_records(args.out, report.to_records())
    return EXIT_TRUE if report.passed else EXIT_FALSE


def cmd_suite(args) -> int:
    config = _configure(args)
    seed = args.seed if args.seed is not None else config.suite.seed
    suite_config = replace(
        DEFAULT_SUITE_CONFIG,
        seed=seed,
        gnf_formulas=config.suite.gnf_formulas,
        lasso_bound=config.suite.lasso_bound,
        pref_instances=config.suite.pref_instances,
        path_instances=config.suite.path_instances,
        only=tuple(args.only) if args.only else None,
    )
    records = run_suites(suite_config)
    print(summarize(records).to_string(index=False))
    if args.out:
        _write_records(args.out, records)
    return EXIT_TRUE if all(record["agree"] for record in records) else EXIT_FALSE


# ===== 인자 파서 =====

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="atlscpref", description="ATLSCPref* → QCTL* 번역 및 차등 검사")
    parser.add_argument("--config", type=str, default=None, help="파이프라인 설정 파일 (기본: ATLSCPREF_CONFIG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gnf", help="보호 정규형 (guard / tail 표)")
    p.add_argument("--formula", required=True, help="LTL 식")
    p.set_defaults(handler=cmd_gnf)

    p = sub.add_parser("closure", help="tail closure (한 줄에 식 하나)")
    p.add_argument("--formula", required=True, help="LTL 식")
    p.set_defaults(handler=cmd_closure)

    p = sub.add_parser("translate", help="단계별 번역")
    p.add_argument("--model", required=True, help="모델 파일")
    p.add_argument("--formula", required=True, help="식 또는 식 파일")
    p.add_argument("--stage", nargs="+", choices=[s.value for s in Stage], help="실행할 단계")
    p.add_argument("--mode", choices=[m.value for m in ElimMode], help="선호 제거 출력 형식")
    p.add_argument("--merge", action="store_true", help="연합을 한 명의 플레이어로 부호화")
    p.add_argument("--log-actions", action="store_true", help="행동을 ⌈log₂|Act|⌉ 비트로 부호화")
    p.add_argument("--collapse-initial", action="store_true", help="시간 깊이 0의 선호를 초기 목표로 바로 평가")
    p.add_argument("--out", type=str, default=None, help="파생 모델(M_B, unfold1) 저장 디렉토리")
    p.set_defaults(handler=cmd_translate)

    p = sub.add_parser("check", help="모델 검사 (exit 0 참, 1 거짓, 3 미정, 2 오류)")
    p.add_argument("--engine", choices=CheckerFactory.list_checkers(), default=None, help="검사 엔진")
    p.add_argument("--model", required=True, help="모델 파일")
    p.add_argument("--formula", required=True, help="식 또는 식 파일")
    p.add_argument("--bound", type=int, default=None, help="전략 기억 한도 h")
    p.add_argument("--sufficient", action="store_true", help="h가 충분하다고 보고 유계 값을 그대로 보고")
    p.set_defaults(handler=cmd_check)

    p = sub.add_parser("repro-nash", help="Nash 균형 예제 재현")
    p.add_argument("--seed", type=int, default=7, help="상태 이름 바꾸기 시드")
    p.add_argument("--out", type=str, default=None, help="JSONL 보고서 경로")
    p.set_defaults(handler=cmd_repro_nash)

    p = sub.add_parser("suite", help="차등 검사 스위트")
    p.add_argument("--seed", type=int, default=None, help="난수 시드 (기본: 설정 파일)")
    p.add_argument("--only", nargs="+", default=None, help="실행할 스위트 이름")
    p.add_argument("--out", type=str, default=None, help="JSONL 레코드 경로")
    p.set_defaults(handler=cmd_suite)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except AtlscPrefError as e:
        print(f"❌ {e}")
        logger.error(f"❌ {args.command} 실패: {e}")
        return EXIT_ERROR
    except (OSError, KeyError) as e:
        print(f"❌ {e}")
        logger.error(f"❌ {args.command} 실패: {e}", exc_info=True)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
