"""
차등 검사 스위트 일괄 실행 스크립트
- 스위트별 인스턴스를 생성해 엔진 두 개(또는 기대값)를 비교
- 레코드는 JSONL로 저장 (suite, instance, verdicts, agree)
- 스위트별 요약표는 pandas로 출력

사용법:
  python scripts/run_differential_suite.py
  python scripts/run_differential_suite.py --seed 11 --only gnf pref --out results/suite.jsonl
  python scripts/run_differential_suite.py --scale 0.1  # 인스턴스 수 10%로 빠르게
"""
import sys
import os
import json
import time
import argparse
from dataclasses import replace
from pathlib import Path

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from config.suite_config import DEFAULT_SUITE_CONFIG
from core.differential_suite import SUITES, run_suites, summarize
from utils.logger import setup_logger

logger = setup_logger("DifferentialSuite")


def main() -> int:
    parser = argparse.ArgumentParser(description='차등 검사 스위트 일괄 실행')
    parser.add_argument('--seed', type=int, default=DEFAULT_SUITE_CONFIG.seed, help='난수 시드')
    parser.add_argument('--only', nargs='+', choices=list(SUITES), default=None, help='실행할 스위트')
    parser.add_argument('--scale', type=float, default=1.0, help='인스턴스 수 비율 (0~1)')
    parser.add_argument('--out', type=str, default='results/differential_suite.jsonl', help='JSONL 출력 경로')
    parser.add_argument('--no-progress', action='store_true', help='tqdm 진행 표시 끄기')
    args = parser.parse_args()

    config = replace(DEFAULT_SUITE_CONFIG, seed=args.seed, progress=not args.no_progress,
                     only=tuple(args.only) if args.only else None)
    if args.scale != 1.0:
        config = config.with_counts(args.scale)

    start_time = time.time()
    records = run_suites(config)
    elapsed = time.time() - start_time

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, 'w', encoding='utf-8') as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False, default=str) + '\n')

    summary = summarize(records)
    failed = int(summary['disagree'].sum()) if not summary.empty else 0
    logger.info(f"{'=' * 60}")
    logger.info(f"📊 차등 검사 요약 (seed={config.seed})")
    for line in summary.to_string(index=False).splitlines():
        logger.info(f"  {line}")
    logger.info(f"  레코드: {len(records)}건 → {out}")
    logger.info(f"  소요: {elapsed / 60:.1f}분")
    logger.info(f"{'=' * 60}")

    if failed:
        logger.warning(f"⚠️ 불일치 {failed}건")
        return 1
    logger.info("✅ 모든 스위트 일치")
    return 0


if __name__ == '__main__':
    sys.exit(main())
