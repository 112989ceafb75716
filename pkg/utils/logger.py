"""
로깅 시스템 설정
"""
import logging
import os
import sys
from datetime import datetime
from pathlib import Path
from typing import Optional, Union

from dotenv import load_dotenv

load_dotenv()

LOG_LEVEL_ENV = "ATLSCPREF_LOG_LEVEL"


def _resolve_level(level: Optional[Union[int, str]]) -> int:
    if level is None:
        level = os.getenv(LOG_LEVEL_ENV, "INFO")
    if isinstance(level, str):
        resolved = getattr(logging, level.upper(), logging.INFO)
        return resolved if isinstance(resolved, int) else logging.INFO
    return level


def setup_logger(
    name: str,
    level: Optional[Union[int, str]] = None,
    file_path: Optional[Union[str, Path]] = None,
):
    """로거 설정

    Parameters:
    - name: 로거 이름
    - level: 로그 레벨 (미지정 시 ATLSCPREF_LOG_LEVEL 환경변수, 기본 INFO)
    - file_path: 지정 시 해당 경로로 파일 출력, 미지정 시 logs/atlscpref_YYYYMMDD.log
    """

    # 로그 파일 (기본: 날짜별)
    if file_path is None:
        log_dir = Path("logs")
        log_dir.mkdir(exist_ok=True)
        today = datetime.now().strftime("%Y%m%d")
        log_file = log_dir / f"atlscpref_{today}.log"
    else:
        log_file = Path(file_path)
        if not log_file.parent.exists():
            log_file.parent.mkdir(parents=True, exist_ok=True)

    # 로거
    logger = logging.getLogger(name)
    logger.setLevel(_resolve_level(level))
    logger.propagate = False

    # 재호출 시 핸들러 중복 방지
    if logger.handlers:
        logger.handlers.clear()

    # 포맷터 설정
    formatter = logging.Formatter(
        '%(asctime)s | %(name)s | %(levelname)s | %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    # 파일 핸들러
    file_handler = logging.FileHandler(log_file, encoding='utf-8')
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    # 콘솔 핸들러 (stdout은 식/모델 출력 전용이므로 stderr 사용)
    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    return logger
