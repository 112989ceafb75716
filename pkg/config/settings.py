"""
설정 파일 로더 모듈
.env 파일에서 환경변수를 읽고
pipeline_config.json 파일에서 파이프라인 설정을 로드
"""
import json
import logging
import os
from pathlib import Path
from typing import Optional, Union

from dotenv import load_dotenv

from core.models import PipelineConfig
from utils.logger import LOG_LEVEL_ENV

load_dotenv()

# 설정 파일 경로
CONFIG_ENV = "ATLSCPREF_CONFIG"
PIPELINE_CONFIG_FILE = Path(__file__).parent / "pipeline_config.json"


def resolve_config_path(path: Optional[Union[str, Path]] = None) -> Path:
    """인자 → ATLSCPREF_CONFIG 환경변수 → 기본 파일 순서"""
    if path:
        return Path(path)
    env_path = os.getenv(CONFIG_ENV)
    if env_path:
        return Path(env_path)
    return PIPELINE_CONFIG_FILE


def load_pipeline_config(path: Optional[Union[str, Path]] = None) -> PipelineConfig:
    """파이프라인 설정 파일을 로드하여 PipelineConfig 객체 반환"""
    config_file = resolve_config_path(path)
    if not config_file.exists():
        print(f"경고: 파이프라인 설정 파일을 찾을 수 없습니다: {config_file}")
        print("기본 설정을 사용합니다.")
        return PipelineConfig()

    try:
        with open(config_file, 'r', encoding='utf-8') as f:
            json_data = json.load(f)

        return PipelineConfig.from_json(json_data)

    except Exception as e:
        print(f"경고: 파이프라인 설정 파일 로드 실패: {e}")
        print("기본 설정을 사용합니다.")
        return PipelineConfig()


def apply_log_level(config: PipelineConfig):
    """환경변수가 없을 때만 설정 파일의 로그 레벨을 이미 만든 로거에 적용"""
    if os.getenv(LOG_LEVEL_ENV):
        return
    level = getattr(logging, config.logging.level.upper(), logging.INFO)
    for name, logger in logging.root.manager.loggerDict.items():
        if isinstance(logger, logging.Logger) and logger.handlers:
            logger.setLevel(level)
