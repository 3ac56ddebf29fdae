#!/usr/bin/env python3
import json
import logging
import os
import re
import tempfile
from datetime import datetime
from typing import Optional
from zoneinfo import ZoneInfo

import numpy as np
import pandas as pd
from prettytable import PrettyTable

from . import ARTIFACT_VERSION
from .common_utils import format_float
from .domain import RatioReport

logger = logging.getLogger(__name__)


class ReportWriter:
    """실행 결과를 JSON 보고서, CSV 표, PrettyTable 텍스트로 출력"""

    # JSON 설정
    JSON_CONFIG = {
        'indent': 2,
        'ensure_ascii': False,
    }

    # 보고서 최상위 필드 순서
    REPORT_FIELDS = (
        'command', 'config_echo', 'value', 'stderr', 'lhs', 'rhs', 'ratio',
        'expected', 'tolerance', 'verdict', 'wall_time_seconds', 'artifact_version',
    )

    _FLOAT_TOKEN = re.compile(r'"@@float:([^"@]+)@@"')

    @staticmethod
    def get_kst_timestamp() -> str:
        """현재 KST(한국 시간) 기준 타임스탬프 반환"""
        kst = ZoneInfo("Asia/Seoul")
        return datetime.now(tz=kst).strftime("%Y-%m-%d %H:%M:%S (KST)")

    def build_document(self, command: str, config: dict, report: Optional[RatioReport] = None,
                       value: Optional[float] = None, stderr: Optional[float] = None,
                       verdict: Optional[str] = None, payload=None,
                       notes: Optional[list[str]] = None) -> dict:
        """보고서 문서 (report 가 있으면 lhs/rhs/ratio/판정을 그대로 옮긴다)"""
        doc = dict.fromkeys(self.REPORT_FIELDS)
        doc['command'] = command
        doc['config_echo'] = config
        doc['value'] = value
        doc['stderr'] = stderr
        doc['artifact_version'] = ARTIFACT_VERSION
        doc['notes'] = list(notes or [])
        if report is not None:
            doc.update({
                'lhs': report.lhs,
                'rhs': report.rhs,
                'ratio': report.ratio,
                'expected': report.expected,
                'tolerance': report.tolerance,
                'verdict': report.verdict,
                'wall_time_seconds': report.wall_time_seconds,
            })
            if doc['value'] is None:
                doc['value'] = report.ratio
            if doc['stderr'] is None:
                doc['stderr'] = report.combined_error() if report.ratio is not None else None
            doc['notes'].extend(report.notes)
        if verdict is not None:
            doc['verdict'] = verdict
        if payload is not None:
            doc['payload'] = payload
        return doc

    @classmethod
    def _tokenize(cls, obj):
        """float 을 17 유효숫자 토큰 문자열로 치환 (비유한 값은 null)"""
        if isinstance(obj, dict):
            return {str(key): cls._tokenize(value) for key, value in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [cls._tokenize(value) for value in obj]
        if isinstance(obj, (bool, np.bool_)):
            return bool(obj)
        if isinstance(obj, (int, np.integer)):
            return int(obj)
        if isinstance(obj, (float, np.floating)):
            value = float(obj)
            if not np.isfinite(value):
                return None
            return f"@@float:{format_float(value)}@@"
        if isinstance(obj, (complex, np.complexfloating)):
            return {'re': cls._tokenize(obj.real), 'im': cls._tokenize(obj.imag)}
        if obj is None or isinstance(obj, str):
            return obj
        return str(obj)

    def dumps(self, document: dict) -> str:
        text = json.dumps(self._tokenize(document), **self.JSON_CONFIG)
        return self._FLOAT_TOKEN.sub(lambda m: m.group(1), text) + "\n"

    @staticmethod
    def write_text(path: str, text: str) -> None:
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp_path = tempfile.mkstemp(dir=directory, prefix='.tmp_')
        try:
            with os.fdopen(fd, 'w', encoding='utf-8') as f:
                f.write(text)
            os.replace(tmp_path, path)
        except BaseException:
            if os.path.exists(tmp_path):
                os.remove(tmp_path)
            raise

    def write_json(self, document: dict, path: str) -> None:
        self.write_text(path, self.dumps(document))
        logger.info(f"✅ 보고서 저장 완료: {path}")

    def write_csv(self, rows: list[dict], path: str) -> None:
        """표 형태 payload 를 CSV 로 저장"""
        df = pd.DataFrame(rows)
        self.write_text(path, df.to_csv(index=False, float_format='%.17g'))
        logger.info(f"✅ CSV 저장 완료: {path}")

    @staticmethod
    def csv_path(json_path: str) -> str:
        stem, _ = os.path.splitext(json_path)
        return stem + ".csv"

    def generate_text(self, rows: list[dict], title: str, columns: Optional[list[str]] = None) -> str:
        """PrettyTable 로 rows 를 출력용 텍스트로 만든다"""
        timestamp = self.get_kst_timestamp()
        columns = columns or (list(rows[0].keys()) if rows else [])
        table = PrettyTable()
        table.field_names = columns
        for row in rows:
            table.add_row([self._cell(row.get(column)) for column in columns])
        return f"=== {title} (분석 기준 시각: {timestamp}) ===\n\n{table.get_string()}\n"

    @staticmethod
    def _cell(value) -> str:
        if isinstance(value, (float, np.floating)):
            return f"{float(value):.12g}"
        return "" if value is None else str(value)
