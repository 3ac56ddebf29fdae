import json
import math

import numpy as np
import pandas as pd

from strichartzlab import ARTIFACT_VERSION
from strichartzlab.domain import MODE_EQUALITY, RatioReport
from strichartzlab.output_handler import ReportWriter


def _report():
    return RatioReport(2.0, 2.0 + 1e-10, 1e-12, 0.0, expected=1.0, tolerance=1e-8, mode=MODE_EQUALITY)


def test_document_from_report():
    writer = ReportWriter()
    doc = writer.build_document("theorem1", {'n': 1}, _report())
    assert list(doc)[:len(ReportWriter.REPORT_FIELDS)] == list(ReportWriter.REPORT_FIELDS)
    assert doc['verdict'] == "pass"
    assert doc['value'] == doc['ratio']
    assert doc['artifact_version'] == ARTIFACT_VERSION


def test_floats_written_with_17_digits():
    writer = ReportWriter()
    text = writer.dumps(writer.build_document("constants", {}, value=0.1, stderr=math.inf))
    assert '"value": 0.10000000000000001' in text
    parsed = json.loads(text)
    assert parsed['value'] == 0.1
    assert parsed['stderr'] is None


def test_numpy_and_complex_values_serialize():
    writer = ReportWriter()
    doc = writer.build_document("optimize", {}, value=np.float64(0.5), payload={'coeffs': [1 + 2j],
                                                                                 'evaluations': np.int64(3)})
    parsed = json.loads(writer.dumps(doc))
    assert parsed['payload']['coeffs'] == [{'re': 1.0, 'im': 2.0}]
    assert parsed['payload']['evaluations'] == 3


def test_write_json_and_csv(tmp_path):
    writer = ReportWriter()
    out = tmp_path / "nested" / "run.json"
    writer.write_json(writer.build_document("scan", {}, value=1.0), str(out))
    assert json.loads(out.read_text(encoding="utf-8"))['command'] == "scan"
    csv = ReportWriter.csv_path(str(out))
    assert csv.endswith("run.csv")
    writer.write_csv([{'epsilon': 0.1, 'ratio': 1.0 / 3.0}], csv)
    frame = pd.read_csv(csv)
    assert frame['ratio'][0] == 1.0 / 3.0


def test_generate_text_table():
    writer = ReportWriter()
    text = writer.generate_text([{'case': 'n2_q4_r4', 'value': 2 ** -0.5}], "상수 표")
    assert text.startswith("=== 상수 표 (분석 기준 시각:")
    assert "(KST)" in text
    assert "n2_q4_r4" in text
    assert "0.707106781187" in text
