import json
import subprocess
import sys

from strichartzlab.__main__ import EXIT_USAGE, RunConfig, run


def _run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "strichartzlab", *args],
        capture_output=True,
        text=True
    )


def test_main_help_runs():
    """--help 옵션이 정상 작동하는지 확인"""
    result = _run_cli("--help")
    assert result.returncode == 0
    assert "도움말 표시 후 종료" in result.stdout


def test_main_without_command():
    """명령 없이 실행하면 사용법 오류(2)"""
    result = _run_cli()
    assert result.returncode == EXIT_USAGE
    assert "인자 오류" in result.stdout


def test_main_excluded_case_is_usage_error(tmp_path):
    """(n,k) = (1,2) 는 제외된 경우이며 보고서를 쓰지 않는다"""
    out = tmp_path / "t1.json"
    result = _run_cli("theorem1", "--n", "1", "--k", "2", "--out", str(out))
    assert result.returncode == EXIT_USAGE
    assert "제외된 경우" in result.stdout
    assert not out.exists()


def test_main_constants_writes_outputs(tmp_path):
    out = tmp_path / "constants.json"
    result = _run_cli("constants", "--out", str(out))
    assert result.returncode == 0
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc['verdict'] == "pass"
    assert any(row['case'] == "n2_q4_r4" for row in doc['payload'])
    assert (tmp_path / "constants.csv").exists()
    assert (tmp_path / "constants.conf").read_text(encoding="utf-8").startswith("# python -m strichartzlab constants")


def test_run_theorem1_closed_form():
    result = run(RunConfig("theorem1", n=2, k=2))
    assert result.verdict == "pass"
    assert abs(result.document['ratio'] - 1.0) <= 1e-8


def test_run_strichartz_without_case_reports_value():
    result = run(RunConfig("strichartz", n=1, q="8", r="4", input="gaussian:-0.5,0,0"))
    assert result.verdict == "indeterminate"
    assert result.document['value'] > 0


def test_run_cone_default_case():
    result = run(RunConfig("cone", n=3))
    assert result.document['verdict'] == "pass"
    assert result.document['config_echo']['n'] == 3


def test_run_scan_zero_direction():
    result = run(RunConfig("scan", case="n1_q8_r4", direction="zero", epsilons="-0.1,0,0.1"))
    assert result.verdict == "pass"
    assert len(result.rows) == 3
