#!/usr/bin/env python3

import argparse
import logging
import os
import sys
from dataclasses import dataclass
from typing import Optional

from .constants import (KIND_CONE, KIND_PARABOLOID, KIND_SCHRODINGER, SOBOLEV_CASES, constants_table,
                        corollary_case)
from .domain import (VERDICT_FAIL, VERDICT_INDETERMINATE, VERDICT_PASS, GaussianProfile, MonteCarloSpec,
                     StrichartzCase)
from .extension import extension_ratio_report
from .maximizer import functional_dimension, optimize, perturbation_scan
from .mixed_norms import TimeQuadratureSpec, strichartz_norm
from .output_handler import ReportWriter
from .run_config import (COMMANDS, RunConfig, build_initial_data, build_surface_function,
                         parse_input_spec)
from .common_utils import parse_complex_list, parse_float_list
from .theorem1 import sobolev_strichartz_report, strichartz_corollary_report, theorem1_report
from .trial import DEFAULT_HERMITE_TERMS, TrialFunction
from .verify import verify_all

# logging 모듈 기본 설정
logging.basicConfig(
    stream=sys.stdout,
    level=logging.INFO,
    format='[%(asctime)s] [%(levelname)s] %(message)s',
    datefmt='%Y-%m-%d %H:%M:%S'
)
logger = logging.getLogger(__name__)

COMMANDS_DISPLAY = ", ".join(COMMANDS)

# 종료 코드
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

DEFAULT_GAUSSIAN_INPUT = "gaussian:-0.5,0,0"
DEFAULT_CONE_INPUT = "exponential:-1,0,0"
DEFAULT_EPSILONS = "-0.4,-0.2,0,0.2,0.4"
_MONTE_CARLO_FUNCTIONALS = ("t1_n1_k4", "t1_n2_k3", "t1_n1_k5")


# 친절한 오류 메시지를 출력할 ArgumentParser 클래스
class FriendlyArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        logger.error(f"❌ 인자 오류: {message}")
        if 'command' in message:
            logger.error(f"사용 가능한 명령: {COMMANDS_DISPLAY}")
        sys.exit(EXIT_USAGE)


def parse_arguments(argv: Optional[list[str]] = None) -> argparse.Namespace:
    """커맨드라인 인자를 파싱하는 함수 (값을 주지 않은 플래그는 None → 설정 파일/기본값 사용)"""
    parser = FriendlyArgumentParser(
        prog="python -m strichartzlab",
        usage=(
            "python -m strichartzlab [-h] [-v] "
            f"{{{COMMANDS_DISPLAY}}} "
            "[--n N] [--k K] [--q Q] [--r R] [--case ID] [--input SPEC] "
            "[--samples M] [--seed S] [--workers W] [--tolerance TOL] [--out path] [--profile quick|full]"
        ),
        description="sharp Strichartz / extension 부등식의 상수, 최대화 함수, 등호 조건을 수치로 검증하는 CLI 도구",
        add_help=False
    )
    parser.add_argument(
        "command",
        choices=COMMANDS,
        metavar="command",
        help=f"실행할 명령 ({COMMANDS_DISPLAY})"
    )
    parser.add_argument(
        "-h", "--help",
        action="help",
        help="도움말 표시 후 종료"
    )
    parser.add_argument(
        "-v", "--verbose",
        action="store_true",
        help="자세한 로그를 출력합니다."
    )
    parser.add_argument("--n", type=int, metavar="N", help="공간 차원 n")
    parser.add_argument("--k", type=int, metavar="K", help="Theorem 1 의 k (q = r = 2k)")
    parser.add_argument("--q", type=str, metavar="Q", help="시간 지수 q ('inf' 허용)")
    parser.add_argument("--r", type=str, metavar="R", help="공간 지수 r")
    parser.add_argument("--case", type=str, metavar="ID",
                        help="case id (constants 표의 id 또는 optimize/scan 의 functional id)")
    parser.add_argument("--input", type=str, metavar="SPEC",
                        help="입력 사양: gaussian:A,b,C | exponential:A,b,C | grid:path "
                             f"(기본값: '{DEFAULT_GAUSSIAN_INPUT}', 원뿔은 '{DEFAULT_CONE_INPUT}')")
    parser.add_argument("--samples", type=int, metavar="M", help="Monte Carlo 표본 수 (기본값: 1000000)")
    parser.add_argument("--seed", type=int, metavar="S", help="Monte Carlo seed (기본값: 20081017)")
    parser.add_argument("--chunk-size", type=int, metavar="C", help="Monte Carlo chunk 크기 (기본값: 65536)")
    parser.add_argument("--workers", type=int, metavar="W", help="worker 수 (결과는 worker 수와 무관)")
    parser.add_argument("--tolerance", type=float, metavar="TOL", help="등호 판정 허용 오차")
    parser.add_argument("--out", type=str, metavar="path", help="JSON 보고서 경로 (CSV, 설정 파일은 같은 이름으로 저장)")
    parser.add_argument("--profile", choices=["quick", "full"], help="verify-all 프로필 (기본값: quick)")
    parser.add_argument("--coeffs", type=str, metavar="c1,c2,...", help="Hermite 섭동 계수 (예: 0,0.3)")
    parser.add_argument("--budget", type=int, metavar="B", help="optimize 목적함수 평가 예산 (기본값: 500)")
    parser.add_argument("--direction", type=str, metavar="DIR",
                        help="scan 방향: Hermite 번호(예: 4) 또는 zero, modulation, translation, scaling")
    parser.add_argument("--epsilons", type=str, metavar="LIST", help=f"scan ε 목록 (기본값: '{DEFAULT_EPSILONS}')")
    parser.add_argument("--config", type=str, metavar="FILE", help="key=value 설정 파일 (명령행 플래그가 우선)")
    return parser.parse_args(argv)


@dataclass
class CommandResult:
    document: dict
    rows: Optional[list[dict]] = None
    text: Optional[str] = None

    @property
    def verdict(self) -> str:
        return self.document.get('verdict') or VERDICT_INDETERMINATE


def _require(config: RunConfig, *names: str) -> None:
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(config, name) is None]
    if missing:
        raise ValueError(f"{config.command} 명령에는 {', '.join(missing)} 가 필요합니다.")


def _quad_spec(config: RunConfig) -> TimeQuadratureSpec:
    return TimeQuadratureSpec(workers=config.workers)


def _mc_spec(config: RunConfig) -> MonteCarloSpec:
    return MonteCarloSpec(samples=config.samples, seed=config.seed, chunk_size=config.chunk_size)


def _initial_data(config: RunConfig, n: int):
    return build_initial_data(parse_input_spec(config.input or DEFAULT_GAUSSIAN_INPUT), n, config.coeffs)


def _case_for(config: RunConfig, kind: str) -> str:
    if config.case:
        return config.case
    _require(config, 'n')
    for case_id in ("cone_n3_q4", "cone_n2_q6", "parab_n1_q6", "parab_n2_q4"):
        case = corollary_case(case_id)
        if case.kind == kind and case.n == config.n:
            return case_id
    raise ValueError(f"{kind} 에 n = {config.n} 인 경우가 없습니다.")


def run_constants(config: RunConfig, writer: ReportWriter) -> CommandResult:
    rows = constants_table()
    worst = max(row['rel_error'] for row in rows)
    verdict = VERDICT_PASS if worst <= 1e-12 else VERDICT_FAIL
    doc = writer.build_document(config.command, config.to_dict(), value=worst, verdict=verdict, payload=rows,
                                notes=["value = 재유도 상수와 닫힌 형태의 최대 상대 오차"])
    text = writer.generate_text(rows, "sharp 상수 표",
                                ['case', 'kind', 'n', 'q', 'r', 'formula', 'value', 'derived', 'rel_error'])
    return CommandResult(doc, rows, text)


def run_theorem1(config: RunConfig, writer: ReportWriter) -> CommandResult:
    _require(config, 'n', 'k')
    case = StrichartzCase(config.n, config.k)
    f = _initial_data(config, config.n)
    report = theorem1_report(f, case, _mc_spec(config), _quad_spec(config),
                             tolerance=config.tolerance or 1e-8, workers=config.workers)
    return CommandResult(writer.build_document(config.command, config.to_dict(), report))


def run_strichartz(config: RunConfig, writer: ReportWriter) -> CommandResult:
    if config.case:
        case = corollary_case(config.case)
        if case.kind != KIND_SCHRODINGER:
            raise ValueError(f"strichartz 명령은 Schrödinger 경우만 받습니다: {config.case}")
        f = _initial_data(config, case.n)
        report = strichartz_corollary_report(f, config.case, _quad_spec(config), tolerance=config.tolerance or 1e-8)
        return CommandResult(writer.build_document(config.command, config.to_dict(), report))
    _require(config, 'n', 'q', 'r')
    f = _initial_data(config, config.n)
    value, err = strichartz_norm(f, config.q, config.r, _quad_spec(config))
    doc = writer.build_document(config.command, config.to_dict(), value=value, stderr=err,
                                verdict=VERDICT_INDETERMINATE, payload={'l2_norm': f.l2_norm()},
                                notes=["value = ‖u‖_{L^q_t L^r_x} (비교 대상 없음)"])
    return CommandResult(doc)


def run_sobolev(config: RunConfig, writer: ReportWriter) -> CommandResult:
    _require(config, 'case')
    if config.case not in SOBOLEV_CASES:
        raise ValueError(f"Sobolev-Strichartz case 가 아닙니다: {config.case} (가능: {', '.join(SOBOLEV_CASES)})")
    f = _initial_data(config, SOBOLEV_CASES[config.case][0])
    report = sobolev_strichartz_report(f, config.case, _quad_spec(config), tolerance=config.tolerance or 1e-6)
    return CommandResult(writer.build_document(config.command, config.to_dict(), report))


def _run_extension(config: RunConfig, writer: ReportWriter, kind: str, default_input: str) -> CommandResult:
    case_id = _case_for(config, kind)
    case = corollary_case(case_id)
    if case.kind != kind:
        raise ValueError(f"{kind} 명령에 맞지 않는 case 입니다: {case_id}")
    sf = build_surface_function(parse_input_spec(config.input or default_input), kind, case.n)
    report = extension_ratio_report(sf, case_id, _quad_spec(config), tolerance=config.tolerance or 1e-6)
    return CommandResult(writer.build_document(config.command, config.to_dict(), report))


def run_cone(config: RunConfig, writer: ReportWriter) -> CommandResult:
    return _run_extension(config, writer, KIND_CONE, DEFAULT_CONE_INPUT)


def run_paraboloid(config: RunConfig, writer: ReportWriter) -> CommandResult:
    return _run_extension(config, writer, KIND_PARABOLOID, DEFAULT_GAUSSIAN_INPUT)


def _default_tolerance(config: RunConfig) -> float:
    if config.tolerance is not None:
        return config.tolerance
    return 1e-2 if config.case in _MONTE_CARLO_FUNCTIONALS else 1e-6


def run_optimize(config: RunConfig, writer: ReportWriter) -> CommandResult:
    _require(config, 'case')
    n = functional_dimension(config.case)
    spec = parse_input_spec(config.input or DEFAULT_GAUSSIAN_INPUT)
    profile = build_initial_data(spec, n)
    if not isinstance(profile, GaussianProfile):
        raise ValueError("optimize 의 초기값은 gaussian 입력이어야 합니다.")
    coeffs = parse_complex_list(config.coeffs) if config.coeffs else []
    padded = list(coeffs) + [0j] * max(DEFAULT_HERMITE_TERMS - len(coeffs), 0)
    init = TrialFunction(profile.fourier(), padded)
    result = optimize(config.case, init, config.budget, mc=_mc_spec(config), spec=_quad_spec(config))
    tolerance = _default_tolerance(config)
    verdict = VERDICT_PASS if result.ratio <= 1.0 + tolerance else VERDICT_FAIL
    payload = {
        'coeffs': [complex(c) for c in result.best.hermite_coeffs],
        'A': result.best.base.A,
        'b': [complex(c) for c in result.best.base.b],
        'evaluations': result.evaluations,
        'exhausted': result.exhausted,
        'trace': result.trace,
    }
    doc = writer.build_document(config.command, config.to_dict(), value=result.ratio, verdict=verdict,
                                payload=payload,
                                notes=["탐색 결과는 최대화 함수 집합에 대한 수치적 근거이며 증명이 아님"])
    doc['tolerance'] = tolerance
    rows = [{'evaluation': i + 1, 'best_ratio': ratio} for i, ratio in enumerate(result.trace)]
    return CommandResult(doc, rows)


def run_scan(config: RunConfig, writer: ReportWriter) -> CommandResult:
    _require(config, 'case')
    epsilons = parse_float_list(config.epsilons or DEFAULT_EPSILONS)
    result = perturbation_scan(config.case, config.direction or "2", epsilons,
                               mc=_mc_spec(config), spec=_quad_spec(config))
    tolerance = _default_tolerance(config)
    verdict = (VERDICT_PASS if result.max_ratio <= 1.0 + tolerance and result.second_difference <= tolerance
               else VERDICT_FAIL)
    doc = writer.build_document(config.command, config.to_dict(), value=result.second_difference,
                                verdict=verdict,
                                payload={'direction': result.direction, 'points': result.points},
                                notes=["value = ε = 0 에서의 중심 2차 차분"])
    doc['tolerance'] = tolerance
    rows = [{'epsilon': eps, 'ratio': ratio} for eps, ratio in result.points]
    return CommandResult(doc, rows)


def run_verify_all(config: RunConfig, writer: ReportWriter) -> CommandResult:
    report = verify_all(config.profile)
    rows = report.rows()
    verdict = VERDICT_PASS if report.passed else VERDICT_FAIL
    doc = writer.build_document(config.command, config.to_dict(),
                                value=float(sum(check.passed for check in report.checks)),
                                verdict=verdict, payload=rows,
                                notes=[f"value = 통과한 검사 수 (전체 {len(rows)})"])
    text = writer.generate_text(rows, f"검증 결과 ({config.profile})", ['check', 'verdict', 'detail', 'wall_time_seconds'])
    return CommandResult(doc, rows, text)


HANDLERS = {
    "constants": run_constants,
    "theorem1": run_theorem1,
    "strichartz": run_strichartz,
    "sobolev": run_sobolev,
    "cone": run_cone,
    "paraboloid": run_paraboloid,
    "optimize": run_optimize,
    "scan": run_scan,
    "verify-all": run_verify_all,
}


def run(config: RunConfig, writer: Optional[ReportWriter] = None) -> CommandResult:
    writer = writer or ReportWriter()
    return HANDLERS[config.command](config, writer)


def save_outputs(config: RunConfig, result: CommandResult, writer: ReportWriter) -> None:
    """보고서 JSON, 표 CSV, 재현용 설정 파일 저장"""
    writer.write_json(result.document, config.out)
    if result.rows:
        writer.write_csv(result.rows, writer.csv_path(config.out))
    stem, _ = os.path.splitext(config.out)
    writer.write_text(stem + ".conf", config.to_keyvalue())


def main(argv: Optional[list[str]] = None) -> int:
    """Main execution function"""
    args = parse_arguments(argv)
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG)

    flags = {key: value for key, value in vars(args).items() if key not in ('command', 'config', 'verbose')}
    writer = ReportWriter()
    try:
        config = RunConfig.from_sources(args.command, flags, args.config)
        result = run(config, writer)
    except (ValueError, OSError) as e:
        message = str(e)
        logger.error(message if message.startswith("❌") else f"❌ {message}")
        return EXIT_USAGE

    if result.text:
        print(result.text)
    doc = result.document
    logger.info(f"ℹ️ {config.command}: value = {doc.get('value')}, ratio = {doc.get('ratio')}, "
                f"verdict = {result.verdict}")
    if config.out:
        save_outputs(config, result, writer)
    if result.verdict == VERDICT_FAIL:
        logger.error(f"❌ 판정 실패: {config.command}")
        return EXIT_FAIL
    logger.info(f"✅ {config.command} 완료")
    return EXIT_PASS


if __name__ == "__main__":
    sys.exit(main())
