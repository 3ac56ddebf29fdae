#!/usr/bin/env python3
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from tqdm import tqdm

from .common_utils import format_float
from .constants import (KIND_CONE, KIND_PARABOLOID, PAIR_WEIGHT, SOBOLEV_CASES, TRIPLE_WEIGHT, constants_table,
                        kernel_K, kernel_K_centered, normalization_residual)
from .domain import GaussianProfile, GridFunction, MonteCarloSpec, StrichartzCase
from .extension import (FAMILY_EXPONENTIAL, FAMILY_GAUSSIAN, SurfaceFunction, cone_pair_weight,
                        cone_triple_weight, extension_ratio_report, fiber_product_spread)
from .maximizer import optimize
from .mixed_norms import first_moment_cross_term
from .propagator import evolve_gaussian, evolve_grid
from .theorem1 import (ProductTransform, kernel_moment, reversed_hls_ratio, sobolev_strichartz_report,
                       strichartz_corollary_report, theorem1_report, weak_interpolation_check)
from .timing_decorator import timed
from .trial import TrialFunction

logger = logging.getLogger(__name__)

PROFILE_QUICK = "quick"
PROFILE_FULL = "full"

# 프로필별 규모
PROFILE_CONFIG = {
    PROFILE_QUICK: {'samples': 200_000, 'pair_points': 10, 'triple_points': 5, 'budget': 500},
    PROFILE_FULL: {'samples': 1_000_000, 'pair_points': 10, 'triple_points': 5, 'budget': 500},
}

_RNG_SEED = 20081017


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    stderr: float = 0.0
    wall_time_seconds: float = 0.0

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


@dataclass
class VerifyReport:
    profile: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def rows(self) -> list[dict]:
        return [{'check': c.name, 'verdict': c.verdict, 'detail': c.detail,
                 'stderr': c.stderr, 'wall_time_seconds': c.wall_time_seconds} for c in self.checks]


def _standard(n: int) -> GaussianProfile:
    return GaussianProfile(n, -0.5)


@timed
def check_constants(config: dict) -> CheckResult:
    rows = constants_table()
    worst = max(row['rel_error'] for row in rows)
    return CheckResult("constants", worst <= 1e-12, f"{len(rows)} cases, max rel_error {worst:.2e}")


@timed
def check_theorem1_closed_form(config: dict) -> CheckResult:
    details, ok = [], True
    for n, k in ((1, 3), (2, 2)):
        report = theorem1_report(_standard(n), StrichartzCase(n, k))
        ok &= report.ratio is not None and abs(report.ratio - 1.0) <= 1e-8
        details.append(f"({n},{k}) ratio {report.ratio:.15f}")
    return CheckResult("theorem1_closed_form", ok, "; ".join(details))


@timed
def check_theorem1_monte_carlo(config: dict) -> CheckResult:
    mc = MonteCarloSpec(samples=config['samples'])
    details, ok, worst_stderr = [], True, 0.0
    for n, k in ((1, 4), (2, 3), (1, 5)):
        report = theorem1_report(_standard(n), StrichartzCase(n, k), mc)
        rel = report.rhs_err / report.rhs
        worst_stderr = max(worst_stderr, rel)
        ok &= report.passed and (config['samples'] < 1_000_000 or rel <= 5e-3)
        details.append(f"({n},{k}) ratio {report.ratio:.6f} ± {report.combined_error():.1e}")
    # K^{1/2} 평균의 chi 분포 기준값
    mean, stderr = kernel_moment(ProductTransform.from_initial_data(_standard(1), 4), StrichartzCase(1, 4), mc)
    target = 2.0 / math.sqrt(math.pi)
    ok &= abs(mean - target) <= 3.0 * stderr
    details.append(f"E[K^1/2] {mean:.6f} (기준 {target:.6f})")
    return CheckResult("theorem1_monte_carlo", ok, "; ".join(details), worst_stderr)


@timed
def check_strictness(config: dict) -> CheckResult:
    details, ok = [], True
    for n, k in ((1, 3), (2, 2)):
        trial = TrialFunction(_standard(n).fourier(), [0.0, 0.5])
        report = theorem1_report(trial, StrichartzCase(n, k))
        ok &= report.passed
        details.append(f"({n},{k}) ratio {report.ratio:.10f}")
    return CheckResult("strictness", ok, "; ".join(details))


@timed
def check_mixed_norms(config: dict) -> CheckResult:
    details, ok = [], True
    for case_id in ("n1_q8_r4", "n1_q6_r6"):
        report = strichartz_corollary_report(_standard(1), case_id)
        ok &= report.passed
        details.append(f"{case_id} ratio {report.ratio:.12f}")
    return CheckResult("mixed_norms", ok, "; ".join(details))


@timed
def check_sobolev(config: dict) -> CheckResult:
    details, ok = [], True
    for case_id, (n, *_rest) in SOBOLEV_CASES.items():
        report = sobolev_strichartz_report(_standard(n), case_id)
        ok &= report.passed
        details.append(f"{case_id} {report.ratio:.9f}")
    # 1차 모멘트 교차항: 방사형이면 0, 이동한 가우시안이면 π
    radial = GridFunction.from_profile(_standard(2), points=128)
    shifted = GridFunction.from_callable(1, 20.0, 2048, lambda x: np.exp(-(x[..., 0] - 1.0) ** 2))
    zero, moved = first_moment_cross_term(radial), first_moment_cross_term(shifted)
    ok &= zero <= 1e-12 and abs(moved - math.pi) <= 1e-8
    details.append(f"cross term {zero:.1e}, {moved:.10f}")
    return CheckResult("sobolev_strichartz", ok, "; ".join(details))


@timed
def check_cone_weights(config: dict) -> CheckResult:
    rng = np.random.default_rng(_RNG_SEED)
    pair = []
    for _ in range(config['pair_points']):
        omega = rng.uniform(-1.0, 1.0, 3)
        tau = np.linalg.norm(omega) + rng.uniform(0.1, 2.0)
        pair.append(cone_pair_weight(tau, omega))
    triple = []
    for _ in range(config['triple_points']):
        omega = rng.uniform(-1.0, 1.0, 2)
        tau = np.linalg.norm(omega) + rng.uniform(0.2, 2.0)
        triple.append(cone_triple_weight(tau, omega))
    pair_err = max(abs(v / PAIR_WEIGHT - 1.0) for v in pair)
    triple_err = max(abs(v / TRIPLE_WEIGHT - 1.0) for v in triple)
    return CheckResult("cone_weights", pair_err <= 1e-6 and triple_err <= 1e-3,
                       f"pair {len(pair)}점 max rel {pair_err:.1e}, triple {len(triple)}점 max rel {triple_err:.1e}")


@timed
def check_cone_equality(config: dict) -> CheckResult:
    n3 = extension_ratio_report(SurfaceFunction(KIND_CONE, 3, FAMILY_EXPONENTIAL, -1.0), "cone_n3_q4")
    n2 = extension_ratio_report(SurfaceFunction(KIND_CONE, 2, FAMILY_EXPONENTIAL, -1.0), "cone_n2_q6")
    wrong = extension_ratio_report(SurfaceFunction(KIND_CONE, 3, FAMILY_GAUSSIAN, -1.0), "cone_n3_q4")
    ok = (abs(n3.lhs / (2.0 * math.pi ** 3) - 1.0) <= 1e-3
          and abs(n2.lhs / (4.0 * math.pi ** 5) - 1.0) <= 5e-3
          and wrong.passed)
    return CheckResult("cone_equality", ok,
                       f"n=3 lhs {n3.lhs:.8f}, n=2 lhs {n2.lhs:.6f}, wrong profile ratio {wrong.ratio:.6f}")


@timed
def check_paraboloid(config: dict) -> CheckResult:
    report = extension_ratio_report(SurfaceFunction(KIND_PARABOLOID, 2, FAMILY_GAUSSIAN, -0.5), "parab_n2_q4")
    ok = abs(report.lhs - 1.0 / 16.0) <= 1e-6 and report.passed
    return CheckResult("paraboloid_equality", ok, f"lhs {report.lhs:.12f}, ratio {report.ratio:.12f}")


@timed
def check_identities(config: dict) -> CheckResult:
    lattice = [(n, k) for n in range(1, 5) for k in range(2, 7) if (n, k) != (1, 2)]
    residual = max(normalization_residual(n, k) for n, k in lattice)
    rng = np.random.default_rng(_RNG_SEED)
    eta = rng.standard_normal((1000, 4, 2))
    kernel_gap = float(np.max(np.abs(kernel_K(eta) - kernel_K_centered(eta))))
    f = GridFunction.from_profile(_standard(1).modulated(0.5), points=1024, half_width=40.0)
    mass = f.l2_norm()
    half = evolve_grid(f, 0.3)
    full = evolve_grid(f, 0.6)
    unitarity = abs(full.l2_norm() / mass - 1.0)
    group = float(np.max(np.abs(evolve_grid(half, 0.3).samples - full.samples)))
    # b = 0 이면 u(t,0) = e^C (1 − 4iAt)^{-n/2}
    u = evolve_gaussian(GaussianProfile(3, -0.5 + 0.1j), 5.0)
    origin = abs(complex(u(np.zeros(3))) - np.exp(u.base.C) * u.amplitude_factor)
    ok = residual <= 1e-12 and kernel_gap <= 1e-12 and unitarity <= 1e-12 and group <= 1e-10 and origin <= 1e-12
    return CheckResult("identities", ok, f"normalization {residual:.1e}, kernel {kernel_gap:.1e}, "
                                         f"unitarity {unitarity:.1e}, group law {group:.1e}, origin {origin:.1e}")


@timed
def check_optimizer(config: dict) -> CheckResult:
    init = TrialFunction(_standard(1).fourier(), [0.0, 0.3])
    result = optimize("t1_n1_k3", init, budget=config['budget'])
    ok = result.ratio >= 0.999 and result.coefficient_norm <= 0.02
    return CheckResult("optimizer_recovery", ok, f"ratio {result.ratio:.8f}, ‖c‖ {result.coefficient_norm:.4f}, "
                                                 f"평가 {result.evaluations}")


@timed
def check_beckner(config: dict) -> CheckResult:
    ratio, err = reversed_hls_ratio(lambda x: (1.0 + x * x) ** -1.5, 1.0)
    return CheckResult("reversed_hls", abs(ratio - 1.0) <= 1e-8, f"ratio {ratio:.10f} ± {err:.1e}", err)


@timed
def check_reproducibility(config: dict) -> CheckResult:
    mc = MonteCarloSpec(samples=100_000, seed=7, chunk_size=8192)
    case = StrichartzCase(2, 3)
    single = theorem1_report(_standard(2), case, mc, workers=1)
    pooled = theorem1_report(_standard(2), case, mc, workers=4)
    same = all(format_float(getattr(single, name)) == format_float(getattr(pooled, name))
               for name in ('lhs', 'rhs', 'rhs_err', 'ratio'))
    return CheckResult("reproducibility", same, f"workers 1 vs 4 rhs {format_float(single.rhs)}")


@timed
def check_weak_interpolation(config: dict) -> CheckResult:
    cases = [(1, 3), (1, 4), (2, 2), (2, 3), (3, 2)]
    results = [weak_interpolation_check(_standard(n), n, k) for n, k in cases]
    return CheckResult("weak_interpolation", all(r['holds'] for r in results),
                       ", ".join(f"({n},{k})" for n, k in cases))


@timed
def check_fiber(config: dict) -> CheckResult:
    exp3 = fiber_product_spread(SurfaceFunction(KIND_CONE, 3, FAMILY_EXPONENTIAL, -1.0, [0.3j, 0, 0]),
                                2.0, [0.5, 0.2, 0.1])
    exp2 = fiber_product_spread(SurfaceFunction(KIND_CONE, 2, FAMILY_EXPONENTIAL, -1.0, [0.2, 0.1]),
                                2.0, [0.5, 0.2])
    gauss3 = fiber_product_spread(SurfaceFunction(KIND_CONE, 3, FAMILY_GAUSSIAN, -1.0), 2.0, [0.5, 0.2, 0.1])
    ok = exp3 <= 1e-12 and exp2 <= 1e-12 and gauss3 >= 1e-3
    return CheckResult("fiber_characterization", ok,
                       f"exponential {exp3:.1e}/{exp2:.1e}, gaussian {gauss3:.3f}")


CHECKS = (
    check_constants, check_theorem1_closed_form, check_theorem1_monte_carlo, check_strictness,
    check_mixed_norms, check_sobolev, check_cone_weights, check_cone_equality, check_paraboloid,
    check_identities, check_optimizer, check_beckner, check_reproducibility,
    check_weak_interpolation, check_fiber,
)


def verify_all(profile: str = PROFILE_QUICK) -> VerifyReport:
    """검증 목록 전체 실행 (실패는 예외가 아니라 판정으로 기록)"""
    if profile not in PROFILE_CONFIG:
        raise ValueError(f"profile 은 quick 또는 full 이어야 합니다: {profile}")
    config = PROFILE_CONFIG[profile]
    report = VerifyReport(profile)
    for check in tqdm(CHECKS, desc="검증 진행"):
        try:
            result = check(config)
        except (ArithmeticError, ValueError) as e:
            logger.error(f"❌ {check.__name__} 실행 중 오류: {e}")
            result = CheckResult(check.__name__.removeprefix("check_"), False, f"오류: {e}")
        marker = "✅" if result.passed else "❌"
        logger.info(f"{marker} {result.name}: {result.detail} ({result.wall_time_seconds:.2f}s)")
        report.checks.append(result)
    return report
