#!/usr/bin/env python3
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .constants import KIND_CONE, KIND_PARABOLOID, KIND_SCHRODINGER, corollary_case
from .domain import DomainError, GaussianProfile, MonteCarloSpec, StrichartzCase
from .extension import FAMILY_EXPONENTIAL, SurfaceFunction, extension_ratio_report
from .mixed_norms import TimeQuadratureSpec, strichartz_norm
from .theorem1 import strichartz_corollary_report, theorem1_report
from .trial import DEFAULT_HERMITE_TERMS, TrialFunction

logger = logging.getLogger(__name__)

_THEOREM1 = {
    "t1_n1_k3": (1, 3),
    "t1_n2_k2": (2, 2),
    "t1_n1_k4": (1, 4),
    "t1_n2_k3": (2, 3),
    "t1_n1_k5": (1, 5),
}
FUNCTIONAL_IDS = tuple(_THEOREM1) + ("n1_q6_r6", "n1_q8_r4", "n2_q4_r4", "parab_n1_q6", "parab_n2_q4",
                                       "cone_n3_q4", "cone_n2_q6")

SCAN_DIRECTIONS = ("zero", "modulation", "translation", "scaling")

# 목적함수 평가용 Monte Carlo 기본값 (모든 평가에서 같은 seed = common random numbers)
OBJECTIVE_MC = MonteCarloSpec(samples=200_000)


def functional_dimension(functional_id: str) -> int:
    if functional_id in _THEOREM1:
        return _THEOREM1[functional_id][0]
    if functional_id in FUNCTIONAL_IDS:
        return corollary_case(functional_id).n
    raise DomainError('unknown_case', case_id=functional_id)


def cone_surface_function(trial: TrialFunction) -> SurfaceFunction:
    """trial 의 (A, b, C) 와 계수를 원뿔 위 g(r,ω) = (1 + Σ c_j L_j(2ar)) e^{Ar + b·ω + C} 로 옮긴다"""
    base = trial.base
    if np.any(base.b.real != 0):
        raise DomainError('cone_boost', re_b=base.b.real)
    return SurfaceFunction(KIND_CONE, trial.n, FAMILY_EXPONENTIAL, base.A, base.b, base.C,
                           radial_coeffs=trial.hermite_coeffs)


def ratio_objective(trial: TrialFunction, functional_id: str, mc: Optional[MonteCarloSpec] = None,
                    spec: Optional[TimeQuadratureSpec] = None) -> float:
    """trial 에 대한 sharp 부등식 비율 (1 이 최대)"""
    if trial.n != functional_dimension(functional_id):
        raise ValueError(f"{functional_id} 와 trial 차원 n = {trial.n} 이 맞지 않습니다.")
    if functional_id in _THEOREM1:
        n, k = _THEOREM1[functional_id]
        report = theorem1_report(trial, StrichartzCase(n, k), mc or OBJECTIVE_MC, spec)
        return report.ratio
    case = corollary_case(functional_id)
    if case.kind == KIND_SCHRODINGER:
        return strichartz_corollary_report(trial, functional_id, spec).ratio
    if case.kind == KIND_PARABOLOID:
        # ‖ĝdσ‖_q^q = (2π)^{-q/2}‖u‖_q^q, ‖g‖_{L²(dσ)} = ‖f̂‖₂
        norm, _ = strichartz_norm(trial, case.q, case.q, spec)
        lhs = (2.0 * math.pi) ** (-case.q / 2) * norm ** case.q
        return lhs / (case.closed_form * trial.l2_norm()) ** case.q
    if case.kind == KIND_CONE:
        return extension_ratio_report(cone_surface_function(trial), functional_id, spec).ratio
    raise DomainError('unknown_case', case_id=functional_id)


# --- Nelder-Mead ----------------------------------------------------------------

@dataclass(frozen=True)
class SimplexParams:
    """초기 단체 크기와 종료 조건. adaptive=True 이면 차원 의존 계수(Gao-Han)를 쓴다."""
    step: float = 0.1
    tol: float = 1e-6
    adaptive: bool = True

    def coefficients(self, dim: int) -> tuple[float, float, float, float]:
        """(반사 α, 확장 γ, 수축 β, 축소 δ)"""
        if self.adaptive and dim > 1:
            return 1.0, 1.0 + 2.0 / dim, 0.75 - 1.0 / (2.0 * dim), 1.0 - 1.0 / dim
        return 1.0, 2.0, 0.5, 0.5


class _BudgetExhausted(Exception):
    pass


@dataclass
class SimplexRun:
    x: np.ndarray
    value: float
    evaluations: int
    trace: list[float]
    exhausted: bool
    converged: bool


def nelder_mead(func: Callable[[np.ndarray], float], x_start, budget: int,
                params: Optional[SimplexParams] = None) -> SimplexRun:
    """func 를 최소화. trace 는 평가마다의 best-so-far 값 (단조 비증가)"""
    params = params or SimplexParams()
    x_start = np.asarray(x_start, dtype=float)
    dim = len(x_start)
    alpha, gamma, beta, delta = params.coefficients(dim)
    trace: list[float] = []
    best = [x_start, math.inf]

    def evaluate(x: np.ndarray) -> float:
        if len(trace) >= budget:
            raise _BudgetExhausted
        value = func(x)
        if value < best[1]:
            best[0], best[1] = np.copy(x), value
        trace.append(best[1])
        return value

    exhausted = converged = False
    try:
        res = [[x_start, evaluate(x_start)]]
        for i in range(dim):
            x = np.copy(x_start)
            x[i] += params.step * (abs(x[i]) if x[i] != 0 else 1.0)
            res.append([x, evaluate(x)])

        while True:
            res.sort(key=lambda item: item[1])
            diameter = max(np.linalg.norm(item[0] - res[0][0]) for item in res[1:])
            if diameter < params.tol:
                converged = True
                break

            x0 = np.mean([item[0] for item in res[:-1]], axis=0)
            worst = res[-1][0]

            xr = x0 + alpha * (x0 - worst)
            rscore = evaluate(xr)
            if res[0][1] <= rscore < res[-2][1]:
                res[-1] = [xr, rscore]
                continue

            if rscore < res[0][1]:
                xe = x0 + gamma * (xr - x0)
                escore = evaluate(xe)
                res[-1] = [xe, escore] if escore < rscore else [xr, rscore]
                continue

            # 바깥/안쪽 수축
            if rscore < res[-1][1]:
                xc = x0 + beta * (xr - x0)
                cscore = evaluate(xc)
                if cscore <= rscore:
                    res[-1] = [xc, cscore]
                    continue
            else:
                xc = x0 + beta * (worst - x0)
                cscore = evaluate(xc)
                if cscore < res[-1][1]:
                    res[-1] = [xc, cscore]
                    continue

            x1 = res[0][0]
            res = [res[0]] + [[x1 + delta * (item[0] - x1), evaluate(x1 + delta * (item[0] - x1))]
                              for item in res[1:]]
    except _BudgetExhausted:
        exhausted = True
    return SimplexRun(best[0], best[1], len(trace), trace, exhausted, converged)


# --- 탐색 ------------------------------------------------------------------------

@dataclass
class SearchResult:
    functional_id: str
    best: TrialFunction
    ratio: float
    trace: list[float] = field(default_factory=list)
    evaluations: int = 0
    exhausted: bool = False
    stages: int = 0

    @property
    def coefficient_norm(self) -> float:
        return float(np.linalg.norm(self.best.hermite_coeffs))


def optimize(functional_id: str, init: TrialFunction, budget: int = 500,
             params: Optional[SimplexParams] = None, stages: int = 4,
             mc: Optional[MonteCarloSpec] = None,
             spec: Optional[TimeQuadratureSpec] = None) -> SearchResult:
    """(Re A, Im A, Re b, Im b, Re c, Im c) 공간의 단계적 Nelder-Mead

    단계 사이에 trial 을 모멘트 맞춤 가우시안 틀로 재전개(recentered)하고,
    비율이 떨어지지 않을 때만 받아들인다. trace 는 best-so-far 비율이다.
    """
    if budget < 1:
        raise ValueError(f"budget 은 1 이상이어야 합니다: {budget}")
    if not init.base.A.real < 0:
        raise DomainError('covariance', re_a=init.base.A.real)
    n, terms = init.n, len(init.hermite_coeffs)
    mc = mc or OBJECTIVE_MC

    def objective(vector: np.ndarray) -> float:
        try:
            return 1.0 - ratio_objective(TrialFunction.from_vector(vector, n, terms), functional_id, mc, spec)
        except DomainError:
            return math.inf

    best = TrialFunction(init.base, init.hermite_coeffs)
    best_ratio = ratio_objective(best, functional_id, mc, spec)
    trace, used = [best_ratio], 1
    if best.is_gaussian:
        logger.info(f"ℹ️ 초기값이 이미 가우시안입니다 (ratio = {best_ratio:.12g}).")
        return SearchResult(functional_id, best, best_ratio, trace, used, False, 0)

    exhausted = False
    stage = 0
    for stage in range(1, stages + 1):
        remaining = budget - used
        if remaining <= 0:
            exhausted = True
            break
        stage_budget = remaining if stage == stages else max(remaining // (stages - stage + 1), 1)
        run = nelder_mead(objective, best.to_vector(), stage_budget, params)
        used += run.evaluations
        trace.extend(max(best_ratio, 1.0 - value) for value in run.trace)
        if 1.0 - run.value > best_ratio:
            best = TrialFunction.from_vector(run.x, n, terms)
            best_ratio = 1.0 - run.value
        logger.debug(f"ℹ️ {functional_id} 단계 {stage}: ratio = {best_ratio:.12g}, ‖c‖ = "
                     f"{np.linalg.norm(best.hermite_coeffs):.3g}, 평가 {used}/{budget}")
        if run.exhausted and stage == stages:
            exhausted = True
            break

        if used >= budget:
            exhausted = True
            break
        candidate = best.recentered()
        if candidate is best:
            continue
        candidate_ratio = ratio_objective(candidate, functional_id, mc, spec)
        used += 1
        if candidate_ratio >= best_ratio - 1e-9:
            best, best_ratio = candidate, max(best_ratio, candidate_ratio)
        trace.append(best_ratio)
        if run.converged and best.is_gaussian:
            break

    if exhausted:
        logger.warning(f"⚠️ {functional_id}: 평가 예산 {budget} 소진 (ratio = {best_ratio:.12g})")
    return SearchResult(functional_id, best, best_ratio, trace, used, exhausted, stage)


@dataclass
class ScanResult:
    functional_id: str
    direction: str
    points: list[tuple[float, float]]
    second_difference: float

    @property
    def max_ratio(self) -> float:
        return max(ratio for _, ratio in self.points)


def _perturbed(base: GaussianProfile, direction: Union[int, str], eps: float,
               terms: int) -> TrialFunction:
    """주파수 쪽 base 를 direction 으로 ε 만큼 움직인 trial (방향은 공간 쪽 대칭 기준)"""
    e1 = np.zeros(base.n)
    e1[0] = 1.0
    if isinstance(direction, int):
        coeffs = np.zeros(max(terms, direction), dtype=complex)
        coeffs[direction - 1] = eps
        return TrialFunction(base, coeffs)
    if direction == "zero":
        return TrialFunction.gaussian(base, terms)
    if direction == "modulation":
        return TrialFunction.gaussian(base.translated(eps * e1), terms)
    if direction == "translation":
        return TrialFunction.gaussian(base.modulated(-eps * e1), terms)
    if direction == "scaling":
        return TrialFunction.gaussian(base.scaled(math.exp(-eps)), terms)
    raise ValueError(f"알 수 없는 scan 방향입니다: {direction}")


def parse_direction(text: "str | int") -> "int | str":
    """'4', 'H4' → 4, 나머지는 이름 그대로"""
    if isinstance(text, int):
        direction = text
    else:
        value = text.strip()
        if value.upper().startswith("H"):
            value = value[1:]
        if value.isdigit():
            direction = int(value)
        elif text in SCAN_DIRECTIONS:
            return text
        else:
            raise ValueError(f"알 수 없는 scan 방향입니다: {text}")
    if direction < 1:
        raise ValueError(f"Hermite 방향은 1 이상이어야 합니다: {direction}")
    return direction


def perturbation_scan(functional_id: str, direction: "int | str", epsilons,
                      base: Optional[GaussianProfile] = None, terms: int = DEFAULT_HERMITE_TERMS,
                      mc: Optional[MonteCarloSpec] = None,
                      spec: Optional[TimeQuadratureSpec] = None) -> ScanResult:
    """가우시안에서 한 방향으로 섭동한 비율 곡선과 0 에서의 중심 2차 차분"""
    direction = parse_direction(direction)
    epsilons = sorted(float(e) for e in epsilons)
    if 0.0 not in epsilons:
        raise ValueError("ε 목록에 0 이 있어야 합니다.")
    symmetric = [e for e in epsilons if e > 0 and -e in epsilons]
    if not symmetric:
        raise ValueError("ε 목록은 0 에 대해 대칭인 쌍을 포함해야 합니다.")
    n = functional_dimension(functional_id)
    base = base or GaussianProfile(n, -0.5)
    mc = mc or OBJECTIVE_MC
    ratios = {e: ratio_objective(_perturbed(base, direction, e, terms), functional_id, mc, spec)
              for e in epsilons}
    h = min(symmetric)
    second = (ratios[h] + ratios[-h] - 2.0 * ratios[0.0]) / (h * h)
    label = f"H{direction}" if isinstance(direction, int) else direction
    return ScanResult(functional_id, label, [(e, ratios[e]) for e in epsilons], second)
