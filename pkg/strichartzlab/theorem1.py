#!/usr/bin/env python3
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate
from scipy.special import gammaln
from tqdm import tqdm

from .constants import (corollary_case, kernel_K_centered, reversed_hls_constant, sharp_constant,
                        sobolev_case, weak_exponents)
from .domain import (MODE_EQUALITY, MODE_REPORT, MODE_STRICT, DomainError, GaussianProfile, GridFunction,
                     MonteCarloSpec, RatioReport, StrichartzCase, VERDICT_PASS)
from .mixed_norms import TimeQuadratureSpec, lebesgue_norm_gaussian, strichartz_norm
from .propagator import fourier_forward, gradient_norm
from .timing_decorator import timed
from .trial import TrialFunction

logger = logging.getLogger(__name__)

Factor = Union[GaussianProfile, GridFunction, TrialFunction]


@dataclass(eq=False)
class ProductTransform:
    """F̂(η) = Π_i f̂(η_i) (f̂ 는 주파수 쪽 GaussianProfile, GridFunction 또는 TrialFunction)"""
    factor: Factor
    k: int

    @classmethod
    def from_initial_data(cls, f, k: int) -> "ProductTransform":
        """공간 쪽 초기 데이터 f 로부터 f̂ 를 만든다 (TrialFunction 은 이미 주파수 쪽)"""
        if isinstance(f, GaussianProfile):
            return cls(f.fourier(), k)
        if isinstance(f, GridFunction):
            return cls(fourier_forward(f), k)
        return cls(f, k)

    @property
    def n(self) -> int:
        return self.factor.n

    def factor_mass(self) -> float:
        """‖f̂‖₂² (한 인자의 정확한 질량)"""
        return self.factor.l2_norm() ** 2

    def total_mass(self) -> float:
        """Z = ∫|F̂|² = ‖f̂‖₂^{2k}"""
        return self.factor_mass() ** self.k

    def __call__(self, eta) -> np.ndarray:
        eta = np.asarray(eta, dtype=float)
        values = np.ones(eta.shape[:-2], dtype=complex)
        for i in range(self.k):
            values = values * _evaluate_factor(self.factor, eta[..., i, :])
        return values


def _evaluate_factor(factor: Factor, omega: np.ndarray) -> np.ndarray:
    if isinstance(factor, GridFunction):
        # 가장 가까운 격자점 값
        step = factor.space_step
        N = factor.points_per_axis
        idx = np.clip(np.rint(omega / step).astype(int) + N // 2, 0, N - 1)
        return factor.samples[tuple(idx[..., i] for i in range(factor.n))]
    return factor(omega)


# --- Monte Carlo -----------------------------------------------------------------

def _gaussian_sampler(profile: GaussianProfile):
    """|f̂|² ∝ N(μ, σ² I) 에서 정확히 표본 추출"""
    mean = profile.mean()
    sigma = math.sqrt(profile.variance())

    def draw(rng: np.random.Generator, count: int, k: int) -> tuple[np.ndarray, Optional[np.ndarray]]:
        return mean + sigma * rng.standard_normal((count, k, profile.n)), None
    return draw


def _grid_sampler(grid: GridFunction):
    """축별 주변분포의 역 CDF 표(셀 경계 사이 선형 보간)에서 표본 추출

    제안 분포는 주변분포의 곱이므로 |f̂|² 와의 비(셀 단위)를 가중치로 반환한다.
    분리 가능한 |f̂|² (n = 1 포함) 에서는 가중치가 1 이다.
    """
    density = np.abs(grid.samples) ** 2
    total = float(np.sum(density))
    if not total > 0:
        raise ValueError("정규화할 수 없는 인자입니다 (‖f̂‖₂ = 0).")
    n, N, step = grid.n, grid.points_per_axis, grid.space_step
    edges = (np.arange(N + 1) - N // 2 - 0.5) * step
    marginals, tables = [], []
    for axis in range(n):
        marginal = np.sum(density, axis=tuple(i for i in range(n) if i != axis))
        cdf = np.concatenate(([0.0], np.cumsum(marginal) / total))
        cdf[-1] = 1.0
        marginals.append(marginal)
        tables.append(cdf)

    def draw(rng: np.random.Generator, count: int, k: int):
        u = rng.random((count, k, n))
        points = np.empty_like(u)
        for axis in range(n):
            points[..., axis] = np.interp(u[..., axis], tables[axis], edges)
        index = np.clip(np.floor((points - edges[0]) / step).astype(int), 0, N - 1)
        if n == 1:
            return points, None
        proposal = np.prod([marginals[axis][index[..., axis]] for axis in range(n)], axis=0)
        mass = density[tuple(index[..., axis] for axis in range(n))] * total ** (n - 1)
        ratio = np.divide(mass, proposal, out=np.zeros_like(mass), where=proposal > 0)
        return points, np.prod(ratio, axis=1)
    return draw


def _trial_sampler(trial: TrialFunction):
    """기저 가우시안 |G|² 에서 추출하고 Π|p(η_i)|² 를 가중치로 반환"""
    base_draw = _gaussian_sampler(trial.base)
    p = trial.poly()

    def draw(rng: np.random.Generator, count: int, k: int):
        eta, _ = base_draw(rng, count, k)
        weights = np.prod(np.abs(p(eta[..., 0])) ** 2, axis=1)
        return eta, weights
    return draw


def _sampler(factor: Factor):
    if isinstance(factor, GaussianProfile):
        return _gaussian_sampler(factor)
    if isinstance(factor, GridFunction):
        return _grid_sampler(factor)
    if isinstance(factor, TrialFunction):
        return _trial_sampler(factor)
    raise TypeError(f"지원하지 않는 인자 형식입니다: {type(factor).__name__}")


def _proposal_mass(factor: Factor) -> float:
    """제안 분포 정규화 상수 (한 인자)"""
    if isinstance(factor, TrialFunction):
        return factor.base.l2_norm() ** 2
    return factor.l2_norm() ** 2


def _chunk_statistics(child: np.random.SeedSequence, count: int, draw, k: int, power: float) -> tuple[int, float, float]:
    """한 chunk 의 (표본 수, 평균, 편차 제곱합)"""
    rng = np.random.default_rng(child)
    eta, weights = draw(rng, count, k)
    values = kernel_K_centered(eta) ** power
    if weights is not None:
        values = values * weights
    mean = float(np.mean(values))
    return count, mean, float(np.sum((values - mean) ** 2))


def _combine(chunks: list[tuple[int, float, float]]) -> tuple[int, float, float]:
    """Chan 병렬 분산 결합 (chunk 순서 고정)"""
    n_total, mean, m2 = 0, 0.0, 0.0
    for count, chunk_mean, chunk_m2 in chunks:
        combined = n_total + count
        delta = chunk_mean - mean
        mean = mean + delta * count / combined
        m2 = m2 + chunk_m2 + delta * delta * n_total * count / combined
        n_total = combined
    return n_total, mean, m2


def sample_kernel_power(pt: ProductTransform, power: float, mc: MonteCarloSpec,
                        workers: int = 1) -> tuple[float, float]:
    """제안 분포 아래 (가중치 × K^power) 의 평균과 표준오차

    chunk i 는 SeedSequence(seed).spawn 의 i 번째 자식 스트림을 사용하므로
    결과는 worker 수와 무관하다.
    """
    draw = _sampler(pt.factor)
    counts = mc.chunk_counts()
    children = np.random.SeedSequence(mc.seed).spawn(len(counts))

    def run(i: int):
        return _chunk_statistics(children[i], counts[i], draw, pt.k, power)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(tqdm(pool.map(run, range(len(counts))), total=len(counts),
                               desc="Monte Carlo chunk", disable=len(counts) < 8))
    else:
        chunks = [run(i) for i in tqdm(range(len(counts)), desc="Monte Carlo chunk", disable=len(counts) < 8)]
    total, mean, m2 = _combine(chunks)
    variance = m2 / (total - 1) if total > 1 else 0.0
    return mean, math.sqrt(variance / total)


def _check_pt(pt: ProductTransform, case: StrichartzCase) -> float:
    if not case.is_theorem1:
        raise ValueError("Theorem 1 경우 (n,k) 가 필요합니다.")
    if pt.k != case.k or pt.n != case.n:
        raise ValueError(f"ProductTransform (n={pt.n}, k={pt.k}) 과 case (n={case.n}, k={case.k}) 가 다릅니다.")
    power = case.kernel_power
    if power < 0:
        raise DomainError('kernel_power', n=case.n, k=case.k, power=power)
    return power


def kernel_moment(pt: ProductTransform, case: StrichartzCase, mc: MonteCarloSpec,
                  workers: int = 1) -> tuple[float, float]:
    """|F̂|²/Z 아래 K^power 의 평균과 표준오차"""
    power = _check_pt(pt, case)
    mean, stderr = sample_kernel_power(pt, power, mc, workers)
    # TrialFunction 은 기저 가우시안에서 추출하므로 질량비를 보정
    factor = (_proposal_mass(pt.factor) / pt.factor_mass()) ** pt.k
    return mean * factor, stderr * factor


def rhs_functional(pt: ProductTransform, case: StrichartzCase, mc: MonteCarloSpec,
                   workers: int = 1) -> tuple[float, float]:
    """C_{n,k} ∫ |F̂(η)|² K(η)^{(n(k−1)−2)/2} dη 와 표준오차"""
    power = _check_pt(pt, case)
    constant = sharp_constant(case.n, case.k)
    if power == 0:
        return constant * pt.total_mass(), 0.0
    mean, stderr = sample_kernel_power(pt, power, mc, workers)
    scale = constant * _proposal_mass(pt.factor) ** pt.k
    logger.debug(f"ℹ️ rhs Monte Carlo: {mc.samples} 표본, E = {mean:.10g} ± {stderr:.3g}")
    return scale * mean, scale * stderr


def rhs_functional_exact(profile: GaussianProfile, case: StrichartzCase) -> float:
    """가우시안 인자의 카이 모멘트 닫힌 형태: E[K^p] = (2σ²)^p Γ(m/2+p)/Γ(m/2)"""
    if not case.is_theorem1:
        raise ValueError("Theorem 1 경우 (n,k) 가 필요합니다.")
    fhat = profile.fourier()
    pt = ProductTransform(fhat, case.k)
    power = _check_pt(pt, case)
    m = case.n * (case.k - 1)
    log_moment = power * math.log(2.0 * fhat.variance()) + gammaln(m / 2 + power) - gammaln(m / 2)
    return sharp_constant(case.n, case.k) * pt.total_mass() * math.exp(log_moment)


def rhs_functional_quadrature(pt: ProductTransform, case: StrichartzCase, nodes: int = 12) -> float:
    """텐서곱 Gauss-Hermite 교차 검증 (nk ≤ 6)"""
    power = _check_pt(pt, case)
    dims = case.n * case.k
    if dims > 6:
        raise ValueError(f"텐서곱 구적은 nk ≤ 6 에서만 지원합니다: nk = {dims}")
    if isinstance(pt.factor, GridFunction):
        raise ValueError("텐서곱 구적은 가우시안/Trial 인자만 지원합니다.")
    base = pt.factor.base if isinstance(pt.factor, TrialFunction) else pt.factor
    y, w = np.polynomial.hermite.hermgauss(nodes)
    mean, sigma = base.mean(), math.sqrt(base.variance())
    points = np.array(list(itertools.product(y, repeat=dims)))
    weights = np.prod(np.array(list(itertools.product(w, repeat=dims))), axis=1) / math.pi ** (dims / 2)
    eta = np.tile(mean, case.k)[None, :] + math.sqrt(2.0) * sigma * points
    eta = eta.reshape(-1, case.k, case.n)
    values = kernel_K_centered(eta) ** power
    if isinstance(pt.factor, TrialFunction):
        values = values * np.prod(np.abs(pt.factor.poly()(eta[..., 0])) ** 2, axis=1)
    mass = base.l2_norm() ** (2 * case.k)
    return sharp_constant(case.n, case.k) * mass * float(np.sum(weights * values))


# --- 보고서 ---------------------------------------------------------------------

def _is_gaussian_input(f) -> bool:
    if isinstance(f, GaussianProfile):
        return True
    return isinstance(f, TrialFunction) and f.is_gaussian


@timed
def theorem1_report(f, case: StrichartzCase, mc: Optional[MonteCarloSpec] = None,
                    quad: Optional[TimeQuadratureSpec] = None, tolerance: float = 1e-8,
                    workers: int = 1, mode: Optional[str] = None) -> RatioReport:
    """lhs = ‖u‖_{L^{2k}}^{2k}, rhs = Theorem 1 우변"""
    mc = mc or MonteCarloSpec()
    q = 2 * case.k
    norm, norm_err = strichartz_norm(f, q, q, quad, allow_theorem1=True)
    lhs = norm ** q
    lhs_err = q * norm ** (q - 1) * norm_err
    pt = ProductTransform.from_initial_data(f, case.k)
    rhs, rhs_err = rhs_functional(pt, case, mc, workers)
    if mode is None:
        mode = MODE_EQUALITY if _is_gaussian_input(f) else MODE_STRICT
    report = RatioReport(lhs, rhs, lhs_err, rhs_err, expected=1.0 if mode == MODE_EQUALITY else None,
                         tolerance=tolerance, mode=mode)
    if mode == MODE_EQUALITY:
        report.widen_tolerance()
    if rhs_err > 0:
        report.notes.append(f"Monte Carlo {mc.samples} 표본, seed {mc.seed}, chunk {mc.chunk_size}")
    if mode == MODE_STRICT:
        report.notes.append("엄격 부등식 판정: ratio < 1 − 3·err")
        if report.ratio < 1.0 and report.verdict != VERDICT_PASS:
            logger.warning(f"⚠️ ratio {report.ratio:.10g} 가 1 보다 작지만 오차 여유(3·err)를 넘지 못함. --samples 를 늘려 보세요.")
    return report


def _first_frequency_moment(f) -> float:
    if isinstance(f, GaussianProfile):
        return float(np.linalg.norm(f.fourier().mean()))
    if isinstance(f, TrialFunction):
        return float(np.linalg.norm(f.base.mean())) if f.is_gaussian else math.nan
    return math.nan


@timed
def sobolev_strichartz_report(f, case_id: str, spec: Optional[TimeQuadratureSpec] = None,
                              tolerance: float = 1e-6) -> RatioReport:
    """lhs = ‖u‖_{L^q_t L^r_x}, rhs = C·‖∇f‖₂^α·‖f‖₂^β"""
    n, q, r, alpha, beta = sobolev_case(case_id)
    if f.n != n:
        raise ValueError(f"{case_id} 는 n = {n} 경우입니다 (입력 n = {f.n}).")
    lhs, lhs_err = strichartz_norm(f, q, r, spec)
    rhs = corollary_case(case_id).closed_form * gradient_norm(f) ** alpha * f.l2_norm() ** beta
    if _is_gaussian_input(f):
        boosted = _first_frequency_moment(f) > 1e-12
        if boosted:
            report = RatioReport(lhs, rhs, lhs_err, 0.0, expected=None, tolerance=tolerance, mode=MODE_REPORT)
            report.notes.append("1차 주파수 모멘트가 0 이 아닌 가우시안: 기대값 없이 비율만 보고")
            return report
        return RatioReport(lhs, rhs, lhs_err, 0.0, expected=1.0, tolerance=tolerance, mode=MODE_EQUALITY)
    return RatioReport(lhs, rhs, lhs_err, 0.0, expected=None, tolerance=tolerance, mode=MODE_STRICT)


def strichartz_corollary_report(f, case_id: str, spec: Optional[TimeQuadratureSpec] = None,
                                tolerance: float = 1e-8) -> RatioReport:
    """‖u‖_{L^q_t L^r_x} / ‖f‖₂ 를 표의 상수와 비교 (n1_q6_r6, n1_q8_r4, n2_q4_r4)"""
    case = corollary_case(case_id)
    if case.kind != "schrodinger":
        raise DomainError('unknown_case', case_id=case_id)
    if f.n != case.n:
        raise ValueError(f"{case_id} 는 n = {case.n} 경우입니다 (입력 n = {f.n}).")
    lhs, lhs_err = strichartz_norm(f, case.q, case.r, spec)
    mode = MODE_EQUALITY if _is_gaussian_input(f) else MODE_STRICT
    return RatioReport(lhs, f.l2_norm() * case.closed_form, lhs_err, 0.0,
                       expected=1.0 if mode == MODE_EQUALITY else None, tolerance=tolerance, mode=mode)


# --- 보조 검사 ------------------------------------------------------------------

def weak_interpolation_check(profile: GaussianProfile, n: int, k: int) -> dict:
    """Hölder 단계 ‖f̂‖_p^{2k} ≤ ‖f̂‖_r^4 ‖f̂‖_2^{2k−4} 를 가우시안에서 닫힌 형태로 확인"""
    if profile.n != n:
        raise ValueError(f"profile 차원 {profile.n} 과 n = {n} 이 다릅니다.")
    p, r = weak_exponents(n, k)
    fhat = profile.fourier()
    lhs = lebesgue_norm_gaussian(fhat, p) ** (2 * k)
    rhs = lebesgue_norm_gaussian(fhat, r) ** 4 * lebesgue_norm_gaussian(fhat, 2.0) ** (2 * k - 4)
    return {'p': p, 'r': r, 'lhs': lhs, 'rhs': rhs, 'holds': lhs <= rhs * (1 + 1e-12)}


def _tan_quad(func: Callable[[float], float], lo: float, hi: float, limit: int) -> tuple[float, float]:
    """∫_lo^hi func(y) dy, y = tan φ 치환으로 무한 끝점을 유한 구간으로 옮긴다"""
    def mapped(phi: float) -> float:
        return func(math.tan(phi)) / math.cos(phi) ** 2

    return integrate.quad(mapped, math.atan(lo), math.atan(hi), limit=limit, epsabs=1e-13, epsrel=1e-11)


def reversed_hls_ratio(h, lam: float = 1.0, limit: int = 200) -> tuple[float, float]:
    """∫∫|x−y|^λ h(x)h(y) dx dy / (C·‖h‖_{2/(2+λ)}²), n = 1, 적응형 1차원 구적

    두 단계 모두 tan 치환한 유한 구간에서 적분하고, 안쪽 적분은 꺾이는 점 y = x 에서 나눈다.
    안쪽 절대 오차의 최댓값 × ∫|h| 를 바깥 오차에 더한다.
    """
    if not lam > 0:
        raise ValueError(f"λ 는 양수여야 합니다: λ = {lam}")
    p = 2.0 / (2.0 + lam)
    inner_err = [0.0]

    def inner(x: float) -> float:
        left, left_err = _tan_quad(lambda y: (x - y) ** lam * h(y), -np.inf, x, limit)
        right, right_err = _tan_quad(lambda y: (y - x) ** lam * h(y), x, np.inf, limit)
        inner_err[0] = max(inner_err[0], left_err + right_err)
        return left + right

    pairing, pairing_err = _tan_quad(lambda x: h(x) * inner(x), -np.inf, np.inf, limit)
    absolute, _ = _tan_quad(lambda x: abs(h(x)), -np.inf, np.inf, limit)
    mass, mass_err = _tan_quad(lambda x: abs(h(x)) ** p, -np.inf, np.inf, limit)
    pairing_err += inner_err[0] * absolute
    denom = reversed_hls_constant(1, lam) * mass ** (2.0 / p)
    ratio = pairing / denom
    err = abs(ratio) * (pairing_err / abs(pairing) + (2.0 / p) * mass_err / mass)
    return ratio, err
