#!/usr/bin/env python3
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .constants import SOBOLEV_CASES, admissible
from .domain import INF, DomainError, GaussianProfile, GridFunction, parse_exponent
from .propagator import (BOUNDARY_MASS_LIMIT, evolve_from_transform, evolved_parameters, fourier_forward,
                         lens_chirp_resolved, lens_transform)

logger = logging.getLogger(__name__)

GAUSSIAN_RTOL = 1e-9
GRID_RTOL = 1e-6
_EPS_FLOOR = 16 * np.finfo(float).eps


@dataclass(frozen=True)
class TimeQuadratureSpec:
    """t = t0 + s·tan θ 치환 후 θ ∈ (−π/2, π/2) 위의 Gauss-Legendre 적분 설정"""
    nodes: int = 32
    rtol: Optional[float] = None
    max_nodes: int = 4096
    workers: int = 1
    substitution: str = "tan"

    def tolerance(self, default: float) -> float:
        return default if self.rtol is None else self.rtol


def spatial_norm(u: GridFunction, r) -> float:
    """격자 측도 가중치를 포함한 Riemann 합 L^r 노름"""
    r = parse_exponent(r)
    if r is INF or not 1 <= r:
        raise ValueError(f"r 은 1 ≤ r < ∞ 이어야 합니다: r = {r}")
    return (u.cell_volume * float(np.sum(np.abs(u.samples) ** r))) ** (1.0 / r)


def gaussian_spatial_integral(A, b, C, r: float, n: int) -> np.ndarray:
    """∫ |e^{A|x|²+b·x+C}|^r dx (A, C: shape (m,), b: shape (m, n))"""
    neg = -np.real(A)
    rb = np.real(b)
    return (np.exp(r * np.real(C)) * (math.pi / (r * neg)) ** (n / 2)
            * np.exp(r * np.sum(rb * rb, axis=-1) / (4.0 * neg)))


def lebesgue_norm_gaussian(profile: GaussianProfile, p: float) -> float:
    """가우시안의 닫힌 형태 L^p (준)노름, p > 0"""
    if not p > 0:
        raise ValueError(f"p 는 양수여야 합니다: p = {p}")
    value = gaussian_spatial_integral(np.array([profile.A]), profile.b[None, :],
                                      np.array([profile.C]), p, profile.n)[0]
    return float(value) ** (1.0 / p)


def time_integral(integrand: Callable[[np.ndarray], np.ndarray], t0: float, scale: float,
                  rtol: float, spec: TimeQuadratureSpec) -> tuple[float, float, int]:
    """∫ F(t) dt 를 θ 공간 Gauss-Legendre 로 계산, 노드 수를 상대 변화 < rtol 까지 두 배로

    Returns:
        (값, 오차 추정 |I_2N − I_N|, 사용한 노드 수)
    """
    half = 0.5 * math.pi

    def rule(count: int) -> float:
        x, w = np.polynomial.legendre.leggauss(count)
        theta = half * x
        t = t0 + scale * np.tan(theta)
        jac = scale / np.cos(theta) ** 2
        return float(np.sum(w * half * jac * integrand(t)))

    count = spec.nodes
    previous = rule(count)
    while True:
        count *= 2
        current = rule(count)
        change = abs(current - previous)
        if change <= rtol * abs(current) or count >= spec.max_nodes:
            break
        previous = current
    if change > rtol * abs(current):
        logger.warning(f"⚠️ 시간 적분이 {count} 노드에서 수렴하지 않음 (상대 변화 {change / max(abs(current), 1e-300):.2e})")
    return current, max(change, _EPS_FLOOR * abs(current)), count


def check_exponents(n: int, q, r, allow_theorem1: bool = False) -> tuple:
    """허용 지수 확인: admissible, Sobolev-Strichartz 목록, 또는 Theorem 1 의 q = r = 2k"""
    q, r = parse_exponent(q), parse_exponent(r)
    if r is INF:
        raise ValueError("r = ∞ 는 지원하지 않습니다.")
    if admissible(q, r, n):
        return q, r
    if q is not INF:
        if any(c[:3] == (n, q, r) for c in SOBOLEV_CASES.values()):
            return q, r
        if allow_theorem1 and q == r and float(q / 2).is_integer():
            return q, r
    raise DomainError('not_admissible', q=q, r=r, n=n)


def _norm_from_integral(total: float, err: float, q: float) -> tuple[float, float]:
    if total <= 0.0:
        return 0.0, 0.0
    value = total ** (1.0 / q)
    return value, value * err / (q * total)


def _gaussian_strichartz(f: GaussianProfile, q: float, r: float, spec: TimeQuadratureSpec) -> tuple[float, float]:
    fhat = f.fourier()

    def integrand(t):
        A_t, b_t, C_t = evolved_parameters(f, t)
        return gaussian_spatial_integral(A_t, b_t, C_t, r, f.n) ** (q / r)

    total, err, count = time_integral(integrand, fhat.A.imag, abs(fhat.A.real),
                                      spec.tolerance(GAUSSIAN_RTOL), spec)
    logger.debug(f"ℹ️ Gaussian 경로: {count} 노드, ∫‖u‖_r^q dt = {total:.17g}")
    return _norm_from_integral(total, err, q)


def _trial_strichartz(f, q: float, r: float, spec: TimeQuadratureSpec) -> tuple[float, float]:
    t0, scale = f.time_scale()

    def integrand(t):
        return f.spatial_integral(t, r) ** (q / r)

    total, err, count = time_integral(integrand, t0, scale, spec.tolerance(GAUSSIAN_RTOL), spec)
    logger.debug(f"ℹ️ Trial 경로: {count} 노드, ∫‖u‖_r^q dt = {total:.17g}")
    return _norm_from_integral(total, err, q)


def _reliable_horizon(fhat: GridFunction, half_width: float, scale: float, sign: float) -> float:
    """경계 질량 경고가 처음 발생하는 |t| (발생하지 않으면 inf)"""
    def ok(t: float) -> bool:
        return evolve_from_transform(fhat, sign * t, half_width).reliable

    good, t = 0.0, scale
    for _ in range(48):
        if not ok(t):
            break
        good, t = t, 2.0 * t
    else:
        return math.inf
    bad = t
    for _ in range(30):
        mid = 0.5 * (good + bad)
        if ok(mid):
            good = mid
        else:
            bad = mid
    return good


def _grid_strichartz(f: GridFunction, q: float, r: float, spec: TimeQuadratureSpec) -> tuple[float, float]:
    """|t| ≤ 신뢰 구간은 FFT 전파, 그 밖은 lens 변환으로 같은 상자에서 slice 를 계산"""
    fhat = fourier_forward(f)
    density = np.abs(fhat.samples) ** 2
    mass = float(np.sum(density))
    if mass == 0.0:
        return 0.0, 0.0
    coords = fhat.coordinates()
    means = [float(np.sum(c * density)) / mass for c in coords]
    variance = sum(float(np.sum((c - m) ** 2 * density)) / mass for c, m in zip(coords, means)) / f.n
    scale = 1.0 / (4.0 * variance)

    if f.boundary_mass() > BOUNDARY_MASS_LIMIT:
        logger.warning("⚠️ 초기 데이터의 경계 질량이 이미 큽니다. 모든 시각에서 FFT 전파를 사용합니다.")
        t_plus = t_minus = math.inf
    else:
        t_plus = _reliable_horizon(fhat, f.half_width, scale, 1.0)
        t_minus = _reliable_horizon(fhat, f.half_width, scale, -1.0)
    for horizon in (t_plus, t_minus):
        if math.isfinite(horizon) and not lens_chirp_resolved(f, horizon):
            logger.warning(f"⚠️ 격자 경로: |t| = {horizon:.4g} 에서 lens chirp 가 격자에서 분해되지 않습니다. N 을 늘려 보세요.")
    unreliable = []
    far_exponent = f.n * (1.0 - 0.5 * r)

    def slice_integral(t: float) -> float:
        if -t_minus <= t <= t_plus:
            u = evolve_from_transform(fhat, t, f.half_width)
            return u.cell_volume * float(np.sum(np.abs(u.samples) ** r))
        ghat = lens_transform(f, t)
        if not ghat.reliable:
            unreliable.append(t)
        return abs(2.0 * t) ** far_exponent * ghat.cell_volume * float(np.sum(np.abs(ghat.samples) ** r))

    def integrand(ts):
        if spec.workers > 1:
            with ThreadPoolExecutor(max_workers=spec.workers) as pool:
                values = list(pool.map(slice_integral, ts))
        else:
            values = [slice_integral(t) for t in ts]
        return np.asarray(values) ** (q / r)

    total, err, count = time_integral(integrand, 0.0, scale, spec.tolerance(GRID_RTOL), spec)
    if unreliable:
        logger.warning(f"⚠️ 격자 경로: lens 변환 {len(unreliable)} 개 slice 에서 주파수 상자 경계 질량 초과")
    logger.debug(f"ℹ️ Grid 경로: {count} 노드, 전환 시각 (−{t_minus:.4g}, {t_plus:.4g}), "
                 f"∫‖u‖_r^q dt = {total:.17g} ± {err:.3e}")
    return _norm_from_integral(total, err, q)


def strichartz_norm(f, q, r, spec: Optional[TimeQuadratureSpec] = None,
                    allow_theorem1: bool = False) -> tuple[float, float]:
    """‖u‖_{L^q_t L^r_x} 와 오차 추정

    GaussianProfile 은 닫힌 형태의 공간 적분, TrialFunction 은 다항식×가우시안 정확 계산,
    GridFunction 은 시각별 전파 후 Riemann 합을 사용한다.
    """
    spec = spec or TimeQuadratureSpec()
    q, r = check_exponents(f.n, q, r, allow_theorem1)
    if q is INF:
        # r = 2 만 허용됨: 질량 보존
        return f.l2_norm(), 0.0
    if isinstance(f, GaussianProfile):
        return _gaussian_strichartz(f, q, r, spec)
    if isinstance(f, GridFunction):
        return _grid_strichartz(f, q, r, spec)
    if hasattr(f, 'spatial_integral'):
        return _trial_strichartz(f, q, r, spec)
    raise TypeError(f"지원하지 않는 입력 형식입니다: {type(f).__name__}")


def first_moment_cross_term(g: GridFunction) -> float:
    """∫∫ g(x)g(y) x·y dx dy = |∫ x g(x) dx|² (실수값 g)"""
    if not g.is_real():
        raise ValueError("first_moment_cross_term 은 실수값 함수만 받습니다.")
    values = g.samples.real
    moment = np.array([g.cell_volume * float(np.sum(c * values)) for c in g.coordinates()])
    return float(np.dot(moment, moment))
