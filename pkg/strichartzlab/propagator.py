#!/usr/bin/env python3
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import fftn, ifftn, fftshift, ifftshift

from .domain import GaussianProfile, GridFunction

logger = logging.getLogger(__name__)

# 경계 질량이 이 값을 넘으면 격자 결과를 신뢰할 수 없음으로 표시
BOUNDARY_MASS_LIMIT = 1e-10


def fourier_forward(f: GridFunction) -> GridFunction:
    """f̂(ω) = (2π)^{-n/2} ∫ e^{-iω·x} f(x) dx 의 이산 근사 (주파수 간격 π/L)"""
    N = f.points_per_axis
    scale = (f.space_step / math.sqrt(2.0 * math.pi)) ** f.n
    samples = fftshift(fftn(ifftshift(f.samples))) * scale
    dual_half_width = N * math.pi / (2.0 * f.half_width)
    return GridFunction(f.n, dual_half_width, N, samples, f.reliable)


def fourier_inverse(fhat: GridFunction) -> GridFunction:
    """fourier_forward 의 역변환 (주파수 격자 → 공간 격자)"""
    N = fhat.points_per_axis
    step = fhat.space_step
    scale = (N * step / math.sqrt(2.0 * math.pi)) ** fhat.n
    samples = fftshift(ifftn(ifftshift(fhat.samples))) * scale
    half_width = N * math.pi / (2.0 * fhat.half_width)
    return GridFunction(fhat.n, half_width, N, samples, fhat.reliable)


@dataclass(frozen=True, eq=False)
class EvolvedGaussian:
    """시간 t 에서의 u(t,x) = e^{A(t)|x|² + b(t)·x + C(t)}"""
    base: GaussianProfile
    t: float
    profile: GaussianProfile

    @property
    def A(self) -> complex:
        return self.profile.A

    @property
    def b(self) -> np.ndarray:
        return self.profile.b

    @property
    def C(self) -> complex:
        return self.profile.C

    @property
    def amplitude_factor(self) -> complex:
        """(1 − 4iAt)^{-n/2}, t 에 대해 연속인 branch (b = 0 이면 u(t,0) = e^C · 이 값)"""
        n, A, t = self.base.n, self.base.A, self.t
        return complex(np.exp(-0.5 * n * (np.log(-2.0 * A) + np.log(-2.0 * (1.0 / (4.0 * A) - 1j * t)))))

    def __call__(self, x) -> np.ndarray:
        return self.profile(x)


def evolved_parameters(g: GaussianProfile, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """여러 시각 t 에 대한 (A(t), b(t), C(t)) 를 한 번에 계산 (b(t) 의 shape: (len(t), n))"""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    fhat = g.fourier()
    alpha = fhat.A - 1j * t
    beta = fhat.b
    A_t = 1.0 / (4.0 * alpha)
    b_t = -1j * beta[None, :] / (2.0 * alpha[:, None])
    # 두 principal log 의 합은 t 에 대해 연속 (두 인자 모두 Re > 0)
    C_t = fhat.C - np.dot(beta, beta) / (4.0 * alpha) - 0.5 * g.n * np.log(-2.0 * alpha)
    zero = t == 0.0
    if np.any(zero):
        A_t[zero] = g.A
        b_t[zero] = g.b
        C_t[zero] = g.C
    return A_t, b_t, C_t


def evolve_gaussian(g: GaussianProfile, t: float) -> EvolvedGaussian:
    t = float(t)
    if t == 0.0:
        return EvolvedGaussian(g, t, g)
    A_t, b_t, C_t = evolved_parameters(g, t)
    return EvolvedGaussian(g, t, GaussianProfile(g.n, A_t[0], b_t[0], C_t[0]))


def free_multiplier(fhat: GridFunction, t: float) -> np.ndarray:
    """e^{-it|ω|²} (주파수 격자 위)"""
    return np.exp(-1j * t * fhat.radius_squared())


def evolve_from_transform(fhat: GridFunction, t: float, half_width: float) -> GridFunction:
    """이미 계산된 f̂ 로부터 u(t,·) 를 구하고 경계 질량으로 신뢰도를 표시"""
    u = fourier_inverse(fhat.copy_with(fhat.samples * free_multiplier(fhat, t)))
    u.half_width = half_width
    mass = u.boundary_mass()
    u.reliable = fhat.reliable and mass <= BOUNDARY_MASS_LIMIT
    if mass > BOUNDARY_MASS_LIMIT:
        logger.debug(f"⚠️ t={t:.6g} 에서 경계 질량 {mass:.3e} (격자 결과 신뢰 불가)")
    return u


def lens_transform(f: GridFunction, t: float) -> GridFunction:
    """ĝ_t = F[e^{i|y|²/4t} f] (주파수 격자)

    u(t,x) = (2it)^{-n/2} e^{i|x|²/4t} ĝ_t(x/2t) 이므로 |t| 가 커도 상자를 넓히지 않고
    |u(t,·)| 를 얻는다. 신뢰도는 주파수 상자의 경계 질량으로 표시한다.
    """
    t = float(t)
    if t == 0.0:
        raise ValueError("lens_transform 은 t ≠ 0 에서만 정의됩니다.")
    chirp = np.exp(1j * f.radius_squared() / (4.0 * t))
    ghat = fourier_forward(f.copy_with(f.samples * chirp))
    ghat.reliable = f.reliable and ghat.boundary_mass() <= BOUNDARY_MASS_LIMIT
    return ghat


def lens_chirp_resolved(f: GridFunction, t: float) -> bool:
    """상자 가장자리에서 chirp 위상 증가량이 셀당 π/2 이하인지"""
    return f.half_width * f.space_step / (2.0 * abs(t)) <= 0.5 * math.pi


def evolve_grid(f: GridFunction, t: float) -> GridFunction:
    """Fourier multiplier e^{-it|ω|²} 로 격자 데이터를 정확히 전파"""
    t = float(t)
    if t == 0.0:
        return f.copy_with(f.samples.copy())
    return evolve_from_transform(fourier_forward(f), t, f.half_width)


def gradient_norm(f: "GridFunction | GaussianProfile") -> float:
    """‖∇f‖₂ = ‖ |ω| f̂ ‖₂"""
    if isinstance(f, GaussianProfile):
        return math.sqrt(f.fourier().second_moment())
    if hasattr(f, 'gradient_norm'):
        return f.gradient_norm()
    fhat = fourier_forward(f)
    weighted = fhat.radius_squared() * np.abs(fhat.samples) ** 2
    return math.sqrt(fhat.cell_volume * float(np.sum(weighted)))
