#!/usr/bin/env python3
import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.hermite import herm2poly
from scipy.special import binom, gamma

from .domain import DomainError, GaussianProfile

logger = logging.getLogger(__name__)

DEFAULT_HERMITE_TERMS = 6


def gaussian_poly_integral(coeffs, a, beta):
    """∫_R q(ω) e^{−aω² + βω} dω 의 닫힌 형태 (Re a > 0)

    q 는 오름차순 계수(또는 Polynomial). a, beta 는 같은 shape 로 broadcast 된다.
    """
    q = np.asarray(coeffs.coef if isinstance(coeffs, Polynomial) else coeffs, dtype=complex)
    a = np.asarray(a, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    mu = beta / (2.0 * a)
    degree = len(q) - 1
    moments = []
    for l in range(degree + 1):
        moments.append(gamma((l + 1) / 2) * a ** (-(l + 1) / 2) if l % 2 == 0 else np.zeros_like(a))
    total = np.zeros(np.broadcast(a, beta).shape, dtype=complex)
    # Horner: Σ_d r_d μ^d, r_d = Σ_{j≥d} q_j C(j,d) M_{j−d}
    for d in range(degree, -1, -1):
        r_d = sum(q[j] * binom(j, d) * moments[j - d] for j in range(d, degree + 1))
        total = total * mu + r_d
    return np.exp(beta * beta / (4.0 * a)) * total


def _conj(p: Polynomial) -> Polynomial:
    return Polynomial(np.conj(p.coef))


@dataclass(eq=False)
class TrialFunction:
    """f̂(ω) = (1 + Σ_j c_j H_j(s)) G(ω), s = √(−2 Re Â)(ω₁ − μ₁)

    Hermite 인자는 첫 번째 축에만 걸리므로 u(t,x) 는 축별 곱으로 분해된다.
    normalize=True 이면 ‖f̂‖₂ = 1 로 사영한다.
    """
    base: GaussianProfile
    hermite_coeffs: np.ndarray
    normalize: bool = True

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.hermite_coeffs, dtype=complex))
        self.hermite_coeffs = coeffs
        if self.normalize:
            norm = self.l2_norm()
            if norm > 0:
                self.base = GaussianProfile(self.base.n, self.base.A, self.base.b,
                                            self.base.C - math.log(norm))

    @classmethod
    def gaussian(cls, base: GaussianProfile, terms: int = DEFAULT_HERMITE_TERMS, normalize: bool = True):
        return cls(base, np.zeros(terms, dtype=complex), normalize)

    @classmethod
    def from_space_profile(cls, profile: GaussianProfile, coeffs, normalize: bool = True):
        return cls(profile.fourier(), coeffs, normalize)

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def is_gaussian(self) -> bool:
        return not np.any(self.hermite_coeffs)

    @property
    def alpha(self) -> float:
        return math.sqrt(-2.0 * self.base.A.real)

    @property
    def center(self) -> float:
        return self.base.b[0].real / (-2.0 * self.base.A.real)

    def poly_s(self) -> Polynomial:
        return Polynomial(herm2poly(np.concatenate(([1.0 + 0j], self.hermite_coeffs))))

    def poly(self) -> Polynomial:
        """ω₁ 에 대한 다항식 p(ω₁)"""
        return self.poly_s()(Polynomial([-self.alpha * self.center, self.alpha]))

    def with_coeffs(self, coeffs) -> "TrialFunction":
        return TrialFunction(self.base, coeffs, self.normalize)

    def evaluate(self, omega) -> np.ndarray:
        omega = np.asarray(omega, dtype=float)
        if self.n == 1 and (omega.ndim == 0 or omega.shape[-1] != 1):
            omega = omega[..., None]
        return self.poly()(omega[..., 0]) * self.base(omega)

    def __call__(self, omega) -> np.ndarray:
        return self.evaluate(omega)

    # --- 노름 -------------------------------------------------------------

    def _axis_masses(self) -> tuple[np.ndarray, np.ndarray]:
        """축 i ≥ 2 의 ∫|G_i|² 와 ∫ω²|G_i|²"""
        neg = -2.0 * self.base.A.real
        rb = self.base.b[1:].real
        mass = np.sqrt(math.pi / neg) * np.exp(rb * rb / neg)
        mean = rb / neg
        return mass, mass * (mean * mean + 1.0 / (2.0 * neg))

    def _first_axis_moment(self, power: int) -> float:
        """∫ ω₁^power |p|² |G₁|² dω₁  (G₁ 에 C 포함)"""
        p = self.poly()
        density = p * _conj(p) * Polynomial([0.0] * power + [1.0])
        value = gaussian_poly_integral(density, -2.0 * self.base.A.real, 2.0 * self.base.b[0].real)
        return float(np.real(value)) * math.exp(2.0 * self.base.C.real)

    def l2_norm(self) -> float:
        mass, _ = self._axis_masses()
        return math.sqrt(max(self._first_axis_moment(0) * float(np.prod(mass)), 0.0))

    def gradient_norm(self) -> float:
        """‖∇f‖₂ = ‖ |ω| f̂ ‖₂"""
        mass, second = self._axis_masses()
        first0, first2 = self._first_axis_moment(0), self._first_axis_moment(2)
        total = first2 * float(np.prod(mass))
        for i in range(len(mass)):
            others = float(np.prod(np.delete(mass, i)))
            total += first0 * second[i] * others
        return math.sqrt(max(total, 0.0))

    # --- 전파 ---------------------------------------------------------------

    def time_scale(self) -> tuple[float, float]:
        return self.base.A.imag, abs(self.base.A.real)

    def spatial_integral(self, t, r: float) -> np.ndarray:
        """∫ |u(t,x)|^r dx (t 는 배열, Gauss-Hermite 로 첫 번째 축 적분)"""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        Ahat, bhat = self.base.A, self.base.b
        a = -(Ahat - 1j * t)
        p = self.poly()
        degree = p.degree()

        # 첫 번째 축: u₁ = (2π)^{-1/2} e^C ∫ p(ω) e^{−aω² + (b̂₁ + ix)ω} dω
        w = 1.0 / (4.0 * a)
        c = np.real(w)
        d = -2.0 * np.imag(w * bhat[0])
        e = np.real(w * bhat[0] ** 2)
        x0 = d / (2.0 * c)
        nodes = int(min(max(64, math.ceil(r * degree / 2) + 16), 200))
        y, weights = np.polynomial.hermite.hermgauss(nodes)
        x = x0[:, None] + y[None, :] / np.sqrt(r * c)[:, None]
        mu = (bhat[0] + 1j * x) / (2.0 * a[:, None])
        poly_values = self._moment_polynomial(p, a)
        values = np.zeros_like(mu)
        for coef in poly_values[::-1]:
            values = values * mu + coef[:, None]
        prefactor = (np.exp(r * (e + d * d / (4.0 * c))) / np.sqrt(r * c)
                     * (2.0 * math.pi) ** (-r / 2) * math.exp(r * self.base.C.real))
        total = prefactor * np.sum(weights[None, :] * np.abs(values) ** r, axis=1)

        # 나머지 축: 순수 가우시안의 닫힌 형태
        for b_i in bhat[1:]:
            A_t = 1.0 / (4.0 * (-a))
            b_t = -1j * b_i / (2.0 * (-a))
            C_t = -b_i * b_i / (4.0 * (-a)) - 0.5 * np.log(2.0 * a)
            neg = -np.real(A_t)
            total = total * (np.exp(r * np.real(C_t)) * np.sqrt(math.pi / (r * neg))
                             * np.exp(r * np.real(b_t) ** 2 / (4.0 * neg)))
        return total

    @staticmethod
    def _moment_polynomial(p: Polynomial, a: np.ndarray) -> list[np.ndarray]:
        """gaussian_poly_integral 에서 e^{β²/4a} 를 뺀 μ 다항식의 계수 r_d(a)"""
        q = p.coef
        degree = len(q) - 1
        moments = [gamma((l + 1) / 2) * a ** (-(l + 1) / 2) if l % 2 == 0 else np.zeros_like(a)
                   for l in range(degree + 1)]
        return [sum(q[j] * binom(j, dd) * moments[j - dd] for j in range(dd, degree + 1))
                for dd in range(degree + 1)]

    # --- 최적화 보조 -----------------------------------------------------------

    def to_vector(self) -> np.ndarray:
        b, c = self.base.b, self.hermite_coeffs
        return np.concatenate(([self.base.A.real, self.base.A.imag], b.real, b.imag, c.real, c.imag))

    @classmethod
    def from_vector(cls, vector, n: int, terms: int, normalize: bool = True) -> "TrialFunction":
        v = np.asarray(vector, dtype=float)
        A = complex(v[0], v[1])
        b = v[2:2 + n] + 1j * v[2 + n:2 + 2 * n]
        c = v[2 + 2 * n:2 + 2 * n + terms] + 1j * v[2 + 2 * n + terms:]
        if not A.real < 0:
            raise DomainError('covariance', re_a=A.real)
        return cls(GaussianProfile(n, A, b, 0j), c, normalize)

    def recentered(self) -> "TrialFunction":
        """|f̂|² 의 모멘트에 맞춘 가우시안 틀로 Hermite 전개를 다시 계산 (n = 1)"""
        if self.n != 1 or self.is_gaussian:
            return self
        Ahat, bhat, Chat = self.base.A, self.base.b[0], self.base.C
        p = self.poly()
        density_a, density_b = -2.0 * Ahat.real, 2.0 * bhat.real
        m0, m1, m2 = (self._first_axis_moment(k) for k in range(3))
        mean = m1 / m0
        variance = m2 / m0 - mean * mean
        re_a = -1.0 / (4.0 * variance)
        re_b = mean / (2.0 * variance)

        # 위상 기울기 φ'(ω) ≈ 2 Im(A)ω + Im(b) 의 가중 최소제곱
        flux = _conj(p) * (p.deriv() + p * Polynomial([bhat, 2.0 * Ahat]))
        scale = math.exp(2.0 * Chat.real)
        j0 = float(np.imag(gaussian_poly_integral(flux, density_a, density_b))) * scale
        j1 = float(np.imag(gaussian_poly_integral(flux * Polynomial([0.0, 1.0]), density_a, density_b))) * scale
        slope, intercept = np.linalg.solve(np.array([[m2, m1], [m1, m0]]), np.array([j1, j0]))
        frame = GaussianProfile(1, complex(re_a, slope / 2.0), np.array([complex(re_b, intercept)]), 0j)

        alpha = math.sqrt(-2.0 * re_a)
        s_map = Polynomial([-alpha * mean, alpha])
        cross_a = -(Ahat + np.conj(frame.A))
        cross_b = bhat + np.conj(frame.b[0])
        projections = []
        for j in range(len(self.hermite_coeffs) + 1):
            basis = np.zeros(j + 1)
            basis[j] = 1.0
            h_j = Polynomial(herm2poly(basis))(s_map)
            num = gaussian_poly_integral(p * h_j, cross_a, cross_b) * np.exp(Chat)
            den = gaussian_poly_integral(h_j * h_j, -2.0 * re_a, 2.0 * re_b)
            projections.append(complex(num / den))
        d0 = projections[0]
        if d0 == 0:
            return self
        coeffs = np.array(projections[1:]) / d0
        recentered = GaussianProfile(1, frame.A, frame.b, np.log(d0))
        return TrialFunction(recentered, coeffs, self.normalize)
