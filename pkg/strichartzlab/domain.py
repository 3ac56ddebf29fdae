#!/usr/bin/env python3
import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

logger = logging.getLogger(__name__)

ERROR_MESSAGES = {
    'excluded_case': "❌ 제외된 경우입니다: (n,k) = ({n},{k}). k ≥ 2 이고 (n,k) ≠ (1,2) 이어야 합니다.",
    'kernel_power': "❌ kernel power가 음수입니다: (n,k) = ({n},{k}), power = {power}",
    'dimension': "❌ 차원은 1 이상의 정수여야 합니다: n = {n}",
    'covariance': "❌ 적분 가능 조건 위반: Re(A) = {re_a} (Re(A) < 0 이어야 함)",
    'not_admissible': "❌ 허용되지 않는 지수입니다: (q,r,n) = ({q},{r},{n})",
    'grid_shape': "❌ 격자 크기 오류: 샘플 수 {size} ≠ N^n = {expected}",
    'grid_params': "❌ 격자 설정 오류: L = {L}, N = {N} (L > 0, N 은 짝수)",
    'unknown_case': "❌ 알 수 없는 case id 입니다: {case_id}",
    'mismatched_eta': "❌ η 성분의 차원이 서로 다릅니다: {shapes}",
    'cone_boost': "❌ 원뿔 trial (Lorentz boost 미지원) 은 Re(b) = 0 이어야 합니다: Re(b) = {re_b}",
}


class DomainError(ValueError):
    """수학적 정의역을 벗어난 입력 (메시지는 ERROR_MESSAGES 에서 생성)"""

    def __init__(self, key: str, **fields):
        self.key = key
        self.fields = fields
        super().__init__(ERROR_MESSAGES[key].format(**fields))


class Infinity:
    """지수 ∞ 를 나타내는 기호 값 (float 이 아님)"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"


INF = Infinity()


def parse_exponent(value) -> "float | Infinity":
    """'inf', '∞', math.inf 를 INF 로, 나머지는 float 으로 변환"""
    if value is INF:
        return INF
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("inf", "infinity", "∞"):
            return INF
        value = float(text)
    value = float(value)
    if math.isinf(value) and value > 0:
        return INF
    return value


@dataclass(frozen=True, eq=False)
class GaussianProfile:
    """e^{A|x|² + b·x + C} (Re A < 0) 형태의 가우시안"""
    n: int
    A: complex
    b: np.ndarray = None
    C: complex = 0j

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError('dimension', n=self.n)
        object.__setattr__(self, 'A', complex(self.A))
        object.__setattr__(self, 'C', complex(self.C))
        b = np.zeros(self.n, dtype=complex) if self.b is None else np.asarray(self.b, dtype=complex)
        if b.ndim == 0:
            b = np.full(self.n, complex(b))
        if b.shape != (self.n,):
            raise ValueError(f"b 벡터의 길이가 n 과 다릅니다: {b.shape} vs n={self.n}")
        b.setflags(write=False)
        object.__setattr__(self, 'b', b)
        if not self.A.real < 0:
            raise DomainError('covariance', re_a=self.A.real)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if self.n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
            x = x[..., None]
        return np.exp(self.A * np.sum(x * x, axis=-1) + x @ self.b + self.C)

    def conjugate(self) -> "GaussianProfile":
        return GaussianProfile(self.n, np.conj(self.A), np.conj(self.b), np.conj(self.C))

    def fourier(self) -> "GaussianProfile":
        """단위(unitary) 규약 f̂(ω) = (2π)^{-n/2} ∫ e^{-iω·x} f(x) dx 의 닫힌 형태"""
        A, b = self.A, self.b
        return GaussianProfile(
            self.n,
            1.0 / (4.0 * A),
            1j * b / (2.0 * A),
            self.C - np.dot(b, b) / (4.0 * A) - 0.5 * self.n * np.log(-2.0 * A),
        )

    def inverse_fourier(self) -> "GaussianProfile":
        A, b = self.A, self.b
        return GaussianProfile(
            self.n,
            1.0 / (4.0 * A),
            -1j * b / (2.0 * A),
            self.C - np.dot(b, b) / (4.0 * A) - 0.5 * self.n * np.log(-2.0 * A),
        )

    def l2_norm(self) -> float:
        a = -2.0 * self.A.real
        rb = self.b.real
        log_mass = (0.5 * self.n * math.log(math.pi / a)
                    + float(np.dot(rb, rb)) / a + 2.0 * self.C.real)
        return math.exp(0.5 * log_mass)

    def mean(self) -> np.ndarray:
        """|f|² 분포의 평균 위치"""
        return self.b.real / (-2.0 * self.A.real)

    def variance(self) -> float:
        """|f|² 분포의 축별 분산"""
        return 1.0 / (-4.0 * self.A.real)

    def second_moment(self) -> float:
        """∫ |x|² |f|² dx"""
        mu = self.mean()
        return self.l2_norm() ** 2 * (float(np.dot(mu, mu)) + self.n * self.variance())

    def scaled(self, lam: float) -> "GaussianProfile":
        """x ↦ f(λx)"""
        return GaussianProfile(self.n, self.A * lam ** 2, self.b * lam, self.C)

    def modulated(self, v) -> "GaussianProfile":
        """f ↦ e^{iv·x} f"""
        return GaussianProfile(self.n, self.A, self.b + 1j * np.broadcast_to(v, (self.n,)), self.C)

    def translated(self, x0) -> "GaussianProfile":
        """f ↦ f(· − x0)"""
        x0 = np.broadcast_to(np.asarray(x0, dtype=float), (self.n,))
        return GaussianProfile(
            self.n, self.A, self.b - 2.0 * self.A * x0,
            self.C + self.A * float(np.dot(x0, x0)) - np.dot(self.b, x0),
        )

    def with_norm(self, target: float = 1.0) -> "GaussianProfile":
        return GaussianProfile(self.n, self.A, self.b, self.C + math.log(target / self.l2_norm()))


@dataclass
class GridFunction:
    """중심이 원점인 [-L, L)^n 균일 격자 위의 복소 함수 샘플"""
    n: int
    half_width: float
    points_per_axis: int
    samples: np.ndarray
    reliable: bool = True

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError('dimension', n=self.n)
        if not self.half_width > 0 or self.points_per_axis <= 0 or self.points_per_axis % 2:
            raise DomainError('grid_params', L=self.half_width, N=self.points_per_axis)
        samples = np.asarray(self.samples, dtype=complex)
        expected = self.points_per_axis ** self.n
        if samples.size != expected:
            raise DomainError('grid_shape', size=samples.size, expected=expected)
        self.samples = samples.reshape((self.points_per_axis,) * self.n)

    @property
    def space_step(self) -> float:
        return 2.0 * self.half_width / self.points_per_axis

    @property
    def cell_volume(self) -> float:
        return self.space_step ** self.n

    def axis(self) -> np.ndarray:
        N = self.points_per_axis
        return (np.arange(N) - N // 2) * self.space_step

    def coordinates(self) -> list[np.ndarray]:
        """축 순서(row-major)의 meshgrid 좌표"""
        ax = self.axis()
        return np.meshgrid(*([ax] * self.n), indexing='ij')

    def radius_squared(self) -> np.ndarray:
        return sum(c * c for c in self.coordinates())

    def l2_norm(self) -> float:
        return math.sqrt(self.cell_volume * float(np.sum(np.abs(self.samples) ** 2)))

    def boundary_mass(self, fraction: float = 0.9) -> float:
        """|x_i| > fraction·L 영역에 있는 상대 질량"""
        total = float(np.sum(np.abs(self.samples) ** 2))
        if total == 0.0:
            return 0.0
        ax = np.abs(self.axis()) > fraction * self.half_width
        mask = np.zeros(self.samples.shape, dtype=bool)
        for i in range(self.n):
            shape = [1] * self.n
            shape[i] = self.points_per_axis
            mask |= ax.reshape(shape)
        return float(np.sum(np.abs(self.samples[mask]) ** 2)) / total

    def is_real(self) -> bool:
        return not np.any(self.samples.imag)

    def copy_with(self, samples: np.ndarray, half_width: Optional[float] = None) -> "GridFunction":
        return GridFunction(self.n, self.half_width if half_width is None else half_width,
                            self.points_per_axis, samples, self.reliable)

    @classmethod
    def from_callable(cls, n: int, half_width: float, points: int, func) -> "GridFunction":
        grid = cls(n, half_width, points, np.zeros((points,) * n, dtype=complex))
        stacked = np.stack(grid.coordinates(), axis=-1)
        grid.samples = np.asarray(func(stacked), dtype=complex).reshape(grid.samples.shape)
        return grid

    @classmethod
    def from_profile(cls, profile: GaussianProfile, points: int = 512,
                     half_width: Optional[float] = None) -> "GridFunction":
        """경계에서 |f| < 1e-16·max|f| 가 되도록 L 을 정해 가우시안을 샘플링"""
        if half_width is None:
            center = float(np.max(np.abs(profile.mean()))) if profile.n else 0.0
            half_width = center + math.sqrt(math.log(1e16) / -profile.A.real)
        return cls.from_callable(profile.n, half_width, points, profile)


@dataclass(frozen=True)
class StrichartzCase:
    """(n,k) 또는 (n,q,r) 지수 설정"""
    n: int
    k: Optional[int] = None
    q: "float | Infinity | None" = None
    r: "float | Infinity | None" = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError('dimension', n=self.n)
        if self.k is not None:
            if self.k < 2 or (self.n, self.k) == (1, 2):
                raise DomainError('excluded_case', n=self.n, k=self.k)
            object.__setattr__(self, 'q', float(2 * self.k))
            object.__setattr__(self, 'r', float(2 * self.k))
        elif self.q is None or self.r is None:
            raise ValueError("k 또는 (q, r) 중 하나는 지정해야 합니다.")
        else:
            object.__setattr__(self, 'q', parse_exponent(self.q))
            object.__setattr__(self, 'r', parse_exponent(self.r))

    @property
    def is_theorem1(self) -> bool:
        return self.k is not None

    @property
    def kernel_power(self) -> float:
        if self.k is None:
            raise ValueError("kernel power 는 (n,k) 경우에만 정의됩니다.")
        return (self.n * (self.k - 1) - 2) / 2.0


@dataclass(frozen=True)
class MonteCarloSpec:
    """R^{nk} 적분용 표본 수, seed, chunk 단위"""
    samples: int = 1_000_000
    seed: int = 20081017
    chunk_size: int = 65_536

    def __post_init__(self):
        if self.samples < 1 or self.chunk_size < 1:
            raise ValueError(f"samples, chunk_size 는 양의 정수여야 합니다: {self.samples}, {self.chunk_size}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed 는 64-bit unsigned 정수여야 합니다: {self.seed}")

    def chunk_counts(self) -> list[int]:
        full, rest = divmod(self.samples, self.chunk_size)
        return [self.chunk_size] * full + ([rest] if rest else [])


VERDICT_PASS = "pass"
VERDICT_FAIL = "fail"
VERDICT_INDETERMINATE = "indeterminate"

MODE_EQUALITY = "equality"
MODE_STRICT = "strict"
MODE_REPORT = "report"


@dataclass
class RatioReport:
    """lhs/rhs 비율과 판정 결과"""
    lhs: float
    rhs: float
    lhs_err: float = 0.0
    rhs_err: float = 0.0
    expected: Optional[float] = 1.0
    tolerance: float = 1e-8
    mode: str = MODE_EQUALITY
    ratio: Optional[float] = field(default=None, init=False)
    verdict: str = field(default=VERDICT_INDETERMINATE, init=False)
    notes: list[str] = field(default_factory=list)
    wall_time_seconds: float = 0.0

    def __post_init__(self):
        self.lhs_err = abs(self.lhs_err)
        self.rhs_err = abs(self.rhs_err)
        if self.rhs > 0:
            self.ratio = self.lhs / self.rhs
        self.verdict = self._judge()

    def combined_error(self) -> float:
        if self.ratio is None:
            return math.inf
        rel = 0.0
        if self.lhs > 0:
            rel += (self.lhs_err / self.lhs) ** 2
        rel += (self.rhs_err / self.rhs) ** 2
        return self.ratio * math.sqrt(rel)

    def _judge(self) -> str:
        if self.ratio is None:
            return VERDICT_INDETERMINATE
        if self.mode == MODE_STRICT:
            margin = 3.0 * self.combined_error()
            return VERDICT_PASS if self.ratio < 1.0 - margin else VERDICT_FAIL
        if self.mode == MODE_EQUALITY and self.expected is not None:
            return VERDICT_PASS if abs(self.ratio - self.expected) <= self.tolerance else VERDICT_FAIL
        return VERDICT_INDETERMINATE

    def widen_tolerance(self, sigmas: float = 3.0) -> "RatioReport":
        """추정 오차가 있는 경우 tolerance = max(tolerance, sigmas·err) 로 다시 판정"""
        self.tolerance = max(self.tolerance, sigmas * self.combined_error())
        self.verdict = self._judge()
        return self

    @property
    def passed(self) -> bool:
        return self.verdict == VERDICT_PASS
