#!/usr/bin/env python3
import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gamma, gammaln

from .domain import INF, DomainError, parse_exponent

logger = logging.getLogger(__name__)

# 원뿔 가중치 노름의 제곱값 (2인자 n=3, 3인자 n=2)
PAIR_WEIGHT = 2.0 * math.pi
TRIPLE_WEIGHT = 4.0 * math.pi ** 2

KIND_SCHRODINGER = "schrodinger"
KIND_SOBOLEV = "sobolev"
KIND_PARABOLOID = "paraboloid"
KIND_CONE = "cone"


@dataclass(frozen=True)
class CorollaryCase:
    """표로 정리된 sharp 부등식 하나 (상수, 지수, 우변 지수)"""
    case_id: str
    kind: str
    n: int
    q: float
    r: float
    closed_form: float
    formula: str
    alpha: float = 0.0  # ‖∇f‖ 지수
    beta: float = 1.0   # ‖f‖ 지수


CASES: dict[str, CorollaryCase] = {
    c.case_id: c for c in (
        CorollaryCase("n1_q6_r6", KIND_SCHRODINGER, 1, 6, 6, 12 ** (-1 / 12), "12^(-1/12)"),
        CorollaryCase("n1_q8_r4", KIND_SCHRODINGER, 1, 8, 4, 2 ** (-1 / 4), "2^(-1/4)"),
        CorollaryCase("n2_q4_r4", KIND_SCHRODINGER, 2, 4, 4, 2 ** (-1 / 2), "2^(-1/2)"),
        CorollaryCase("n1_q10_r10", KIND_SOBOLEV, 1, 10, 10,
                      (2 * math.sqrt(5) * math.pi) ** (-1 / 10), "(2*sqrt(5)*pi)^(-1/10)", 1 / 5, 4 / 5),
        CorollaryCase("n1_q12_r6", KIND_SOBOLEV, 1, 12, 6,
                      (6 * math.pi) ** (-1 / 12), "(6*pi)^(-1/12)", 1 / 6, 5 / 6),
        CorollaryCase("n1_q16_r4", KIND_SOBOLEV, 1, 16, 4,
                      (8 * math.pi) ** (-1 / 16), "(8*pi)^(-1/16)", 1 / 8, 7 / 8),
        CorollaryCase("n2_q6_r6", KIND_SOBOLEV, 2, 6, 6,
                      (12 * math.pi) ** (-1 / 6), "(12*pi)^(-1/6)", 1 / 3, 2 / 3),
        CorollaryCase("n2_q8_r4", KIND_SOBOLEV, 2, 8, 4,
                      (16 * math.pi) ** (-1 / 8), "(16*pi)^(-1/8)", 1 / 4, 3 / 4),
        CorollaryCase("n4_q4_r4", KIND_SOBOLEV, 4, 4, 4,
                      (32 * math.pi) ** (-1 / 4), "(32*pi)^(-1/4)", 1 / 2, 1 / 2),
        CorollaryCase("parab_n1_q6", KIND_PARABOLOID, 1, 6, 6,
                      (2 * math.pi) ** (-1 / 2) * 12 ** (-1 / 12), "(2*pi)^(-1/2)*12^(-1/12)"),
        CorollaryCase("parab_n2_q4", KIND_PARABOLOID, 2, 4, 4, (4 * math.pi) ** (-1 / 2), "(4*pi)^(-1/2)"),
        CorollaryCase("cone_n2_q6", KIND_CONE, 2, 6, 6, (2 * math.pi) ** (1 / 3), "(2*pi)^(1/3)"),
        CorollaryCase("cone_n3_q4", KIND_CONE, 3, 4, 4, (2 * math.pi) ** (1 / 4), "(2*pi)^(1/4)"),
    )
}
CASE_IDS = tuple(CASES)

# Sobolev-Strichartz 경우: (n, q, r, α, β)
SOBOLEV_CASES: dict[str, tuple[int, float, float, float, float]] = {
    c.case_id: (c.n, c.q, c.r, c.alpha, c.beta) for c in CASES.values() if c.kind == KIND_SOBOLEV
}

# 곱 구조 f(x,y) = g(x)g(y) 로 상위 차원 경우에서 유도되는 경우
_PRODUCT_PARENTS = {
    "n1_q8_r4": "n2_q4_r4",
    "n1_q12_r6": "n2_q6_r6",
    "n1_q16_r4": "n2_q8_r4",
    "n2_q8_r4": "n4_q4_r4",
}
# kernel power 1 인 (n,k) 에서 직접 유도되는 Sobolev 경우
_KERNEL_POWER_ONE = {
    "n1_q10_r10": (1, 5),
    "n2_q6_r6": (2, 3),
    "n4_q4_r4": (4, 2),
}


def _check_case(n: int, k: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError('dimension', n=n)
    if k < 2 or (n, k) == (1, 2):
        raise DomainError('excluded_case', n=n, k=k)


def sharp_constant(n: int, k: int) -> float:
    """C_{n,k} = [2^{n(k-1)-1} k^{n/2} π^{(n(k-1)-2)/2} Γ(n(k-1)/2)]^{-1}"""
    _check_case(n, k)
    m = n * (k - 1)
    return 1.0 / (2.0 ** (m - 1) * k ** (n / 2) * math.pi ** ((m - 2) / 2) * gamma(m / 2))


def kernel_power(n: int, k: int) -> float:
    _check_case(n, k)
    return (n * (k - 1) - 2) / 2.0


def _as_eta(eta) -> np.ndarray:
    try:
        arr = np.asarray(eta, dtype=float)
    except ValueError:
        raise DomainError('mismatched_eta', shapes=[np.shape(e) for e in eta]) from None
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim < 2 or arr.shape[-2] < 2:
        raise ValueError(f"η 는 k ≥ 2 개의 n-벡터여야 합니다: shape={arr.shape}")
    return arr


def kernel_K(eta) -> "float | np.ndarray":
    """K(η) = (1/k) Σ_{i<j} |η_i − η_j|²  (마지막 두 축이 (k, n))"""
    arr = _as_eta(eta)
    k = arr.shape[-2]
    total = 0.0
    for i in range(k - 1):
        diff = arr[..., i + 1:, :] - arr[..., i:i + 1, :]
        total = total + np.sum(diff * diff, axis=(-2, -1))
    return total / k


def kernel_K_centered(eta) -> "float | np.ndarray":
    """K(η) = |η|² − |Σ_i η_i|²/k"""
    arr = _as_eta(eta)
    k = arr.shape[-2]
    s = np.sum(arr, axis=-2)
    value = np.sum(arr * arr, axis=(-2, -1)) - np.sum(s * s, axis=-1) / k
    return np.maximum(value, 0.0)


def corollary_case(case_id: str) -> CorollaryCase:
    try:
        return CASES[case_id]
    except KeyError:
        raise DomainError('unknown_case', case_id=case_id) from None


def corollary_constant(case_id: str) -> float:
    return corollary_case(case_id).closed_form


def sobolev_case(case_id: str) -> tuple[int, float, float, float, float]:
    if case_id not in SOBOLEV_CASES:
        raise DomainError('unknown_case', case_id=case_id)
    return SOBOLEV_CASES[case_id]


def derived_corollary_constant(case_id: str) -> float:
    """sharp_constant 와 구조 관계(곱 구조, 1차 모멘트 항 제거, 포물면 관계)로 상수를 재유도"""
    case = corollary_case(case_id)
    if case_id == "n1_q6_r6":
        return sharp_constant(1, 3) ** (1 / 6)
    if case_id == "n2_q4_r4":
        return sharp_constant(2, 2) ** (1 / 4)
    if case_id in _KERNEL_POWER_ONE:
        n, k = _KERNEL_POWER_ONE[case_id]
        return ((k - 1) * sharp_constant(n, k)) ** (1 / (2 * k))
    if case_id in _PRODUCT_PARENTS:
        parent = corollary_case(_PRODUCT_PARENTS[case_id])
        # ‖∇(g⊗g)‖² = 2‖∇g‖²‖g‖²
        return math.sqrt(derived_corollary_constant(parent.case_id) * 2.0 ** (parent.alpha / 2))
    if case.kind == KIND_PARABOLOID:
        return (2 * math.pi) ** (-0.5) * derived_corollary_constant(f"n{case.n}_q{int(case.q)}_r{int(case.r)}")
    if case_id == "cone_n3_q4":
        return PAIR_WEIGHT ** (1 / 4)
    if case_id == "cone_n2_q6":
        return TRIPLE_WEIGHT ** (1 / 6)
    raise DomainError('unknown_case', case_id=case_id)


def beckner_constant(n: int, lam: float) -> float:
    """C(n,λ) = π^{λ/2} Γ(n/2+λ/2)/Γ(n+λ/2) [Γ(n)/Γ(n/2)]^{1+λ/n}"""
    if not lam > 0:
        raise ValueError(f"λ 는 양수여야 합니다: λ = {lam}")
    if int(n) != n or n < 1:
        raise DomainError('dimension', n=n)
    log_c = (0.5 * lam * math.log(math.pi)
             + gammaln(n / 2 + lam / 2) - gammaln(n + lam / 2)
             + (1 + lam / n) * (gammaln(n) - gammaln(n / 2)))
    return math.exp(log_c)


def reversed_hls_constant(n: int, lam: float) -> float:
    """L^p 준노름 규약에서 sharp 한 reversed HLS 상수 (π^{-λ/2} 형태)"""
    return beckner_constant(n, lam) * math.pi ** (-lam)


def normalization_residual(n: int, k: int) -> float:
    if int(n) != n or n < 1:
        raise DomainError('dimension', n=n)
    m = n * (k - 1)
    if k < 2 or m < 2:
        raise DomainError('excluded_case', n=n, k=k)
    log_c_norm = 0.5 * n * math.log(k) + gammaln(m / 2) - 0.5 * m * math.log(math.pi)
    log_sphere = math.log(2.0) + 0.5 * m * math.log(math.pi) - gammaln(m / 2)
    return abs(math.exp(log_c_norm + log_sphere - math.log(2.0) - 0.5 * n * math.log(k)) - 1.0)


def weak_exponents(n: int, k: int) -> tuple[float, float]:
    """(p, r) = (2nk/(2nk−n−2), 4n/(n(k+1)−2))"""
    _check_case(n, k)
    return 2 * n * k / (2 * n * k - n - 2), 4 * n / (n * (k + 1) - 2)


def _reciprocal(value) -> float:
    return 0.0 if value is INF else 1.0 / value


def admissible(q, r, n: int) -> bool:
    """2/q + n/r = n/2, 2 ≤ q,r ≤ ∞, (q,r,n) ≠ (2,∞,2)"""
    try:
        q, r = parse_exponent(q), parse_exponent(r)
    except (TypeError, ValueError):
        return False
    for e in (q, r):
        if e is not INF and not e >= 2:
            return False
    if n == 2 and r is INF and q is not INF and q == 2:
        return False
    return math.isclose(2 * _reciprocal(q) + n * _reciprocal(r), n / 2, rel_tol=0.0, abs_tol=1e-12)


def restriction_exponent(kind: str, n: int, q: float) -> float:
    if kind == KIND_PARABOLOID:
        return n * q / (n + 2)
    if kind == KIND_CONE:
        return (n - 1) * q / (n + 1)
    raise ValueError(f"알 수 없는 곡면 종류입니다: {kind}")


def constants_table() -> list[dict]:
    """constants 명령의 표: 닫힌 형태, 재유도 값, 상대 오차"""
    rows = []
    for case in CASES.values():
        derived = derived_corollary_constant(case.case_id)
        rows.append({
            'case': case.case_id,
            'kind': case.kind,
            'n': case.n,
            'q': case.q,
            'r': case.r,
            'formula': case.formula,
            'value': case.closed_form,
            'derived': derived,
            'rel_error': abs(derived - case.closed_form) / case.closed_form,
        })
    return rows
