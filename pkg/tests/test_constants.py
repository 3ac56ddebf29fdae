import math

import numpy as np
import pytest

from strichartzlab.constants import (CASE_IDS, admissible, beckner_constant, constants_table, corollary_constant,
                                     kernel_K, kernel_K_centered, kernel_power, normalization_residual,
                                     restriction_exponent, sharp_constant, weak_exponents)
from strichartzlab.domain import DomainError


def test_sharp_constant_low_cases():
    """C_{1,3} = 1/(2√3), C_{2,2} = 1/4"""
    assert sharp_constant(1, 3) == pytest.approx(1.0 / (2.0 * math.sqrt(3.0)), rel=1e-15)
    assert sharp_constant(2, 2) == pytest.approx(0.25, rel=1e-15)


def test_excluded_cases_raise():
    with pytest.raises(DomainError):
        sharp_constant(1, 2)
    with pytest.raises(DomainError):
        sharp_constant(3, 1)
    with pytest.raises(DomainError):
        kernel_power(0, 3)


def test_kernel_power_zero_for_closed_form_cases():
    assert kernel_power(1, 3) == 0.0
    assert kernel_power(2, 2) == 0.0
    assert kernel_power(1, 4) == 0.5


def test_constants_table_matches_closed_forms():
    """모든 표의 상수가 재유도 값과 1e-12 이내로 일치"""
    rows = constants_table()
    assert [row['case'] for row in rows] == list(CASE_IDS)
    assert max(row['rel_error'] for row in rows) <= 1e-12


def test_corollary_constants_values():
    assert corollary_constant("n1_q6_r6") == pytest.approx(12 ** (-1 / 12), rel=1e-15)
    assert corollary_constant("n2_q4_r4") == pytest.approx(2 ** -0.5, rel=1e-15)
    assert corollary_constant("cone_n3_q4") == pytest.approx((2 * math.pi) ** 0.25, rel=1e-15)
    with pytest.raises(DomainError):
        corollary_constant("n9_q9_r9")


def test_kernel_two_forms_agree():
    rng = np.random.default_rng(1)
    eta = rng.standard_normal((200, 3, 2))
    assert np.max(np.abs(kernel_K(eta) - kernel_K_centered(eta))) <= 1e-12


def test_kernel_translation_invariant():
    eta = np.array([[0.0, 1.0], [2.0, -1.0], [0.5, 0.5]])
    shifted = eta + np.array([3.0, -7.0])
    assert kernel_K(shifted) == pytest.approx(kernel_K(eta), abs=1e-12)


def test_kernel_scalar_input_for_n1():
    # n = 1 에서는 η 를 (k,) 로 줄 수 있다
    assert kernel_K([1.0, 3.0]) == pytest.approx(2.0)


def test_normalization_residual_lattice():
    for n in range(1, 5):
        for k in range(2, 7):
            if (n, k) != (1, 2):
                assert normalization_residual(n, k) <= 1e-12


def test_admissible_pairs():
    assert admissible(4, 4, 2)
    assert admissible(8, 4, 1)
    assert admissible("inf", 2, 3)
    assert not admissible(2, "inf", 2)
    assert not admissible(6, 4, 1)
    assert not admissible(1, 4, 1)


def test_weak_exponents_and_restriction():
    p, r = weak_exponents(1, 3)
    assert p == pytest.approx(2.0)
    assert r == pytest.approx(2.0)
    assert restriction_exponent("paraboloid", 2, 4) == pytest.approx(2.0)
    assert restriction_exponent("cone", 3, 4) == pytest.approx(2.0)
    with pytest.raises(ValueError):
        restriction_exponent("sphere", 2, 4)


def test_beckner_constant_requires_positive_lambda():
    assert beckner_constant(1, 1.0) > 0
    with pytest.raises(ValueError):
        beckner_constant(1, 0.0)


def test_beckner_constant_values():
    assert beckner_constant(1, 1.0) == pytest.approx(2.0 / math.pi, rel=1e-14)
    assert beckner_constant(2, 2.0) == pytest.approx(math.pi / 2.0, rel=1e-14)
    # λ → 0 에서 1
    for n in (1, 2, 3):
        assert beckner_constant(n, 1e-8) == pytest.approx(1.0, rel=1e-6)


def test_kernel_quadratic_scaling():
    eta = np.random.default_rng(2).standard_normal((5, 4, 2))
    for lam in (0.5, 3.0):
        assert np.allclose(kernel_K(lam * eta), lam * lam * kernel_K(eta), rtol=1e-13, atol=0.0)
