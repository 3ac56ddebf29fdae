import math

import numpy as np
import pytest

from strichartzlab.constants import SOBOLEV_CASES, sharp_constant
from strichartzlab.domain import (MODE_REPORT, MODE_STRICT, VERDICT_INDETERMINATE, VERDICT_PASS, DomainError,
                                  GaussianProfile, GridFunction, MonteCarloSpec,
                                  StrichartzCase)
from strichartzlab.theorem1 import (ProductTransform, _grid_sampler, kernel_moment, reversed_hls_ratio, rhs_functional,
                                    rhs_functional_exact, rhs_functional_quadrature, sobolev_strichartz_report,
                                    strichartz_corollary_report, theorem1_report, weak_interpolation_check)
from strichartzlab.trial import TrialFunction

SMALL_MC = MonteCarloSpec(samples=100_000, seed=11, chunk_size=16_384)


def _standard(n):
    return GaussianProfile(n, -0.5)


def test_excluded_case_rejected():
    with pytest.raises(DomainError):
        StrichartzCase(1, 2)


@pytest.mark.parametrize("n,k", [(1, 3), (2, 2)])
def test_gaussian_equality_closed_form(n, k):
    """kernel power 0 경우: 가우시안에서 ratio = 1"""
    report = theorem1_report(_standard(n), StrichartzCase(n, k))
    assert report.ratio == pytest.approx(1.0, abs=1e-8)
    assert report.verdict == VERDICT_PASS
    assert report.rhs_err == 0.0


def test_gaussian_equality_invariant_under_symmetries():
    g = GaussianProfile(1, -0.8 + 0.3j, [0.4 - 0.2j], 0.3)
    report = theorem1_report(g, StrichartzCase(1, 3))
    assert report.ratio == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n,k", [(1, 4), (2, 3), (1, 5)])
def test_gaussian_equality_monte_carlo(n, k):
    report = theorem1_report(_standard(n), StrichartzCase(n, k), SMALL_MC)
    assert report.passed
    assert report.rhs_err > 0
    exact = rhs_functional_exact(_standard(n), StrichartzCase(n, k))
    assert abs(report.rhs - exact) <= 4.0 * report.rhs_err


def test_kernel_moment_chi_oracle():
    """n=1, k=4 에서 E[K^{1/2}] = 2/√π"""
    pt = ProductTransform.from_initial_data(_standard(1), 4)
    mean, stderr = kernel_moment(pt, StrichartzCase(1, 4), SMALL_MC)
    assert abs(mean - 2.0 / math.sqrt(math.pi)) <= 4.0 * stderr


def test_rhs_quadrature_for_trial():
    trial = TrialFunction(_standard(1).fourier(), [0.0, 0.4, 0.1])
    pt = ProductTransform(trial, 3)
    case = StrichartzCase(1, 3)
    exact, err = rhs_functional(pt, case, SMALL_MC)
    assert err == 0.0
    assert exact == pytest.approx(sharp_constant(1, 3), rel=1e-12)
    assert rhs_functional_quadrature(pt, case) == pytest.approx(exact, rel=1e-10)


def test_product_transform_dimension_mismatch():
    pt = ProductTransform.from_initial_data(_standard(2), 3)
    with pytest.raises(ValueError):
        kernel_moment(pt, StrichartzCase(1, 3), SMALL_MC)


def test_non_gaussian_is_strict():
    trial = TrialFunction(_standard(1).fourier(), [0.0, 0.5])
    report = theorem1_report(trial, StrichartzCase(1, 3))
    assert report.mode == MODE_STRICT
    assert report.ratio < 1.0
    assert report.passed


def test_result_independent_of_workers():
    case = StrichartzCase(2, 3)
    mc = MonteCarloSpec(samples=50_000, seed=7, chunk_size=8192)
    single = theorem1_report(_standard(2), case, mc, workers=1)
    pooled = theorem1_report(_standard(2), case, mc, workers=3)
    assert single.rhs == pooled.rhs
    assert single.rhs_err == pooled.rhs_err


def test_seed_changes_estimate():
    case = StrichartzCase(1, 4)
    first = theorem1_report(_standard(1), case, MonteCarloSpec(samples=20_000, seed=1))
    second = theorem1_report(_standard(1), case, MonteCarloSpec(samples=20_000, seed=2))
    assert first.rhs != second.rhs


@pytest.mark.parametrize("case_id", ["n1_q6_r6", "n1_q8_r4", "n2_q4_r4"])
def test_strichartz_corollaries_attained(case_id):
    n = int(case_id[1])
    report = strichartz_corollary_report(_standard(n), case_id)
    assert report.passed, report.ratio


def test_strichartz_corollary_rejects_wrong_dimension():
    with pytest.raises(ValueError):
        strichartz_corollary_report(_standard(2), "n1_q6_r6")


@pytest.mark.parametrize("case_id", sorted(SOBOLEV_CASES))
def test_sobolev_strichartz_attained(case_id):
    n = SOBOLEV_CASES[case_id][0]
    report = sobolev_strichartz_report(_standard(n), case_id)
    assert report.passed, report.ratio


def test_sobolev_boosted_gaussian_is_indeterminate():
    report = sobolev_strichartz_report(_standard(1).modulated(1.0), "n1_q10_r10")
    assert report.mode == MODE_REPORT
    assert report.verdict == VERDICT_INDETERMINATE
    assert report.ratio < 1.0


def test_weak_interpolation_holds():
    for n, k in [(1, 3), (1, 4), (2, 2), (3, 2)]:
        assert weak_interpolation_check(_standard(n), n, k)['holds']


def test_reversed_hls_extremal():
    ratio, err = reversed_hls_ratio(lambda x: (1.0 + x * x) ** -1.5, 1.0)
    assert ratio == pytest.approx(1.0, abs=1e-8)
    assert err <= 1e-6
    with pytest.raises(ValueError):
        reversed_hls_ratio(lambda x: math.exp(-x * x), -1.0)


def test_reversed_hls_non_extremal_is_below_one():
    ratio, err = reversed_hls_ratio(lambda x: math.exp(-x * x), 1.0)
    assert ratio < 1.0 - 10.0 * err


def test_grid_sampler_separable_weights_are_one():
    """분리 가능한 |f̂|² 에서는 축별 표의 곱이 정확한 제안 분포"""
    grid = GridFunction.from_profile(GaussianProfile(2, -0.5, [0.3, 0.0]), points=64, half_width=10.0)
    points, weights = _grid_sampler(grid)(np.random.default_rng(3), 20_000, 3)
    assert points.shape == (20_000, 3, 2)
    assert np.max(np.abs(weights - 1.0)) <= 1e-10
    assert np.all(np.abs(points) <= grid.half_width)
    # |f|² ∝ e^{-(x−0.3)²} 의 평균
    assert np.mean(points[..., 0]) == pytest.approx(0.3, abs=0.02)


def test_grid_sampler_weights_are_unbiased():
    grid = GridFunction.from_callable(
        2, 8.0, 64, lambda x: np.exp(-x[..., 0] ** 2 - x[..., 0] * x[..., 1] - x[..., 1] ** 2))
    points, weights = _grid_sampler(grid)(np.random.default_rng(5), 200_000, 1)
    assert np.std(weights) > 0.01
    assert np.mean(weights) == pytest.approx(1.0, abs=0.01)
    # 가중 평균 E[x₁x₂] < 0 (음의 상관)
    assert float(np.mean(weights * points[:, 0, 0] * points[:, 0, 1])) < -0.05

    line = GridFunction.from_profile(GaussianProfile(1, -0.5), points=128, half_width=12.0)
    _, none = _grid_sampler(line)(np.random.default_rng(1), 10, 2)
    assert none is None
