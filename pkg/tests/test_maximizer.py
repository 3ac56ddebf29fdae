import numpy as np
import pytest

from strichartzlab.domain import DomainError, GaussianProfile
from strichartzlab.maximizer import (FUNCTIONAL_IDS, SimplexParams, cone_surface_function, functional_dimension,
                                     nelder_mead, optimize, parse_direction, perturbation_scan, ratio_objective)
from strichartzlab.trial import TrialFunction


def _gaussian_trial(n):
    return TrialFunction.gaussian(GaussianProfile(n, -0.5))


def test_adaptive_coefficients():
    assert SimplexParams().coefficients(4) == pytest.approx((1.0, 1.5, 0.625, 0.75))
    assert SimplexParams(adaptive=False).coefficients(4) == (1.0, 2.0, 0.5, 0.5)
    assert SimplexParams().coefficients(1) == (1.0, 2.0, 0.5, 0.5)


def test_nelder_mead_quadratic():
    target = np.array([1.0, -2.0, 0.5])
    run = nelder_mead(lambda x: float(np.sum((x - target) ** 2)), np.zeros(3), budget=2000,
                      params=SimplexParams(tol=1e-8))
    assert run.converged
    assert run.x == pytest.approx(target, abs=1e-5)
    assert all(a >= b for a, b in zip(run.trace, run.trace[1:]))


def test_nelder_mead_budget_is_hard_limit():
    run = nelder_mead(lambda x: float(np.sum(x * x)), np.ones(4), budget=12)
    assert run.exhausted
    assert run.evaluations == 12
    assert len(run.trace) == 12


def test_functional_dimensions():
    assert functional_dimension("t1_n2_k3") == 2
    assert functional_dimension("parab_n1_q6") == 1
    assert functional_dimension("cone_n2_q6") == 2
    assert len(FUNCTIONAL_IDS) == 12
    with pytest.raises(ValueError):
        functional_dimension("t1_n9_k9")


@pytest.mark.parametrize("functional_id", ["t1_n1_k3", "t1_n2_k2", "n1_q8_r4", "n2_q4_r4", "parab_n1_q6",
                                           "parab_n2_q4"])
def test_gaussian_ratio_is_one(functional_id):
    trial = _gaussian_trial(functional_dimension(functional_id))
    assert ratio_objective(trial, functional_id) == pytest.approx(1.0, abs=1e-8)


def test_ratio_objective_checks_dimension():
    with pytest.raises(ValueError):
        ratio_objective(_gaussian_trial(2), "t1_n1_k3")


def test_optimize_gaussian_start_returns_immediately():
    result = optimize("t1_n1_k3", _gaussian_trial(1), budget=50)
    assert result.evaluations == 1
    assert result.stages == 0
    assert result.ratio == pytest.approx(1.0, abs=1e-8)


def test_optimize_recovers_gaussian():
    """섭동된 시작점에서 비율이 1 로, Hermite 계수가 0 으로 돌아온다"""
    init = TrialFunction(GaussianProfile(1, -0.5).fourier(), [0.0, 0.3])
    start = ratio_objective(init, "t1_n1_k3")
    result = optimize("t1_n1_k3", init, budget=500)
    assert result.ratio >= start
    assert result.ratio >= 0.999
    assert result.ratio <= 1.0 + 1e-8
    assert result.coefficient_norm <= 0.02
    assert result.evaluations <= 500
    assert all(a <= b for a, b in zip(result.trace, result.trace[1:]))


def test_optimize_reports_exhausted_budget():
    init = TrialFunction(GaussianProfile(1, -0.5).fourier(), [0.0, 0.3])
    result = optimize("t1_n1_k3", init, budget=15)
    assert result.exhausted
    assert result.evaluations <= 15
    with pytest.raises(ValueError):
        optimize("t1_n1_k3", init, budget=0)


def test_parse_direction():
    assert parse_direction("H4") == 4
    assert parse_direction("2") == 2
    assert parse_direction("scaling") == "scaling"
    with pytest.raises(ValueError):
        parse_direction("sideways")
    with pytest.raises(ValueError):
        parse_direction("0")


def test_scan_hermite_direction_is_local_maximum():
    result = perturbation_scan("t1_n1_k3", "H2", [-0.2, -0.1, 0.0, 0.1, 0.2])
    assert result.direction == "H2"
    assert result.max_ratio <= 1.0 + 1e-8
    assert result.second_difference < 0.0
    ratios = dict(result.points)
    assert ratios[0.0] == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("direction", ["zero", "modulation", "translation", "scaling"])
def test_scan_symmetry_directions_are_flat(direction):
    result = perturbation_scan("n1_q6_r6", direction, [-0.3, 0.0, 0.3])
    assert all(ratio == pytest.approx(1.0, abs=1e-7) for _, ratio in result.points)
    assert abs(result.second_difference) <= 1e-5


def test_scan_requires_symmetric_epsilons():
    with pytest.raises(ValueError):
        perturbation_scan("t1_n1_k3", 2, [0.1, 0.2])
    with pytest.raises(ValueError):
        perturbation_scan("t1_n1_k3", 2, [0.0, 0.1, 0.2])


def test_scan_h4_ratio_decreases_away_from_gaussian():
    result = perturbation_scan("t1_n1_k3", "H4", [-0.4, -0.2, 0.0, 0.2, 0.4])
    ratios = dict(result.points)
    for sign in (-1.0, 1.0):
        assert ratios[0.4 * sign] < ratios[0.2 * sign] < 1.0
    assert result.second_difference < 0.0


@pytest.mark.parametrize("functional_id", ["cone_n3_q4", "cone_n2_q6"])
def test_cone_exponential_ratio_is_one(functional_id):
    trial = _gaussian_trial(functional_dimension(functional_id))
    assert ratio_objective(trial, functional_id) == pytest.approx(1.0, abs=1e-5)


def test_cone_laguerre_trial_is_below_one():
    trial = TrialFunction(GaussianProfile(3, -0.5), [0.0, 0.3])
    sf = cone_surface_function(trial)
    assert not sf.is_maximizer_family
    assert ratio_objective(trial, "cone_n3_q4") < 1.0
    with pytest.raises(DomainError):
        cone_surface_function(TrialFunction(GaussianProfile(3, -0.5, [0.1, 0.0, 0.0]), [0.0, 0.3]))


def test_optimize_cone_keeps_ratio_bounded():
    init = TrialFunction(GaussianProfile(3, -0.5), [0.0, 0.3])
    start = ratio_objective(init, "cone_n3_q4")
    result = optimize("cone_n3_q4", init, budget=20)
    assert result.evaluations <= 20
    assert start <= result.ratio <= 1.0 + 1e-6
    assert all(a <= b for a, b in zip(result.trace, result.trace[1:]))
