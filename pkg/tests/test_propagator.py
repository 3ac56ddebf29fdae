import math

import numpy as np
import pytest

from strichartzlab.domain import DomainError, GaussianProfile, GridFunction
from strichartzlab.mixed_norms import lebesgue_norm_gaussian
from strichartzlab.propagator import (evolve_gaussian, evolve_grid, evolved_parameters, fourier_forward,
                                      fourier_inverse, gradient_norm, lens_chirp_resolved, lens_transform)


def test_gaussian_requires_negative_real_part():
    with pytest.raises(DomainError):
        GaussianProfile(1, 0.5)
    with pytest.raises(DomainError):
        GaussianProfile(0, -1.0)


def test_fourier_of_standard_gaussian_is_itself():
    """단위 규약에서 e^{-|x|²/2} 는 Fourier 고정점"""
    g = GaussianProfile(2, -0.5)
    fhat = g.fourier()
    assert fhat.A == pytest.approx(-0.5)
    assert fhat.C == pytest.approx(0.0, abs=1e-15)
    assert fhat.l2_norm() == pytest.approx(g.l2_norm(), rel=1e-14)


def test_fourier_inverse_roundtrip_parameters():
    g = GaussianProfile(1, -0.7 + 0.2j, [0.3 - 0.1j], 0.1)
    back = g.fourier().inverse_fourier()
    assert back.A == pytest.approx(g.A)
    assert back.b[0] == pytest.approx(g.b[0])
    assert back.C == pytest.approx(g.C)


def test_evolution_at_zero_returns_initial_data():
    g = GaussianProfile(1, -0.5, [0.2])
    A_t, b_t, C_t = evolved_parameters(g, [0.0, 1.0])
    assert A_t[0] == g.A
    assert b_t[0, 0] == g.b[0]
    assert C_t[0] == g.C
    assert evolve_gaussian(g, 0.0).profile is g


def test_gaussian_evolution_conserves_mass():
    g = GaussianProfile(2, -0.5, [0.4j, 0.1])
    for t in (-3.0, 0.25, 10.0):
        assert evolve_gaussian(g, t).profile.l2_norm() == pytest.approx(g.l2_norm(), rel=1e-12)


def test_standard_gaussian_evolved_width():
    """u(t) = (1+2it)^{-1/2} e^{-x²/(2(1+2it))}"""
    g = GaussianProfile(1, -0.5)
    u = evolve_gaussian(g, 0.5)
    assert u.A == pytest.approx(-1.0 / (2.0 * (1.0 + 1.0j)))
    assert abs(complex(u(np.array([0.0])))) == pytest.approx(abs((1.0 + 1.0j) ** -0.5), rel=1e-12)


def test_grid_evolution_matches_closed_form():
    g = GaussianProfile(1, -0.5).modulated(0.5)
    grid = GridFunction.from_profile(g, points=1024, half_width=40.0)
    evolved = evolve_grid(grid, 0.5)
    exact = evolve_gaussian(g, 0.5)(grid.axis()[:, None])
    assert np.max(np.abs(evolved.samples - exact)) <= 1e-8
    assert evolved.reliable


def test_grid_fourier_roundtrip():
    grid = GridFunction.from_profile(GaussianProfile(2, -0.5), points=64, half_width=12.0)
    back = fourier_inverse(fourier_forward(grid))
    assert back.half_width == pytest.approx(grid.half_width)
    assert np.max(np.abs(back.samples - grid.samples)) <= 1e-12


def test_grid_unitarity():
    grid = GridFunction.from_profile(GaussianProfile(1, -0.5), points=512, half_width=40.0)
    assert evolve_grid(grid, 1.3).l2_norm() == pytest.approx(grid.l2_norm(), rel=1e-12)


def test_gradient_norm_gaussian_and_grid_agree():
    g = GaussianProfile(1, -0.5)
    grid = GridFunction.from_profile(g, points=512, half_width=30.0)
    # ‖∇g‖² = ∫ω²|ĝ|² = √π/2
    assert gradient_norm(g) ** 2 == pytest.approx(math.sqrt(math.pi) / 2.0, rel=1e-12)
    assert gradient_norm(grid) == pytest.approx(gradient_norm(g), rel=1e-8)


def test_grid_shape_validation():
    with pytest.raises(DomainError):
        GridFunction(1, 10.0, 15, np.zeros(15))
    with pytest.raises(DomainError):
        GridFunction(2, 10.0, 16, np.zeros(16))


def test_amplitude_factor_is_value_at_origin():
    """b = 0 이면 u(t,0) = e^C (1 − 4iAt)^{-n/2}"""
    g = GaussianProfile(3, -0.5 + 0.1j, None, 0.2 - 0.3j)
    u = evolve_gaussian(g, 5.0)
    assert complex(u(np.zeros(3))) == pytest.approx(np.exp(g.C) * u.amplitude_factor, rel=1e-12)
    assert abs(u.amplitude_factor) == pytest.approx(abs(1.0 - 4j * g.A * 5.0) ** -1.5, rel=1e-12)


def test_time_reversal_conjugates_solution():
    """u[f̄](−t) = conj(u[f](t))"""
    g = GaussianProfile(1, -0.4 + 0.3j, [0.2 - 0.5j], 0.1j)
    x = np.linspace(-3.0, 3.0, 13)
    for t in (0.3, 2.0):
        forward = evolve_gaussian(g, t)(x[:, None])
        backward = evolve_gaussian(g.conjugate(), -t)(x[:, None])
        assert np.max(np.abs(backward - np.conj(forward))) <= 1e-12


def test_group_law():
    """e^{itΔ} e^{isΔ} = e^{i(s+t)Δ}"""
    g = GaussianProfile(1, -0.5, [0.3j])
    x = np.linspace(-4.0, 4.0, 17)[:, None]
    twice = evolve_gaussian(evolve_gaussian(g, 0.3).profile, 0.5)(x)
    once = evolve_gaussian(g, 0.8)(x)
    assert np.max(np.abs(twice - once)) <= 1e-12

    grid = GridFunction.from_profile(GaussianProfile(2, -0.5), points=128, half_width=24.0)
    stepped = evolve_grid(evolve_grid(grid, 0.3), 0.5)
    direct = evolve_grid(grid, 0.8)
    assert np.max(np.abs(stepped.samples - direct.samples)) <= 1e-12


def test_lens_transform_gives_far_field_norm():
    """∫|u(t)|^4 = |2t|^{-1} ∫|ĝ_t|^4 (n = 1)"""
    g = GaussianProfile(1, -0.5)
    grid = GridFunction.from_profile(g, points=1024, half_width=40.0)
    t = 2.0
    ghat = lens_transform(grid, t)
    value = abs(2.0 * t) ** -1 * ghat.cell_volume * float(np.sum(np.abs(ghat.samples) ** 4))
    exact = lebesgue_norm_gaussian(evolve_gaussian(g, t).profile, 4.0) ** 4
    assert value == pytest.approx(exact, rel=1e-10)
    assert ghat.reliable
    assert lens_chirp_resolved(grid, t)
    assert not lens_chirp_resolved(grid, 0.1)
    with pytest.raises(ValueError):
        lens_transform(grid, 0.0)
