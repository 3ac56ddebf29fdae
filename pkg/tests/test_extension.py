import math

import numpy as np
import pytest
from scipy import integrate

from strichartzlab.domain import MODE_STRICT
from strichartzlab.extension import (FAMILY_EXPONENTIAL, FAMILY_GAUSSIAN, FAMILY_TABLE, SurfaceFunction,
                                     cone_extension, cone_pair_weight, cone_pair_weight_2d, cone_triple_weight,
                                     convolution_normalization, dual_maximizer, duality_pairing,
                                     extension_by_quadrature, extension_ratio_report, extension_space_time_norm,
                                     fiber_product_spread, paraboloid_extension, surface_l2_norm)


def _cone(n, family=FAMILY_EXPONENTIAL, A=-1.0, b=None):
    return SurfaceFunction("cone", n, family, A, b)


def test_surface_function_validation():
    with pytest.raises(ValueError):
        SurfaceFunction("sphere", 3)
    with pytest.raises(ValueError):
        SurfaceFunction("paraboloid", 2, FAMILY_EXPONENTIAL)
    with pytest.raises(ValueError):
        _cone(3, A=-1.0, b=[1.5, 0.0, 0.0])
    with pytest.raises(ValueError):
        SurfaceFunction("cone", 3, FAMILY_TABLE, radii=[0.0, 2.0, 1.0], values=[1.0, 0.5, 0.0])


def test_cone_surface_norms():
    """‖e^{-|ω|}‖²_{L²(dω/|ω|)} = π (n=3), π (n=2, A=-1)"""
    assert surface_l2_norm(_cone(3)) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert surface_l2_norm(_cone(2)) == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    radii = np.linspace(0.0, 40.0, 4001)
    table = SurfaceFunction("cone", 3, FAMILY_TABLE, radii=radii, values=np.exp(-radii))
    assert surface_l2_norm(table) == pytest.approx(math.sqrt(math.pi), rel=1e-4)


@pytest.mark.parametrize("n,family", [(3, FAMILY_EXPONENTIAL), (2, FAMILY_EXPONENTIAL), (3, FAMILY_GAUSSIAN)])
def test_cone_closed_form_matches_quadrature(n, family):
    sf = _cone(n, family)
    for t, x in ((0.7, [0.5, 0.2, 0.0][:n]), (0.3, [0.0] * n), (-1.2, [2.0] + [0.0] * (n - 1))):
        assert cone_extension(sf, t, x) == pytest.approx(extension_by_quadrature(sf, t, x), rel=1e-6, abs=1e-12)


@pytest.mark.parametrize("n", [1, 2])
def test_paraboloid_closed_form_matches_quadrature(n):
    sf = SurfaceFunction("paraboloid", n, FAMILY_GAUSSIAN, -0.5)
    x = [0.4, -0.3][:n]
    assert paraboloid_extension(sf, 0.6, x) == pytest.approx(extension_by_quadrature(sf, 0.6, x), rel=1e-7)


def test_imaginary_b_is_translation():
    moved = _cone(3, b=[0.5j, 0.0, 0.0])
    assert cone_extension(moved, 0.4, [0.5, 0.0, 0.0]) == pytest.approx(cone_extension(_cone(3), 0.4, [0.0] * 3))
    with pytest.raises(ValueError):
        cone_extension(_cone(3, b=[0.2, 0.0, 0.0]), 0.4, [0.0] * 3)


def test_cone_equality_n3():
    report = extension_ratio_report(_cone(3), "cone_n3_q4")
    assert report.lhs == pytest.approx(2.0 * math.pi ** 3, rel=1e-3)
    assert report.passed
    assert any("합성곱" in note for note in report.notes)


def test_cone_equality_n2():
    report = extension_ratio_report(_cone(2), "cone_n2_q6")
    assert report.lhs == pytest.approx(4.0 * math.pi ** 5, rel=5e-3)
    assert report.passed


def test_cone_gaussian_profile_is_strict():
    report = extension_ratio_report(_cone(3, FAMILY_GAUSSIAN), "cone_n3_q4")
    assert report.ratio < 1.0
    assert report.lhs_err <= 1e-6 * report.lhs
    assert report.passed


def test_cone_norm_invariant_under_translation():
    base, _ = extension_space_time_norm(_cone(3), 4.0)
    moved, _ = extension_space_time_norm(_cone(3, b=[0.0, 0.3j, 0.0]), 4.0)
    assert moved == pytest.approx(base, rel=1e-8)


def test_paraboloid_equality_n2():
    report = extension_ratio_report(SurfaceFunction("paraboloid", 2, FAMILY_GAUSSIAN, -0.5), "parab_n2_q4")
    assert report.lhs == pytest.approx(1.0 / 16.0, rel=1e-6)
    assert report.passed


def test_report_rejects_mismatched_case():
    with pytest.raises(ValueError):
        extension_ratio_report(_cone(2), "cone_n3_q4")


def test_convolution_normalization():
    assert convolution_normalization(_cone(3), 4.0) == pytest.approx((2.0 * math.pi) ** 4)
    assert convolution_normalization(_cone(2), 6.0) == pytest.approx((2.0 * math.pi) ** 6)
    assert convolution_normalization(SurfaceFunction("paraboloid", 1, FAMILY_GAUSSIAN, -0.5), 6.0) == 1.0


def test_zero_function():
    zero = SurfaceFunction.zero("cone", 3)
    assert zero.is_zero
    assert extension_space_time_norm(zero, 4.0) == (0.0, 0.0)
    assert cone_extension(zero, 0.1, [0.0] * 3) == 0j
    with pytest.raises(ValueError):
        dual_maximizer(zero, 4.0)


def test_pair_weight_constant():
    """n=3 쌍 가중치는 원뿔 내부에서 상수 2π"""
    for tau, omega in ((2.0, [0.3, 0.4, 0.5]), (1.0, [0.0, 0.0, 0.0]), (5.0, [0.1, -3.0, 2.5])):
        assert cone_pair_weight(tau, omega) == pytest.approx(2.0 * math.pi, rel=1e-6)
    with pytest.raises(ValueError):
        cone_pair_weight(0.5, [1.0, 0.0, 0.0])


def test_pair_weight_2d_closed_form():
    omega = np.array([0.5, 0.3])
    expected = 2.0 * math.pi / math.sqrt(4.0 - omega @ omega)
    assert cone_pair_weight_2d(2.0, omega) == pytest.approx(expected, rel=1e-10)


def test_triple_weight_constant():
    assert cone_triple_weight(2.0, [0.5, 0.2]) == pytest.approx(4.0 * math.pi ** 2, rel=1e-3)


def test_dual_maximizer_attains_holder():
    sf = _cone(2)
    h = dual_maximizer(sf, 6.0, half_width=6.0, points=24)
    q_dual = 6.0 / 5.0
    assert h.cell_volume * float(np.sum(np.abs(h.samples) ** q_dual)) == pytest.approx(1.0, rel=1e-12)
    pairing, norm = duality_pairing(h, sf, 6.0)
    assert pairing == pytest.approx(norm, rel=1e-12)


def test_fiber_product_spread():
    exp3 = fiber_product_spread(_cone(3, b=[0.3j, 0.0, 0.0]), 2.0, [0.5, 0.2, 0.1])
    exp2 = fiber_product_spread(_cone(2, b=[0.2, 0.1]), 2.0, [0.5, 0.2])
    gauss3 = fiber_product_spread(_cone(3, FAMILY_GAUSSIAN), 2.0, [0.5, 0.2, 0.1])
    assert exp3 <= 1e-12
    assert exp2 <= 1e-12
    assert gauss3 >= 1e-3


def _laguerre_cone(n, coeffs, A=-1.0, b=None):
    return SurfaceFunction("cone", n, FAMILY_EXPONENTIAL, A, b, radial_coeffs=coeffs)


def test_laguerre_factor_validation():
    assert _laguerre_cone(3, [0.0, 0.0]).is_maximizer_family
    assert not _laguerre_cone(3, [0.0, 0.2]).is_maximizer_family
    with pytest.raises(ValueError):
        _laguerre_cone(3, [0.2], b=[0.1, 0.0, 0.0])
    with pytest.raises(ValueError):
        SurfaceFunction("cone", 3, FAMILY_GAUSSIAN, -1.0, radial_coeffs=[0.2])


@pytest.mark.parametrize("n", [2, 3])
def test_laguerre_cone_kernel_matches_quadrature(n):
    sf = _laguerre_cone(n, [0.3, -0.2j, 0.1], A=-0.8 + 0.2j)
    for t, x in ((0.7, [0.5, 0.2, 0.0][:n]), (0.3, [0.0] * n), (-1.2, [2.0] + [0.0] * (n - 1))):
        assert cone_extension(sf, t, x) == pytest.approx(extension_by_quadrature(sf, t, x), rel=1e-6, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_laguerre_cone_surface_norm(n):
    sf = _laguerre_cone(n, [0.4, 0.1 + 0.3j], A=-0.7)
    area = 2.0 * math.pi if n == 2 else 4.0 * math.pi
    mass, _ = integrate.quad(lambda r: abs(complex(sf.radial(r))) ** 2 * r ** (n - 2), 0.0, np.inf,
                             epsabs=0.0, epsrel=1e-12, limit=200)
    assert surface_l2_norm(sf) == pytest.approx(math.sqrt(area * mass), rel=1e-9)


def test_laguerre_perturbed_cone_is_strict():
    report = extension_ratio_report(_laguerre_cone(3, [0.0, 0.3]), "cone_n3_q4")
    assert report.mode == MODE_STRICT
    assert report.ratio < 1.0 - 10.0 * report.lhs_err / report.rhs
    assert report.passed
