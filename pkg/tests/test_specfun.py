import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from hoskip.specfun import (IntegrationConfig, cosecant, hyp2f1_coverage, hyp2f1_unit, integrate_1d, integrate_2d,
                            integrate_3d, interference_exponent, skipped_bs_transform, tail_interference_integral,
                            unbounded_interference_exponent)


@settings(max_examples=200, deadline=None)
@given(b=st.floats(0.02, 0.98), z=st.floats(0.0, 1e5))
def test_hyp2f1_unit_matches_scipy(b, z):
    assert hyp2f1_unit(b, z) == pytest.approx(special.hyp2f1(1.0, b, b + 1.0, -z), rel=1e-11, abs=1e-14)


def test_hyp2f1_series_branch_continuous():
    b = 0.5
    lo, hi = hyp2f1_unit(b, np.array([1e-4 * (1 - 1e-12), 1e-4 * (1 + 1e-12)]))
    assert lo == pytest.approx(hi, abs=1e-14)


def test_hyp2f1_rejects_bad_arguments():
    with pytest.raises(ValueError):
        hyp2f1_unit(1.2, 1.0)
    with pytest.raises(ValueError):
        hyp2f1_unit(0.5, -1.0)


@pytest.mark.parametrize("eta", [2.5, 3.0, 3.7, 4.0, 5.0])
@pytest.mark.parametrize("a", [0.0, 0.3, 1.0, 2.5])
def test_interference_exponent_matches_tail_integral(eta, a):
    # pi^{-1} * 2 pi int_a^inf w/(1+w^eta) dw, with the disk normalized so that t = a^-eta
    if a == 0:
        expected = unbounded_interference_exponent(eta)
        got = 2 * tail_interference_integral(eta, 0.0)
    else:
        expected = 2 * tail_interference_integral(eta, a) / a ** 2
        got = interference_exponent(eta, a ** -eta)
    assert got == pytest.approx(expected, rel=1e-9)


def test_eta4_interference_exponent_is_arctan():
    T = np.logspace(-2, 2, 25)
    assert np.allclose(interference_exponent(4.0, T), np.sqrt(T) * np.arctan(np.sqrt(T)), rtol=1e-13, atol=1e-15)


def test_unbounded_exponent_eta4():
    assert unbounded_interference_exponent(4.0) == pytest.approx(math.pi / 2, rel=1e-15)


def test_eta_below_two_rejected():
    with pytest.raises(ValueError, match="exceed 2"):
        hyp2f1_coverage(1.5, 1.0)


def test_cosecant_undefined_at_pi():
    with pytest.raises(ValueError):
        cosecant(math.pi)


@pytest.mark.parametrize("eta", [3.0, 4.0, 4.5])
@pytest.mark.parametrize("z", [1e-6, 0.1, 1.0, 30.0])
def test_skipped_bs_transform_by_quadrature(eta, z):
    c = 1 / z
    direct = integrate_1d(lambda u: 1 / (1 + c * u ** (-eta / 2)) if u > 0 else 0.0, 0.0, 1.0).value
    assert skipped_bs_transform(eta, z) == pytest.approx(direct, rel=1e-8, abs=1e-13)


def test_integrate_1d_infinite_range():
    res = integrate_1d(lambda x: math.exp(-x), 0.0, math.inf)
    assert res.converged and res.value == pytest.approx(1.0, rel=1e-10)


def test_integrate_2d_and_3d_boxes():
    r2 = integrate_2d(lambda x, y: x * y, [0, 0], [1, 2])
    assert r2.converged and r2.value == pytest.approx(1.0, rel=1e-10)
    r3 = integrate_3d(lambda x, y, z: np.exp(-(x + y + z)), [0, 0, 0], [1, 1, 1])
    exact = (1 - math.exp(-1)) ** 3
    # default 3D tolerance is rel 1e-5; the reported error bound must cover the miss
    assert r3.converged and abs(r3.value - exact) <= max(r3.error, 1e-5 * exact)


def test_integration_config_validation():
    with pytest.raises(ValueError):
        IntegrationConfig(rel_tol=0)
