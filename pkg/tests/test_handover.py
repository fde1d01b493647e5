import math

import numpy as np
import pytest
from scipy import special

from hoskip.handover import (HandoverCost, boundary_length_density, boundary_shape_factor, handover_cost,
                             handover_rates)
from hoskip.model import MobilityProfile, NetworkParams, Strategy


def test_shape_factor_at_one():
    assert boundary_shape_factor(1.0) == pytest.approx(4.0, rel=1e-12)


@pytest.mark.parametrize("x", [0.3, 0.56, 1.78, 4.0])
def test_shape_factor_elliptic_form(x):
    # int_0^pi sqrt(x^2+1-2x cos t) dt = 2 (1+x) E(4x/(1+x)^2)
    expected = 2 * (1 + x) * special.ellipe(4 * x / (1 + x) ** 2) / x ** 2
    assert boundary_shape_factor(x) == pytest.approx(expected, rel=1e-10)


def test_shape_factor_rejects_non_positive():
    with pytest.raises(ValueError):
        boundary_shape_factor(0.0)


def test_single_tier_rate(macro_only):
    v = 100.0
    expected = 4 * (v / 3600) * math.sqrt(30) / math.pi
    H = handover_rates(macro_only, v)
    assert H.h11 == pytest.approx(expected, rel=1e-10)
    assert H.h12 == H.h21 == H.h22 == 0.0


def test_voronoi_boundary_density(macro_only):
    # Poisson-Voronoi edge length per unit area is 2 sqrt(lambda)
    assert boundary_length_density(macro_only, 1, 1) == pytest.approx(2 * math.sqrt(30), rel=1e-10)


def test_equal_power_tiers_merge():
    # with equal powers two tiers form one Voronoi tessellation of intensity l1 + l2
    p = NetworkParams.from_values(10, 30, 1.0, 1.0)
    H = handover_rates(p, 60)
    total = H.h11 + H.h12 + H.h21 + H.h22
    assert total == pytest.approx(4 * (60 / 3600) * math.sqrt(40) / math.pi, rel=1e-10)


def test_reference_rates_symmetry(ref):
    H = handover_rates(ref, 100)
    assert H.h12 == pytest.approx(H.h21)
    assert boundary_length_density(ref, 1, 2) == pytest.approx(boundary_length_density(ref, 2, 1))
    assert H.as_matrix()[0][1] == H.h12


def test_rates_linear_in_velocity(ref):
    base = handover_rates(ref, 1.0)
    for v in (7.0, 55.5, 200.0):
        H = handover_rates(ref, v)
        for a, b in zip(np.ravel(H.as_matrix()), np.ravel(base.as_matrix())):
            assert a == pytest.approx(v * b, rel=1e-12)


def test_zero_velocity_has_no_cost(ref):
    for s in Strategy:
        assert handover_cost(s, ref, MobilityProfile(0.0)).value == 0.0


def test_cost_ordering_and_linearity(ref):
    unit = {s: handover_cost(s, ref, MobilityProfile(1.0, 0.35, 0.7)).raw for s in Strategy}
    for v in np.linspace(0, 200, 41):
        c = {s: handover_cost(s, ref, MobilityProfile(v, 0.35, 0.7)).raw for s in Strategy}
        assert c[Strategy.MS] <= c[Strategy.FD] <= c[Strategy.FS] <= c[Strategy.BC]
        for s in Strategy:
            assert c[s] == pytest.approx(v * unit[s], rel=1e-12, abs=0)


def test_fd_and_ms_costs(ref):
    mob = MobilityProfile(120, 0.35, 0.7)
    H = handover_rates(ref, 120)
    assert handover_cost("FD", ref, mob).raw == pytest.approx(H.h11 * 0.35)
    assert handover_cost("MS", ref, mob).raw == pytest.approx(H.h11 * 0.35 / 2)


def test_infeasible_cost_is_clamped():
    c = HandoverCost(1.7, Strategy.BC)
    assert c.infeasible and c.value == 1.0
    assert not HandoverCost(0.2).infeasible


def test_dense_network_becomes_infeasible():
    p = NetworkParams.from_values(300, 3000)
    c = handover_cost("BC", p, MobilityProfile(200, 0.35, 1.05))
    assert c.infeasible and c.value == 1.0


def test_negative_velocity_rejected(ref):
    with pytest.raises(ValueError):
        handover_rates(ref, -1)
