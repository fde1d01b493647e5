"""Handover rates and the fraction of time lost to handover signalling."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import MobilityProfile, NetworkParams, Strategy
from .specfun import integrate_1d


@dataclass(frozen=True)
class HandoverRates:
    """Handovers per second, H[i][j] from tier i to tier j (1 = macro, 2 = femto)."""

    h11: float
    h12: float
    h21: float
    h22: float

    def as_matrix(self):
        return [[self.h11, self.h12], [self.h21, self.h22]]


@dataclass(frozen=True)
class HandoverCost:
    raw: float  # sum of H_ij d_ij, may exceed 1
    strategy: Strategy | None = None

    @property
    def infeasible(self) -> bool:
        """True when handover signalling alone would consume all the time."""
        return self.raw > 1.0

    @property
    def value(self) -> float:
        return min(max(self.raw, 0.0), 1.0)


def boundary_shape_factor(x: float) -> float:
    """F(x) = x^-2 int_0^pi sqrt(x^2 + 1 - 2 x cos(theta)) dtheta."""
    if not x > 0:
        raise ValueError("shape factor argument must be positive")
    res = integrate_1d(lambda th: math.sqrt(max(x * x + 1 - 2 * x * math.cos(th), 0.0)), 0.0, math.pi)
    return res.value / (x * x)


def _x(params: NetworkParams, i: int, j: int) -> float:
    # x_ij = (P_i / P_j)^{1/eta}
    return (params.tier(i).tx_power / params.tier(j).tx_power) ** (1.0 / params.eta)


def _seen_from(params: NetworkParams, i: int) -> float:
    # sum_n lambda_n x_ni^2, the power-equivalent intensity seen by tier-i cells
    return sum(params.tier(n).intensity * _x(params, n, i) ** 2 for n in (1, 2))


def boundary_length_density(params: NetworkParams, i: int, j: int) -> float:
    """Length of tier-i / tier-j cell boundary per unit area (km^-1)."""
    if i not in (1, 2) or j not in (1, 2):
        raise ValueError("tiers are 1 (macro) and 2 (femto)")
    lam_i = params.tier(i).intensity
    lam_j = params.tier(j).intensity
    if lam_i == 0 or lam_j == 0:
        return 0.0
    if i == j:
        return lam_i ** 2 * boundary_shape_factor(1.0) / (2 * _seen_from(params, i) ** 1.5)
    return (lam_i * lam_j * boundary_shape_factor(_x(params, i, j)) / (2 * _seen_from(params, i) ** 1.5)
            + lam_i * lam_j * boundary_shape_factor(_x(params, j, i)) / (2 * _seen_from(params, j) ** 1.5))


def handover_rates(params: NetworkParams, v: float) -> HandoverRates:
    """Crossing rates for a straight trajectory at ``v`` km/h, in handovers per second."""
    if not v >= 0:
        raise ValueError("velocity must be >= 0")
    vs = v / 3600.0
    L = {(i, j): boundary_length_density(params, i, j) for i in (1, 2) for j in (1, 2)}
    return HandoverRates(
        h11=2 * vs / math.pi * L[1, 1],
        h12=vs / math.pi * L[1, 2],
        h21=vs / math.pi * L[2, 1],
        h22=2 * vs / math.pi * L[2, 2],
    )


def handover_cost(strategy: Strategy, params: NetworkParams, mobility: MobilityProfile) -> HandoverCost:
    strategy = Strategy(strategy)
    H = handover_rates(params, mobility.velocity)
    dm, df = mobility.macro_ho_delay, mobility.femto_ho_delay
    femto_related = H.h12 + H.h21 + H.h22
    if strategy is Strategy.BC:
        raw = H.h11 * dm + femto_related * df
    elif strategy is Strategy.FS:
        raw = H.h11 * dm + femto_related / 2 * df
    elif strategy is Strategy.FD:
        raw = H.h11 * dm
    else:
        raw = H.h11 / 2 * dm
    return HandoverCost(raw, strategy)
