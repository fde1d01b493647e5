"""Achievable rate and handover-discounted average throughput."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .analytic import CoverageResult, coverage
from .handover import handover_cost
from .model import MobilityProfile, NetworkParams, Strategy

SKIPPING = (Strategy.FS, Strategy.FD, Strategy.MS)


@dataclass(frozen=True)
class ThroughputResult:
    strategy: Strategy
    ic: bool
    velocity: float  # km/h
    achievable_rate: float  # nats/s/Hz
    ho_cost: float  # clamped D_HO
    infeasible: bool  # raw D_HO exceeded one
    bandwidth: float  # Hz

    @property
    def average_throughput(self) -> float:
        """W * R * (1 - D_HO) in nats/s (zero when handovers eat all the time)."""
        return self.bandwidth * self.achievable_rate * (1.0 - self.ho_cost)

    @property
    def average_throughput_bits(self) -> float:
        return self.average_throughput / math.log(2.0)


@lru_cache(maxsize=512)
def _cached_coverage(strategy: Strategy, params: NetworkParams, theta: float, ic: bool) -> CoverageResult:
    # velocity only enters through D_HO, so one coverage value serves a whole sweep
    return coverage(strategy, params, theta, ic)


def strategy_coverage(strategy, params: NetworkParams, theta: float, ic: bool = False) -> CoverageResult:
    strategy = Strategy(strategy)
    ic = bool(ic) and strategy is not Strategy.BC
    return _cached_coverage(strategy, params, float(theta), ic)


def achievable_rate(strategy, params: NetworkParams, theta: float, ic: bool = False) -> float:
    """ln(1 + theta) times the coverage probability at threshold theta (linear)."""
    if not theta >= 0:
        raise ValueError("threshold must be >= 0")
    if theta == 0:
        return 0.0
    return math.log1p(theta) * strategy_coverage(strategy, params, theta, ic).value


def average_throughput(strategy, params: NetworkParams, mobility: MobilityProfile,
                       bandwidth: float, theta: float, ic: bool = False) -> ThroughputResult:
    if not bandwidth > 0:
        raise ValueError("bandwidth must be > 0")
    strategy = Strategy(strategy)
    ic = bool(ic) and strategy is not Strategy.BC
    rate = achievable_rate(strategy, params, theta, ic)
    cost = handover_cost(strategy, params, mobility)
    return ThroughputResult(strategy, ic, mobility.velocity, rate, cost.value, cost.infeasible, bandwidth)


def throughput_sweep(strategy, params: NetworkParams, velocities: Iterable[float], bandwidth: float,
                     theta: float, ic: bool = False, d_m: float = 0.35, d_f: float = 0.7):
    return [average_throughput(strategy, params, MobilityProfile(v, d_m, d_f), bandwidth, theta, ic)
            for v in velocities]


@dataclass(frozen=True)
class BestStrategyRow:
    velocity: float
    best: Strategy
    throughput: dict  # Strategy -> AT (nats/s)


def best_strategy(params: NetworkParams, velocities: Sequence[float], bandwidth: float, theta: float,
                  ic: bool = False, d_m: float = 0.35, d_f: float = 0.7) -> list[BestStrategyRow]:
    """Strategy with the highest average throughput at each velocity (ties go to the earlier one)."""
    rows = []
    for v in velocities:
        mob = MobilityProfile(v, d_m, d_f)
        at = {s: average_throughput(s, params, mob, bandwidth, theta, ic).average_throughput for s in Strategy}
        best = max(Strategy, key=lambda s: at[s])
        rows.append(BestStrategyRow(float(v), best, at))
    return rows


def region_boundaries(rows: Sequence[BestStrategyRow]) -> list[tuple[float, Strategy, Strategy]]:
    """Velocities where the winning strategy changes, as (velocity, old, new)."""
    return [(b.velocity, a.best, b.best) for a, b in zip(rows[:-1], rows[1:]) if a.best is not b.best]


@dataclass(frozen=True)
class SkippingGain:
    velocity: float
    strategy: Strategy
    ic: bool
    gain: float  # relative to BC


def max_skipping_gain(params: NetworkParams, velocities: Sequence[float], bandwidth: float, theta: float,
                      d_m: float = 0.35, d_f: float = 1.05, ic_options=(False, True)) -> SkippingGain:
    """Largest relative throughput gain of any skipping strategy over BC on the velocity grid."""
    best = None
    for v in velocities:
        mob = MobilityProfile(v, d_m, d_f)
        bc = average_throughput(Strategy.BC, params, mob, bandwidth, theta).average_throughput
        if bc <= 0:
            continue
        for s in SKIPPING:
            for ic in ic_options:
                at = average_throughput(s, params, mob, bandwidth, theta, ic).average_throughput
                g = float((at - bc) / bc)
                if best is None or g > best.gain:
                    best = SkippingGain(float(v), s, ic, g)
    if best is None:
        raise ValueError("BC throughput is zero on the whole grid")
    return best
