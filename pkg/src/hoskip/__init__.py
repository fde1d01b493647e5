"""Velocity-aware handover skipping in two-tier Poisson cellular networks.

Analytic coverage, handover cost and throughput for four strategies (best
connected, femto skipping, femto disregard, macro skipping), with a Monte
Carlo simulator that checks them.
"""

from .analytic import CoverageResult, bc_closed_form, coverage
from .handover import HandoverCost, HandoverRates, boundary_shape_factor, handover_cost, handover_rates
from .model import (MobilityProfile, NetworkParams, Phase, Strategy, TierParams, association_probability,
                    db_to_linear, linear_to_db, phase_probabilities, table3_params)
from .simulation import (NetworkRealization, Trajectory, empirical_coverage, empirical_coverage_all,
                         sample_network, simulate_trajectory, stationary_sinr)
from .throughput import ThroughputResult, achievable_rate, average_throughput, best_strategy, max_skipping_gain

__all__ = [
    "CoverageResult", "bc_closed_form", "coverage",
    "HandoverCost", "HandoverRates", "boundary_shape_factor", "handover_cost", "handover_rates",
    "MobilityProfile", "NetworkParams", "Phase", "Strategy", "TierParams", "association_probability",
    "db_to_linear", "linear_to_db", "phase_probabilities", "table3_params",
    "NetworkRealization", "Trajectory", "empirical_coverage", "empirical_coverage_all",
    "sample_network", "simulate_trajectory", "stationary_sinr",
    "ThroughputResult", "achievable_rate", "average_throughput", "best_strategy", "max_skipping_gain",
]
