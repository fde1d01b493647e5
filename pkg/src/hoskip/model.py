"""Shared vocabulary for the two-tier handover-skipping model.

Units are fixed throughout the package: distances in km, intensities in
BS/km^2, powers in watts, delays in seconds and velocities in km/h (converted
to km/s where rates are formed).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace


class Strategy(str, enum.Enum):
    """Handover strategies, ordered from nomadic to very high velocity users."""

    BC = "BC"  # best connected
    FS = "FS"  # femto skipping (every other femto)
    FD = "FD"  # femto disregard (whole femto tier)
    MS = "MS"  # femto disregard plus every other macro skipped


class Phase(str, enum.Enum):
    """Association state of the test user.

    ``MACRO_DISREGARD`` is the MS non-blackout state in which a femto BS is the
    strongest but the user stays on its nearest macro.
    """

    MACRO = "macro"
    FEMTO = "femto"
    MACRO_DISREGARD = "macro_disregard"
    BLACKOUT = "blackout"


MACRO, FEMTO = 1, 2


@dataclass(frozen=True)
class TierParams:
    intensity: float  # BS per km^2
    tx_power: float  # watts

    def __post_init__(self):
        if not (self.intensity >= 0 and math.isfinite(self.intensity)):
            raise ValueError(f"tier intensity must be finite and >= 0, got {self.intensity}")
        if not (self.tx_power > 0 and math.isfinite(self.tx_power)):
            raise ValueError(f"tier transmit power must be > 0, got {self.tx_power}")


@dataclass(frozen=True)
class NetworkParams:
    """Two-tier PPP network: macro is tier 1, femto is tier 2."""

    macro: TierParams
    femto: TierParams
    path_loss_exponent: float = 4.0
    noise_power: float = 0.0

    def __post_init__(self):
        if not self.path_loss_exponent > 2:
            raise ValueError("path loss exponent must exceed 2")
        if not self.noise_power >= 0:
            raise ValueError("noise power must be >= 0")

    @classmethod
    def from_values(cls, lambda_macro, lambda_femto, p_macro=1.0, p_femto=0.1,
                    eta=4.0, noise=0.0) -> "NetworkParams":
        return cls(TierParams(lambda_macro, p_macro), TierParams(lambda_femto, p_femto),
                   eta, noise)

    @property
    def eta(self) -> float:
        return self.path_loss_exponent

    @property
    def lam1(self) -> float:
        return self.macro.intensity

    @property
    def lam2(self) -> float:
        return self.femto.intensity

    @property
    def p1(self) -> float:
        return self.macro.tx_power

    @property
    def p2(self) -> float:
        return self.femto.tx_power

    def tier(self, k: int) -> TierParams:
        if k == MACRO:
            return self.macro
        if k == FEMTO:
            return self.femto
        raise ValueError(f"tier must be 1 (macro) or 2 (femto), got {k}")

    @property
    def lambda_t(self) -> float:
        """Power-weighted total intensity lambda_1 P_1^{2/eta} + lambda_2 P_2^{2/eta}."""
        d = 2.0 / self.eta
        return self.lam1 * self.p1 ** d + self.lam2 * self.p2 ** d

    def femto_range_ratio(self) -> float:
        """(P_2/P_1)^{1/eta}: a femto beats the nearest macro at R_1 iff r_1 < ratio * R_1."""
        return (self.p2 / self.p1) ** (1.0 / self.eta)

    def with_(self, **changes) -> "NetworkParams":
        """Copy with tier-level overrides (lambda_macro, p_femto, eta, noise, ...)."""
        macro, femto = self.macro, self.femto
        if "lambda_macro" in changes:
            macro = replace(macro, intensity=changes.pop("lambda_macro"))
        if "p_macro" in changes:
            macro = replace(macro, tx_power=changes.pop("p_macro"))
        if "lambda_femto" in changes:
            femto = replace(femto, intensity=changes.pop("lambda_femto"))
        if "p_femto" in changes:
            femto = replace(femto, tx_power=changes.pop("p_femto"))
        eta = changes.pop("eta", self.path_loss_exponent)
        noise = changes.pop("noise", self.noise_power)
        if changes:
            raise TypeError(f"unknown parameters: {sorted(changes)}")
        return NetworkParams(macro, femto, eta, noise)


@dataclass(frozen=True)
class MobilityProfile:
    velocity: float  # km/h
    macro_ho_delay: float = 0.35  # s
    femto_ho_delay: float = 0.7  # s

    def __post_init__(self):
        if not self.velocity >= 0:
            raise ValueError("velocity must be >= 0")
        if not 0 <= self.macro_ho_delay <= self.femto_ho_delay:
            raise ValueError("handover delays must satisfy 0 <= d_m <= d_f")

    @property
    def velocity_km_s(self) -> float:
        return self.velocity / 3600.0


def table3_params(noise: float = 0.0) -> NetworkParams:
    """Reference deployment: 30 macro/km^2 at 1 W, 70 femto/km^2 at 0.1 W, eta = 4."""
    return NetworkParams.from_values(30.0, 70.0, 1.0, 0.1, 4.0, noise)


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(x):
    return 10.0 * math.log10(x)


def association_probability(params: NetworkParams, tier: int | str) -> float:
    """Probability that ``tier`` offers the strongest average received power."""
    if isinstance(tier, str):
        tier = {"macro": MACRO, "femto": FEMTO}[tier]
    lam1, lam2 = params.lam1, params.lam2
    if lam1 == 0 and lam2 == 0:
        raise ValueError("association probability undefined: both tier intensities are zero")
    d = 2.0 / params.eta
    w1 = lam1 * params.p1 ** d
    w2 = lam2 * params.p2 ** d
    a_m = w1 / (w1 + w2)
    if tier == MACRO:
        return a_m
    if tier == FEMTO:
        return 1.0 - a_m
    raise ValueError(f"tier must be macro or femto, got {tier}")


def phase_probabilities(params: NetworkParams, strategy: Strategy) -> dict[Phase, float]:
    """Long-run fraction of time spent in each association phase."""
    strategy = Strategy(strategy)
    a_m = association_probability(params, MACRO)
    a_f = 1.0 - a_m
    probs = dict.fromkeys(Phase, 0.0)
    if strategy is Strategy.BC:
        probs[Phase.MACRO] = a_m
        probs[Phase.FEMTO] = a_f
    elif strategy is Strategy.FS:
        probs[Phase.MACRO] = a_m
        probs[Phase.FEMTO] = 0.5 * a_f
        probs[Phase.BLACKOUT] = 0.5 * a_f
    elif strategy is Strategy.FD:
        probs[Phase.MACRO] = a_m
        probs[Phase.BLACKOUT] = a_f
    else:
        probs[Phase.MACRO] = 0.5 * a_m
        probs[Phase.MACRO_DISREGARD] = 0.5 * a_f
        probs[Phase.BLACKOUT] = 0.5
    return probs
