"""Service-distance densities, interference Laplace transforms and coverage.

Conventions: ``T`` is the linear SINR threshold.  Every Laplace transform is
returned already evaluated at the ``s`` implied by the serving link(s), so it
is a function of distances and ``T`` only.  With Rayleigh fading the
conditional coverage is the product of the noise factor exp(-s sigma^2) and
the transforms of each independent interference component.

Blackout FS coverage is computed in the mapped one-dimensional domain where a
BS at distance d with power P sits at y = d^eta / P and delivers mean power
1/y.  The three blackout integrals of FS/MS are two-dimensional (the skipped
BS transform has a closed form); FD blackout is three-dimensional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import optimize

from .model import (FEMTO, MACRO, NetworkParams, Phase, Strategy,
                    association_probability, phase_probabilities)
from .specfun import (DEFAULT_1D, DEFAULT_2D, DEFAULT_3D, IntegrationConfig,
                      integrate_1d, integrate_2d, integrate_3d, interference_exponent,
                      skipped_bs_transform, unbounded_interference_exponent)

# Kernels x^k exp(-pi lam x^2) are cut where they drop below this fraction of their peak.
TRUNCATION_LEVEL = 1e-14


@dataclass(frozen=True)
class CoverageResult:
    value: float
    numeric_error: float
    phases: dict = field(default_factory=dict)  # Phase -> (weight, conditional coverage)
    converged: bool = True
    strategy: Strategy | None = None
    threshold: float | None = None
    ic: bool = False

    def conditional(self, phase: Phase) -> float:
        return self.phases[phase][1]


class LaplaceTransformKernel(NamedTuple):
    """An interference Laplace transform frozen at fixed serving distances."""

    name: str
    fn: Callable[[float], float]

    def __call__(self, T):
        return self.fn(T)


# ---------------------------------------------------------------------------
# generic PPP transform

def ppp_laplace(lam, power, s, inner_radius, eta):
    """E[exp(-s I)] for Rayleigh-faded interference from a PPP outside ``inner_radius``.

    A zero radius means the interferers fill the whole plane.
    """
    s = np.asarray(s, dtype=float)
    a = np.asarray(inner_radius, dtype=float)
    sp = s * power
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(a > 0, sp * np.where(a > 0, a, 1.0) ** -eta, 0.0)
        bounded = a ** 2 * interference_exponent(eta, t)
    full = sp ** (2.0 / eta) * unbounded_interference_exponent(eta)
    expo = np.where(a > 0, bounded, full)
    out = np.exp(-math.pi * lam * expo)
    return out if out.ndim else float(out)


def _truncation_radius(lam, k):
    """Radius beyond which x^k exp(-pi lam x^2) < TRUNCATION_LEVEL * peak."""
    if lam <= 0:
        raise ValueError("truncation radius needs a positive intensity")
    a = math.pi * lam
    x0 = math.sqrt(k / (2 * a)) if k > 0 else 0.0
    log_peak = (k * math.log(x0) if k > 0 else 0.0) - a * x0 ** 2
    target = log_peak + math.log(TRUNCATION_LEVEL)

    def g(x):
        return k * math.log(x) - a * x * x - target

    hi = max(x0, 1e-12) * 2 + 1.0 / math.sqrt(a)
    while g(hi) > 0:
        hi *= 2
    return optimize.brentq(g, max(x0, 1e-300), hi, xtol=1e-14)


# ---------------------------------------------------------------------------
# best connected

def service_distance_pdf_bc(params: NetworkParams, tier, R):
    """Density of the distance to the serving BS given association with ``tier``."""
    tier = {"macro": MACRO, "femto": FEMTO}.get(tier, tier)
    R = np.asarray(R, dtype=float)
    eta = params.eta
    if tier == MACRO:
        lam, lam_o, ratio = params.lam1, params.lam2, (params.p2 / params.p1) ** (2 / eta)
    else:
        lam, lam_o, ratio = params.lam2, params.lam1, (params.p1 / params.p2) ** (2 / eta)
    a = association_probability(params, tier)
    if a == 0:
        return np.zeros_like(R) if R.ndim else 0.0
    out = 2 * math.pi * lam * R / a * np.exp(-math.pi * R ** 2 * (lam + lam_o * ratio))
    out = np.where(R >= 0, out, 0.0)
    return out if out.ndim else float(out)


_BC_KINDS = ("R(m)", "r(m)", "R(f)", "r(f)")


def lt_bc(params: NetworkParams, kind: str, distance, T):
    """Laplace transforms of the macro (R) and femto (r) interference, BC association.

    ``kind`` is one of R(m), r(m) (macro-served, ``distance`` = R_1) or
    R(f), r(f) (femto-served, ``distance`` = r_1).
    """
    if kind not in _BC_KINDS:
        raise ValueError(f"kind must be one of {_BC_KINDS}")
    eta = params.eta
    d = np.asarray(distance, dtype=float)
    T = np.asarray(T, dtype=float)
    serving_power = params.p1 if kind.endswith("(m)") else params.p2
    s = T * d ** eta / serving_power
    if kind == "R(m)":
        return ppp_laplace(params.lam1, params.p1, s, d, eta)
    if kind == "r(m)":
        return ppp_laplace(params.lam2, params.p2, s, d * params.femto_range_ratio(), eta)
    if kind == "R(f)":
        return ppp_laplace(params.lam1, params.p1, s, d / params.femto_range_ratio(), eta)
    return ppp_laplace(params.lam2, params.p2, s, d, eta)


def lt_bc_eta4(params: NetworkParams, kind: str, distance, T):
    """Closed forms of :func:`lt_bc` at eta = 4."""
    d = np.asarray(distance, dtype=float)
    sT = np.sqrt(T)
    at = np.arctan(sT)
    if kind == "R(m)":
        e = params.lam1 * d ** 2 * sT * at
    elif kind == "r(m)":
        e = params.lam2 * d ** 2 * np.sqrt(T * params.p2 / params.p1) * at
    elif kind == "R(f)":
        e = params.lam1 * d ** 2 * np.sqrt(T * params.p1 / params.p2) * at
    elif kind == "r(f)":
        e = params.lam2 * d ** 2 * sT * at
    else:
        raise ValueError(f"kind must be one of {_BC_KINDS}")
    return np.exp(-math.pi * e)


def bc_conditional_coverage(params: NetworkParams, tier, distance, T):
    """P[SINR > T | serving distance] for best connected macro or femto association."""
    tier = {"macro": MACRO, "femto": FEMTO}.get(tier, tier)
    d = np.asarray(distance, dtype=float)
    if tier == MACRO:
        P, kinds = params.p1, ("R(m)", "r(m)")
    else:
        P, kinds = params.p2, ("R(f)", "r(f)")
    noise = np.exp(-T * d ** params.eta * params.noise_power / P)
    return noise * lt_bc(params, kinds[0], d, T) * lt_bc(params, kinds[1], d, T)


def _bc_phase(params, tier, T, cfg):
    ratio = (params.p2 / params.p1) ** (2 / params.eta)
    lam_eff = params.lam1 + params.lam2 * ratio if tier == MACRO else params.lam2 + params.lam1 / ratio
    rmax = _truncation_radius(lam_eff, 1)
    return integrate_1d(
        lambda R: service_distance_pdf_bc(params, tier, R) * bc_conditional_coverage(params, tier, R, T),
        0.0, rmax, cfg)


def coverage_bc_phase(params: NetworkParams, tier, T, cfg: IntegrationConfig = DEFAULT_1D):
    """Conditional coverage of the macro or femto best connected user."""
    tier = {"macro": MACRO, "femto": FEMTO}.get(tier, tier)
    return _bc_phase(params, tier, T, cfg)


def _combine(terms, strategy, T, ic):
    value = 0.0
    err = 0.0
    ok = True
    phases = {}
    for phase, weight, res in terms:
        if weight == 0:
            continue
        phases[phase] = (weight, res.value)
        value += weight * res.value
        err += weight * res.error
        ok = ok and res.converged
    # cubature noise can push the sum a hair past 1; the error estimate is kept
    value = min(max(value, 0.0), 1.0)
    return CoverageResult(value, err, phases, ok, strategy, float(T), ic)


def _check_T(T):
    if not T >= 0:
        raise ValueError("threshold must be >= 0")


def coverage_bc(params: NetworkParams, T, cfg: IntegrationConfig = DEFAULT_1D) -> CoverageResult:
    _check_T(T)
    w = phase_probabilities(params, Strategy.BC)
    terms = []
    if w[Phase.MACRO] > 0:
        terms.append((Phase.MACRO, w[Phase.MACRO], _bc_phase(params, MACRO, T, cfg)))
    if w[Phase.FEMTO] > 0:
        terms.append((Phase.FEMTO, w[Phase.FEMTO], _bc_phase(params, FEMTO, T, cfg)))
    return _combine(terms, Strategy.BC, T, False)


def bc_closed_form(T):
    """Interference-limited eta = 4 coverage, identical for every tier."""
    sT = math.sqrt(T)
    return 1.0 / (1.0 + sT * math.atan(sT))


# ---------------------------------------------------------------------------
# mapped one-dimensional process, femto skipping

def mapped_intensity(params: NetworkParams, y):
    """Intensity of the received-power-mapped process at y = d^eta / P."""
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("mapped coordinate must be positive")
    eta = params.eta
    return 2 * math.pi / eta * params.lambda_t * y ** (2 / eta - 1)


def mapped_intensity_measure(params: NetworkParams, y):
    """Expected number of mapped points in [0, y]: pi lambda_t y^{2/eta}."""
    return math.pi * params.lambda_t * np.asarray(y, dtype=float) ** (2 / params.eta)


class FSDistancePdfs(NamedTuple):
    conditional: Callable  # f(r1 | x): skipped (strongest) point given the 2nd
    joint: Callable  # f(x, y): 2nd and 3rd strongest mapped points


def blackout_distance_pdfs_fs(params: NetworkParams) -> FSDistancePdfs:
    eta = params.eta
    lt = params.lambda_t
    d = 2.0 / eta

    def conditional(r1, x):
        r1 = np.asarray(r1, dtype=float)
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = d * r1 ** (d - 1) / x ** d
        return np.where((r1 > 0) & (r1 <= x), val, 0.0)

    def joint(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            val = (4 / eta ** 2 * (math.pi * lt) ** 3 * x ** (2 * d - 1) * y ** (d - 1)
                   * np.exp(-math.pi * lt * y ** d))
        return np.where((x > 0) & (x <= y), val, 0.0)

    return FSDistancePdfs(conditional, joint)


def lt_fs_skipped(params: NetworkParams, x, y, T):
    """Transform of the skipped strongest BS's interference, given mapped x < y."""
    x = np.asarray(x, dtype=float)
    s = T / (1 / x + 1 / np.asarray(y, dtype=float))
    with np.errstate(divide="ignore"):
        return skipped_bs_transform(params.eta, x / s)


def lt_fs_skipped_quadrature(params: NetworkParams, x, y, T, cfg=DEFAULT_1D):
    """Same transform by direct quadrature over the conditional density of r_1."""
    s = T / (1 / x + 1 / y)
    d = 2.0 / params.eta
    # u = (r1/x)^{2/eta} maps f(r1 | x) dr1 to du and removes the endpoint singularity
    f = lambda u: 1.0 / (1.0 + s / (x * u ** (1 / d))) if u > 0 else 0.0  # noqa: E731
    return integrate_1d(f, 0.0, 1.0, cfg).value


def lt_fs_aggregate(params: NetworkParams, x, y, T):
    """Transform of the aggregate interference from all mapped points beyond y."""
    eta = params.eta
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = T / (1 / x + 1 / y)
    return np.exp(-math.pi * params.lambda_t * y ** (2 / eta) * interference_exponent(eta, s / y))


def lt_fs_eta4(params: NetworkParams, kind: str, x, y, T):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if kind == "skipped":
        q = T * y / (x + y)
        return 1 - np.sqrt(q) * np.arctan(np.sqrt(1 / q))
    if kind == "aggregate":
        return np.exp(-math.pi * params.lambda_t * np.sqrt(T / (1 / x + 1 / y))
                      * np.arctan(np.sqrt(T * x / (x + y))))
    raise ValueError("kind must be 'skipped' or 'aggregate'")


def fs_blackout_conditional(params: NetworkParams, x, y, T, ic=False):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = T / (1 / x + 1 / y)
    out = np.exp(-s * params.noise_power) * lt_fs_aggregate(params, x, y, T)
    if not ic:
        out = out * lt_fs_skipped(params, x, y, T)
    return out


def coverage_fs_blackout(params: NetworkParams, T, ic=False,
                         cfg: IntegrationConfig = DEFAULT_2D):
    """Blackout coverage for FS: served by the 2nd and 3rd strongest BSs (non-coherent)."""
    _check_T(T)
    eta = params.eta
    lt = params.lambda_t
    if lt <= 0:
        raise ValueError("no base stations: lambda_t is zero")
    joint = blackout_distance_pdfs_fs(params).joint
    # integrate in equivalent radii rho = y^{1/eta}; the mapped pdf picks up the Jacobian
    rmax = _truncation_radius(lt, 4)

    def f(u, v):
        r2 = rmax * u
        r3 = r2 + v * (rmax - r2)
        x = r2 ** eta
        y = r3 ** eta
        jac = rmax * (rmax - r2) * eta ** 2 * r2 ** (eta - 1) * r3 ** (eta - 1)
        with np.errstate(all="ignore"):
            val = joint(x, y) * jac * fs_blackout_conditional(params, x, y, T, ic)
        return np.where(np.isfinite(val), val, 0.0)

    return integrate_2d(f, [0, 0], [1, 1], cfg)


def coverage_fs(params: NetworkParams, T, ic=False, cfg1: IntegrationConfig = DEFAULT_1D,
                cfg2: IntegrationConfig = DEFAULT_2D) -> CoverageResult:
    _check_T(T)
    w = phase_probabilities(params, Strategy.FS)
    terms = []
    if w[Phase.MACRO] > 0:
        terms.append((Phase.MACRO, w[Phase.MACRO], _bc_phase(params, MACRO, T, cfg1)))
    if w[Phase.FEMTO] > 0:
        terms.append((Phase.FEMTO, w[Phase.FEMTO], _bc_phase(params, FEMTO, T, cfg1)))
        terms.append((Phase.BLACKOUT, w[Phase.BLACKOUT], coverage_fs_blackout(params, T, ic, cfg2)))
    return _combine(terms, Strategy.FS, T, ic)


# ---------------------------------------------------------------------------
# femto disregard

class FDDistancePdfs(NamedTuple):
    conditional: Callable  # f(r1 | R1) on blackout
    joint: Callable  # f(R1, R2, r1) on blackout
    marginal: Callable  # f(R1, R2) on blackout


def _require_macro(params):
    if params.lam1 <= 0:
        raise ValueError("strategy needs a macro tier with positive intensity")


def blackout_distance_pdfs_fd(params: NetworkParams) -> FDDistancePdfs:
    _require_macro(params)
    lam1, lam2 = params.lam1, params.lam2
    c = params.femto_range_ratio()
    a_f = association_probability(params, FEMTO)
    c2 = c ** 2

    def conditional(r1, R1):
        r1 = np.asarray(r1, dtype=float)
        R1 = np.asarray(R1, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = (2 * math.pi * lam2 * r1 * np.exp(-math.pi * lam2 * r1 ** 2)
                   / -np.expm1(-math.pi * lam2 * c2 * R1 ** 2))
        return np.where((r1 >= 0) & (r1 <= c * R1) & (R1 > 0), val, 0.0)

    def joint(x, y, z):
        x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
        val = ((2 * math.pi) ** 3 / a_f * lam1 ** 2 * lam2 * x * y * z
               * np.exp(-math.pi * (lam1 * y ** 2 + lam2 * z ** 2)))
        return np.where((x >= 0) & (x <= y) & (z >= 0) & (z <= c * x), val, 0.0)

    def marginal(x, y):
        x, y = (np.asarray(v, dtype=float) for v in (x, y))
        val = ((2 * math.pi * lam1) ** 2 / a_f * x * y * np.exp(-lam1 * math.pi * y ** 2)
               * -np.expm1(-lam2 * math.pi * c2 * x ** 2))
        return np.where((x >= 0) & (x <= y), val, 0.0)

    return FDDistancePdfs(conditional, joint, marginal)


def _pair_s(params, Ra, Rb, T):
    eta = params.eta
    return T / (params.p1 * (Ra ** -eta + Rb ** -eta))


def lt_fd(params: NetworkParams, kind: str, R1, R2, T, r1=None):
    """Blackout transforms for FD, served jointly by the two nearest macros.

    kind: 'macro' (macros beyond R2), 'femto' (femtos beyond the skipped one at
    r1), 'skipped_given' (the skipped femto at a known r1) or 'skipped'
    (averaged over r1 given R1).
    """
    eta = params.eta
    R1 = np.asarray(R1, dtype=float)
    R2 = np.asarray(R2, dtype=float)
    s = _pair_s(params, R1, R2, T)
    if kind == "macro":
        return ppp_laplace(params.lam1, params.p1, s, R2, eta)
    if kind == "femto":
        return ppp_laplace(params.lam2, params.p2, s, r1, eta)
    if kind == "skipped_given":
        return 1.0 / (1.0 + s * params.p2 * np.asarray(r1, dtype=float) ** -eta)
    if kind == "skipped":
        return _lt_fd_skipped_avg(params, float(R1), float(R2), T)
    raise ValueError("unknown FD transform kind")


def _lt_fd_skipped_avg(params, R1, R2, T, cfg=DEFAULT_1D):
    cond = blackout_distance_pdfs_fd(params).conditional
    s = float(_pair_s(params, R1, R2, T))
    eta = params.eta
    top = params.femto_range_ratio() * R1
    res = integrate_1d(lambda r: float(cond(r, R1)) / (1 + s * params.p2 * r ** -eta) if r > 0 else 0.0,
                       0.0, top, cfg)
    return res.value


def lt_fd_eta4(params: NetworkParams, kind: str, R1, R2, T, r1=None):
    R1 = np.asarray(R1, dtype=float)
    R2 = np.asarray(R2, dtype=float)
    den = R1 ** -4.0 + R2 ** -4.0
    if kind == "macro":
        return np.exp(-math.pi * params.lam1 * np.sqrt(T / den)
                      * np.arctan(np.sqrt(T * R1 ** 4 / (R1 ** 4 + R2 ** 4))))
    if kind == "femto":
        q = params.p2 / params.p1 * T / den
        return np.exp(-math.pi * params.lam2 * np.sqrt(q)
                      * np.arctan(np.sqrt(q * np.asarray(r1, dtype=float) ** -4.0)))
    raise ValueError("closed forms exist for 'macro' and 'femto' only")


def fd_blackout_conditional(params: NetworkParams, R1, R2, r1, T, ic=False):
    """Coverage given the serving macro pair and the skipped femto distance."""
    s = _pair_s(params, R1, R2, T)
    out = (np.exp(-s * params.noise_power) * lt_fd(params, "macro", R1, R2, T)
           * lt_fd(params, "femto", R1, R2, T, r1))
    if not ic:
        out = out * lt_fd(params, "skipped_given", R1, R2, T, r1)
    return out


def coverage_fd_blackout(params: NetworkParams, T, ic=False,
                         cfg: IntegrationConfig = DEFAULT_3D):
    _check_T(T)
    _require_macro(params)
    joint = blackout_distance_pdfs_fd(params).joint
    c = params.femto_range_ratio()
    rmax = _truncation_radius(params.lam1, 3)

    def f(u, v, w):
        R1 = rmax * u
        R2 = R1 + v * (rmax - R1)
        r1 = c * R1 * w
        jac = rmax * (rmax - R1) * c * R1
        with np.errstate(all="ignore"):
            val = joint(R1, R2, r1) * jac * fd_blackout_conditional(params, R1, R2, r1, T, ic)
        return np.where(np.isfinite(val), val, 0.0)

    return integrate_3d(f, [0, 0, 0], [1, 1, 1], cfg)


def coverage_fd(params: NetworkParams, T, ic=False, cfg1: IntegrationConfig = DEFAULT_1D,
                cfg3: IntegrationConfig = DEFAULT_3D) -> CoverageResult:
    _check_T(T)
    _require_macro(params)
    w = phase_probabilities(params, Strategy.FD)
    terms = [(Phase.MACRO, w[Phase.MACRO], _bc_phase(params, MACRO, T, cfg1))]
    if w[Phase.BLACKOUT] > 0:
        terms.append((Phase.BLACKOUT, w[Phase.BLACKOUT], coverage_fd_blackout(params, T, ic, cfg3)))
    return _combine(terms, Strategy.FD, T, ic)


# ---------------------------------------------------------------------------
# macro skipping

class MSDistancePdfs(NamedTuple):
    joint: Callable  # f(R1, R2, R3), blackout
    marginal: Callable  # f(R2, R3), blackout
    conditional: Callable  # f(R1 | R2), blackout
    nonblackout_joint: Callable  # f(R1, r1) when the disregarded femto is strongest
    nonblackout_marginal: Callable  # f(R1) for the same event


def blackout_distance_pdfs_ms(params: NetworkParams) -> MSDistancePdfs:
    _require_macro(params)
    lam1, lam2 = params.lam1, params.lam2
    c = params.femto_range_ratio()
    a_f = association_probability(params, FEMTO)

    def joint(x, y, z):
        x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
        val = (2 * math.pi * lam1) ** 3 * x * y * z * np.exp(-math.pi * lam1 * z ** 2)
        return np.where((x >= 0) & (x <= y) & (y <= z), val, 0.0)

    def marginal(y, z):
        y, z = (np.asarray(v, dtype=float) for v in (y, z))
        val = 4 * (math.pi * lam1) ** 3 * y ** 3 * z * np.exp(-math.pi * lam1 * z ** 2)
        return np.where((y >= 0) & (y <= z), val, 0.0)

    def conditional(x, y):
        x, y = (np.asarray(v, dtype=float) for v in (x, y))
        with np.errstate(divide="ignore", invalid="ignore"):
            val = 2 * x / y ** 2
        return np.where((x >= 0) & (x <= y), val, 0.0)

    def nonblackout_joint(x, y):
        x, y = (np.asarray(v, dtype=float) for v in (x, y))
        val = ((2 * math.pi) ** 2 / a_f * lam1 * lam2 * x * y
               * np.exp(-math.pi * lam1 * x ** 2 - math.pi * lam2 * y ** 2))
        return np.where((x >= 0) & (y >= 0) & (y <= c * x), val, 0.0)

    def nonblackout_marginal(x):
        x = np.asarray(x, dtype=float)
        val = (2 * math.pi / a_f * lam1 * x * np.exp(-math.pi * lam1 * x ** 2)
               * -np.expm1(-math.pi * lam2 * c ** 2 * x ** 2))
        return np.where(x >= 0, val, 0.0)

    return MSDistancePdfs(joint, marginal, conditional, nonblackout_joint, nonblackout_marginal)


def lt_ms(params: NetworkParams, kind: str, R2, R3, T):
    """Blackout transforms for MS, served jointly by the 2nd and 3rd nearest macros.

    kind: 'skipped' (nearest macro, uniform in the disk of radius R2), 'macro'
    (macros beyond R3) or 'femto' (the whole femto tier).
    """
    eta = params.eta
    R2 = np.asarray(R2, dtype=float)
    R3 = np.asarray(R3, dtype=float)
    s = _pair_s(params, R2, R3, T)
    if kind == "skipped":
        with np.errstate(divide="ignore"):
            return skipped_bs_transform(eta, R2 ** eta / (s * params.p1))
    if kind == "macro":
        return ppp_laplace(params.lam1, params.p1, s, R3, eta)
    if kind == "femto":
        return ppp_laplace(params.lam2, params.p2, s, 0.0, eta)
    raise ValueError("unknown MS transform kind")


def lt_ms_skipped_quadrature(params: NetworkParams, R2, R3, T, cfg=DEFAULT_1D):
    """The skipped-macro transform by direct quadrature over f(R1 | R2) = 2 R1 / R2^2."""
    s = float(_pair_s(params, R2, R3, T))
    eta = params.eta
    f = lambda R1: 2 * R1 / R2 ** 2 / (1 + s * params.p1 * R1 ** -eta) if R1 > 0 else 0.0  # noqa: E731
    return integrate_1d(f, 0.0, R2, cfg).value


def lt_ms_eta4(params: NetworkParams, kind: str, R2, R3, T):
    R2 = np.asarray(R2, dtype=float)
    R3 = np.asarray(R3, dtype=float)
    den = R2 ** -4.0 + R3 ** -4.0
    if kind == "skipped":
        q = 1 + R2 ** 4 * R3 ** -4.0
        return 1 - np.sqrt(T / q) * np.arctan(np.sqrt(q / T))
    if kind == "macro":
        return np.exp(-math.pi * params.lam1 * np.sqrt(T / den)
                      * np.arctan(np.sqrt(T * R2 ** 4 / (R2 ** 4 + R3 ** 4))))
    if kind == "femto":
        return np.exp(-math.pi ** 2 * params.lam2 / 2
                      * np.sqrt(T * params.p2 / (params.p1 * den)))
    raise ValueError("unknown MS transform kind")


def ms_blackout_conditional(params: NetworkParams, R2, R3, T, ic=False):
    s = _pair_s(params, R2, R3, T)
    out = (np.exp(-s * params.noise_power) * lt_ms(params, "macro", R2, R3, T)
           * lt_ms(params, "femto", R2, R3, T))
    if not ic:
        out = out * lt_ms(params, "skipped", R2, R3, T)
    return out


def coverage_ms_blackout(params: NetworkParams, T, ic=False,
                         cfg: IntegrationConfig = DEFAULT_2D):
    _check_T(T)
    _require_macro(params)
    marginal = blackout_distance_pdfs_ms(params).marginal
    rmax = _truncation_radius(params.lam1, 4)

    def f(u, v):
        R2 = rmax * u
        R3 = R2 + v * (rmax - R2)
        jac = rmax * (rmax - R2)
        with np.errstate(all="ignore"):
            val = marginal(R2, R3) * jac * ms_blackout_conditional(params, R2, R3, T, ic)
        return np.where(np.isfinite(val), val, 0.0)

    return integrate_2d(f, [0, 0], [1, 1], cfg)


def ms_disregard_conditional(params: NetworkParams, R1, r1, T):
    """Coverage of the nearest-macro link with the stronger femto at r1 interfering."""
    eta = params.eta
    R1 = np.asarray(R1, dtype=float)
    r1 = np.asarray(r1, dtype=float)
    s = T * R1 ** eta / params.p1
    return (np.exp(-s * params.noise_power)
            * ppp_laplace(params.lam1, params.p1, s, R1, eta)
            * ppp_laplace(params.lam2, params.p2, s, r1, eta)
            / (1.0 + s * params.p2 * r1 ** -eta))


def coverage_ms_nonblackout_disregard(params: NetworkParams, T,
                                      cfg: IntegrationConfig = DEFAULT_2D):
    _check_T(T)
    _require_macro(params)
    joint = blackout_distance_pdfs_ms(params).nonblackout_joint
    c = params.femto_range_ratio()
    rmax = _truncation_radius(params.lam1, 3)

    def f(u, w):
        R1 = rmax * u
        r1 = c * R1 * w
        jac = rmax * c * R1
        with np.errstate(all="ignore"):
            val = joint(R1, r1) * jac * ms_disregard_conditional(params, R1, r1, T)
        return np.where(np.isfinite(val), val, 0.0)

    return integrate_2d(f, [0, 0], [1, 1], cfg)


def coverage_ms(params: NetworkParams, T, ic=False, cfg1: IntegrationConfig = DEFAULT_1D,
                cfg2: IntegrationConfig = DEFAULT_2D) -> CoverageResult:
    _check_T(T)
    _require_macro(params)
    w = phase_probabilities(params, Strategy.MS)
    terms = [(Phase.MACRO, w[Phase.MACRO], _bc_phase(params, MACRO, T, cfg1))]
    if w[Phase.MACRO_DISREGARD] > 0:
        terms.append((Phase.MACRO_DISREGARD, w[Phase.MACRO_DISREGARD],
                      coverage_ms_nonblackout_disregard(params, T, cfg2)))
    terms.append((Phase.BLACKOUT, w[Phase.BLACKOUT], coverage_ms_blackout(params, T, ic, cfg2)))
    return _combine(terms, Strategy.MS, T, ic)


# ---------------------------------------------------------------------------

def coverage(strategy: Strategy, params: NetworkParams, T, ic=False) -> CoverageResult:
    """Overall coverage probability of ``strategy`` at linear threshold ``T``."""
    strategy = Strategy(strategy)
    if strategy is Strategy.BC:
        return coverage_bc(params, T)
    if strategy is Strategy.FS:
        return coverage_fs(params, T, ic)
    if strategy is Strategy.FD:
        return coverage_fd(params, T, ic)
    return coverage_ms(params, T, ic)


def lt_kernel(params: NetworkParams, name: str, **distances) -> LaplaceTransformKernel:
    """Freeze one of the transforms at given distances, leaving T free.

    Names: bc:R(m), bc:r(m), bc:R(f), bc:r(f) (distance=), fs:skipped,
    fs:aggregate (x=, y=), fd:macro, fd:femto, fd:skipped (R1=, R2=, r1=),
    ms:skipped, ms:macro, ms:femto (R2=, R3=).
    """
    family, kind = name.split(":")
    if family == "bc":
        fn = lambda T: lt_bc(params, kind, distances["distance"], T)  # noqa: E731
    elif family == "fs":
        x, y = distances["x"], distances["y"]
        fn = {"skipped": lambda T: lt_fs_skipped(params, x, y, T),
              "aggregate": lambda T: lt_fs_aggregate(params, x, y, T)}[kind]
    elif family == "fd":
        fn = lambda T: lt_fd(params, kind, distances["R1"], distances["R2"], T,  # noqa: E731
                             distances.get("r1"))
    elif family == "ms":
        fn = lambda T: lt_ms(params, kind, distances["R2"], distances["R3"], T)  # noqa: E731
    else:
        raise ValueError(f"unknown transform family {family}")
    return LaplaceTransformKernel(name, fn)
