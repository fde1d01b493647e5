"""Self-consistency checks shared by ``ho-skip validate`` and the test suite."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytic as cv
from .model import FEMTO, MACRO, NetworkParams, Strategy, phase_probabilities
from .simulation import ALL_CASES, empirical_coverage_all
from .specfun import IntegrationConfig, integrate_1d, integrate_2d, integrate_3d

TIGHT = IntegrationConfig(rel_tol=1e-10, abs_tol=1e-13, max_subdivisions=20000)
TAIL = 40.0  # exp(-TAIL) is far below every tolerance used here


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _radius(lam):
    # pi lam r^2 = TAIL
    return math.sqrt(TAIL / (math.pi * lam))


def pdf_normalizations(params: NetworkParams) -> dict[str, float]:
    """Total mass of every distance density, integrated on its own support."""
    out = {}
    eta = params.eta
    c = params.femto_range_ratio()
    ratio2 = c ** 2
    lam_m = params.lam1 + params.lam2 * ratio2
    lam_f = params.lam2 + params.lam1 / ratio2
    if params.lam1 > 0:
        out["bc service distance (macro)"] = integrate_1d(
            lambda r: cv.service_distance_pdf_bc(params, MACRO, r), 0.0, _radius(lam_m), TIGHT).value
    if params.lam2 > 0:
        out["bc service distance (femto)"] = integrate_1d(
            lambda r: cv.service_distance_pdf_bc(params, FEMTO, r), 0.0, _radius(lam_f), TIGHT).value

    fs = cv.blackout_distance_pdfs_fs(params)
    rho_max = _radius(params.lambda_t)

    def fs_joint(t, rho):
        # x = y t^{eta/4} absorbs the x^{4/eta - 1} factor; y = rho^eta absorbs y^{2/eta - 1}
        y = rho ** eta
        k = eta / 4
        return fs.joint(y * t ** k, y) * y * k * t ** (k - 1) * eta * rho ** (eta - 1)

    out["fs joint (x, y)"] = integrate_2d(fs_joint, [0, 0], [1, rho_max], TIGHT).value
    out["fs conditional r1 | x"] = integrate_1d(lambda r: fs.conditional(r, 0.7), 0.0, 0.7, TIGHT).value

    if params.lam1 > 0 and params.lam2 > 0:
        fd = cv.blackout_distance_pdfs_fd(params)
        ymax = _radius(params.lam1)

        def fd_joint(u, y, w):
            x = u * y
            return fd.joint(x, y, w * c * x) * y * c * x

        def fd_marg(u, y):
            return fd.marginal(u * y, y) * y

        out["fd joint (R1, R2, r1)"] = integrate_3d(fd_joint, [0, 0, 0], [1, ymax, 1], TIGHT).value
        out["fd marginal (R1, R2)"] = integrate_2d(fd_marg, [0, 0], [1, ymax], TIGHT).value
        out["fd conditional r1 | R1"] = integrate_1d(lambda r: fd.conditional(r, 0.15), 0.0, c * 0.15,
                                                     TIGHT).value
    if params.lam1 > 0:
        ms = cv.blackout_distance_pdfs_ms(params)
        zmax = _radius(params.lam1)

        def ms_joint(u, v, z):
            y = v * z
            return ms.joint(u * y, y, z) * y * z

        out["ms joint (R1, R2, R3)"] = integrate_3d(ms_joint, [0, 0, 0], [1, 1, zmax], TIGHT).value
        out["ms marginal (R2, R3)"] = integrate_2d(lambda v, z: ms.marginal(v * z, z) * z,
                                                   [0, 0], [1, zmax], TIGHT).value
        out["ms conditional R1 | R2"] = integrate_1d(lambda x: ms.conditional(x, 0.2), 0.0, 0.2, TIGHT).value
        if params.lam2 > 0:
            out["ms non-blackout joint (R1, r1)"] = integrate_2d(
                lambda x, w: ms.nonblackout_joint(x, w * c * x) * c * x, [0, 0], [zmax, 1], TIGHT).value
            out["ms non-blackout marginal R1"] = integrate_1d(ms.nonblackout_marginal, 0.0, zmax, TIGHT).value
    return out


def closed_form_pairs(params: NetworkParams) -> dict[str, tuple[Callable, Callable]]:
    """(general, eta = 4 closed form) pairs as functions of (distance scale d, T).

    Multi-distance transforms are evaluated on a fixed shape scaled by d.
    """
    p = params
    pairs = {}
    for kind in ("R(m)", "r(m)", "R(f)", "r(f)"):
        pairs[f"bc {kind}"] = (lambda d, T, k=kind: cv.lt_bc(p, k, d, T),
                               lambda d, T, k=kind: cv.lt_bc_eta4(p, k, d, T))
    for kind, fn in (("skipped", cv.lt_fs_skipped), ("aggregate", cv.lt_fs_aggregate)):
        # mapped coordinates scale like d^eta
        pairs[f"fs {kind}"] = (lambda d, T, f=fn: f(p, 0.6 * d ** 4, d ** 4, T),
                               lambda d, T, k=kind: cv.lt_fs_eta4(p, k, 0.6 * d ** 4, d ** 4, T))
    pairs["fd macro"] = (lambda d, T: cv.lt_fd(p, "macro", 0.7 * d, d, T),
                         lambda d, T: cv.lt_fd_eta4(p, "macro", 0.7 * d, d, T))
    pairs["fd femto"] = (lambda d, T: cv.lt_fd(p, "femto", 0.7 * d, d, T, r1=0.3 * d),
                         lambda d, T: cv.lt_fd_eta4(p, "femto", 0.7 * d, d, T, r1=0.3 * d))
    for kind in ("skipped", "macro", "femto"):
        pairs[f"ms {kind}"] = (lambda d, T, k=kind: cv.lt_ms(p, k, 0.7 * d, d, T),
                               lambda d, T, k=kind: cv.lt_ms_eta4(p, k, 0.7 * d, d, T))
    return pairs


def closed_form_max_error(params: NetworkParams, distances, thresholds) -> dict[str, float]:
    if params.eta != 4:
        raise ValueError("closed forms hold for eta = 4 only")
    out = {}
    for name, (general, closed) in closed_form_pairs(params).items():
        worst = 0.0
        for d in distances:
            for T in thresholds:
                worst = max(worst, abs(float(general(d, T)) - float(closed(d, T))))
        out[name] = worst
    return out


def run_checks(params: NetworkParams, theta: float, mc_samples: int = 20_000, seed: int = 0,
               workers: int = 1) -> list[CheckResult]:
    checks = []
    if params.eta == 4 and params.noise_power == 0:
        worst = max(abs(cv.coverage_bc(params, T).value - cv.bc_closed_form(T))
                    for T in (10 ** (db / 10) for db in (-5, 0, 6, 10)))
        checks.append(CheckResult("bc closed form", worst < 1e-6, f"max |diff| = {worst:.2e}"))
    else:
        checks.append(CheckResult("bc closed form", True, "skipped (needs eta = 4 and no noise)"))
    if params.eta == 4:
        errs = closed_form_max_error(params, np.linspace(0.02, 0.4, 6), np.logspace(-1, 1, 6))
        worst = max(errs.values())
        checks.append(CheckResult("eta = 4 closed-form transforms", worst < 1e-9, f"max |diff| = {worst:.2e}"))
    for name, mass in pdf_normalizations(params).items():
        checks.append(CheckResult(f"normalization: {name}", abs(mass - 1) < 1e-6, f"mass = {mass:.9f}"))
    for s in Strategy:
        total = sum(phase_probabilities(params, s).values())
        checks.append(CheckResult(f"phase probabilities ({s.value})", abs(total - 1) < 1e-12,
                                  f"sum = {total:.15f}"))
    if mc_samples > 0:
        est = empirical_coverage_all(params, [theta], mc_samples, seed, workers=workers)
        for s, ic in ALL_CASES:
            a = cv.coverage(s, params, theta, ic).value
            e = est[(s, ic)]
            m = float(e.coverage[0])
            tol = max(0.01, 3 * float(e.standard_error[0]))
            label = f"{s.value}{'-IC' if ic else ''}"
            checks.append(CheckResult(f"monte carlo agreement ({label})", abs(a - m) <= tol,
                                      f"analytic {a:.4f}, simulated {m:.4f}, tolerance {tol:.4f}"))
    return checks
