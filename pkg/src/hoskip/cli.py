"""Command line front end: ``ho-skip run`` and ``ho-skip validate``.

Configurations are INI files; every key is optional and falls back to the
reference deployment (30 macro BS/km^2 at 1 W, 70 femto BS/km^2 at 0.1 W,
eta = 4, W = 10 MHz, d_m = 0.35 s, d_f = 0.7 s)::

    [network]
    lambda_macro_per_km2 = 30
    lambda_femto_per_km2 = 70
    p_macro_watt = 1
    p_femto_watt = 0.1
    eta = 4
    noise_watt = 0

    [analysis]
    kind = coverage            ; coverage | rate | ho_cost | throughput
    theta_db = -10:20:2        ; list "a, b, c" or range "start:stop:step" (inclusive)
    strategies = BC, FS, FD, MS
    ic = off, on
    units = nats               ; nats | bits (throughput columns)
    mc_samples = 0
    seed = 0

    [mobility]
    v_kmh_grid = 0:200:10
    d_m_s = 0.35
    d_f_s = 0.7, 1.05
    w_hz = 10e6

Exit codes: 0 success, 1 usage or configuration error, 2 numeric or
tolerance failure.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import analytic as cv
from .handover import handover_cost
from .model import MobilityProfile, NetworkParams, Strategy, db_to_linear
from .simulation import empirical_coverage_all
from .throughput import average_throughput
from .validation import run_checks

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2

COLUMNS = ("strategy", "ic", "T_dB", "v_kmh", "d_m_s", "d_f_s", "coverage_analytic", "coverage_numeric_error",
           "coverage_mc", "mc_ci_low", "mc_ci_high", "D_HO", "ho_infeasible", "R_nats", "AT", "AT_unit",
           "reference", "within_tolerance", "config_hash")

# Achievable rates at theta = 6 dB published for the reference deployment.
TABLE2_REFERENCE = {("BC", False): 0.50, ("FS", False): 0.40, ("FS", True): 0.46, ("FD", False): 0.29,
                    ("FD", True): 0.36, ("MS", False): 0.15, ("MS", True): 0.20}
TABLE2_TOLERANCE = 0.02

PRESETS = {
    "table2": {"analysis": {"kind": "rate", "theta_db": "6", "ic": "off, on"}},
    "fig3": {"analysis": {"kind": "coverage", "theta_db": "-10:20:2", "ic": "off, on", "mc_samples": "20000"}},
    "fig4": {"analysis": {"kind": "ho_cost"}, "mobility": {"v_kmh_grid": "0:200:10", "d_f_s": "0.7"}},
    "fig5": {"analysis": {"kind": "throughput", "theta_db": "6", "ic": "on"},
             "mobility": {"v_kmh_grid": "0:200:10", "d_m_s": "0.35", "d_f_s": "0.7, 1.05"}},
}

KINDS = ("coverage", "rate", "ho_cost", "throughput")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    params: NetworkParams
    kind: str = "coverage"
    theta_db: list = field(default_factory=lambda: [6.0])
    strategies: list = field(default_factory=lambda: list(Strategy))
    ic: list = field(default_factory=lambda: [False, True])
    velocities: list = field(default_factory=lambda: [0.0])
    d_m: float = 0.35
    d_f: list = field(default_factory=lambda: [0.7])
    bandwidth: float = 10e6
    units: str = "nats"
    mc_samples: int = 0
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"[analysis] kind: expected one of {', '.join(KINDS)}, got {self.kind!r}")
        for name in ("theta_db", "strategies", "ic", "velocities", "d_f"):
            if not getattr(self, name):
                raise ConfigError(f"{name} grid is empty")
        if self.units not in ("nats", "bits"):
            raise ConfigError("[analysis] units: expected nats or bits")
        if not self.bandwidth > 0:
            raise ConfigError("[mobility] w_hz: bandwidth must be > 0")
        if self.mc_samples < 0:
            raise ConfigError("[analysis] mc_samples must be >= 0")
        # dB values become linear once, here
        self.thresholds = [db_to_linear(t) for t in self.theta_db]

    def fingerprint(self) -> str:
        record = {k: v for k, v in asdict(self).items() if k not in ("workers",)}
        record["params"] = asdict(self.params)
        record["strategies"] = [s.value for s in self.strategies]
        blob = json.dumps(record, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


def _parse_list(text, conv, where):
    text = text.strip()
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if step <= 0:
                raise ValueError("range step must be > 0")
            n = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [conv(start + k * step) for k in range(n)]
        return [conv(p.strip()) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def _parse_bool(text):
    t = str(text).strip().lower()
    if t in ("1", "on", "true", "yes", "ic"):
        return True
    if t in ("0", "off", "false", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _round_velocity(v):
    return round(float(v), 9)


def load_config(path=None, preset=None, overrides=None) -> RunConfig:
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    for sec in ("network", "analysis", "mobility"):
        cp.add_section(sec)
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}")
        cp.read_dict(PRESETS[preset])
    if path is not None:
        try:
            with open(path) as fh:
                cp.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        except configparser.Error as exc:
            raise ConfigError(f"malformed config: {exc}") from None
    unknown = set(cp.sections()) - {"network", "analysis", "mobility"}
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")

    def num(sec, key, default, conv=float):
        raw = cp.get(sec, key, fallback=None)
        if raw is None:
            return default
        try:
            return conv(raw)
        except ValueError:
            raise ConfigError(f"[{sec}] {key}: cannot parse {raw!r}") from None

    known = {
        "network": {"lambda_macro_per_km2", "lambda_femto_per_km2", "p_macro_watt", "p_femto_watt",
                    "eta", "noise_watt"},
        "analysis": {"kind", "theta_db", "strategies", "ic", "units", "mc_samples", "seed"},
        "mobility": {"v_kmh_grid", "d_m_s", "d_f_s", "w_hz"},
    }
    for sec, keys in known.items():
        extra = set(cp.options(sec)) - keys
        if extra:
            raise ConfigError(f"[{sec}] unknown key(s): {', '.join(sorted(extra))}")

    try:
        params = NetworkParams.from_values(
            num("network", "lambda_macro_per_km2", 30.0), num("network", "lambda_femto_per_km2", 70.0),
            num("network", "p_macro_watt", 1.0), num("network", "p_femto_watt", 0.1),
            num("network", "eta", 4.0), num("network", "noise_watt", 0.0))
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    a = cp["analysis"]
    m = cp["mobility"]
    try:
        strategies = [Strategy(s.strip().upper()) for s in a.get("strategies", "BC, FS, FD, MS").split(",")
                      if s.strip()]
    except ValueError as exc:
        raise ConfigError(f"[analysis] strategies: {exc}") from None
    kw = dict(
        params=params,
        kind=a.get("kind", "coverage").strip(),
        theta_db=_parse_list(a.get("theta_db", "6"), float, "[analysis] theta_db"),
        strategies=strategies,
        ic=_parse_list(a.get("ic", "off, on"), _parse_bool, "[analysis] ic"),
        velocities=_parse_list(m.get("v_kmh_grid", "0"), lambda v: _round_velocity(float(v)),
                               "[mobility] v_kmh_grid"),
        d_m=num("mobility", "d_m_s", 0.35),
        d_f=_parse_list(m.get("d_f_s", "0.7"), float, "[mobility] d_f_s"),
        bandwidth=num("mobility", "w_hz", 10e6),
        units=a.get("units", "nats").strip(),
        mc_samples=num("analysis", "mc_samples", 0, int),
        seed=num("analysis", "seed", 0, int),
    )
    kw.update({k: v for k, v in (overrides or {}).items() if v is not None})
    cfg = RunConfig(**kw)
    for df in cfg.d_f:
        try:
            MobilityProfile(0.0, cfg.d_m, df)
        except ValueError as exc:
            raise ConfigError(f"[mobility] {exc}") from None
    if any(v < 0 for v in cfg.velocities):
        raise ConfigError("[mobility] v_kmh_grid: velocities must be >= 0")
    if any(not math.isfinite(t) for t in cfg.theta_db):
        raise ConfigError("[analysis] theta_db: thresholds must be finite")
    return cfg


def _cases(cfg):
    seen = []
    for s in cfg.strategies:
        for ic in cfg.ic:
            case = (s, bool(ic) and s is not Strategy.BC)
            if case not in seen:
                seen.append(case)
    return seen


def _blank_row(cfg, digest):
    row = dict.fromkeys(COLUMNS, "")
    row["config_hash"] = digest
    return row


def run(cfg: RunConfig):
    """Evaluate the configured grid; returns (rows, failed) with rows in grid order."""
    digest = cfg.fingerprint()
    rows = []
    failed = False
    cases = _cases(cfg)
    scale = 1.0 / math.log(2.0) if cfg.units == "bits" else 1.0
    mc = None
    if cfg.kind == "coverage" and cfg.mc_samples > 0:
        mc = empirical_coverage_all(cfg.params, cfg.thresholds, cfg.mc_samples, cfg.seed, workers=cfg.workers)

    if cfg.kind == "coverage":
        for s, ic in cases:
            for k, (tdb, T) in enumerate(zip(cfg.theta_db, cfg.thresholds)):
                res = cv.coverage(s, cfg.params, T, ic)
                row = _blank_row(cfg, digest)
                row.update(strategy=s.value, ic=int(ic), T_dB=tdb, coverage_analytic=res.value,
                           coverage_numeric_error=res.numeric_error)
                failed |= not res.converged
                if mc is not None:
                    est = mc[(s, ic)]
                    lo, hi = est.wilson_interval()
                    row.update(coverage_mc=float(est.coverage[k]), mc_ci_low=float(lo[k]), mc_ci_high=float(hi[k]))
                    tol = max(0.01, 3 * float(est.standard_error[k]))
                    ok = abs(res.value - float(est.coverage[k])) <= tol
                    row["within_tolerance"] = int(ok)
                    failed |= not ok
                rows.append(row)
    elif cfg.kind == "rate":
        for s, ic in cases:
            for tdb, T in zip(cfg.theta_db, cfg.thresholds):
                res = cv.coverage(s, cfg.params, T, ic)
                R = math.log1p(T) * res.value
                row = _blank_row(cfg, digest)
                row.update(strategy=s.value, ic=int(ic), T_dB=tdb, coverage_analytic=res.value,
                           coverage_numeric_error=res.numeric_error, R_nats=R)
                failed |= not res.converged
                ref = TABLE2_REFERENCE.get((s.value, ic))
                if ref is not None and tdb == 6.0 and cfg.params == NetworkParams.from_values(30, 70):
                    ok = abs(R - ref) <= TABLE2_TOLERANCE
                    row.update(reference=ref, within_tolerance=int(ok))
                    failed |= not ok
                rows.append(row)
    elif cfg.kind == "ho_cost":
        for s in cfg.strategies:
            for df in cfg.d_f:
                for v in cfg.velocities:
                    cost = handover_cost(s, cfg.params, MobilityProfile(v, cfg.d_m, df))
                    row = _blank_row(cfg, digest)
                    row.update(strategy=s.value, v_kmh=v, d_m_s=cfg.d_m, d_f_s=df, D_HO=cost.value,
                               ho_infeasible=int(cost.infeasible))
                    rows.append(row)
    else:
        for s, ic in cases:
            for tdb, T in zip(cfg.theta_db, cfg.thresholds):
                for df in cfg.d_f:
                    for v in cfg.velocities:
                        tp = average_throughput(s, cfg.params, MobilityProfile(v, cfg.d_m, df),
                                                cfg.bandwidth, T, ic)
                        row = _blank_row(cfg, digest)
                        row.update(strategy=s.value, ic=int(ic), T_dB=tdb, v_kmh=v, d_m_s=cfg.d_m, d_f_s=df,
                                   D_HO=tp.ho_cost, ho_infeasible=int(tp.infeasible), R_nats=tp.achievable_rate,
                                   AT=tp.average_throughput * scale,
                                   AT_unit="bit/s" if cfg.units == "bits" else "nat/s")
                        rows.append(row)
    for row in rows:
        for key, val in row.items():
            if isinstance(val, (float, np.floating)):
                row[key] = float(val)
                if not math.isfinite(row[key]):
                    failed = True
    return rows, failed


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render(rows, fmt, cfg: RunConfig, label: str) -> str:
    digest = cfg.fingerprint()
    if fmt == "json":
        payload = {"config_hash": digest, "analysis": cfg.kind, "label": label,
                   "columns": list(COLUMNS), "rows": [{k: (None if r[k] == "" else r[k]) for k in COLUMNS}
                                                      for r in rows]}
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# ho-skip {label} analysis={cfg.kind} config_hash={digest} columns: {','.join(COLUMNS)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for r in rows:
        writer.writerow([_fmt(r[k]) for k in COLUMNS])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ho-skip", description="Velocity-aware handover skipping in two-tier networks")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="evaluate a coverage, rate, handover-cost or throughput grid")
    r.add_argument("--config", help="INI configuration file")
    r.add_argument("--preset", choices=sorted(PRESETS), help="embedded configuration (the file overrides it)")
    r.add_argument("--out", help="output path (default: stdout)")
    r.add_argument("--format", choices=("csv", "json"), default="csv")
    r.add_argument("--seed", type=int)
    r.add_argument("--mc-samples", type=int)
    r.add_argument("--workers", type=int, default=1, help="processes for Monte Carlo sampling")
    r.add_argument("--strict", action="store_true", help="exit 2 on integration or tolerance failures")
    v = sub.add_parser("validate", help="run the self-consistency checks for a configuration")
    v.add_argument("--config", help="INI configuration file (default: reference deployment)")
    v.add_argument("--mc-samples", type=int, default=20_000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--workers", type=int, default=1)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        if args.command == "run":
            if args.config is None and args.preset is None:
                raise ConfigError("run needs --config and/or --preset")
            cfg = load_config(args.config, args.preset,
                              {"seed": args.seed, "mc_samples": args.mc_samples, "workers": args.workers})
        else:
            cfg = load_config(args.config, None, {"seed": args.seed, "workers": args.workers})
    except ConfigError as exc:
        print(f"ho-skip: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "validate":
        checks = run_checks(cfg.params, cfg.thresholds[0], args.mc_samples, cfg.seed, cfg.workers)
        for c in checks:
            print(c.line())
        bad = sum(not c.passed for c in checks)
        print(f"{len(checks) - bad}/{len(checks)} checks passed")
        return EXIT_NUMERIC if bad else EXIT_OK

    try:
        rows, failed = run(cfg)
    except (ValueError, ArithmeticError) as exc:
        print(f"ho-skip: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render(rows, args.format, cfg, args.preset or "custom")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if failed:
        print("ho-skip: some rows failed integration or tolerance checks", file=sys.stderr)
        if args.strict:
            return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
