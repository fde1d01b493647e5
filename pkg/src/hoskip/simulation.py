"""Monte Carlo oracle: PPP deployments, stationary SINR and mobile trajectories.

The simulator is written independently of the analytic module; it only
shares the parameter types.  Every realization owns an RNG stream spawned
from one master seed, so results are reproducible and the work can be split
across processes without changing a single sample.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .model import FEMTO, MACRO, NetworkParams, Phase, Strategy

GUARD_FRACTION = 0.25  # guard margin per side, relative to the core window
CORE_SIDE_SCALE = 40.0

ALL_CASES = ((Strategy.BC, False), (Strategy.FS, False), (Strategy.FS, True),
             (Strategy.FD, False), (Strategy.FD, True), (Strategy.MS, False), (Strategy.MS, True))


@dataclass(frozen=True)
class NetworkRealization:
    """One PPP draw on the square [-window/2, window/2]^2 (test user at the origin)."""

    window: float
    macro: np.ndarray  # (n1, 2) km
    femto: np.ndarray  # (n2, 2) km
    seed: int | None = None

    @property
    def core(self) -> float:
        return self.window / (1 + 2 * GUARD_FRACTION)

    def restricted(self, side: float) -> "NetworkRealization":
        """Points inside the centred square of the given side (still a PPP)."""
        h = side / 2
        keep1 = np.all(np.abs(self.macro) <= h, axis=1)
        keep2 = np.all(np.abs(self.femto) <= h, axis=1)
        return NetworkRealization(side, self.macro[keep1], self.femto[keep2], self.seed)


@dataclass(frozen=True)
class Trajectory:
    start: tuple[float, float]
    heading: float  # radians
    length: float  # km
    velocity: float  # km/h

    def point(self, s):
        s = np.asarray(s, dtype=float)
        return np.stack([self.start[0] + s * math.cos(self.heading),
                         self.start[1] + s * math.sin(self.heading)], axis=-1)

    @property
    def end(self):
        return tuple(self.point(self.length))


@dataclass(frozen=True)
class SinrSample:
    strategy: Strategy
    phase: Phase | None  # None marks a rejected sample (too few BSs in the window)
    ic: bool
    sinr: float


@dataclass
class CoverageEstimate:
    strategy: Strategy
    ic: bool
    thresholds: np.ndarray  # linear
    successes: np.ndarray
    n: int
    rejected: int = 0
    phase_counts: dict = field(default_factory=dict)
    phase_successes: dict = field(default_factory=dict)  # Phase -> per-threshold successes

    @property
    def coverage(self) -> np.ndarray:
        return self.successes / self.n

    @property
    def standard_error(self) -> np.ndarray:
        p = self.coverage
        return np.sqrt(p * (1 - p) / self.n)

    def wilson_interval(self, z=1.96):
        p, n = self.coverage, self.n
        den = 1 + z * z / n
        centre = (p + z * z / (2 * n)) / den
        half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
        return centre - half, centre + half

    def phase_coverage(self, phase: Phase) -> np.ndarray:
        return self.phase_successes[phase] / self.phase_counts[phase]


# ---------------------------------------------------------------------------
# deployments

def default_core_side(params: NetworkParams) -> float:
    ratio = min(1.0, (params.p2 / params.p1) ** (2 / params.eta))
    return CORE_SIDE_SCALE / math.sqrt(params.lam1 + params.lam2 * ratio)


def default_window(params: NetworkParams) -> float:
    return default_core_side(params) * (1 + 2 * GUARD_FRACTION)


def _check_guard(params: NetworkParams, window: float):
    positive = [lam for lam in (params.lam1, params.lam2) if lam > 0]
    if not positive:
        raise ValueError("network has no base stations")
    guard = window * GUARD_FRACTION / (1 + 2 * GUARD_FRACTION)
    need = 5 / math.sqrt(min(positive))
    if guard < need:
        raise ValueError(f"window {window:.3g} km too small: guard {guard:.3g} km < {need:.3g} km")


def _as_rng(seed_or_rng):
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng, None
    if isinstance(seed_or_rng, np.random.SeedSequence):
        return np.random.default_rng(seed_or_rng), seed_or_rng.entropy
    return np.random.default_rng(seed_or_rng), seed_or_rng


def sample_network(params: NetworkParams, window: float | None = None, seed=None) -> NetworkRealization:
    """Draw both tiers as independent homogeneous PPPs on the centred square window."""
    window = default_window(params) if window is None else float(window)
    _check_guard(params, window)
    rng, tag = _as_rng(seed)
    area = window * window
    h = window / 2
    n1 = rng.poisson(params.lam1 * area)
    n2 = rng.poisson(params.lam2 * area)
    macro = rng.uniform(-h, h, size=(n1, 2))
    femto = rng.uniform(-h, h, size=(n2, 2))
    return NetworkRealization(window, macro, femto, tag if isinstance(tag, int) else None)


def spawn_streams(seed, n):
    """Independent per-realization seed sequences from one master seed."""
    return np.random.SeedSequence(seed).spawn(n)


# ---------------------------------------------------------------------------
# stationary SINR

def _comp_power(rng, ma, mb, comp):
    """Received power of a non-coherent two-BS joint transmission with mean gains ma, mb."""
    if comp == "exponential":
        return (ma + mb) * rng.exponential()
    g = (rng.standard_normal(2) + 1j * rng.standard_normal(2)) / math.sqrt(2)
    return abs(math.sqrt(ma) * g[0] + math.sqrt(mb) * g[1]) ** 2


def _link_state(real: NetworkRealization, params: NetworkParams, rng, origin=(0.0, 0.0)):
    eta = params.eta
    d1 = np.hypot(real.macro[:, 0] - origin[0], real.macro[:, 1] - origin[1])
    d2 = np.hypot(real.femto[:, 0] - origin[0], real.femto[:, 1] - origin[1])
    m1 = params.p1 * d1 ** -eta
    m2 = params.p2 * d2 ** -eta
    h1 = rng.exponential(size=m1.size)
    h2 = rng.exponential(size=m2.size)
    return d1, d2, m1, m2, h1, h2


def _nearest(d, k):
    if d.size <= k:
        return np.argsort(d)
    idx = np.argpartition(d, k)[:k]
    return idx[np.argsort(d[idx])]


def stationary_sinr_all(real: NetworkRealization, params: NetworkParams, rng,
                        comp: str = "complex") -> dict:
    """SINR of the user at the window centre under every (strategy, ic) case.

    Association follows mean received power; fading is Rayleigh for single
    links and a sum of independent complex Gaussians for joint transmission.
    Alternating strategies (FS, MS) pick the blackout phase with a fair coin,
    which is the stationary view of skipping every other cell.
    """
    d1, d2, m1, m2, h1, h2 = _link_state(real, params, rng)
    r1 = m1 * h1
    r2 = m2 * h2
    total = r1.sum() + r2.sum()
    noise = params.noise_power
    coin_fs, coin_ms = rng.random(2)
    out = {}

    def reject():
        return {case: SinrSample(case[0], None, case[1], math.nan) for case in ALL_CASES}

    if m1.size + m2.size < 3 or m1.size < 3:
        return reject()
    mac = _nearest(d1, 3)
    fem = int(np.argmin(d2)) if d2.size else -1
    femto_best = fem >= 0 and m2[fem] > m1[mac[0]]

    def single(S):
        return S / (total - S + noise)

    macro_sinr = single(r1[mac[0]])
    femto_sinr = single(r2[fem]) if fem >= 0 else math.nan

    # BC
    bc_phase, bc_sinr = (Phase.FEMTO, femto_sinr) if femto_best else (Phase.MACRO, macro_sinr)
    out[(Strategy.BC, False)] = SinrSample(Strategy.BC, bc_phase, False, bc_sinr)

    # FS: blackout served by the 2nd and 3rd strongest (mean power) of both tiers
    if femto_best and coin_fs < 0.5:
        means = np.concatenate([m1, m2])
        faded = np.concatenate([r1, r2])
        top = np.argpartition(-means, 3)[:3]
        top = top[np.argsort(-means[top])]
        S = _comp_power(rng, means[top[1]], means[top[2]], comp)
        interf = total - faded[top[1]] - faded[top[2]]
        out[(Strategy.FS, False)] = SinrSample(Strategy.FS, Phase.BLACKOUT, False, S / (interf + noise))
        out[(Strategy.FS, True)] = SinrSample(Strategy.FS, Phase.BLACKOUT, True,
                                              S / (interf - faded[top[0]] + noise))
    else:
        for ic in (False, True):
            out[(Strategy.FS, ic)] = SinrSample(Strategy.FS, bc_phase, ic, bc_sinr)

    # FD: femto tier ignored, blackout served by the two nearest macros
    if femto_best:
        S = _comp_power(rng, m1[mac[0]], m1[mac[1]], comp)
        interf = total - r1[mac[0]] - r1[mac[1]]
        out[(Strategy.FD, False)] = SinrSample(Strategy.FD, Phase.BLACKOUT, False, S / (interf + noise))
        out[(Strategy.FD, True)] = SinrSample(Strategy.FD, Phase.BLACKOUT, True,
                                              S / (interf - r2[fem] + noise))
    else:
        for ic in (False, True):
            out[(Strategy.FD, ic)] = SinrSample(Strategy.FD, Phase.MACRO, ic, macro_sinr)

    # MS: femto tier ignored, every other macro skipped
    if coin_ms < 0.5:
        S = _comp_power(rng, m1[mac[1]], m1[mac[2]], comp)
        interf = total - r1[mac[1]] - r1[mac[2]]
        out[(Strategy.MS, False)] = SinrSample(Strategy.MS, Phase.BLACKOUT, False, S / (interf + noise))
        out[(Strategy.MS, True)] = SinrSample(Strategy.MS, Phase.BLACKOUT, True,
                                              S / (interf - r1[mac[0]] + noise))
    else:
        phase = Phase.MACRO_DISREGARD if femto_best else Phase.MACRO
        for ic in (False, True):
            out[(Strategy.MS, ic)] = SinrSample(Strategy.MS, phase, ic, macro_sinr)
    return out


def stationary_sinr(real: NetworkRealization, params: NetworkParams, strategy: Strategy,
                    ic: bool, rng, comp: str = "complex") -> SinrSample:
    strategy = Strategy(strategy)
    ic = bool(ic) and strategy is not Strategy.BC
    return stationary_sinr_all(real, params, rng, comp)[(strategy, ic)]


def _coverage_chunk(args):
    params, seqs, window, comp, reuse, thresholds = args
    T = np.asarray(thresholds)
    succ = {case: np.zeros(T.size, dtype=np.int64) for case in ALL_CASES}
    pcount = {case: {} for case in ALL_CASES}
    psucc = {case: {} for case in ALL_CASES}
    rejected = 0
    for ss in seqs:
        rng = np.random.default_rng(ss)
        real = sample_network(params, window, rng)
        for _ in range(reuse):
            samples = stationary_sinr_all(real, params, rng, comp)
            if samples[ALL_CASES[0]].phase is None:
                rejected += 1
                continue
            for case, smp in samples.items():
                hit = smp.sinr > T
                succ[case] += hit
                pcount[case][smp.phase] = pcount[case].get(smp.phase, 0) + 1
                ps = psucc[case].setdefault(smp.phase, np.zeros(T.size, dtype=np.int64))
                ps += hit
    return succ, pcount, psucc, rejected


def empirical_coverage_all(params: NetworkParams, thresholds, n: int, seed=0,
                           window: float | None = None, comp: str = "complex",
                           reuse: int = 1, workers: int = 1) -> dict:
    """Empirical coverage for every (strategy, ic) case from shared realizations.

    ``reuse`` > 1 draws that many fading/coin samples per deployment.  The
    result is identical for any ``workers`` count.
    """
    if n < 1000:
        raise ValueError("use at least 1000 samples")
    T = np.atleast_1d(np.asarray(thresholds, dtype=float))
    window = default_window(params) if window is None else window
    _check_guard(params, window)
    n_real = math.ceil(n / reuse)
    seqs = spawn_streams(seed, n_real)
    n_chunks = max(1, workers) * 4 if workers > 1 else 1
    bounds = np.linspace(0, n_real, n_chunks + 1).astype(int)
    jobs = [(params, seqs[a:b], window, comp, reuse, T) for a, b in zip(bounds[:-1], bounds[1:])]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_coverage_chunk, jobs))
    else:
        parts = [_coverage_chunk(j) for j in jobs]
    out = {}
    for case in ALL_CASES:
        succ = sum(p[0][case] for p in parts)
        rejected = sum(p[3] for p in parts)
        pcount, psucc = {}, {}
        for p in parts:
            for ph, c in p[1][case].items():
                pcount[ph] = pcount.get(ph, 0) + c
                psucc[ph] = psucc.get(ph, 0) + p[2][case][ph]
        total = n_real * reuse - rejected
        out[case] = CoverageEstimate(case[0], case[1], T, np.asarray(succ), total, rejected,
                                     pcount, psucc)
    out[(Strategy.BC, True)] = out[(Strategy.BC, False)]
    return out


def empirical_coverage(params: NetworkParams, strategy: Strategy, thresholds, ic: bool = False,
                       n: int = 100_000, seed=0, **kw) -> CoverageEstimate:
    """Fraction of samples with SINR above each threshold, with binomial error bars."""
    strategy = Strategy(strategy)
    ic = bool(ic) and strategy is not Strategy.BC
    return empirical_coverage_all(params, thresholds, n, seed, **kw)[(strategy, ic)]


def mapped_order_statistics(real: NetworkRealization, params: NetworkParams, n_points: int = 3):
    """Smallest mapped coordinates y = d^eta / P seen from the origin, ascending."""
    eta = params.eta
    y1 = np.sum(real.macro ** 2, axis=1) ** (eta / 2) / params.p1
    y2 = np.sum(real.femto ** 2, axis=1) ** (eta / 2) / params.p2
    y = np.concatenate([y1, y2])
    if y.size > n_points:
        y = np.partition(y, n_points)[:n_points]
    return np.sort(y)


# ---------------------------------------------------------------------------
# trajectories

@dataclass
class TrajectoryResult:
    strategy: Strategy
    length: float  # km
    velocity: float  # km/h
    ho_counts: dict  # (from_tier, to_tier) -> count
    occupancy: dict  # Phase -> fraction of path
    step: float  # association sampling step actually used, km

    @property
    def duration(self) -> float:
        """Seconds spent on the path."""
        return self.length / self.velocity * 3600.0 if self.velocity > 0 else math.inf

    @property
    def total_handovers(self) -> int:
        return sum(self.ho_counts.values())

    def rates(self) -> dict:
        """Handovers per second by type."""
        return {k: c / self.duration for k, c in self.ho_counts.items()}


class _Associator:
    """Best-cell lookup; cell ids are macro index or n_macro + femto index."""

    def __init__(self, real, params, macro_only=False):
        self.params = params
        self.n1 = len(real.macro)
        self.t1 = cKDTree(real.macro) if self.n1 else None
        self.t2 = cKDTree(real.femto) if len(real.femto) and not macro_only else None

    def __call__(self, pts):
        eta = self.params.eta
        if self.t1 is not None:
            d1, i1 = self.t1.query(pts)
        else:
            d1 = np.full(len(pts), np.inf)
            i1 = np.zeros(len(pts), dtype=int)
        if self.t2 is None:
            return i1
        d2, i2 = self.t2.query(pts)
        with np.errstate(divide="ignore"):
            fb = self.params.p2 * d2 ** -eta > self.params.p1 * d1 ** -eta
        return np.where(fb, self.n1 + i2, i1)


def _femto_best_mask(real, params, pts):
    eta = params.eta
    if len(real.femto) == 0:
        return np.zeros(len(pts), dtype=bool)
    d2, _ = cKDTree(real.femto).query(pts)
    if len(real.macro) == 0:
        return np.ones(len(pts), dtype=bool)
    d1, _ = cKDTree(real.macro).query(pts)
    return params.p2 * d2 ** -eta > params.p1 * d1 ** -eta


def _trace_cells(assoc, traj: Trajectory, step: float, tol: float):
    """Ordered cells visited along the path and the arc positions of the changes.

    Consecutive samples in different cells are bisected until the change is
    located within ``tol``; cells entered and left between two samples are
    recovered by the same bisection.  Returns (cells, positions, max changes
    found inside one step).
    """
    n = max(2, int(math.ceil(traj.length / step)) + 1)
    s = np.linspace(0.0, traj.length, n)
    c = assoc(traj.point(s))
    cells = [int(c[0])]
    pos = []
    worst = 0
    for k in np.flatnonzero(c[1:] != c[:-1]):
        found = []
        stack = [(s[k], int(c[k]), s[k + 1], int(c[k + 1]))]
        while stack:
            a, ca, b, cb = stack.pop()
            if b - a <= tol:
                found.append((0.5 * (a + b), cb))
                continue
            m = 0.5 * (a + b)
            cm = int(assoc(traj.point(np.array([m])))[0])
            # push right half first so the left half is processed first
            if cm != cb:
                stack.append((m, cm, b, cb))
            if cm != ca:
                stack.append((a, ca, m, cm))
        found.sort()
        worst = max(worst, len(found))
        for p, cell in found:
            if cell != cells[-1]:
                cells.append(cell)
                pos.append(p)
    return cells, np.asarray(pos), worst


def default_step(params: NetworkParams) -> float:
    return 0.1 / math.sqrt(params.lam1 + params.lam2)


def simulate_trajectory(real: NetworkRealization, params: NetworkParams, traj: Trajectory,
                        strategy: Strategy, step: float | None = None,
                        max_refinements: int = 2) -> TrajectoryResult:
    """Count handovers by type and time in each phase along a straight path."""
    strategy = Strategy(strategy)
    h = real.core / 2
    ends = np.array([traj.start, traj.end])
    if np.any(np.abs(ends) > h + 1e-9):
        raise ValueError("trajectory leaves the guard-reduced window")
    step = default_step(params) if step is None else step
    macro_only = strategy in (Strategy.FD, Strategy.MS)
    if macro_only and len(real.macro) == 0:
        raise ValueError("strategy needs macro base stations")
    assoc = _Associator(real, params, macro_only=macro_only)
    for _ in range(max_refinements + 1):
        cells, pos, worst = _trace_cells(assoc, traj, step, tol=step * 1e-3)
        if worst < 2:
            break
        step /= 4
    n1 = assoc.n1

    def tier(cell):
        return MACRO if cell < n1 else FEMTO

    counts = {(i, j): 0 for i in (1, 2) for j in (1, 2)}
    # connected[k]: whether the k-th visited cell is actually joined
    connected = np.ones(len(cells), dtype=bool)
    if strategy is Strategy.BC:
        for a, b in zip(cells[:-1], cells[1:]):
            counts[tier(a), tier(b)] += 1
    elif strategy is Strategy.FS:
        serving = cells[0]
        femto_seen = 1 if tier(cells[0]) == FEMTO else 0
        for k in range(1, len(cells)):
            c = cells[k]
            if tier(c) == FEMTO:
                femto_seen += 1
                if femto_seen % 2 == 0:
                    connected[k] = False
                    continue
            if c != serving:
                counts[tier(serving), tier(c)] += 1
                serving = c
    elif strategy is Strategy.FD:
        counts[1, 1] = len(cells) - 1
    else:
        connected[1::2] = False
        joined = [c for c, ok in zip(cells, connected) if ok]
        counts[1, 1] = sum(1 for a, b in zip(joined[:-1], joined[1:]) if a != b)

    # phase occupancy from fine samples along the path
    n = max(2, int(math.ceil(traj.length / step)))
    mid = (np.arange(n) + 0.5) * traj.length / n
    seg = np.searchsorted(pos, mid)
    pts = traj.point(mid)
    if strategy is Strategy.BC:
        is_f = np.array([tier(cells[k]) == FEMTO for k in seg])
        phases = np.where(is_f, Phase.FEMTO.value, Phase.MACRO.value)
    elif strategy is Strategy.FS:
        is_f = np.array([tier(cells[k]) == FEMTO for k in seg])
        ok = connected[seg]
        phases = np.where(~ok, Phase.BLACKOUT.value, np.where(is_f, Phase.FEMTO.value, Phase.MACRO.value))
    elif strategy is Strategy.FD:
        fb = _femto_best_mask(real, params, pts)
        phases = np.where(fb, Phase.BLACKOUT.value, Phase.MACRO.value)
    else:
        fb = _femto_best_mask(real, params, pts)
        ok = connected[seg]
        phases = np.where(~ok, Phase.BLACKOUT.value,
                          np.where(fb, Phase.MACRO_DISREGARD.value, Phase.MACRO.value))
    occupancy = {ph: float(np.mean(phases == ph.value)) for ph in Phase}
    return TrajectoryResult(strategy, traj.length, traj.velocity, counts, occupancy, step)


def random_trajectory(real: NetworkRealization, length: float, velocity: float, rng) -> Trajectory:
    """Uniform heading; start drawn so the whole path stays inside the core window."""
    h = real.core / 2
    heading = rng.uniform(0, 2 * math.pi)
    dx, dy = length * math.cos(heading), length * math.sin(heading)
    lo_x, hi_x = -h - min(0.0, dx), h - max(0.0, dx)
    lo_y, hi_y = -h - min(0.0, dy), h - max(0.0, dy)
    if lo_x > hi_x or lo_y > hi_y:
        raise ValueError("trajectory longer than the core window allows")
    return Trajectory((rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)), heading, length, velocity)


def trajectory_window(params: NetworkParams, length: float) -> float:
    """Window whose core holds a path of ``length`` in any direction, guard included."""
    core = max(default_core_side(params), length * 1.05)
    window = core * (1 + 2 * GUARD_FRACTION)
    positive = [lam for lam in (params.lam1, params.lam2) if lam > 0]
    need_guard = 5 / math.sqrt(min(positive))
    return max(window, core + 2 * need_guard)


def handover_rate_experiment(params: NetworkParams, strategy: Strategy, n_paths: int = 500,
                             length: float = 10.0, velocity: float = 100.0, seed=0) -> dict:
    """Fresh deployment and random straight path per run; pooled rates per second."""
    window = trajectory_window(params, length)
    counts = {(i, j): 0 for i in (1, 2) for j in (1, 2)}
    occ = dict.fromkeys(Phase, 0.0)
    duration = 0.0
    for ss in spawn_streams(seed, n_paths):
        rng = np.random.default_rng(ss)
        real = _sample_for_path(params, window, rng)
        traj = random_trajectory(real, length, velocity, rng)
        res = simulate_trajectory(real, params, traj, strategy)
        for k, c in res.ho_counts.items():
            counts[k] += c
        for ph, f in res.occupancy.items():
            occ[ph] += f / n_paths
        duration += res.duration
    return {"counts": counts, "rates": {k: c / duration for k, c in counts.items()},
            "occupancy": occ, "duration": duration}


def _sample_for_path(params, window, rng):
    # trajectory windows carry their own guard; skip the stationary-window check
    area = window * window
    h = window / 2
    n1 = rng.poisson(params.lam1 * area)
    n2 = rng.poisson(params.lam2 * area)
    return NetworkRealization(window, rng.uniform(-h, h, size=(n1, 2)), rng.uniform(-h, h, size=(n2, 2)))
