import math

import numpy as np
import pytest
from scipy import integrate, stats

from hoskip import analytic as cv
from hoskip.model import NetworkParams, Phase, Strategy, association_probability, db_to_linear
from hoskip.simulation import (NetworkRealization, Trajectory, _comp_power, default_window, empirical_coverage,
                               empirical_coverage_all, handover_rate_experiment, mapped_order_statistics,
                               random_trajectory, sample_network, simulate_trajectory, spawn_streams,
                               stationary_sinr, stationary_sinr_all, trajectory_window)


def test_sample_network_is_reproducible(ref):
    a = sample_network(ref, seed=7)
    b = sample_network(ref, seed=7)
    assert np.array_equal(a.macro, b.macro) and np.array_equal(a.femto, b.femto)
    c = sample_network(ref, seed=8)
    assert not np.array_equal(a.macro, c.macro)


def test_window_and_counts(ref):
    w = default_window(ref)
    assert w == pytest.approx(1.5 * 40 / math.sqrt(30 + 70 * math.sqrt(0.1)))
    counts = [len(sample_network(ref, seed=s).macro) for s in range(200)]
    assert np.mean(counts) == pytest.approx(30 * w * w, rel=0.02)


def test_window_guard_enforced(ref):
    with pytest.raises(ValueError, match="too small"):
        sample_network(ref, window=1.0, seed=0)


def test_restricted_keeps_inner_points(ref):
    real = sample_network(ref, seed=3)
    inner = real.restricted(2.0)
    assert np.all(np.abs(inner.macro) <= 1.0) and len(inner.macro) < len(real.macro)


def test_comp_complex_sum_is_exponential():
    rng = np.random.default_rng(0)
    ma, mb = 2.0, 0.7
    direct = np.array([_comp_power(rng, ma, mb, "complex") for _ in range(20000)])
    short = np.array([_comp_power(rng, ma, mb, "exponential") for _ in range(20000)])
    assert stats.kstest(direct, "expon", args=(0, ma + mb)).pvalue > 0.01
    assert stats.ks_2samp(direct, short).pvalue > 0.01


def test_rejects_sparse_deployments(ref):
    real = NetworkRealization(10.0, np.array([[0.1, 0.0], [0.0, 0.3]]), np.empty((0, 2)))
    out = stationary_sinr_all(real, ref, np.random.default_rng(0))
    assert all(s.phase is None for s in out.values())


def test_stationary_sinr_single_case(ref):
    real = sample_network(ref, seed=1)
    s1 = stationary_sinr(real, ref, "FD", True, np.random.default_rng(5))
    s2 = stationary_sinr_all(real, ref, np.random.default_rng(5))[(Strategy.FD, True)]
    assert s1 == s2 and s1.sinr > 0


def test_ic_never_hurts_per_sample(ref):
    rng = np.random.default_rng(2)
    for seed in range(200):
        out = stationary_sinr_all(sample_network(ref, seed=seed), ref, rng)
        for s in (Strategy.FS, Strategy.FD, Strategy.MS):
            assert out[(s, True)].phase == out[(s, False)].phase
            assert out[(s, True)].sinr >= out[(s, False)].sinr


def test_empirical_coverage_deterministic_and_parallel_safe(ref):
    T = [db_to_linear(6)]
    a = empirical_coverage_all(ref, T, 2000, seed=11)
    b = empirical_coverage_all(ref, T, 2000, seed=11)
    c = empirical_coverage_all(ref, T, 2000, seed=11, workers=2)
    for case in a:
        assert np.array_equal(a[case].successes, b[case].successes)
        assert np.array_equal(a[case].successes, c[case].successes)


def test_empirical_coverage_needs_samples(ref):
    with pytest.raises(ValueError):
        empirical_coverage(ref, "BC", [1.0], n=10)


def test_empirical_phase_frequencies(ref):
    est = empirical_coverage_all(ref, [1.0], 6000, seed=4)
    a_f = association_probability(ref, "femto")
    fs = est[(Strategy.FS, False)]
    assert fs.phase_counts[Phase.BLACKOUT] / fs.n == pytest.approx(a_f / 2, abs=0.02)
    ms = est[(Strategy.MS, False)]
    assert ms.phase_counts[Phase.BLACKOUT] / ms.n == pytest.approx(0.5, abs=0.02)
    lo, hi = est[(Strategy.BC, False)].wilson_interval()
    assert lo[0] < est[(Strategy.BC, False)].coverage[0] < hi[0]


def test_edge_effect_small(ref):
    # same points and fading; compare the default window with twice its side
    T = db_to_linear(6)
    eta = ref.eta
    w = default_window(ref)
    hits_in = hits_out = 0
    n = 1500
    for ss in spawn_streams(99, n):
        g = np.random.default_rng(ss)
        real = sample_network(ref, 2 * w, g)
        pts = np.vstack([real.macro, real.femto])
        power = np.r_[np.full(len(real.macro), ref.p1), np.full(len(real.femto), ref.p2)]
        mean = power * np.hypot(pts[:, 0], pts[:, 1]) ** -eta
        rx = mean * g.exponential(size=mean.size)
        inside = np.all(np.abs(pts) <= w / 2, axis=1)
        k = np.argmax(np.where(inside, mean, -1))
        hits_in += rx[k] / (rx[inside].sum() - rx[k]) > T
        hits_out += rx[k] / (rx.sum() - rx[k]) > T
    assert abs(hits_in - hits_out) / n < 0.005


def _first_three(ref, n, seed):
    ys = np.array([mapped_order_statistics(sample_network(ref, seed=ss), ref, 3) for ss in spawn_streams(seed, n)])
    return ys[:, 0], ys[:, 1], ys[:, 2]


def test_mapped_order_statistics_laws(ref):
    y1, y2, y3 = _first_three(ref, 2000, 5)
    lam_t, d = ref.lambda_t, 2 / ref.eta
    L1 = math.pi * lam_t * y1 ** d
    assert stats.kstest(1 - np.exp(-L1), "uniform").pvalue > 0.01
    L3 = math.pi * lam_t * y3 ** d
    assert stats.kstest(1 - np.exp(-L3) * (1 + L3 + L3 ** 2 / 2), "uniform").pvalue > 0.01
    assert stats.kstest((y2 / y3) ** (2 * d), "uniform").pvalue > 0.01
    assert stats.kstest((y1 / y2) ** d, "uniform").pvalue > 0.01


def test_fd_blackout_distances_by_rejection(ref):
    lam1, lam2 = ref.lam1, ref.lam2
    c = ref.femto_range_ratio()
    R1s, R2s, r1s = [], [], []
    for ss in spawn_streams(6, 3000):
        real = sample_network(ref, seed=ss)
        dm = np.sort(np.hypot(*real.macro.T))[:2]
        df = np.min(np.hypot(*real.femto.T))
        if df < c * dm[0]:  # femto strongest: blackout for FD
            R1s.append(dm[0]); R2s.append(dm[1]); r1s.append(df)
    R1, R2, r1 = map(np.asarray, (R1s, R2s, r1s))
    assert len(R1) / 3000 == pytest.approx(association_probability(ref, "femto"), abs=0.03)
    u_r1 = -np.expm1(-math.pi * lam2 * r1 ** 2) / -np.expm1(-math.pi * lam2 * c ** 2 * R1 ** 2)
    assert stats.kstest(u_r1, "uniform").pvalue > 0.01
    assert stats.kstest(np.exp(-math.pi * lam1 * (R2 ** 2 - R1 ** 2)), "uniform").pvalue > 0.01
    marg = cv.blackout_distance_pdfs_fd(ref).marginal
    # R1 marginal: integrate the (R1, R2) density over R2 in closed form
    f_R1 = lambda x: (2 * math.pi * lam1 * x * np.exp(-math.pi * lam1 * x ** 2)  # noqa: E731
                      * -np.expm1(-math.pi * lam2 * c ** 2 * x ** 2) / association_probability(ref, "femto"))
    probe, _ = integrate.quad(lambda y: marg(0.1, y), 0.1, np.inf)
    assert probe == pytest.approx(f_R1(0.1), rel=1e-8)
    cdf = np.vectorize(lambda t: integrate.quad(f_R1, 0, t)[0])
    assert stats.kstest(R1, cdf).pvalue > 0.01


def test_ms_distances(ref):
    lam1 = ref.lam1
    R = np.array([np.sort(np.hypot(*sample_network(ref, seed=ss).macro.T))[:3] for ss in spawn_streams(8, 2000)])
    assert stats.kstest((R[:, 0] / R[:, 1]) ** 2, "uniform").pvalue > 0.01
    assert stats.kstest((R[:, 1] / R[:, 2]) ** 4, "uniform").pvalue > 0.01
    L = math.pi * lam1 * R[:, 2] ** 2
    assert stats.kstest(1 - np.exp(-L) * (1 + L + L ** 2 / 2), "uniform").pvalue > 0.01


def test_trajectory_geometry():
    tr = Trajectory((0.0, 0.0), math.pi / 2, 2.0, 60.0)
    assert np.allclose(tr.end, (0.0, 2.0))
    assert np.allclose(tr.point([0.5]), [[0.0, 0.5]])


def test_trajectory_must_stay_in_core(ref):
    real = sample_network(ref, seed=0)
    with pytest.raises(ValueError):
        simulate_trajectory(real, ref, Trajectory((0.0, 0.0), 0.0, 100.0, 50.0), "BC")


@pytest.fixture(scope="module")
def path_setup(ref):
    window = trajectory_window(ref, 5.0)
    rng = np.random.default_rng(3)
    real = sample_network(ref, window, rng)
    return real, random_trajectory(real, 5.0, 80.0, rng)


def test_bc_trajectory_occupancy(ref, path_setup):
    real, traj = path_setup
    res = simulate_trajectory(real, ref, traj, "BC")
    assert res.occupancy[Phase.MACRO] + res.occupancy[Phase.FEMTO] == pytest.approx(1.0)
    assert res.total_handovers > 0
    assert res.duration == pytest.approx(5.0 / 80 * 3600)


def test_fs_skips_every_other_femto(ref, path_setup):
    real, traj = path_setup
    bc = simulate_trajectory(real, ref, traj, "BC")
    fs = simulate_trajectory(real, ref, traj, "FS")
    femto_bc = bc.ho_counts[1, 2] + bc.ho_counts[2, 2]
    femto_fs = fs.ho_counts[1, 2] + fs.ho_counts[2, 2]
    assert femto_fs <= femto_bc
    assert fs.occupancy[Phase.BLACKOUT] == pytest.approx(bc.occupancy[Phase.FEMTO] / 2, abs=0.08)


def test_fd_and_ms_only_macro_handovers(ref, path_setup):
    real, traj = path_setup
    fd = simulate_trajectory(real, ref, traj, "FD")
    ms = simulate_trajectory(real, ref, traj, "MS")
    for r in (fd, ms):
        assert r.ho_counts[1, 2] == r.ho_counts[2, 1] == r.ho_counts[2, 2] == 0
    assert ms.ho_counts[1, 1] <= fd.ho_counts[1, 1] // 2 + 1
    assert ms.occupancy[Phase.BLACKOUT] == pytest.approx(0.5, abs=0.15)


def test_single_tier_rate_smoke(macro_only):
    out = handover_rate_experiment(macro_only, "BC", n_paths=40, length=5.0, velocity=100.0, seed=1)
    expected = 4 * (100 / 3600) * math.sqrt(30) / math.pi
    assert out["rates"][1, 1] == pytest.approx(expected, rel=0.1)


def test_rates_scale_with_velocity(macro_only):
    a = handover_rate_experiment(macro_only, "BC", n_paths=5, length=3.0, velocity=50.0, seed=2)
    b = handover_rate_experiment(macro_only, "BC", n_paths=5, length=3.0, velocity=100.0, seed=2)
    assert b["rates"][1, 1] == pytest.approx(2 * a["rates"][1, 1], rel=1e-12)
