"""Drive a user through simulated deployments and count handovers by type."""

import numpy as np

from hoskip import handover_rates, table3_params
from hoskip.simulation import handover_rate_experiment, random_trajectory, sample_network, simulate_trajectory
from hoskip.simulation import trajectory_window

params = table3_params()

# One deployment, one 5 km straight path, all four strategies on the same path
rng = np.random.default_rng(0)
real = sample_network(params, trajectory_window(params, 5.0), rng)
path = random_trajectory(real, 5.0, 100.0, rng)
for s in ("BC", "FS", "FD", "MS"):
    res = simulate_trajectory(real, params, path, s)
    occ = {ph.value: round(f, 3) for ph, f in res.occupancy.items() if f > 0}
    print(s, dict(res.ho_counts), occ)

# Pooled crossing rates over many paths vs the boundary-length formula
sim = handover_rate_experiment(params, "BC", n_paths=40, length=5.0, velocity=100.0, seed=3)
H = handover_rates(params, 100.0)
print("simulated:", {k: round(v, 4) for k, v in sim["rates"].items()})
print("model    :", [[round(h, 4) for h in row] for row in H.as_matrix()])

# FD and MS users only see macro cells, so they cross the macro-only Voronoi
# tessellation; its rate is higher than the macro-to-macro term of the two-tier model.
fd = handover_rate_experiment(params, "FD", n_paths=20, length=5.0, velocity=100.0, seed=4)
print("FD simulated macro rate:", round(fd["rates"][1, 1], 4), " two-tier H11:", round(H.h11, 4))
