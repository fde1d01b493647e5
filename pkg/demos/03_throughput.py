"""Average throughput versus velocity and the strategy that wins at each speed."""

import numpy as np

from hoskip import db_to_linear, max_skipping_gain, table3_params
from hoskip.throughput import best_strategy, region_boundaries

params = table3_params()
theta = db_to_linear(6)
W = 10e6  # Hz

for d_f in (0.7, 1.05):
    rows = best_strategy(params, np.arange(0, 201, 20), W, theta, ic=True, d_m=0.35, d_f=d_f)
    print(f"d_f = {d_f} s")
    for r in rows:
        print(f"  {r.velocity:5.0f} km/h  best {r.best.value}  "
              + "  ".join(f"{s.value} {at / 1e6:.2f}" for s, at in r.throughput.items()) + "  (Mnat/s)")
    fine = best_strategy(params, np.arange(0, 401, 1.0), W, theta, ic=True, d_m=0.35, d_f=d_f)
    print("  region boundaries:", [(v, a.value, b.value) for v, a, b in region_boundaries(fine)])

g = max_skipping_gain(params, np.arange(80, 201, 1.0), W, theta, d_m=0.35, d_f=1.05)
print(f"\nlargest gain over BC in 80-200 km/h: {100 * g.gain:.1f}% ({g.strategy.value}, IC={g.ic}, {g.velocity} km/h)")
