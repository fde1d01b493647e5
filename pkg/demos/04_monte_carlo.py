"""Check the analytic coverage against a Monte Carlo simulation of the network."""

from hoskip import coverage, db_to_linear, table3_params
from hoskip.simulation import ALL_CASES, empirical_coverage_all

params = table3_params()
thresholds = [db_to_linear(d) for d in (0, 6, 10)]

# 20k independent deployments; every strategy is evaluated on the same draws
est = empirical_coverage_all(params, thresholds, n=20_000, seed=1)
for s, ic in ALL_CASES:
    e = est[(s, ic)]
    lo, hi = e.wilson_interval()
    for k, T in enumerate(thresholds):
        a = coverage(s, params, T, ic).value
        print(f"{s.value}{'-IC' if ic else '   '} T={T:6.2f}  analytic {a:.4f}  "
              f"simulated {e.coverage[k]:.4f} [{lo[k]:.4f}, {hi[k]:.4f}]")
