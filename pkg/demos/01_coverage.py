"""Coverage of the four handover strategies in the reference two-tier network."""

import numpy as np

from hoskip import Phase, Strategy, coverage, db_to_linear, table3_params
from hoskip.analytic import bc_closed_form

params = table3_params()
T = db_to_linear(6)

# Without noise and with eta = 4 the best connected user has the same
# coverage in every tier, given by a one-line closed form.
print("best connected at 6 dB:", coverage(Strategy.BC, params, T).value)
print("closed form           :", bc_closed_form(T))

# Skipping trades coverage for fewer handovers.  The blackout phase is where
# the loss comes from; cancelling the skipped BS's interference recovers part of it.
for s in (Strategy.FS, Strategy.FD, Strategy.MS):
    plain = coverage(s, params, T)
    ic = coverage(s, params, T, ic=True)
    print(f"{s.value}: {plain.value:.4f} (blackout {plain.conditional(Phase.BLACKOUT):.4f})"
          f"  with IC {ic.value:.4f} (blackout {ic.conditional(Phase.BLACKOUT):.4f})")

# Coverage curve over the threshold, as one would plot it
for db in np.arange(-10, 21, 5):
    row = [coverage(s, params, db_to_linear(db)).value for s in Strategy]
    print(f"{db:+3d} dB  " + "  ".join(f"{v:.3f}" for v in row))
