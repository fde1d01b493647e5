"""Handover rates and the fraction of time lost to handovers."""

from hoskip import MobilityProfile, Strategy, handover_cost, handover_rates, table3_params

params = table3_params()

# Rates per second for a user driving straight at 100 km/h
H = handover_rates(params, 100.0)
print("handovers per second (from tier i to tier j):")
for i, row in enumerate(H.as_matrix(), start=1):
    print(f"  from {i}:", "  ".join(f"{h:.4f}" for h in row))

# Femto-related handovers cost twice the macro ones (0.7 s vs 0.35 s)
print("\nD_HO at d_m = 0.35 s, d_f = 0.7 s")
for v in (0, 50, 100, 150, 200):
    mob = MobilityProfile(v, 0.35, 0.7)
    print(f"{v:4d} km/h  " + "  ".join(f"{s.value} {handover_cost(s, params, mob).value:.3f}" for s in Strategy))
