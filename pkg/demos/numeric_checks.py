"""Numerical estimates next to the symbolic predictions for a few surfaces."""
import numpy as np

from mixed_brieskorn.mixed_core import ExponentData
from mixed_brieskorn.numeric_lab import (
    check_normal_embedding,
    contact_order,
    estimate_beta,
    estimate_tangent_cone,
)
from mixed_brieskorn.surface_geometry import surface_profile, witness_arcs

cases = [((2, 3), (0, 0)), ((0, 2), (1, 1)), ((0, 1), (1, 1)), ((2, 2), (1, 1)), ((0, 2), (3, 1))]

print(f"{'germ':22} {'type':6} {'cone':14} {'estimated':14} {'beta':>5} {'beta~':>7} {'e':>7}")
for a, b in cases:
    E = ExponentData(a, b)
    prof = surface_profile(E)
    cone = estimate_tangent_cone(E)
    beta = estimate_beta(E)
    ne = check_normal_embedding(E)
    print(f"{str(a) + str(b):22} {str(prof.type):6} {prof.cone.kind:14} {str(cone.kind):14} "
          f"{str(prof.beta):>5} {beta.slope:7.3f} {ne.exponent:7.3f}")

g1, g2 = witness_arcs(ExponentData((2, 3), (0, 0)))
fit = contact_order(g1, g2)
print(f"\nT1 witness arcs of z1^2 + z2^3: contact order {fit.slope:.6f} -> {fit.rational_snap}")

ne = check_normal_embedding(ExponentData((2, 3), (0, 0)))
print("inner/outer along the probe arcs:")
for t, lr in zip(ne.t[::3], ne.log_ratio[::3]):
    print(f"  t = 2^{np.log2(t):.0f}: ratio {np.exp(lr):.3e}")
