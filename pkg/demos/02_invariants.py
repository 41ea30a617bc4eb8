"""
First integrals from symmetries
===============================

Three routes to an invariant function of a planar field: the closed-form
quadrature for linear fields, the line integral of ``omega / omega(P)``
for a symmetry ``P``, and the canonical-parameter shortcut when the field
does not depend on ``u``.
"""

import numpy as np

from flowlab import planar
from flowlab.fieldexpr import canonical_invariant, field, invariant_via_symmetry, rk4_trajectory
from flowlab.planar import LinearField2

F = LinearField2(np.array([[-0.2, -1.0], [1.0, -0.2]]))
traj = rk4_trajectory(F.to_field2(), (1.0, 0.3), 3.0, 600)
values = [planar.invariant_linear(F, U) for U in traj if U[0] > 0.05]
print("linear invariant along a trajectory: spread", np.ptp(values))

# %%
# The homothety commutes with every linear field, so it is a symmetry

P = field("u", "v")
G = F.to_field2()
for U in ([1.0, 0.2], [0.8, -0.6]):
    print("omega/omega(P) invariant at", U, "=", invariant_via_symmetry(G, P, [(1.0, 0.0), U]))
    print("   closed form               =", planar.invariant_linear(F, U))

# %%
# A field without u dependence: u is a canonical parameter

H = field("v^2 + 1", "v")
for U in ([0.0, 1.0], [0.7, 1.4]):
    print("canonical invariant at", U, "=", canonical_invariant(H, [(0.0, 0.5), U]))
