"""
Classifying planar linear flows
===============================

A linear field ``U' = C U`` on the plane is decided by the trace, the
determinant and the discriminant ``Delta`` of ``C``. This script walks
through one matrix of every type, flows a point with the closed-form
exponential and checks it against a Runge-Kutta integration.
"""

import numpy as np

from flowlab import planar
from flowlab.fieldexpr import rk4_flow
from flowlab.planar import LinearField2
from flowlab.smallmat import exp2_closed, exp_series

examples = {
    "focus": [[-0.5, -1.0], [1.0, -0.5]],
    "center": [[0.0, -1.0], [1.0, 0.0]],
    "saddle": [[1.0, 0.0], [0.0, -1.0]],
    "node": [[-1.0, 0.0], [0.0, -2.0]],
    "parabolic": [[-1.0, 1.0], [0.0, -1.0]],
    "star": [[1.0, 0.0], [0.0, 1.0]],
    "line": [[1.0, 0.0], [0.0, 0.0]],
    "zero": [[0.0, 0.0], [0.0, 0.0]],
}

for name, C in examples.items():
    fc = planar.classify(np.array(C))
    print(f"{name:10s} tr={fc.trC:+.2f} det={fc.detC:+.2f} Delta={fc.delta:+.2f} -> {fc.kind}")

# %%
# The closed-form exponential agrees with a scaled-and-squared series

C = np.array([[0.3, -1.7], [0.9, -0.4]])
print("closed form vs series:", np.abs(exp2_closed(C, 1.5) - exp_series(C, 1.5)).max())

# %%
# Flowing a point, with an affine drift term, against RK4

F = LinearField2(C, b=(0.5, -0.25))
U0 = (1.0, 0.5)
exact = planar.flow_point(F, U0, 2.0)
numeric = rk4_flow(F.to_field2(), U0, 2.0, 2000)
print("flow_point:", exact, " rk4:", numeric)

# %%
# A degenerate line field keeps a linear function constant

fc = planar.classify(np.array(examples["line"]))
print("invariant row of the degenerate case:", fc.invariant_row, "rate:", fc.rate)
