"""
Groups preserving a quadric
===========================

A symmetric invertible matrix ``A`` defines ``f(U) = U.A.U / 2``. The three
fundamental fields ``X1, X2, X3`` are tangent to its level sets, and the
combination along an axis ``p`` generates a one-parameter group whose
matrix ``B`` satisfies ``B^3 = epsilon B``.
"""

import math

import numpy as np

from flowlab import quadric
from flowlab.quadric import QuadricGroup

for name in ("sphere", "lorentz"):
    G = QuadricGroup.preset(name)
    for p in ((0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (1.0, 0.0, 1.0)):
        print(f"{name:8s} p={p} epsilon={quadric.epsilon(G, p):+.1f} -> {quadric.flow_type(G, p).kind}")

# %%
# Rotating the sphere about the 1:1:1 axis by a third of a turn
# permutes the coordinates cyclically

G = QuadricGroup.preset("sphere")
p = np.ones(3) / math.sqrt(3.0)
E = quadric.exp_b(quadric.b_matrix(G, p), quadric.epsilon(G, p), 2 * math.pi / 3)
print(np.round(E, 12))

# %%
# f and the linear function p.U are constant along orbits

G = QuadricGroup.preset("lorentz")
p = (1.0, 0.5, 0.25)
orbit = quadric.orbit(G, p, (1.0, 0.5, 0.25), np.linspace(0, 5, 6))
for U in orbit:
    print(np.round(U, 6), quadric.p_invariants(G, p, U))
