"""
Tensors dragged by a linear flow
================================

The flow of ``U' = C U`` acts on tensor components of any type ``(p, q)``.
The induced generator is a Kronecker-style sum of copies of ``C`` and
``-C^T``; its eigenvalues are sums and differences of those of ``C``.
"""

import numpy as np
import sympy as sp

from flowlab import glrep
from flowlab.glrep import TensorSpec
from flowlab.smallmat import eig2

C = np.array([[1.0, 2.0], [3.0, 4.0]])
l1, l2 = eig2(C)

for spec in (TensorSpec(1, 1), TensorSpec(0, 2, symmetric=True), TensorSpec(1, 2, symmetric=True)):
    gen = glrep.generator(C, spec)
    got = np.linalg.eigvals(gen.Cbar)
    gap = glrep.multiset_distance(got, glrep.eigen_multiset(l1, l2, spec))
    print(f"type {(spec.p, spec.q)} symmetric={spec.symmetric}: dim {gen.Cbar.shape[0]}, spectrum gap {gap:.1e}")

# %%
# Symbolic generator of a quadratic form

c = sp.symbols("c1:5")
gen = glrep.generator(np.array([[c[0], c[1]], [c[2], c[3]]], dtype=object), TensorSpec(0, 2, symmetric=True))
sp.pprint(sp.Matrix(gen.Cbar))

# %%
# The components of a dragged quadratic form solve a third-order ODE

lam1, lam2 = sp.symbols("lambda1 lambda2")
print(glrep.ode_coefficients(TensorSpec(0, 2, symmetric=True), lam1, lam2)["characteristic"])

# %%
# For complex eigenvalues the induced spectrum sits on vertical lines

for p, q, z in glrep.lattice_points(0.25 + 1j, 0.25 - 1j, 2):
    print((p, q), z)
