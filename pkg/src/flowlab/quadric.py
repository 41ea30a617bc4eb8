"""Rotation-like groups on R^3 whose orbits are the quadrics ``f = const``.

For a symmetric invertible ``A`` and ``f = U^T A U / 2`` with gradient
``(f1, f2, f3) = A U``, the fields

    X1 = (0, f3, -f2),  X2 = (-f3, 0, f1),  X3 = (f2, -f1, 0)

close under the bracket with ``[Xi, Xj] = sum_k a_mk Xk`` for ``(i, j, m)``
a cyclic permutation of ``(1, 2, 3)``. A constant combination
``P = p1 X1 + p2 X2 + p3 X3`` keeps ``f`` and ``g = p . U`` fixed, and drags
``(X1, X2, X3)`` by ``exp(tB)`` with ``B = A skew(p)``, ``B^3 = eps B``.
"""
import json
import math
from dataclasses import dataclass

import numpy as np

from flowlab.errors import FlowlabError
from flowlab.smallmat import as_square, det3, det_cofactor, fro

PRESETS = {
    "sphere": np.eye(3),
    # f = -(u^2 + v^2 - w^2)
    "lorentz": np.diag([-2.0, -2.0, 2.0]),
}

FLOW_TYPES = ("Elliptic", "Hyperbolic", "Parabolic")


def skew(p):
    """Cross-product matrix: ``skew(p) @ x == cross(p, x)``."""
    p1, p2, p3 = p
    return np.array([[0.0, -p3, p2], [p3, 0.0, -p1], [-p2, p1, 0.0]])


@dataclass(frozen=True, eq=False)
class QuadricGroup:
    A: np.ndarray
    Abar: np.ndarray

    @classmethod
    def from_matrix(cls, A):
        A = as_square(A, 3)
        scale = fro(A)
        if scale == 0.0 or fro(A - A.T) > 1e-12 * scale:
            raise FlowlabError("not-symmetric", "A must be symmetric")
        A = 0.5 * (A + A.T)
        if abs(det3(A)) <= 1e-12 * scale ** 3:
            raise FlowlabError("singular", "A must be invertible")
        Abar = np.linalg.inv(A)
        Abar = 0.5 * (Abar + Abar.T)
        if fro(A @ Abar - np.eye(3)) > 1e-10:
            raise FlowlabError("singular", "A is too badly conditioned to invert")
        return cls(A, Abar)

    @classmethod
    def preset(cls, name):
        try:
            return cls.from_matrix(PRESETS[name])
        except KeyError:
            raise FlowlabError("unknown-preset", f"no quadric preset named {name!r}") from None


def load_json(source):
    """Read ``{"A": [9 reals, row-major], "p": [3 reals]}`` into ``(group, p)``."""
    data = json.loads(source) if isinstance(source, str) else source
    try:
        A = np.array(data["A"], dtype=float).reshape(3, 3)
        p = axis(data["p"])
    except (KeyError, ValueError, TypeError) as err:
        raise FlowlabError("bad-input", f"expected {{A: [9 reals], p: [3 reals]}}: {err}") from err
    return QuadricGroup.from_matrix(A), p


def axis(p):
    """Validate the constant coefficients of ``P = p1 X1 + p2 X2 + p3 X3``."""
    p = np.array(p, dtype=float).reshape(3)
    if not np.all(np.isfinite(p)) or not np.any(p):
        raise FlowlabError("bad-axis", "p must be a finite nonzero 3-vector")
    return p


def grad_f(G, U):
    return G.A @ np.asarray(U, dtype=float)


def f_value(G, U):
    U = np.asarray(U, dtype=float)
    return 0.5 * U @ G.A @ U


def field_matrix(G, U):
    """The 3x3 matrix whose columns are ``X1, X2, X3`` at ``U``."""
    return skew(grad_f(G, U))


def fundamental_fields(G, U):
    M = field_matrix(G, U)
    return M[:, 0], M[:, 1], M[:, 2]


def generator_matrices(G):
    """``L_k`` with ``X_k(U) = L_k @ U`` (each field is linear in ``U``)."""
    return [-skew(e) @ G.A for e in np.eye(3)]


def _cyclic_row(i, j):
    """``(sign, m)`` with ``[Xi, Xj] = sign * sum_k a_mk Xk`` (1-based i, j)."""
    m = 6 - i - j
    sign = 1.0 if (i, j) in ((1, 2), (2, 3), (3, 1)) else -1.0
    return sign, m


def bracket_at(G, i, j, U, h=None):
    """``[Xi, Xj]`` at ``U``.

    With ``h=None`` the Jacobians are the exact generator matrices; otherwise
    they are estimated by central differences with step ``h``.
    """
    U = np.asarray(U, dtype=float)
    Xi = lambda x: field_matrix(G, x)[:, i - 1]
    Xj = lambda x: field_matrix(G, x)[:, j - 1]
    if h is None:
        L = generator_matrices(G)
        Ji, Jj = L[i - 1], L[j - 1]
    else:
        Ji = np.column_stack([(Xi(U + h * e) - Xi(U - h * e)) / (2 * h) for e in np.eye(3)])
        Jj = np.column_stack([(Xj(U + h * e) - Xj(U - h * e)) / (2 * h) for e in np.eye(3)])
    # [X, Y]^a = X^b d_b Y^a - Y^b d_b X^a
    return Jj @ Xi(U) - Ji @ Xj(U)


def commutator_check(G, i, j, U, h=None):
    """Norm of ``[Xi, Xj] - sign * sum_k a_mk Xk`` at ``U``."""
    if i == j:
        return 0.0
    sign, m = _cyclic_row(i, j)
    expected = sign * field_matrix(G, U) @ G.A[m - 1]
    return float(np.linalg.norm(bracket_at(G, i, j, U, h) - expected))


def epsilon(G, p):
    """Bordered determinant ``det [[A, p], [p^T, 0]]`` by cofactor expansion."""
    p = axis(p)
    A = G.A
    M = [[A[0, 0], A[0, 1], A[0, 2], p[0]],
         [A[1, 0], A[1, 1], A[1, 2], p[1]],
         [A[2, 0], A[2, 1], A[2, 2], p[2]],
         [p[0], p[1], p[2], 0.0]]
    return float(det_cofactor(M))


@dataclass(frozen=True)
class FlowType3:
    kind: str
    epsilon: float


def flow_type(G, p):
    """Elliptic (eps < 0), hyperbolic (eps > 0) or parabolic orbits of ``P``."""
    p = axis(p)
    eps = epsilon(G, p)
    tol = 1e-10 * fro(G.A) ** 3 * float(p @ p)
    if eps < -tol:
        return FlowType3("Elliptic", eps)
    if eps > tol:
        return FlowType3("Hyperbolic", eps)
    return FlowType3("Parabolic", eps)


def b_matrix(G, p):
    """``B = A skew(p)``: ``(X1, X2, X3)' = (X1, X2, X3) B`` along ``P``."""
    return G.A @ skew(axis(p))


def drag_coefficients(eps, t):
    """``(phi1, phi2)`` with ``S_t = S + S' phi1 + S'' phi2`` for ``S''' = eps S'``.

    ``phi1 = sin(lt)/l, (1 - cos lt)/l^2`` for ``eps = -l^2``;
    ``sinh(lt)/l, (cosh lt - 1)/l^2`` for ``eps = l^2``; ``t, t^2/2`` for 0.
    The half-angle forms keep ``phi2`` accurate as ``eps -> 0``.
    """
    eps, t = float(eps), float(t)
    if eps < 0.0:
        lam = math.sqrt(-eps)
        return math.sin(lam * t) / lam, 2.0 * (math.sin(0.5 * lam * t) / lam) ** 2
    if eps > 0.0:
        lam = math.sqrt(eps)
        return math.sinh(lam * t) / lam, 2.0 * (math.sinh(0.5 * lam * t) / lam) ** 2
    return t, 0.5 * t * t


def drag_solution(S, Sp, Spp, eps, t):
    """Solution at ``t`` of ``S''' = eps S'`` from ``(S, S', S'')`` at 0.

    Works elementwise on scalars or arrays (e.g. vector fields sampled at a
    point).
    """
    phi1, phi2 = drag_coefficients(eps, t)
    return np.asarray(S) + np.asarray(Sp) * phi1 + np.asarray(Spp) * phi2


def exp_b(B, eps, t):
    """``exp(tB) = I + phi1 B + phi2 B^2`` using ``B^3 = eps B``."""
    B = as_square(B, 3)
    nb = fro(B)
    B2 = B @ B
    if fro(B2 @ B - eps * B) > 1e-6 * max(nb ** 3, 1e-300):
        raise FlowlabError("b-cubed-mismatch", "B^3 != eps B")
    phi1, phi2 = drag_coefficients(eps, t)
    return np.eye(3) + phi1 * B + phi2 * B2


def axis_field(G, p, U):
    """``P(U) = p1 X1 + p2 X2 + p3 X3`` at ``U``."""
    return field_matrix(G, U) @ axis(p)


def p_invariants(G, p, U):
    """``(f, g)`` with ``f = U^T A U / 2`` and ``g = p . U``."""
    p = axis(p)
    U = np.asarray(U, dtype=float)
    return float(f_value(G, U)), float(p @ U)


def orbit(G, p, U0, ts):
    """Points of the ``P``-trajectory through ``U0`` at the times ``ts``.

    The point flow is ``U' = P(U) = B^T U``, so ``U_t = exp(tB)^T U0``.
    """
    p = axis(p)
    B = b_matrix(G, p)
    eps = epsilon(G, p)
    U0 = np.asarray(U0, dtype=float)
    return np.array([exp_b(B, eps, t).T @ U0 for t in ts])
