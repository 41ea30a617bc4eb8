"""Linear and affine vector fields on the plane.

``U' = C U + b`` with a constant 2x2 matrix ``C``. The flow is the matrix
exponential, the phase portrait is decided by ``tr C``, ``det C`` and
``Delta = (tr C)**2 / 4 - det C``, and a first integral follows from the
homothety symmetry ``u d/du + v d/dv``.
"""
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from flowlab.errors import FlowlabError
from flowlab.fieldexpr import expr as ex
from flowlab.fieldexpr.calculus import Field2
from flowlab.smallmat import (
    as_square, det2, discriminant2, eig2, exp2_closed, fro, nullspace_left, trace2,
)

BOUNDARY_TOL = 1e-10

KINDS = (
    "StableFocus", "UnstableFocus", "Center", "Saddle",
    "StableHyperbolicNode", "UnstableHyperbolicNode",
    "StableParabolicNode", "UnstableParabolicNode", "StarNode",
    "DegenerateLine", "Zero",
)


@dataclass(frozen=True, eq=False)
class LinearField2:
    """The field ``U' = C U (+ b)``."""

    C: np.ndarray
    b: np.ndarray = None

    def __post_init__(self):
        object.__setattr__(self, "C", as_square(self.C, 2))
        if self.b is not None:
            b = np.array(self.b, dtype=float).reshape(2)
            if not np.all(np.isfinite(b)):
                raise FlowlabError("non-finite", "b must be finite")
            object.__setattr__(self, "b", b)

    @classmethod
    def from_entries(cls, c1, c2, c3, c4, b=None):
        return cls(np.array([[c1, c2], [c3, c4]], dtype=float), b)

    @property
    def homogeneous(self):
        return self.b is None or not np.any(self.b)

    def __call__(self, U):
        out = self.C @ np.asarray(U, dtype=float)
        return out if self.homogeneous else out + self.b

    def to_field2(self):
        """Expression form, for use with :mod:`flowlab.fieldexpr`."""
        (c1, c2), (c3, c4) = self.C
        b = (0.0, 0.0) if self.b is None else self.b
        comp = lambda p, q, r: ex.add(ex.add(ex.mul(ex.Const(p), ex.U), ex.mul(ex.Const(q), ex.V)), ex.Const(r))
        return Field2(comp(c1, c2, b[0]), comp(c3, c4, b[1]))


@dataclass(frozen=True)
class FlowClass:
    """Outcome of :func:`classify` plus the quantities it was decided from."""

    kind: str
    trC: float
    detC: float
    delta: float
    lambda1: complex
    lambda2: complex
    invariant_row: tuple = None
    rate: float = None
    extra: dict = dc_field(default_factory=dict, compare=False)


def classify(F):
    """Phase-portrait type of the homogeneous part of ``F``.

    The boundaries ``Delta = 0`` and ``det C = 0`` are thickened to
    ``|.| <= 1e-10 * ||C||_F**2`` so the decision is scale invariant.
    Nilpotent ``C`` (both eigenvalues zero, ``C != 0``) has parallel
    straight-line trajectories and is reported as ``DegenerateLine`` with
    rate 0.
    """
    C = F.C if isinstance(F, LinearField2) else as_square(F, 2)
    tr, det, delta = trace2(C), det2(C), discriminant2(C)
    l1, l2 = eig2(C)
    base = dict(trC=tr, detC=det, delta=delta, lambda1=l1, lambda2=l2)
    scale = fro(C)
    if scale == 0.0:
        return FlowClass("Zero", **base)
    tol2 = BOUNDARY_TOL * scale * scale
    tol1 = BOUNDARY_TOL * scale
    alpha = 0.5 * tr
    if abs(det) <= tol2:
        row = nullspace_left(C, tol=BOUNDARY_TOL)
        return FlowClass("DegenerateLine", invariant_row=(float(row[0]), float(row[1])),
                         rate=tr if abs(tr) > tol1 else 0.0, **base)
    if abs(delta) <= tol2:
        if fro(C - alpha * np.eye(2)) <= tol1:
            return FlowClass("StarNode", **base)
        return FlowClass("StableParabolicNode" if alpha < 0 else "UnstableParabolicNode", **base)
    if delta < 0:
        if abs(alpha) <= tol1:
            return FlowClass("Center", **base)
        return FlowClass("StableFocus" if alpha < 0 else "UnstableFocus", **base)
    if det < 0:
        return FlowClass("Saddle", **base)
    return FlowClass("StableHyperbolicNode" if alpha < 0 else "UnstableHyperbolicNode", **base)


def singular_point(F):
    """``U*`` with ``C U* + b = 0``, or None when ``C`` is singular."""
    C = F.C
    b = np.zeros(2) if F.b is None else F.b
    if abs(det2(C)) <= 1e-12 * fro(C) ** 2 or fro(C) == 0.0:
        return None
    return np.linalg.solve(C, -b)


def _rank_one_coeffs(k, t):
    """``phi = (e^{kt}-1)/k`` and ``psi = (e^{kt}-1-kt)/k**2`` without cancellation."""
    kt = k * t
    if abs(kt) < 1e-3:
        phi = t * (1.0 + kt / 2.0 + kt * kt / 6.0 + kt ** 3 / 24.0)
        psi = t * t * (0.5 + kt / 6.0 + kt * kt / 24.0 + kt ** 3 / 120.0)
        return phi, psi
    em1 = math.expm1(kt)
    return em1 / k, (em1 - kt) / (k * k)


def flow_point(F, U0, t):
    """Position at time ``t`` of the point starting at ``U0``.

    Homogeneous: ``exp(tC) U0``. Affine with invertible ``C``: the same flow
    about the singular point ``U*``. ``C = 0``: uniform motion ``U0 + t b``.
    Rank-one ``C`` (``C @ C = k C`` with ``k = tr C``) uses

        U_t = (I + phi C) U0 + (t I + psi C) b

    which covers both consistent and inconsistent ``(C | b)``.
    """
    U0 = np.asarray(U0, dtype=float)
    C = F.C
    if F.homogeneous:
        return exp2_closed(C, t) @ U0
    b = F.b
    scale = fro(C)
    if scale == 0.0:
        return U0 + t * b
    if abs(det2(C)) > 1e-12 * scale * scale:
        Us = np.linalg.solve(C, -b)
        return Us + exp2_closed(C, t) @ (U0 - Us)
    phi, psi = _rank_one_coeffs(trace2(C), t)
    return U0 + phi * (C @ U0) + t * b + psi * (C @ b)


def frame_drag(F, t):
    """Matrix dragging the frame ``d/dU``: ``exp(-tC)``."""
    return exp2_closed(F.C, -t)


def coframe_drag(F, t):
    """Matrix dragging the coframe ``dU``: ``exp(tC)``."""
    return exp2_closed(F.C, t)


def drag_linear_function(A_row, F, t):
    """Row of the dragged linear function ``f_t = A exp(tC) U``."""
    return np.asarray(A_row, dtype=float) @ exp2_closed(F.C, t)


def _require_homogeneous(F, what):
    if not F.homogeneous:
        raise FlowlabError("not-homogeneous", f"{what} needs a homogeneous field")


def wronskian(F, U):
    """``W = u v' - v u' = c3 u^2 + (c4 - c1) u v - c2 v^2``."""
    u, v = U
    (c1, c2), (c3, c4) = F.C
    return c3 * u * u + (c4 - c1) * u * v - c2 * v * v


def _ray_denominator(F):
    """Coefficients ``(c, m, a)`` of ``D(p) = c + m p + a p^2 = W / u^2``, ``p = v/u``."""
    (c1, c2), (c3, c4) = F.C
    return c3, c4 - c1, -c2


def _quadrature_antiderivative(c, m, a):
    """Closed-form antiderivative of ``1 / (c + m p + a p^2)`` and its real roots."""
    if a == 0.0:
        if m == 0.0:
            if c == 0.0:
                return None, ()
            return (lambda p: p / c), ()
        return (lambda p: math.log(abs(c + m * p)) / m), (-c / m,)
    disc = m * m - 4.0 * a * c
    if abs(disc) <= 1e-13 * (m * m + abs(4.0 * a * c)):
        r = -m / (2.0 * a)
        return (lambda p: -1.0 / (a * (p - r))), (r,)
    if disc > 0.0:
        sq = math.sqrt(disc)
        q = -0.5 * (m + math.copysign(sq, m))
        r1, r2 = sorted((q / a, c / q))
        return (lambda p: math.log(abs((p - r1) / (p - r2))) / (a * (r1 - r2))), (r1, r2)
    shift = m / (2.0 * a)
    width = math.sqrt(-disc) / (2.0 * abs(a))
    return (lambda p: math.atan((p + shift) / width) / (a * width)), ()


def invariant_linear(F, U, ref=(1.0, 0.0), prefactor=None):
    """First integral of a linear field from its homothety symmetry.

        I(U) = 1/2 ln|W| - (tr C / 2) * integral dp / D(p),   p = v/u

    where ``W`` is the Wronskian of ``U`` and ``U'`` and ``D(p) = W / u**2``.
    The quadrature is done in closed form (logarithm, rational or arctangent
    according to the roots of ``D``) and the additive constant is fixed by
    ``I(ref) = 0``. ``prefactor`` overrides ``tr C / 2`` (only useful for
    demonstrating that other coefficients fail).

    Raises ``FlowlabError("origin")`` when ``u = 0`` and
    ``FlowlabError("on-singular-ray")`` when ``U`` or ``ref`` lies on an
    invariant ray or a root of ``D`` separates ``p`` from ``p_ref``.
    """
    _require_homogeneous(F, "invariant_linear")
    u, v = float(U[0]), float(U[1])
    ur, vr = float(ref[0]), float(ref[1])
    if u == 0.0 or ur == 0.0:
        raise FlowlabError("origin", "the invariant is written in p = v/u and needs u != 0")
    k = 0.5 * trace2(F.C) if prefactor is None else float(prefactor)
    c, m, a = _ray_denominator(F)
    W, Wr = wronskian(F, (u, v)), wronskian(F, (ur, vr))
    p, pr = v / u, vr / ur
    for q, w in ((p, W), (pr, Wr)):
        if w == 0.0 or abs(c + m * q + a * q * q) <= 1e-12 * (abs(c) + abs(m * q) + abs(a * q * q)):
            raise FlowlabError("on-singular-ray", f"the ray p = {q:g} is invariant (W = 0)")
    value = 0.5 * math.log(abs(W / Wr))
    if k == 0.0:
        return value
    anti, roots = _quadrature_antiderivative(c, m, a)
    if anti is None:
        raise FlowlabError("on-singular-ray", "every ray is invariant (C is a multiple of I)")
    lo, hi = min(p, pr), max(p, pr)
    if any(lo <= r <= hi for r in roots):
        raise FlowlabError("on-singular-ray", "a root of the ray denominator separates U from the reference")
    return value - k * (anti(p) - anti(pr))


def second_order_residual(F, U0, t, h=1e-4):
    """``|| U'' - tr C U' + det C U ||`` by central differences of the flow."""
    _require_homogeneous(F, "second_order_residual")
    Um = flow_point(F, U0, t - h)
    Uc = flow_point(F, U0, t)
    Up = flow_point(F, U0, t + h)
    d1 = (Up - Um) / (2.0 * h)
    d2 = (Up - 2.0 * Uc + Um) / (h * h)
    r = d2 - trace2(F.C) * d1 + det2(F.C) * Uc
    return float(np.linalg.norm(r))
