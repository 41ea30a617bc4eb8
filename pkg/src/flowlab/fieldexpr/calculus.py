"""Differential calculus of planar vector fields given by expressions.

A field ``X = x d/du + y d/dv`` acts on functions by ``X(f) = f_u x + f_v y``.
Its annihilating one-form is ``omega = -y du + x dv``. Invariants of ``X``
are line integrals of ``mu * omega`` for an integrating factor ``mu``; an
infinitesimal symmetry ``P`` supplies ``mu = 1 / omega(P)``.
"""
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from flowlab.errors import DomainError, FlowlabError
from flowlab.fieldexpr import expr as ex
from flowlab.fieldexpr.parser import parse

PRESETS = {
    # attracting limit cycle u^2 + v^2 = 1
    "demo:limit-cycle": ("u - v - u*(u^2+v^2)", "u + v - v*(u^2+v^2)"),
    "demo:rotation": ("-v", "u"),
    "demo:homothety": ("u", "v"),
}


@dataclass(frozen=True)
class Field2:
    """Planar vector field ``x d/du + y d/dv``."""

    x: ex.Expr
    y: ex.Expr

    def __call__(self, u, v):
        return np.array([ex.evaluate(self.x, u, v), ex.evaluate(self.y, u, v)])

    def __str__(self):
        return f"{ex.render(self.x)} ; {ex.render(self.y)}"

    def apply(self, f):
        return apply_field(self, f)


@dataclass(frozen=True)
class OneForm2:
    """One-form ``a du + b dv``."""

    a: ex.Expr
    b: ex.Expr

    def on(self, F):
        """Contract with the field ``F``: ``a*F.x + b*F.y``."""
        return ex.add(ex.mul(self.a, F.x), ex.mul(self.b, F.y))

    def scaled(self, mu):
        return OneForm2(ex.mul(mu, self.a), ex.mul(mu, self.b))


def field(x, y):
    """Build a :class:`Field2` from expressions, strings or numbers."""
    conv = lambda c: parse(c) if isinstance(c, str) else ex.as_expr(c)
    return Field2(conv(x), conv(y))


def parse_field(text):
    """Parse ``"xexpr ; yexpr"`` or a preset name such as ``"demo:limit-cycle"``."""
    text = text.strip()
    if text in PRESETS:
        return field(*PRESETS[text])
    if text.startswith("demo:"):
        raise FlowlabError("unknown-preset", f"no field preset named {text!r}")
    parts = text.split(";")
    if len(parts) != 2:
        raise FlowlabError("syntax-error", "a field is written as 'xexpr ; yexpr'")
    return field(parts[0], parts[1])


def diff(e, var):
    """Exact partial derivative of ``e`` with respect to ``"u"`` or ``"v"``."""
    if var not in ex.VARIABLES:
        raise FlowlabError("unknown-identifier", var)
    return _diff(e, var)


def _diff(e, var):
    if isinstance(e, ex.Const):
        return ex.ZERO
    if isinstance(e, ex.Var):
        return ex.ONE if e.name == var else ex.ZERO
    if isinstance(e, ex.Neg):
        return ex.neg(_diff(e.arg, var))
    if isinstance(e, ex.Add):
        return ex.add(_diff(e.left, var), _diff(e.right, var))
    if isinstance(e, ex.Sub):
        return ex.sub(_diff(e.left, var), _diff(e.right, var))
    if isinstance(e, ex.Mul):
        a, b = e.left, e.right
        return ex.add(ex.mul(_diff(a, var), b), ex.mul(a, _diff(b, var)))
    if isinstance(e, ex.Div):
        a, b = e.left, e.right
        da, db = _diff(a, var), _diff(b, var)
        if ex.is_const(db, 0.0):
            return ex.div(da, b)
        return ex.div(ex.sub(ex.mul(da, b), ex.mul(a, db)), ex.power(b, 2))
    if isinstance(e, ex.Pow):
        k = e.exponent
        return ex.mul(ex.mul(ex.Const(k), ex.power(e.base, k - 1)), _diff(e.base, var))
    if isinstance(e, ex.Func):
        a = e.arg
        da = _diff(a, var)
        if ex.is_const(da, 0.0):
            return ex.ZERO
        outer = {
            "sin": lambda: ex.func("cos", a),
            "cos": lambda: ex.neg(ex.func("sin", a)),
            "exp": lambda: e,
            "ln": lambda: ex.div(ex.ONE, a),
            "sqrt": lambda: ex.div(ex.Const(0.5), e),
        }[e.name]()
        return ex.mul(outer, da)
    raise TypeError(f"not an expression node: {e!r}")


def apply_field(F, f):
    """``X(f) = f_u * x + f_v * y`` as an expression."""
    return ex.add(ex.mul(diff(f, "u"), F.x), ex.mul(diff(f, "v"), F.y))


def lie_bracket(F, G):
    """``[F, G] = F o G - G o F`` componentwise."""
    return Field2(
        ex.sub(apply_field(F, G.x), apply_field(G, F.x)),
        ex.sub(apply_field(F, G.y), apply_field(G, F.y)),
    )


def divergence(F):
    return ex.add(diff(F.x, "u"), diff(F.y, "v"))


def omega_of(F):
    """The one-form ``-y du + x dv`` annihilated by ``F``."""
    return OneForm2(ex.neg(F.y), F.x)


def exterior_derivative(form):
    """Coefficient of ``du ^ dv`` in ``d(a du + b dv)``, i.e. ``b_u - a_v``."""
    return ex.sub(diff(form.b, "u"), diff(form.a, "v"))


def _points(pts):
    P = np.atleast_2d(np.asarray(pts, dtype=float))
    if P.shape[-1] != 2:
        raise FlowlabError("bad-points", "sample points must be pairs (u, v)")
    return P


def integrating_factor_residual(F, mu, pts):
    """Largest ``|X(mu) + div(X) * mu|`` over the sample points.

    An integrating factor of ``omega`` makes this zero.
    """
    P = _points(pts)
    r = ex.add(apply_field(F, mu), ex.mul(divergence(F), mu))
    try:
        vals = ex.evaluate(r, P[:, 0], P[:, 1])
    except DomainError as err:
        raise DomainError("integrating factor undefined at a sample point") from err
    return float(np.max(np.abs(vals)))


def symmetry_residual(F, P, pts):
    """Largest normalised ``det([P, F], F)`` over the points (0 for a symmetry)."""
    B = lie_bracket(P, F)
    Q = _points(pts)
    bu, bv = ex.evaluate(B.x, Q[:, 0], Q[:, 1]), ex.evaluate(B.y, Q[:, 0], Q[:, 1])
    xu, xv = ex.evaluate(F.x, Q[:, 0], Q[:, 1]), ex.evaluate(F.y, Q[:, 0], Q[:, 1])
    cross = np.abs(bu * xv - bv * xu)
    scale = np.hypot(bu, bv) * np.hypot(xu, xv)
    return float(np.max(cross / np.maximum(scale, 1.0)))


def line_integral(form, path, tol=1e-10):
    """Integral of ``a du + b dv`` along a polyline, segment by segment.

    Each segment uses adaptive Gauss-Kronrod quadrature with absolute and
    relative tolerance ``tol``; segment results are summed in path order.
    """
    path = _points(path)
    fa, fb = ex.compile_expr(form.a), ex.compile_expr(form.b)
    total = 0.0
    for k in range(len(path) - 1):
        A, Bp = path[k], path[k + 1]
        d = Bp - A
        if not np.any(d):
            continue

        def integrand(s, A=A, d=d):
            u, v = A + s * d
            return float(fa(u, v)) * d[0] + float(fb(u, v)) * d[1]

        val, _ = integrate.quad(integrand, 0.0, 1.0, epsabs=tol, epsrel=tol, limit=200)
        total += val
    return total


def invariant_by_factor(F, mu, path, tol=1e-10):
    """``I = integral of mu * omega`` along ``path`` (``mu = 1`` when omega is closed)."""
    return line_integral(omega_of(F).scaled(ex.as_expr(mu)), path, tol)


def _path_samples(path, per_segment=32):
    path = _points(path)
    out = []
    for k in range(len(path) - 1):
        for s in np.linspace(0.0, 1.0, per_segment + 1):
            out.append((k, s, path[k] + s * (path[k + 1] - path[k])))
    if len(path) == 1:
        out.append((0, 0.0, path[0]))
    return out


def invariant_via_symmetry(F, P, path, tol=1e-10):
    """Line integral of ``omega / omega(P)`` along ``path``.

    ``P`` must be an infinitesimal symmetry of ``F`` (``[P, F]`` parallel to
    ``F``) and ``omega(P) = -y*P.x + x*P.y`` must not vanish on the path.
    The result, as a function of the path end point, is an invariant of
    ``F``.

    Raises ``FlowlabError("omega-P-vanishes")`` (with ``segment`` and
    ``parameter`` in ``err.info``) or ``FlowlabError("not-a-symmetry")``.
    """
    omega = omega_of(F)
    wP = omega.on(P)
    fw = ex.compile_expr(wP)
    samples = _path_samples(path)
    pts = np.array([p for _, _, p in samples])
    fx = np.hypot(*F(pts[:, 0], pts[:, 1]))
    px = np.hypot(*P(pts[:, 0], pts[:, 1]))
    wvals = np.abs(fw(pts[:, 0], pts[:, 1]))
    bad = np.nonzero(wvals <= tol * np.maximum(fx * px, 1.0))[0]
    if len(bad):
        k, s, p = samples[bad[0]]
        raise FlowlabError("omega-P-vanishes", f"omega(P) = 0 near {tuple(p)}", segment=k, parameter=s)
    if symmetry_residual(F, P, pts) > 1e-6:
        raise FlowlabError("not-a-symmetry", "[P, X] is not parallel to X on the path")
    return line_integral(omega.scaled(ex.div(ex.ONE, wP)), path, tol)


def canonical_invariant(F, path, tol=1e-10):
    """``I = u - integral f(v) dv`` with ``f = x / y``, for ``P = d/du``.

    Valid when ``u`` is a canonical parameter of the symmetry (the
    components do not depend on ``u``); this is the special case of
    :func:`invariant_via_symmetry` with ``P = (1, 0)``.
    """
    if "u" in ex.variables(F.x) | ex.variables(F.y):
        raise FlowlabError("not-a-symmetry", "components must not depend on u")
    path = _points(path)
    ratio = ex.div(F.x, F.y)
    dv_part = line_integral(OneForm2(ex.ZERO, ratio), path, tol)
    return (path[-1, 0] - path[0, 0]) - dv_part


def rk4_trajectory(F, U0, t, steps, escape=None):
    """Classic fixed-step RK4; returns the ``(steps + 1, 2)`` array of states.

    With ``escape`` set, integration stops after the first state whose
    max-norm exceeds it and the shorter array is returned.
    """
    if steps < 1:
        raise FlowlabError("bad-steps", "steps must be >= 1")
    fx, fy = ex.compile_expr(F.x), ex.compile_expr(F.y)

    def rhs(p):
        return np.array([float(fx(p[0], p[1])), float(fy(p[0], p[1]))])

    h = float(t) / steps
    out = np.empty((steps + 1, 2))
    out[0] = U0
    p = np.array(U0, dtype=float)
    for n in range(steps):
        try:
            k1 = rhs(p)
            k2 = rhs(p + 0.5 * h * k1)
            k3 = rhs(p + 0.5 * h * k2)
            k4 = rhs(p + h * k3)
        except DomainError as err:
            raise DomainError(f"left the domain at step {n}", step=n) from err
        p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(p)):
            if escape is not None:
                return out[:n + 1]
            raise DomainError(f"trajectory diverged at step {n}", step=n)
        out[n + 1] = p
        if escape is not None and np.max(np.abs(p)) > escape:
            return out[:n + 2]
    return out


def rk4_flow(F, U0, t, steps):
    """End point of the RK4 trajectory from ``U0`` over time ``t``."""
    return rk4_trajectory(F, U0, t, steps)[-1]
