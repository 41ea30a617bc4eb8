"""Dense small-matrix kernel.

Eigenvalues of 2x2 and 3x3 matrices in closed form, the 2x2 exponential from
the Hamilton-Cayley identity, a scaled-and-squared Taylor exponential used as
an independent oracle, and left null vectors of singular 2x2 matrices.

All functions take array-likes and return new ``numpy`` arrays; nothing is
modified in place.
"""
import cmath
import math

import numpy as np

from flowlab.errors import FlowlabError

OVERFLOW_LIMIT = 1e300
MAX_SERIES_DIM = 64


def as_square(C, n=None):
    """Validate ``C`` as a finite square float matrix (of size ``n`` if given)."""
    M = np.array(C, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise FlowlabError("not-square", f"expected a square matrix, got shape {M.shape}")
    if n is not None and M.shape[0] != n:
        raise FlowlabError("bad-dimension", f"expected {n}x{n}, got {M.shape[0]}x{M.shape[0]}")
    if not np.all(np.isfinite(M)):
        raise FlowlabError("non-finite", "matrix entries must be finite")
    return M


def fro(C):
    return float(np.sqrt(np.sum(np.square(C))))


def trace2(C):
    return C[0, 0] + C[1, 1]


def det2(C):
    return C[0, 0] * C[1, 1] - C[0, 1] * C[1, 0]


def discriminant2(C):
    """Return ``Delta`` with ``4*Delta = (c1 - c4)**2 + 4*c2*c3``.

    This form avoids the cancellation in ``tr**2 - 4*det`` when the
    eigenvalues nearly coincide.
    """
    c1, c2, c3, c4 = C[0, 0], C[0, 1], C[1, 0], C[1, 1]
    return ((c1 - c4) ** 2 + 4.0 * c2 * c3) / 4.0


def _sort_pair(a, b):
    key = lambda z: (z.real, z.imag)
    return (a, b) if key(a) >= key(b) else (b, a)


def eig2(C):
    """Eigenvalues of a 2x2 matrix as a complex pair.

    Sorted by (real, imag) descending, so a conjugate pair has the positive
    imaginary part first. Real roots use the sign trick to avoid cancellation.
    """
    C = as_square(C, 2)
    tr = trace2(C)
    det = det2(C)
    four_delta = 4.0 * discriminant2(C)
    if four_delta >= 0.0:
        root = math.sqrt(four_delta)
        q = 0.5 * (tr + math.copysign(root, tr))
        if q == 0.0:
            l1 = l2 = 0.0
        else:
            l1, l2 = q, det / q
        return _sort_pair(complex(l1), complex(l2))
    alpha = 0.5 * tr
    beta = 0.5 * math.sqrt(-four_delta)
    return complex(alpha, beta), complex(alpha, -beta)


def eig3(M):
    """Eigenvalues of a real 3x3 matrix by Cardano's formula.

    Three real roots are taken from the trigonometric branch. Returned as a
    tuple of complex numbers sorted by (real, imag) descending.
    """
    M = as_square(M, 3)
    a = -np.trace(M)
    b = (M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0]
         + M[0, 0] * M[2, 2] - M[0, 2] * M[2, 0]
         + M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
    c = -det3(M)
    # depressed cubic x = y - a/3:  y^3 + p y + q = 0
    shift = a / 3.0
    p = b - a * a / 3.0
    q = 2.0 * a ** 3 / 27.0 - a * b / 3.0 + c
    disc = (q / 2.0) ** 2 + (p / 3.0) ** 3
    scale = max(abs(p) ** 1.5, abs(q), 1e-300)
    if disc < -1e-14 * scale ** 2 or (p < 0 and abs(disc) <= 1e-14 * scale ** 2):
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * r) if p * r != 0.0 else 0.0
        phi = math.acos(max(-1.0, min(1.0, arg)))
        roots = [complex(r * math.cos((phi - 2.0 * math.pi * k) / 3.0) - shift) for k in range(3)]
    else:
        sq = cmath.sqrt(disc)
        u = _cbrt(-q / 2.0 + sq)
        v = -p / (3.0 * u) if u != 0 else _cbrt(-q / 2.0 - sq)
        w = complex(-0.5, math.sqrt(3.0) / 2.0)
        roots = [u + v - shift, u * w + v * w.conjugate() - shift, u * w.conjugate() + v * w - shift]
        roots = [complex(z.real, 0.0) if abs(z.imag) <= 1e-12 * max(1.0, abs(z)) else z for z in roots]
    return tuple(sorted(roots, key=lambda z: (z.real, z.imag), reverse=True))


def _cbrt(z):
    z = complex(z)
    if z.imag == 0.0:
        return complex(math.copysign(abs(z.real) ** (1.0 / 3.0), z.real))
    return z ** (1.0 / 3.0)


def det3(M):
    return (M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
            - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
            + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0]))


def det_cofactor(M):
    """Determinant by Laplace expansion along the first row (small n only).

    Works for any element type supporting ``+``, ``-`` and ``*``.
    """
    n = len(M)
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = 0
    for j in range(n):
        if M[0][j] == 0:
            continue
        minor = [[M[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = M[0][j] * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def _hc_coeffs(delta, t):
    """Return ``(g0, g1)`` with ``exp(t*N) = g0*I + g1*N`` whenever ``N @ N = delta*I``."""
    if delta > 0.0:
        beta = math.sqrt(delta)
        return math.cosh(beta * t), math.sinh(beta * t) / beta
    if delta < 0.0:
        beta = math.sqrt(-delta)
        return math.cos(beta * t), math.sin(beta * t) / beta
    return 1.0, t


def exp2_closed(C, t=1.0):
    """``exp(t*C)`` for a 2x2 matrix in closed form.

    With ``alpha = tr(C)/2`` the traceless part ``N = C - alpha*I`` satisfies
    ``N @ N = Delta*I`` (Hamilton-Cayley), so

        exp(tC) = exp(alpha t) * (g0(t) I + g1(t) N)

    where ``(g0, g1)`` is ``(cosh, sinh/beta)``, ``(cos, sin/beta)`` or
    ``(1, t)`` according to the sign of ``Delta``.
    """
    C = as_square(C, 2)
    t = float(t)
    alpha = 0.5 * trace2(C)
    N = C - alpha * np.eye(2)
    g0, g1 = _hc_coeffs(discriminant2(C), t)
    return math.exp(alpha * t) * (g0 * np.eye(2) + g1 * N)


def exp_series(C, t=1.0):
    """``exp(t*C)`` by a scaled-and-squared truncated Taylor series.

    The argument is scaled by ``2**-s`` until its infinity norm is at most
    1/2. The series is then summed until a term drops below ``1e-18``
    relative to the partial sum (at most 40 terms; 18 terms already bound
    the remainder by ``0.5**18/18! < 1e-21``), and the result is squared
    ``s`` times. For ``||tC||_inf <= 4`` this keeps the error at the
    ``1e-13`` level.

    Raises ``FlowlabError("exp-overflow")`` when an intermediate entry
    exceeds 1e300.
    """
    M = as_square(C) * float(t)
    n = M.shape[0]
    if n > MAX_SERIES_DIM:
        raise FlowlabError("too-large", f"exp_series supports n <= {MAX_SERIES_DIM}")
    norm = float(np.max(np.sum(np.abs(M), axis=1))) if n else 0.0
    s = 0
    if norm > 0.5:
        s = int(math.ceil(math.log2(norm / 0.5)))
    A = M / (2.0 ** s)
    result = np.eye(n)
    term = np.eye(n)
    for k in range(1, 41):
        term = term @ A / k
        result = result + term
        if np.max(np.abs(term)) <= 1e-18 * max(1.0, np.max(np.abs(result))):
            break
    for _ in range(s):
        with np.errstate(over="ignore", invalid="ignore"):
            result = result @ result
        if not np.all(np.abs(result) <= OVERFLOW_LIMIT):
            raise FlowlabError("exp-overflow", "matrix exponential overflowed")
    return result


def nullspace_left(C, tol=1e-12):
    """Unit row ``(a, b)`` with ``(a, b) @ C == 0`` for a singular nonzero 2x2 ``C``.

    Returns ``None`` when ``|det C| > tol * ||C||_F**2``. The first nonzero
    entry of the result is positive.
    """
    C = as_square(C, 2)
    scale = fro(C)
    if scale == 0.0:
        raise FlowlabError("zero-matrix", "left null space of the zero matrix is the whole plane")
    if abs(det2(C)) > tol * scale * scale:
        return None
    # (a, b) is orthogonal to every column; use the larger column for accuracy
    cols = [C[:, 0], C[:, 1]]
    col = max(cols, key=lambda c: np.hypot(c[0], c[1]))
    row = np.array([-col[1], col[0]]) / np.hypot(col[0], col[1])
    lead = row[0] if row[0] != 0.0 else row[1]
    if lead < 0:
        row = -row
    return row + 0.0
