"""Induced action of gl(2, R) and GL(2, R) on (p, q)-tensor components.

A matrix ``A`` acts on components by

    s~^{i1..ip}_{j1..jq} = A^{i1}_{k1} .. A^{ip}_{kp} s^{k1..kp}_{l1..lq} Abar^{l1}_{j1} .. Abar^{lq}_{jq}

with ``Abar = A^{-1}``. Putting ``A = exp(tC)`` and differentiating at
``t = 0`` gives the generator ``Cbar``: one copy of ``C`` per contravariant
slot minus one copy of ``C^T`` per covariant slot. That is the ``"drag"``
mode: components of a tensor that is invariant under the flow. The
``"invariant"`` mode (components held fixed, the tensor dragged) is its
negative.

Components are flattened lexicographically over ``(i1..ip, j1..jq)`` with
indices 1 and 2, contravariant slots first; ``(1, 1)`` therefore reads
``(s^1_1, s^1_2, s^2_1, s^2_2)``.

The generator code only adds and multiplies entries, so ``C`` may be an
object array of ``sympy`` symbols for exact comparisons.
"""
import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from flowlab.errors import FlowlabError
from flowlab.smallmat import exp_series

DRAG = "drag"
INVARIANT = "invariant"
MODES = (DRAG, INVARIANT)
MODE_ALIASES = {"drag": DRAG, "DragComponents": DRAG, "invariant": INVARIANT, "InvariantTensor": INVARIANT}
SYMMETRIC_TYPES = ((0, 2), (0, 3), (1, 2))
MAX_VALENCE = 12


@dataclass(frozen=True)
class TensorSpec:
    p: int
    q: int
    symmetric: bool = False
    mode: str = DRAG

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise FlowlabError("bad-spec", "need p, q >= 0 and p + q >= 1")
        if self.p + self.q > MAX_VALENCE:
            raise FlowlabError("spec-too-large", f"p + q must be <= {MAX_VALENCE}")
        if self.mode not in MODE_ALIASES:
            raise FlowlabError("bad-spec", f"mode must be one of {sorted(MODE_ALIASES)}")
        object.__setattr__(self, "mode", MODE_ALIASES[self.mode])
        if self.symmetric and (self.p, self.q) not in SYMMETRIC_TYPES:
            raise FlowlabError("unsupported-symmetric",
                               f"symmetric reduction exists for {SYMMETRIC_TYPES}, not {(self.p, self.q)}")

    @property
    def sign(self):
        return 1 if self.mode == DRAG else -1

    @property
    def full_dim(self):
        return 2 ** (self.p + self.q)

    @property
    def dim(self):
        return len(reduced_basis(self)) if self.symmetric else self.full_dim


@dataclass(frozen=True, eq=False)
class InducedGenerator:
    spec: TensorSpec
    Cbar: np.ndarray
    index_order: tuple
    reduced: bool = False


def full_basis(spec):
    """Multi-indices ``(i1..ip, j1..jq)`` (1-based) in storage order."""
    return tuple(itertools.product((1, 2), repeat=spec.p + spec.q))


def reduced_basis(spec):
    """Independent components of a symmetric spec, lexicographic.

    ``(0,2)``: g11, g12, g22; ``(1,2)``: k^1_11, k^1_12, k^1_22, k^2_11, ...
    """
    if not spec.symmetric:
        raise FlowlabError("not-symmetric-spec", "spec has no symmetric reduction")
    lower = list(itertools.combinations_with_replacement((1, 2), spec.q))
    upper = list(itertools.product((1, 2), repeat=spec.p))
    return tuple(u + l for u in upper for l in lower)


def _as_generic(C):
    C = np.asarray(C)
    if C.shape != (2, 2):
        raise FlowlabError("bad-dimension", "C must be 2x2")
    if C.dtype == object:
        return C
    C = C.astype(float)
    if not np.all(np.isfinite(C)):
        raise FlowlabError("non-finite", "C must be finite")
    return C


def induced_generator(C, spec):
    """Generator ``Cbar`` of the induced action on unreduced components.

    Built slot by slot: for a contravariant slot ``a`` the entry
    ``Cbar[J, I]`` gains ``C[J_a, I_a]``, for a covariant slot ``b`` it
    gains ``-C[I_b, J_b]``, whenever ``I`` and ``J`` agree elsewhere. The
    whole matrix is negated in ``"invariant"`` mode.
    """
    C = _as_generic(C)
    basis = full_basis(spec)
    pos = {idx: n for n, idx in enumerate(basis)}
    N = len(basis)
    Cbar = np.zeros((N, N), dtype=C.dtype)
    for I in basis:
        col = pos[I]
        for slot in range(spec.p + spec.q):
            for k in (1, 2):
                J = I[:slot] + (k,) + I[slot + 1:]
                if slot < spec.p:
                    coeff = C[k - 1, I[slot] - 1]
                else:
                    coeff = -C[I[slot] - 1, k - 1]
                Cbar[pos[J], col] = Cbar[pos[J], col] + coeff
    if spec.sign < 0:
        Cbar = -Cbar
    return InducedGenerator(spec, Cbar, basis)


def embedding(spec):
    """``E`` (full x reduced) spreading independent components over all index orders."""
    full = full_basis(spec)
    red = reduced_basis(spec)
    where = {idx: n for n, idx in enumerate(red)}
    E = np.zeros((len(full), len(red)))
    for row, idx in enumerate(full):
        key = idx[:spec.p] + tuple(sorted(idx[spec.p:]))
        E[row, where[key]] = 1.0
    return E


def symmetric_reduce(gen):
    """Restrict ``Cbar`` to the symmetric components (rows of the representatives)."""
    spec = gen.spec
    if not spec.symmetric:
        raise FlowlabError("not-symmetric-spec", "symmetric_reduce needs a symmetric spec")
    if gen.reduced:
        return gen
    full = full_basis(spec)
    red = reduced_basis(spec)
    pos = {idx: n for n, idx in enumerate(full)}
    E = embedding(spec)
    d = len(red)
    M = np.zeros((d, d), dtype=gen.Cbar.dtype)
    for r, rep in enumerate(red):
        row = gen.Cbar[pos[rep]]
        for k in range(d):
            acc = 0
            for n in np.nonzero(E[:, k])[0]:
                acc = acc + row[n]
            M[r, k] = acc
    return InducedGenerator(spec, M, red, reduced=True)


def generator(C, spec):
    """``induced_generator`` followed by ``symmetric_reduce`` for symmetric specs."""
    gen = induced_generator(C, spec)
    return symmetric_reduce(gen) if spec.symmetric else gen


def act(A, s, spec):
    """Apply a group element ``A`` to unreduced components ``s`` directly."""
    A = np.asarray(A, dtype=float)
    Abar = np.linalg.inv(A)
    T = np.asarray(s, dtype=float).reshape((2,) * (spec.p + spec.q))
    for slot in range(spec.p + spec.q):
        M = A if slot < spec.p else Abar.T
        T = np.moveaxis(np.tensordot(M, T, axes=([1], [slot])), 0, slot)
    return T.reshape(-1)


def drag_components(C, spec, s, t):
    """``exp(t Cbar) s`` for the (reduced, if symmetric) component vector ``s``."""
    gen = generator(np.asarray(C, dtype=float), spec)
    s = np.asarray(s, dtype=float)
    if s.shape != (gen.Cbar.shape[0],):
        raise FlowlabError("length-mismatch", f"expected {gen.Cbar.shape[0]} components, got {s.shape}")
    return exp_series(gen.Cbar, t) @ s


def _index_sums(l1, l2, spec):
    lam = {1: l1, 2: l2}
    if spec.symmetric:
        tuples = [u + l for u in itertools.product((1, 2), repeat=spec.p)
                  for l in itertools.combinations_with_replacement((1, 2), spec.q)]
    else:
        tuples = itertools.product((1, 2), repeat=spec.p + spec.q)
    out = []
    for idx in tuples:
        total = 0
        for slot, i in enumerate(idx):
            total = total + lam[i] if slot < spec.p else total - lam[i]
        out.append(total if spec.sign > 0 else -total)
    return out


def eigen_multiset(l1, l2, spec):
    """Eigenvalues of ``Cbar`` predicted from those of ``C``.

    ``lambda_{i1} + .. + lambda_{ip} - lambda_{j1} - .. - lambda_{jq}`` over
    all index tuples (over sorted covariant tuples for symmetric specs),
    negated in ``"invariant"`` mode.
    """
    return _index_sums(l1, l2, spec)


def multiset_distance(a, b):
    """Largest gap under the best one-to-one pairing of two complex multisets.

    Sorting is unreliable for eigenvalues that differ only by round-off in
    the real part, so the pairing solves an assignment problem instead.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != b.shape:
        return float("inf")
    if a.size == 0:
        return 0.0
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())


def _same(a, b, tol):
    d = a - b
    if hasattr(d, "expand"):
        return d.expand() == 0
    return abs(d) <= tol


def distinct_values(values, tol=1e-9):
    scale = max([1.0] + [abs(complex(v)) for v in values if not hasattr(v, "expand")])
    out = []
    for v in values:
        if not any(_same(v, w, tol * scale) for w in out):
            out.append(v)
    return out


def poly_from_roots(roots):
    """Coefficients (leading first) of ``prod (mu - r)``; works for symbolic roots."""
    coeffs = [1]
    for r in roots:
        nxt = coeffs + [0]
        for k in range(1, len(nxt)):
            nxt[k] = nxt[k] - r * coeffs[k - 1]
        coeffs = nxt
    return [c.expand() if hasattr(c, "expand") else c for c in coeffs]


def ode_coefficients(spec, l1, l2, tol=1e-9):
    """Minimal and characteristic polynomials of ``Cbar`` from the eigenvalue multiset.

    Returns ``{"minimal": [...], "characteristic": [...]}``, leading
    coefficient first. The minimal polynomial assumes ``C`` diagonalizable.
    A polynomial ``mu^n + a1 mu^(n-1) + ... + an`` corresponds to the
    component ODE ``S^(n) + a1 S^(n-1) + ... + an S = 0``.
    """
    values = eigen_multiset(l1, l2, spec)
    return {
        "minimal": poly_from_roots(distinct_values(values, tol)),
        "characteristic": poly_from_roots(values),
    }


def _real_part(z):
    if hasattr(z, "as_real_imag"):
        return z.as_real_imag()[0]
    return complex(z).real


def lattice_points(l1, l2, max_pq):
    """All dual-sign values ``sum lambda_j - sum lambda_i`` for ``1 <= p + q <= max_pq``.

    Returns ``[(p, q, value), ...]``. For a conjugate pair
    ``alpha +- i beta`` every value of type ``(p, q)`` has real part
    ``(q - p) alpha``; this is checked and a violation raises.
    """
    if max_pq > 6:
        raise FlowlabError("spec-too-large", "max_pq must be <= 6")
    out = []
    for n in range(1, max_pq + 1):
        for p in range(n + 1):
            spec = TensorSpec(p, n - p, mode=INVARIANT)
            out.extend((p, n - p, z) for z in eigen_multiset(l1, l2, spec))
    conj = l2.conjugate() if hasattr(l2, "conjugate") else None
    if conj is not None and _same(l1, conj, 1e-12 * max(1.0, abs(complex(l1))) if not hasattr(l1, "expand") else 0):
        alpha = _real_part(l1)
        for p, q, z in out:
            if not _same(_real_part(z), (q - p) * alpha, 1e-9 * (1 + abs(complex(z)) if not hasattr(z, "expand") else 0)):
                raise FlowlabError("lattice-violation", f"real part of {z} is not {(q - p) * alpha}")
    return out
