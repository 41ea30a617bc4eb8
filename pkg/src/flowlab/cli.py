"""Command-line front end: ``flowlab classify | portrait | quadric | tensor-rep``.

Reports go to stdout as JSON with sorted keys and every float written with
``%.6g``; complex numbers are written as ``[re, im]``. Exit codes: 0 on
success, 2 for bad input, 3 for a failure while computing.
"""
import argparse
import json
import math
import os
import sys

import numpy as np

from flowlab import glrep, planar, quadric
from flowlab.errors import DomainError, FlowlabError
from flowlab.fieldexpr import calculus
from flowlab.smallmat import eig2, fro

EXIT_OK, EXIT_INPUT, EXIT_RUNTIME = 0, 2, 3

# failures that happen during the computation rather than in the input
RUNTIME_CODES = {
    "domain-error", "exp-overflow", "b-cubed-mismatch", "lattice-violation",
    "omega-P-vanishes", "not-a-symmetry", "on-singular-ray",
}

MAX_PATH_POINTS = 2000
ESCAPE_FACTOR = 10.0
PERMUTATION_TOL = 1e-4
CYCLES = (
    np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
    np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]),
)


class InputError(FlowlabError):
    def __init__(self, message):
        super().__init__("bad-input", message)


# ----------------------------------------------------------------------------
# canonical output

def fmt_float(x):
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"non-finite value {x} in output")
    return "%.6g" % (x + 0.0)


def _plain(obj):
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    return obj


def dumps(obj):
    """Canonical JSON: sorted keys, ``%.6g`` floats, no whitespace variation."""
    obj = _plain(obj)
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, list):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    if isinstance(obj, dict):
        items = sorted(obj.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {dumps(v)}" for k, v in items) + "}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _real_or_pair(z, tol=1e-12):
    """Real number when the imaginary part is negligible, else ``[re, im]``.

    Parts below ``tol * max(1, |z|)`` are set to zero so that round-off does
    not leak into the printed digits.
    """
    z = complex(z)
    cut = tol * max(1.0, abs(z))
    re = 0.0 if abs(z.real) <= cut else z.real
    if abs(z.imag) <= cut:
        return re
    return [re, z.imag]


def snap(x, scale, rel=1e-12):
    """Zero out entries of ``x`` below ``rel * scale`` (round-off noise)."""
    x = np.asarray(x, dtype=float)
    return np.where(np.abs(x) <= rel * max(scale, 1.0), 0.0, x)


# ----------------------------------------------------------------------------
# argument parsing

def _reals(text, n, what):
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = [s for s in str(text).replace(" ", "").split(",") if s != ""]
    try:
        vals = [float(s) for s in parts]
    except ValueError:
        raise InputError(f"{what}: expected {n} comma-separated reals, got {text!r}") from None
    if len(vals) != n or not all(math.isfinite(v) for v in vals):
        raise InputError(f"{what}: expected {n} finite comma-separated reals, got {text!r}")
    return vals


def _matrix2(text, seed):
    if str(text).strip() == "random":
        rng = np.random.default_rng(seed)
        return rng.uniform(-2.0, 2.0, size=(2, 2))
    return np.array(_reals(text, 4, "--matrix")).reshape(2, 2)


def _region(text):
    xmin, xmax, ymin, ymax = _reals(text, 4, "--region")
    if not (xmin < xmax and ymin < ymax):
        raise InputError("--region must satisfy xmin < xmax and ymin < ymax")
    return xmin, xmax, ymin, ymax


def _pair_ints(text):
    try:
        p, q = (int(s) for s in str(text).split(","))
    except ValueError:
        raise InputError(f"--type: expected p,q, got {text!r}") from None
    return p, q


def build_parser():
    parser = argparse.ArgumentParser(prog="flowlab", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="JSON file whose keys are flag names")
    parser.add_argument("--seed", type=int, default=0, help="start-point seed (FLOWLAB_SEED overrides)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="phase-portrait type of a 2x2 matrix")
    p.add_argument("--matrix", required=False, help="c1,c2,c3,c4 (row-major)")

    p = sub.add_parser("portrait", help="SVG phase portrait with a CSV sidecar")
    p.add_argument("--matrix", help="c1,c2,c3,c4 of a linear field")
    p.add_argument("--field", help="'xexpr ; yexpr' or a demo: preset")
    p.add_argument("--region", default="-2,2,-2,2", help="xmin,xmax,ymin,ymax")
    p.add_argument("--trajectories", type=int, default=8)
    p.add_argument("--t", type=float, default=4.0, help="integration time in each direction")
    p.add_argument("--steps", type=int, default=400, help="steps in each direction")
    p.add_argument("--output", default="portrait.svg")
    p.add_argument("--format", choices=("svg", "csv", "json"), default="svg")

    p = sub.add_parser("quadric", help="flow of p1 X1 + p2 X2 + p3 X3 on quadrics")
    p.add_argument("--preset", choices=sorted(quadric.PRESETS))
    p.add_argument("--A", dest="A", help="nine reals, row-major symmetric")
    p.add_argument("--p", dest="p", help="three reals")
    p.add_argument("--t", type=float, default=1.0, help="orbit length")
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--u0", default="1,0.5,0.25", help="orbit start point")

    p = sub.add_parser("tensor-rep", help="induced generator on (p,q) components")
    p.add_argument("--matrix", help="c1,c2,c3,c4 or 'random'")
    p.add_argument("--type", dest="type", default="1,1", help="p,q")
    p.add_argument("--symmetric", action="store_true")
    p.add_argument("--mode", choices=sorted(glrep.MODE_ALIASES), default="drag")
    return parser


def parse_args(argv):
    parser = build_parser()
    pre, _ = parser.parse_known_args(argv)
    if pre.config:
        try:
            with open(pre.config) as fh:
                config = json.load(fh)
        except (OSError, ValueError) as err:
            raise InputError(f"--config: {err}") from err
        if not isinstance(config, dict):
            raise InputError("--config must hold a JSON object")
        config = {k.replace("-", "_"): v for k, v in config.items()}
        parser.set_defaults(**config)
        local = {k: v for k, v in config.items() if k not in ("seed", "config")}
        for action in parser._subparsers._group_actions:
            for subparser in action.choices.values():
                subparser.set_defaults(**local)
    args = parser.parse_args(argv)
    env = os.environ.get("FLOWLAB_SEED")
    if env is not None:
        try:
            args.seed = int(env)
        except ValueError:
            raise InputError(f"FLOWLAB_SEED must be an integer, got {env!r}") from None
    return args


# ----------------------------------------------------------------------------
# classify

def classify_report(C):
    fc = planar.classify(C)
    out = {
        "kind": fc.kind,
        "trC": fc.trC,
        "detC": fc.detC,
        "delta": fc.delta,
        "lambda1": _real_or_pair(fc.lambda1),
        "lambda2": _real_or_pair(fc.lambda2),
    }
    if fc.invariant_row is not None:
        out["degenerate_invariant"] = {"row": list(fc.invariant_row), "rate": fc.rate}
    return out


def cmd_classify(args):
    if args.matrix is None:
        raise InputError("--matrix is required")
    print(dumps(classify_report(_matrix2(args.matrix, args.seed))))
    return EXIT_OK


# ----------------------------------------------------------------------------
# portrait

def start_points(region, n, seed):
    xmin, xmax, ymin, ymax = region
    rng = np.random.default_rng(seed)
    return np.column_stack([rng.uniform(xmin, xmax, n), rng.uniform(ymin, ymax, n)])


def _linear_branch(F, U0, T, steps, bound):
    pts = [np.asarray(U0, dtype=float)]
    for t in np.linspace(0.0, T, steps + 1)[1:]:
        U = planar.flow_point(F, U0, t)
        if not np.all(np.isfinite(U)):
            break
        pts.append(U)
        if np.max(np.abs(U)) > bound:
            break
    return np.array(pts)


def trajectory(F, U0, T, steps, bound):
    """``(t, u, v)`` rows from the backward end to the forward end."""
    h = T / steps
    if isinstance(F, planar.LinearField2):
        fwd = _linear_branch(F, U0, T, steps, bound)
        bwd = _linear_branch(F, U0, -T, steps, bound)
    else:
        fwd = calculus.rk4_trajectory(F, U0, T, steps, escape=bound)
        bwd = calculus.rk4_trajectory(F, U0, -T, steps, escape=bound)
    tf = h * np.arange(len(fwd))
    tb = -h * np.arange(len(bwd))
    rows = np.vstack([np.column_stack([tb, bwd])[::-1], np.column_stack([tf, fwd])[1:]])
    return rows


def decimate(rows, limit=MAX_PATH_POINTS):
    if len(rows) <= limit:
        return rows
    keep = np.unique(np.round(np.linspace(0, len(rows) - 1, limit)).astype(int))
    return rows[keep]


def _svg_path(rows):
    pts = [f"{fmt_float(u)} {fmt_float(v)}" for u, v in rows[:, 1:]]
    return "M " + " L ".join(pts)


def render_svg(region, title, paths, markers, lines):
    xmin, xmax, ymin, ymax = region
    w, h = xmax - xmin, ymax - ymin
    sw = fmt_float(max(w, h) / 400.0)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{fmt_float(xmin)} {fmt_float(-ymax)} {fmt_float(w)} {fmt_float(h)}" '
        f'width="600" height="{fmt_float(600.0 * h / w)}">',
        f"<title>{title}</title>",
        f'<g transform="scale(1,-1)" fill="none" stroke-width="{sw}">',
    ]
    for (a, b) in lines:
        out.append(f'<path class="separatrix" stroke="#c0392b" d="M {fmt_float(a[0])} {fmt_float(a[1])} '
                   f'L {fmt_float(b[0])} {fmt_float(b[1])}"/>')
    for rows in paths:
        out.append(f'<path class="trajectory" stroke="#1f3a93" d="{_svg_path(rows)}"/>')
    for (u, v) in markers:
        out.append(f'<circle class="marker" fill="#1f3a93" cx="{fmt_float(u)}" cy="{fmt_float(v)}" r="{sw}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_csv(trajs):
    lines = ["t,u,v"]
    for rows in trajs:
        lines.extend(",".join(fmt_float(x) for x in r) for r in rows)
    return "\n".join(lines) + "\n"


def _separatrices(C, region):
    xmin, xmax, ymin, ymax = region
    L = 2.0 * max(abs(xmin), abs(xmax), abs(ymin), abs(ymax))
    lines = []
    for lam in eig2(C):
        lam = float(np.real(lam))
        M = C - lam * np.eye(2)
        # right eigenvector: perpendicular to the larger row of C - lam I
        r = M[0] if np.linalg.norm(M[0]) >= np.linalg.norm(M[1]) else M[1]
        v = np.array([-r[1], r[0]]) / np.linalg.norm(r)
        if v[0] < 0 or (v[0] == 0 and v[1] < 0):
            v = -v
        lines.append((-L * v, L * v))
    return lines


def build_portrait(args):
    region = _region(args.region)
    n = args.trajectories
    if n < 1 or args.steps < 1 or not args.t > 0:
        raise InputError("--trajectories, --steps and --t must be positive")
    if (args.matrix is None) == (args.field is None):
        raise InputError("give exactly one of --matrix and --field")
    xmin, xmax, ymin, ymax = region
    bound = ESCAPE_FACTOR * max(abs(xmin), abs(xmax), abs(ymin), abs(ymax))
    starts = start_points(region, n, args.seed)
    lines, markers, trajs = [], [], []
    if args.matrix is not None:
        C = _matrix2(args.matrix, args.seed)
        F = planar.LinearField2(C)
        kind = planar.classify(C).kind
        if kind == "Zero":
            markers = [tuple(U) for U in starts]
            trajs = [np.array([[0.0, U[0], U[1]]]) for U in starts]
        if kind == "Saddle":
            lines = _separatrices(C, region)
        title = f"{kind} C=[{', '.join(fmt_float(c) for c in C.ravel())}]"
    else:
        F = calculus.parse_field(args.field)
        kind = None
        title = f"field {args.field}"
    if not markers:
        trajs = [trajectory(F, U0, args.t, args.steps, bound) for U0 in starts]
    paths = [decimate(rows) for rows in trajs] if not markers else []
    title = title.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
    return {"kind": kind, "svg": render_svg(region, title, paths, markers, lines),
            "csv": render_csv(trajs), "trajectories": trajs}


def _write(path, text):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def sidecar_path(output):
    root, _ = os.path.splitext(output)
    return root + ".csv"


def cmd_portrait(args):
    outputs = [args.output] + ([sidecar_path(args.output)] if args.format == "svg" else [])
    try:
        built = build_portrait(args)
        if args.format == "svg":
            _write(args.output, built["svg"])
            _write(outputs[1], built["csv"])
        elif args.format == "csv":
            _write(args.output, built["csv"])
        else:
            _write(args.output, dumps({"kind": built["kind"], "trajectories": built["trajectories"]}) + "\n")
    except FlowlabError:
        for path in outputs:
            if os.path.exists(path):
                os.remove(path)
        raise
    return EXIT_OK


# ----------------------------------------------------------------------------
# quadric

def quadric_report(G, p, t, samples, U0):
    B = quadric.b_matrix(G, p)
    ft = quadric.flow_type(G, p)
    eps = ft.epsilon
    nb = fro(B)
    ts = np.linspace(0.0, t, samples + 1)
    pts = quadric.orbit(G, p, U0, ts)
    f0, g0 = quadric.p_invariants(G, p, U0)
    fg = np.array([quadric.p_invariants(G, p, U) for U in pts])
    E = quadric.exp_b(B, eps, t)
    perm = min(float(np.max(np.abs(E - P))) for P in CYCLES)
    size = float(np.max(np.abs(pts)))
    return {
        "A": G.A,
        "p": p,
        "epsilon": float(snap(eps, nb ** 2)),
        "flow_type": ft.kind,
        "B": snap(B, nb),
        "B3_minus_epsB_residual": float(snap(fro(B @ B @ B - eps * B) / max(nb ** 3, 1e-300), 1.0, 1e-10)),
        "exp_tB": snap(E, float(np.max(np.abs(E)))),
        "sample_orbit": [[ti, *U] for ti, U in zip(ts, snap(pts, size))],
        "f_residual": float(snap(np.max(np.abs(fg[:, 0] - f0)), fro(G.A) * size ** 2, 1e-10)),
        "g_residual": float(snap(np.max(np.abs(fg[:, 1] - g0)), float(np.abs(p).sum()) * size, 1e-10)),
        "permutation_residual": float(snap(perm, 1.0)),
        "permutation_check": perm <= PERMUTATION_TOL,
    }


def cmd_quadric(args):
    if (args.preset is None) == (args.A is None):
        raise InputError("give exactly one of --preset and --A")
    if args.p is None:
        raise InputError("--p is required")
    if args.samples < 1:
        raise InputError("--samples must be positive")
    if args.preset is not None:
        G = quadric.QuadricGroup.preset(args.preset)
    else:
        G = quadric.QuadricGroup.from_matrix(np.array(_reals(args.A, 9, "--A")).reshape(3, 3))
    p = quadric.axis(_reals(args.p, 3, "--p"))
    U0 = np.array(_reals(args.u0, 3, "--u0"))
    print(dumps(quadric_report(G, p, args.t, args.samples, U0)))
    return EXIT_OK


# ----------------------------------------------------------------------------
# tensor-rep

def tensor_report(C, spec):
    gen = glrep.generator(C, spec)
    l1, l2 = eig2(C)
    computed = np.linalg.eigvals(gen.Cbar) if gen.Cbar.size else np.array([])
    formula = glrep.eigen_multiset(l1, l2, spec)
    scale = max(1.0, fro(C)) * (spec.p + spec.q)
    dist = glrep.multiset_distance(computed, formula)
    computed = sorted((complex(z) for z in computed), key=lambda z: (round(z.real, 6), round(z.imag, 6)))
    ode = glrep.ode_coefficients(spec, l1, l2)
    return {
        "C": C,
        "type": [spec.p, spec.q],
        "symmetric": spec.symmetric,
        "mode": spec.mode,
        "index_order": ["".join(map(str, idx)) for idx in gen.index_order],
        "Cbar": gen.Cbar,
        "eigenvalues_computed": [_real_or_pair(z, 1e-9) for z in computed],
        "eigenvalues_formula": [_real_or_pair(z, 1e-9) for z in formula],
        "match": dist <= 1e-7 * scale,
        "ode_coefficients": {k: [_real_or_pair(c, 1e-9) for c in v] for k, v in ode.items()},
    }


def cmd_tensor_rep(args):
    if args.matrix is None:
        raise InputError("--matrix is required")
    p, q = _pair_ints(args.type)
    spec = glrep.TensorSpec(p, q, bool(args.symmetric), args.mode)
    print(dumps(tensor_report(_matrix2(args.matrix, args.seed), spec)))
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "portrait": cmd_portrait,
    "quadric": cmd_quadric,
    "tensor-rep": cmd_tensor_rep,
}


def main(argv=None):
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
        return COMMANDS[args.command](args)
    except SystemExit as err:
        # argparse reports usage errors with status 2
        return EXIT_OK if err.code in (0, None) else EXIT_INPUT
    except FlowlabError as err:
        print(f"flowlab: {err}", file=sys.stderr)
        return EXIT_RUNTIME if err.code in RUNTIME_CODES else EXIT_INPUT
    except (OSError, ValueError) as err:
        print(f"flowlab: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
