"""Command lines behind the golden files in ``tests/golden``.

Run ``python tests/golden_cases.py`` to regenerate them after an intended
output change.
"""
import contextlib
import io
import os
import sys

from flowlab.cli import main

PORTRAIT_ARGS = ["--trajectories", "8", "--t", "3", "--steps", "100", "--region=-2,2,-2,2"]

PORTRAITS = {
    "StableFocus": "-0.5,-1,1,-0.5",
    "UnstableFocus": "0.5,-1,1,0.5",
    "Center": "0,-1,1,0",
    "Saddle": "1,0,0,-1",
    "StableHyperbolicNode": "-1,0,0,-2",
    "UnstableHyperbolicNode": "1,0,0,2",
    "StableParabolicNode": "-1,1,0,-1",
    "UnstableParabolicNode": "1,1,0,1",
    "StarNode": "1,0,0,1",
    "DegenerateLine": "1,0,0,0",
    "Zero": "0,0,0,0",
}

QUADRICS = {
    "quadric_sphere.json": ["quadric", "--preset", "sphere", "--p", "0.57735,0.57735,0.57735", "--t", "2.0944"],
    "quadric_lorentz.json": ["quadric", "--preset", "lorentz", "--p", "1,0.5,0.25", "--t", "1"],
}

TENSORS = {
    "tensor_1_1.json": ["tensor-rep", "--matrix", "1,2,3,4", "--type", "1,1"],
    "tensor_0_2_sym.json": ["tensor-rep", "--matrix", "1,2,3,4", "--type", "0,2", "--symmetric"],
    "tensor_1_2_sym.json": ["tensor-rep", "--matrix", "1,2,3,4", "--type", "1,2", "--symmetric"],
}

LIMIT_CYCLE = ["portrait", "--field", "demo:limit-cycle", "--trajectories", "8", "--t", "10",
               "--steps", "1000", "--region=-2,2,-2,2"]


def portrait_argv(kind, output):
    return ["portrait", f"--matrix={PORTRAITS[kind]}", *PORTRAIT_ARGS, "--output", output]


def run(argv):
    """Run the CLI in-process; returns ``(exit code, stdout)``."""
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def produce(outdir):
    """Write every golden artefact into ``outdir``; returns the file names."""
    names = []
    for kind in PORTRAITS:
        name = f"portrait_{kind}.svg"
        code, _ = run(portrait_argv(kind, os.path.join(outdir, name)))
        assert code == 0, kind
        os.remove(os.path.join(outdir, f"portrait_{kind}.csv"))
        names.append(name)
    for name, argv in {**QUADRICS, **TENSORS}.items():
        code, out = run(argv)
        assert code == 0, name
        with open(os.path.join(outdir, name), "w", newline="\n") as fh:
            fh.write(out)
        names.append(name)
    return names


if __name__ == "__main__":
    here = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")
    for name in produce(here):
        print(name, file=sys.stderr)
