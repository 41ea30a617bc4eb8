"""Expression language for planar field components and its calculus."""
from flowlab.fieldexpr.calculus import (
    PRESETS,
    Field2,
    OneForm2,
    apply_field,
    canonical_invariant,
    diff,
    divergence,
    exterior_derivative,
    field,
    integrating_factor_residual,
    invariant_by_factor,
    invariant_via_symmetry,
    lie_bracket,
    line_integral,
    omega_of,
    parse_field,
    rk4_flow,
    rk4_trajectory,
    symmetry_residual,
)
from flowlab.fieldexpr.expr import Expr, compile_expr, evaluate, render
from flowlab.fieldexpr.parser import parse

__all__ = [
    "PRESETS", "Expr", "Field2", "OneForm2", "apply_field", "canonical_invariant",
    "compile_expr", "diff", "divergence", "evaluate", "exterior_derivative", "field",
    "integrating_factor_residual", "invariant_by_factor", "invariant_via_symmetry",
    "lie_bracket", "line_integral", "omega_of", "parse", "parse_field", "render",
    "rk4_flow", "rk4_trajectory", "symmetry_residual",
]
