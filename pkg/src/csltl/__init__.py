"""Constraint-based LTL tableau prover with tccp abstract diagnosis."""

from .constraints import FlatSystem, build_finite_system, load_table, parse_table
from .formula import always, eventually, implies, or_, show, weak_until
from .parsing import parse_formula, parse_program, parse_spec
from .streams import dep, head, simplify
from .tableau import TableauOptions, build_tableau, check_sat, check_valid, extract_model
from .tccp import diagnose, faa, fdd

__all__ = [
    "FlatSystem",
    "TableauOptions",
    "always",
    "build_finite_system",
    "build_tableau",
    "check_sat",
    "check_valid",
    "dep",
    "diagnose",
    "eventually",
    "extract_model",
    "faa",
    "fdd",
    "head",
    "implies",
    "load_table",
    "or_",
    "parse_formula",
    "parse_program",
    "parse_spec",
    "parse_table",
    "show",
    "simplify",
    "weak_until",
]
