"""Finite categories, emergences and abstract block diagrams."""

import json

from . import _core
from ._core import (
    BudgetExceeded,
    ConstructionError,
    Emergence,
    EmergenceError,
    Functor,
    ModeMismatch,
    ParseError,
    StructuralError,
    Workspace,
    WorkspaceError,
    coproduct,
    emergence_battery,
    equalizer,
    homomorphisms,
    is_factorable,
    opposite,
    product,
    pullback,
    singleton_battery,
    standard_battery,
    support,
    terminal_example,
)

__all__ = [
    "BudgetExceeded", "ConstructionError", "Emergence", "EmergenceError", "Functor", "ModeMismatch",
    "ParseError", "StructuralError", "Workspace", "WorkspaceError", "check_iso", "coproduct",
    "emergence_battery", "equalizer", "extremal", "homomorphisms", "internal", "is_factorable", "opposite",
    "product", "pullback", "run", "run_json", "singleton_battery", "standard_battery", "summary", "support",
    "terminal_example", "verify_equalizer", "verify_product",
]


def run(*args):
    """Run a command line; returns (exit code, stdout, stderr)."""
    return _core.run([str(a) for a in args])


def run_json(*args):
    """Run a command with --json and decode its report."""
    code, out, err = run(*args, "--json")
    if code == 1:
        raise EmergenceError(err.strip())
    return code, json.loads(out)


def summary(e):
    return json.loads(e.summary_json())


def check_iso(a, b, mode="iso", budget=None):
    return json.loads(_core.check_iso(a, b, mode, budget))


def extremal(e, battery):
    return json.loads(_core.extremal_json(e, battery))


def internal(ws, name, budget=None):
    return json.loads(ws.internal_json(name, budget))


def verify_equalizer(inclusion, functors):
    return json.loads(_core.verify_equalizer_json(inclusion, functors))


def verify_product(apex, projections):
    return json.loads(_core.verify_product_json(apex, projections))
