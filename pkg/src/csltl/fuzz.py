"""Seeded random formulas for differential testing and the experiment scripts."""

from __future__ import annotations

import random
from typing import Sequence

from .constraints import Constraint
from .formula import (
    TRUE,
    And,
    Atom,
    Formula,
    Next,
    Not,
    Until,
    always,
    eventually,
    implies,
    or_,
    temporal_depth,
)

_TEMPORAL = ("X", "U", "F", "G")
_BOOLEAN = ("~", "&", "|", "->")


def random_formula(rng: random.Random, atoms: Sequence[Constraint], depth: int, size: int = 4) -> Formula:
    """A formula over ``atoms`` with temporal depth at most ``depth``.

    ``size`` bounds the number of connectives along any path.
    """
    if size <= 0 or rng.random() < 0.25:
        if rng.random() < 0.05:
            return TRUE
        return Atom(rng.choice(list(atoms)))
    ops = _BOOLEAN + (_TEMPORAL if depth > 0 else ())
    op = rng.choice(ops)

    def sub(d=depth):
        return random_formula(rng, atoms, d, size - 1)

    match op:
        case "~":
            return Not(sub())
        case "&":
            return And(sub(), sub())
        case "|":
            return or_(sub(), sub())
        case "->":
            return implies(sub(), sub())
        case "X":
            return Next(sub(depth - 1))
        case "U":
            return Until(sub(depth - 1), sub(depth - 1))
        case "F":
            return eventually(sub(depth - 1))
        case "G":
            return always(sub(depth - 1))
    raise AssertionError(op)


def random_set(
    rng: random.Random, atoms: Sequence[Constraint], depth: int, max_formulas: int = 3, size: int = 4
) -> list[Formula]:
    n = rng.randint(1, max_formulas)
    out = [random_formula(rng, atoms, depth, size) for _ in range(n)]
    assert all(temporal_depth(f) <= depth for f in out)
    return out
