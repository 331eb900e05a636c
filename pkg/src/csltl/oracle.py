"""Brute-force ground truth for testing the tableau.

``evaluate`` implements the satisfaction relation directly on lasso
traces.  ``enumerate_traces`` lists every monotone lasso built from joins
of a given atom set, and ``oracle_sat`` searches those for a model.
Nothing here shares code with the tableau beyond the AST.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .constraints import Constraint, ConstraintSystem
from .formula import (
    And,
    Atom,
    Exists,
    FalseF,
    Formula,
    Next,
    Not,
    TrueF,
    Until,
    all_vars,
    atoms as formula_atoms,
    fresh_var,
    free_vars,
    rename_free,
    show,
)
from .traces import CondStore, ConditionalTrace, Stutt, store_state


class OracleError(Exception):
    pass


class ExistsUnsupported(OracleError):
    pass


class EnumerationTooLarge(OracleError):
    pass


def evaluate(trace: ConditionalTrace, f: Formula, cs: ConstraintSystem) -> bool:
    """Does ``trace`` (read as an infinite lasso) satisfy ``f`` at its start?"""
    return _Evaluator(trace.lasso(cs), cs).holds(f)[0]


def evaluate_all(trace: ConditionalTrace, fs: Iterable[Formula], cs: ConstraintSystem) -> bool:
    ev = _Evaluator(trace.lasso(cs), cs)
    return all(ev.holds(f)[0] for f in fs)


class _Evaluator:
    """Truth vectors over the ``n`` distinct positions of a lasso.

    Position ``n-1`` is followed by position ``len(prefix)``.  Until is a
    least fixpoint over that successor graph; the stutter clause for atoms
    is a greatest fixpoint.
    """

    def __init__(self, trace: ConditionalTrace, cs: ConstraintSystem):
        self.states = trace.states()
        self.n = len(self.states)
        self.loop = len(trace.prefix)
        self.cs = cs
        self.memo: dict[Formula, tuple[bool, ...]] = {}

    def succ(self, i: int) -> int:
        return i + 1 if i + 1 < self.n else self.loop

    def holds(self, f: Formula) -> tuple[bool, ...]:
        got = self.memo.get(f)
        if got is None:
            got = self.memo[f] = self._holds(f)
        return got

    def _holds(self, f: Formula) -> tuple[bool, ...]:
        n = self.n
        match f:
            case TrueF():
                return (True,) * n
            case FalseF():
                return (False,) * n
            case Atom(c):
                return self._atom(c)
            case Not(a):
                return tuple(not v for v in self.holds(a))
            case And(a, b):
                return tuple(x and y for x, y in zip(self.holds(a), self.holds(b)))
            case Next(a):
                va = self.holds(a)
                return tuple(va[self.succ(i)] for i in range(n))
            case Until(a, b):
                va, vb = self.holds(a), self.holds(b)
                out = list(vb)
                changed = True
                while changed:
                    changed = False
                    for i in range(n):
                        if not out[i] and va[i] and out[self.succ(i)]:
                            out[i] = changed = True
                return tuple(out)
            case Exists():
                raise ExistsUnsupported(f"cannot evaluate quantifier in {show(f)}")
        raise OracleError(f"not a formula: {f!r}")

    def _atom(self, c: Constraint) -> tuple[bool, ...]:
        cs = self.cs
        out = [False] * self.n
        for i, s in enumerate(self.states):
            if isinstance(s, CondStore):
                out[i] = cs.entails(s.positive, c)
            elif isinstance(s, Stutt):
                out[i] = not any(cs.entails(c, d) for d in s.negative)
            else:
                raise OracleError("End inside an infinite trace")
        # stutter states need the rest of the trace too (greatest fixpoint)
        changed = True
        while changed:
            changed = False
            for i, s in enumerate(self.states):
                if isinstance(s, Stutt) and out[i] and not out[self.succ(i)]:
                    out[i] = False
                    changed = True
        return tuple(out)


# enumeration -------------------------------------------------------------


@dataclass(frozen=True)
class OracleBounds:
    max_prefix: int = 4
    max_cycle: int = 3
    limit: int = 200_000


def candidate_stores(cs: ConstraintSystem, atoms: Sequence[Constraint]) -> list[Constraint]:
    """Distinct consistent joins of subsets of ``atoms`` (``true`` first)."""
    seen: list[Constraint] = []
    atoms = list(dict.fromkeys(atoms))
    for k in range(len(atoms) + 1):
        for subset in combinations(atoms, k):
            c = cs.join_all(subset)
            if cs.is_false(c):
                continue
            if not any(cs.entails(c, d) and cs.entails(d, c) for d in seen):
                seen.append(c)
    return seen


def enumerate_traces(
    cs: ConstraintSystem,
    atoms: Sequence[Constraint],
    max_prefix: int,
    max_cycle: int,
    limit: int = 200_000,
) -> Iterator[ConditionalTrace]:
    """All monotone lassos over joins of ``atoms``.

    The cycle repeats a single store (monotonicity under unrolling forces
    it).  A constant cycle of length ``k > 1`` is the same infinite trace as
    one of length 1, so only length 1 is emitted; ``max_cycle`` of 0 yields
    nothing.
    """
    if max_cycle < 1:
        return
    stores = candidate_stores(cs, atoms)
    ups = {i: [j for j, d in enumerate(stores) if cs.entails(d, stores[i])] for i in range(len(stores))}
    count = 0

    def grow(prefix: list[int]) -> Iterator[list[int]]:
        yield prefix
        if len(prefix) < max_prefix:
            nxt = ups[prefix[-1]] if prefix else range(len(stores))
            for j in nxt:
                yield from grow(prefix + [j])

    for prefix in grow([]):
        last = ups[prefix[-1]] if prefix else range(len(stores))
        for j in last:
            count += 1
            if count > limit:
                raise EnumerationTooLarge(f"more than {limit} traces")
            yield ConditionalTrace(
                tuple(store_state(stores[i]) for i in prefix), (store_state(stores[j]),)
            )


def count_traces(cs, atoms, max_prefix, max_cycle) -> int:
    return sum(1 for _ in enumerate_traces(cs, atoms, max_prefix, max_cycle))


# satisfiability ----------------------------------------------------------


@dataclass(frozen=True)
class SatWitness:
    trace: ConditionalTrace


@dataclass(frozen=True)
class NoWitnessWithinBound:
    bounds: OracleBounds


def strip_exists(fs: Iterable[Formula]) -> list[Formula]:
    """Drop positive, non-temporal existentials from a formula set.

    ``E x. g`` under conjunctions and disjunctions is equisatisfiable with
    ``g[x'/x]`` when ``x'`` is new; the binder is renamed only when ``x``
    is already used freely elsewhere.  Existentials in other positions are
    left alone and rejected later by :func:`evaluate`.
    """
    fs = list(fs)
    taken: set[str] = set()
    free: set[str] = set()
    for f in fs:
        taken |= all_vars(f)
        free |= free_vars(f)
    return [_strip(f, taken, free) for f in fs]


def _strip(f, taken, free):
    match f:
        case Exists(x, body):
            if x in free:
                y = fresh_var(x, taken)
                taken.add(y)
                body = rename_free(body, x, y)
                x = y
            free.add(x)
            return _strip(body, taken, free)
        case And(a, b):
            return And(_strip(a, taken, free), _strip(b, taken, free))
        case Not(And(Not(a), Not(b))):
            return Not(And(Not(_strip(a, taken, free)), Not(_strip(b, taken, free))))
        case Not(Not(a)):
            return Not(Not(_strip(a, taken, free)))
    return f


def oracle_sat(
    fs: Iterable[Formula],
    cs: ConstraintSystem,
    atoms: Sequence[Constraint],
    bounds: OracleBounds = OracleBounds(),
):
    fs = list(fs)
    for t in enumerate_traces(cs, atoms, bounds.max_prefix, bounds.max_cycle, bounds.limit):
        if evaluate_all(t, fs, cs):
            return SatWitness(t)
    return NoWitnessWithinBound(bounds)


def relevant_atoms(fs: Iterable[Formula]) -> list[Constraint]:
    out: dict[Constraint, None] = {}
    for f in fs:
        for c in formula_atoms(f):
            out.setdefault(c)
    return list(out)
