"""tccp agents, their csLTL abstract semantics and abstract diagnosis."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .constraints import Constraint, ConstraintSystem
from .formula import (
    TRUE,
    And,
    Atom,
    Exists,
    Formula,
    Next,
    Not,
    Until,
    all_vars,
    conj,
    disj,
    free_vars,
    fresh_var,
    has_exists,
    implies,
    or_,
    rename_free,
)
from .tableau import Tableau, TableauOptions, check_valid
from .traces import ConditionalTrace


class ProgramError(Exception):
    pass


class UnresolvedCallError(ProgramError):
    pass


class ArityMismatchError(ProgramError):
    pass


class UnboundProcessError(ProgramError):
    pass


class SpecUsesExistsError(ProgramError):
    pass


# agents ------------------------------------------------------------------


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Tell:
    constraint: Constraint


@dataclass(frozen=True)
class Choice:
    branches: tuple  # of (guard, agent)

    def __post_init__(self):
        object.__setattr__(self, "branches", tuple(tuple(b) for b in self.branches))
        if not self.branches:
            raise ProgramError("choice needs at least one branch")


@dataclass(frozen=True)
class Now:
    cond: Constraint
    then: "Agent"
    else_: "Agent"


@dataclass(frozen=True)
class Par:
    left: "Agent"
    right: "Agent"


@dataclass(frozen=True)
class Hide:
    var: str
    body: "Agent"


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


Agent = Union[Skip, Tell, Choice, Now, Par, Hide, Call]


def calls(a: Agent):
    match a:
        case Call():
            yield a
        case Choice(branches):
            for _, b in branches:
                yield from calls(b)
        case Now(_, t, e) | Par(t, e):
            yield from calls(t)
            yield from calls(e)
        case Hide(_, b):
            yield from calls(b)


@dataclass(frozen=True)
class Declaration:
    name: str
    params: tuple
    body: Agent

    @property
    def key(self) -> tuple[str, int]:
        return (self.name, len(self.params))


@dataclass
class Program:
    declarations: dict = field(default_factory=dict)  # (name, arity) -> [Declaration]

    @classmethod
    def from_declarations(cls, decls) -> "Program":
        prog = cls()
        for d in decls:
            prog.declarations.setdefault(d.key, []).append(d)
        prog.check_closed()
        return prog

    def check_closed(self) -> None:
        names = {name for name, _ in self.declarations}
        for decls in self.declarations.values():
            for d in decls:
                for c in calls(d.body):
                    if (c.name, len(c.args)) in self.declarations:
                        continue
                    if c.name in names:
                        raise ArityMismatchError(f"{c.name} called with {len(c.args)} arguments")
                    raise UnresolvedCallError(f"no declaration for {c.name}")


# interpretations ---------------------------------------------------------


@dataclass
class Interpretation:
    """``(name, arity) -> (formal parameters, formula)``."""

    entries: dict = field(default_factory=dict)

    def define(self, name: str, params, f: Formula) -> None:
        self.entries[name, len(params)] = (tuple(params), f)

    def formula(self, key) -> Formula:
        return self.entries[key][1]

    def lookup(self, name: str, args) -> Formula:
        try:
            params, f = self.entries[name, len(args)]
        except KeyError:
            raise UnboundProcessError(f"interpretation has no entry for {name}/{len(args)}") from None
        return instantiate(f, params, args)


def instantiate(f: Formula, params, args) -> Formula:
    """Simultaneously replace free ``params`` by ``args`` in ``f``."""
    params, args = tuple(params), tuple(args)
    if params == args:
        return f
    taken = set(all_vars(f)) | set(params) | set(args)
    f = _rename_binders(f, set(args), taken)
    temps = []
    for p in params:
        t = fresh_var(p, taken)
        taken.add(t)
        temps.append(t)
        f = rename_free(f, p, t)
    for t, a in zip(temps, args):
        f = rename_free(f, t, a, check=False)
    return f


def _rename_binders(f: Formula, avoid: set, taken: set) -> Formula:
    match f:
        case Exists(x, body):
            body = _rename_binders(body, avoid, taken)
            if x in avoid:
                y = fresh_var(x, taken)
                taken.add(y)
                return Exists(y, rename_free(body, x, y))
            return Exists(x, body)
        case Not(a):
            return Not(_rename_binders(a, avoid, taken))
        case Next(a):
            return Next(_rename_binders(a, avoid, taken))
        case And(a, b):
            return And(_rename_binders(a, avoid, taken), _rename_binders(b, avoid, taken))
        case Until(a, b):
            return Until(_rename_binders(a, avoid, taken), _rename_binders(b, avoid, taken))
    return f


# abstract semantics ------------------------------------------------------


def faa(a: Agent, interp: Interpretation) -> Formula:
    match a:
        case Skip():
            return TRUE
        case Tell(c):
            return Next(Atom(c))
        case Choice(branches):
            moves = [And(Atom(c), Next(faa(b, interp))) for c, b in branches]
            suspend = conj(*(Not(Atom(c)) for c, _ in branches))
            return disj(*moves, suspend)
        case Now(c, t, e):
            return or_(And(Atom(c), faa(t, interp)), And(Not(Atom(c)), faa(e, interp)))
        case Par(left, right):
            return And(faa(left, interp), faa(right, interp))
        case Hide(x, body):
            return Exists(x, faa(body, interp))
        case Call(name, args):
            return Next(interp.lookup(name, args))
    raise ProgramError(f"not an agent: {a!r}")


def fdd(program: Program, interp: Interpretation) -> Interpretation:
    out = Interpretation()
    for (name, _), decls in program.declarations.items():
        params = decls[0].params
        bodies = [instantiate(faa(d.body, interp), d.params, params) for d in decls]
        out.define(name, params, disj(*bodies))
    return out


# diagnosis ---------------------------------------------------------------


@dataclass
class Diagnosis:
    process: str
    arity: int
    correct: bool
    implication: Formula
    tableau: Tableau
    countermodel: ConditionalTrace | None = None

    @property
    def verdict(self) -> str:
        # an open tableau only signals a possible error
        return "Correct" if self.correct else "Warning"


def _check_spec(program: Program, spec: Interpretation) -> None:
    for key in program.declarations:
        if key not in spec.entries:
            raise UnboundProcessError(f"specification has no entry for {key[0]}/{key[1]}")
    for (name, _), (_, f) in spec.entries.items():
        if has_exists(f):
            raise SpecUsesExistsError(f"specification of {name} uses an existential")


def _aligned(program, spec, key) -> tuple[Formula, Formula]:
    params, s = spec.entries[key]
    semantic = fdd(program, spec)
    d_params, d = semantic.entries[key]
    return instantiate(d, d_params, params), s


def diagnose(
    program: Program, spec: Interpretation, cs: ConstraintSystem, opts: TableauOptions | None = None
) -> list[Diagnosis]:
    _check_spec(program, spec)
    out = []
    for key in program.declarations:
        d, s = _aligned(program, spec, key)
        imp = implies(d, s)
        res = check_valid(imp, cs, opts)
        out.append(Diagnosis(key[0], key[1], res.valid, imp, res.tableau, res.countermodel))
    return out


def strip_binders(f: Formula, avoid=()) -> Formula:
    """Drop every existential binder, renaming bound variables apart first."""
    taken = set(all_vars(f)) | set(avoid)
    f = _rename_binders(f, set(free_vars(f)) | _bound_twice(f) | set(avoid), taken)
    return _drop(f)


def _bound_twice(f):
    seen, twice = set(), set()
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case Exists(x, b):
                (twice if x in seen else seen).add(x)
                stack.append(b)
            case Not(a) | Next(a):
                stack.append(a)
            case And(a, b) | Until(a, b):
                stack.extend((a, b))
    return twice


def _drop(f):
    match f:
        case Exists(_, b):
            return _drop(b)
        case Not(a):
            return Not(_drop(a))
        case Next(a):
            return Next(_drop(a))
        case And(a, b):
            return And(_drop(a), _drop(b))
        case Until(a, b):
            return Until(_drop(a), _drop(b))
    return f


def uncovered_hint(
    program: Program, spec: Interpretation, cs: ConstraintSystem, opts: TableauOptions | None = None
) -> dict:
    """Heuristic reverse check: is ``S(p) -> FDd(S)(p)`` valid?

    Existentials in the semantics are dropped (witnessing them with the
    variable itself), which only makes the right-hand side stronger, so a
    ``True`` answer is still trustworthy.
    """
    _check_spec(program, spec)
    out = {}
    for key in program.declarations:
        d, s = _aligned(program, spec, key)
        out[key] = check_valid(implies(s, strip_binders(d, all_vars(s))), cs, opts).valid
    return out
