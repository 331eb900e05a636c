"""csLTL abstract syntax.

Core constructors are the dataclasses below; derived operators (``or_``,
``implies``, ``eventually``, ``always``, ``weak_until``) are plain functions
that build core syntax directly, so no derived node ever exists.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from .constraints import Constraint


class FormulaError(Exception):
    pass


class NegatedExistsError(FormulaError):
    """``~E x. f`` has no tableau rule; quantifiers may only occur positively."""


class CaptureError(FormulaError):
    pass


class Formula:
    """Base class.  Hashes are cached since labels are hashed constantly."""

    __slots__ = ()

    def __str__(self) -> str:
        return show(self)


def _cache_hash(obj, *parts):
    object.__setattr__(obj, "_hash", hash((type(obj).__name__, *parts)))


@dataclass(frozen=True, eq=True)
class TrueF(Formula):
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class FalseF(Formula):
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Atom(Formula):
    constraint: Constraint
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self, self.constraint)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Not(Formula):
    arg: Formula
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self, self.arg)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class And(Formula):
    left: Formula
    right: Formula
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self, self.left, self.right)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Exists(Formula):
    var: str
    body: Formula
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self, self.var, self.body)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Next(Formula):
    arg: Formula
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self, self.arg)

    def __hash__(self):
        return self._hash


@dataclass(frozen=True, eq=True)
class Until(Formula):
    left: Formula
    right: Formula
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        _cache_hash(self, self.left, self.right)

    def __hash__(self):
        return self._hash


TRUE = TrueF()
FALSE = FalseF()


# derived operators -------------------------------------------------------


def or_(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def implies(a: Formula, b: Formula) -> Formula:
    return or_(Not(a), b)


def eventually(f: Formula) -> Formula:
    return Until(TRUE, f)


def always(f: Formula) -> Formula:
    return Not(eventually(Not(f)))


def weak_until(a: Formula, b: Formula) -> Formula:
    return or_(Until(a, b), always(a))


def conj(*fs: Formula) -> Formula:
    """Right-nested conjunction; ``conj()`` is ``true``."""
    if not fs:
        return TRUE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def disj(*fs: Formula) -> Formula:
    """Right-nested disjunction; ``disj()`` is ``false``."""
    if not fs:
        return FALSE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = or_(f, out)
    return out


def neg(f: Formula) -> Formula:
    """Negation that cancels an existing negation instead of stacking one."""
    return f.arg if isinstance(f, Not) else Not(f)


def strip_double_negations(f: Formula) -> Formula:
    while isinstance(f, Not) and isinstance(f.arg, Not):
        f = f.arg.arg
    return f


# classification ----------------------------------------------------------


class Kind(enum.Enum):
    TRUE_FALSE = "true/false"
    CONSTRAINT = "constraint"
    NEXT = "next"
    ALPHA = "alpha"
    BETA = "beta"
    EXISTS = "exists"


def classify(f: Formula) -> Kind:
    match f:
        case TrueF() | FalseF() | Not(TrueF()) | Not(FalseF()):
            return Kind.TRUE_FALSE
        case Atom() | Not(Atom()):
            return Kind.CONSTRAINT
        case Next() | Not(Next()):
            return Kind.NEXT
        case Not(Not()) | And():
            return Kind.ALPHA
        case Not(And()) | Not(Until()) | Until():
            return Kind.BETA
        case Exists():
            return Kind.EXISTS
        case Not(Exists()):
            raise NegatedExistsError(f"no rule for negated quantifier in {show(f)}")
    raise FormulaError(f"not a formula: {f!r}")


def is_eventuality(f: Formula) -> bool:
    return isinstance(strip_double_negations(f), Until)


def is_elementary(f: Formula) -> bool:
    return classify(f) in (Kind.CONSTRAINT, Kind.NEXT, Kind.TRUE_FALSE)


def is_constraint_formula(f: Formula) -> bool:
    return classify(f) in (Kind.CONSTRAINT, Kind.TRUE_FALSE)


def has_exists(f: Formula) -> bool:
    return any(isinstance(g, Exists) for g in subformulas(f))


def subformulas(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        match g:
            case Not(a) | Next(a):
                stack.append(a)
            case And(a, b) | Until(a, b):
                stack.extend((b, a))
            case Exists(_, a):
                stack.append(a)


def atoms(f: Formula) -> list[Constraint]:
    """Constraints occurring in ``f``, first occurrence order."""
    seen: dict[Constraint, None] = {}
    for g in subformulas(f):
        if isinstance(g, Atom):
            seen.setdefault(g.constraint)
    return list(seen)


def temporal_depth(f: Formula) -> int:
    match f:
        case Next(a):
            return 1 + temporal_depth(a)
        case Until(a, b):
            return 1 + max(temporal_depth(a), temporal_depth(b))
        case Not(a) | Exists(_, a):
            return temporal_depth(a)
        case And(a, b):
            return max(temporal_depth(a), temporal_depth(b))
    return 0


def map_atoms(f: Formula, fn) -> Formula:
    """Rebuild ``f`` with every :class:`Atom` replaced by ``fn(atom)``."""
    match f:
        case Atom():
            return fn(f)
        case Not(a):
            return Not(map_atoms(a, fn))
        case Next(a):
            return Next(map_atoms(a, fn))
        case And(a, b):
            return And(map_atoms(a, fn), map_atoms(b, fn))
        case Until(a, b):
            return Until(map_atoms(a, fn), map_atoms(b, fn))
        case Exists(x, a):
            return Exists(x, map_atoms(a, fn))
    return f


# variables ---------------------------------------------------------------


def free_vars(f: Formula) -> frozenset[str]:
    match f:
        case Atom(c):
            return c.system.vars(c)
        case Not(a) | Next(a):
            return free_vars(a)
        case And(a, b) | Until(a, b):
            return free_vars(a) | free_vars(b)
        case Exists(x, a):
            return free_vars(a) - {x}
    return frozenset()


def bound_vars(f: Formula) -> frozenset[str]:
    return frozenset(g.var for g in subformulas(f) if isinstance(g, Exists))


def all_vars(f: Formula) -> frozenset[str]:
    out = set(bound_vars(f))
    for c in atoms(f):
        out |= c.system.vars(c)
    return frozenset(out)


def rename_free(f: Formula, x: str, y: str, check: bool = True) -> Formula:
    """Substitute ``y`` for the free occurrences of ``x``.

    With ``check`` the new name must be unused in ``f``; without it the
    caller guarantees that no binder of ``f`` captures ``y``.
    """
    if x == y:
        return f
    if check and (y in free_vars(f) or y in bound_vars(f)):
        raise CaptureError(f"{y} is not fresh for {show(f)}")
    return _rename(f, x, y)


def _rename(f, x, y):
    match f:
        case Atom(c):
            return Atom(c.system.rename(c, x, y))
        case Not(a):
            return Not(_rename(a, x, y))
        case Next(a):
            return Next(_rename(a, x, y))
        case And(a, b):
            return And(_rename(a, x, y), _rename(b, x, y))
        case Until(a, b):
            return Until(_rename(a, x, y), _rename(b, x, y))
        case Exists(v, a):
            return f if v == x else Exists(v, _rename(a, x, y))
    return f


def fresh_var(base: str, taken: Iterable[str]) -> str:
    taken = set(taken)
    name = base + "'"
    while name in taken:
        name += "'"
    return name


# printing ----------------------------------------------------------------


def show(f: Formula) -> str:
    """Concrete syntax accepted by :func:`csltl.parsing.parse_formula`."""
    try:
        return f.__dict__["_shown"]
    except KeyError:
        s = _show(f)
        object.__setattr__(f, "_shown", s)
        return s


def _show(f: Formula) -> str:
    match f:
        case TrueF():
            return "true"
        case FalseF():
            return "false"
        case Atom(c):
            return f"`{c.system.show(c)}`"
        case Not(Until(TrueF(), Not(g))):
            return f"G {show(g)}"
        case Until(TrueF(), g):
            return f"F {show(g)}"
        case Not(And(Not(_), Not(_))):
            return "(" + " | ".join(show(d) for d in _or_chain(f)) + ")"
        case Not(a):
            return f"~{show(a)}"
        case Next(a):
            return f"X {show(a)}"
        case And():
            parts = []
            while isinstance(f, And):
                parts.append(f.left)
                f = f.right
            parts.append(f)
            return "(" + " & ".join(show(p) for p in parts) + ")"
        case Until(a, b):
            return f"({show(a)} U {show(b)})"
        case Exists(x, a):
            return f"(E {x}. {show(a)})"
    raise FormulaError(f"not a formula: {f!r}")


def _or_chain(f):
    out = []
    while isinstance(f, Not) and isinstance(f.arg, And) and isinstance(f.arg.left, Not) and isinstance(f.arg.right, Not):
        out.append(f.arg.left.arg)
        f = f.arg.right.arg
    out.append(f)
    return out


# formula sets ------------------------------------------------------------

FormulaSet = frozenset

_RANK = {
    Kind.CONSTRAINT: 0,
    Kind.TRUE_FALSE: 0,
    Kind.NEXT: 1,
    Kind.ALPHA: 2,
    Kind.EXISTS: 3,
    Kind.BETA: 4,
}


def sort_key(f: Formula):
    try:
        rank = _RANK[classify(f)]
        if rank == 4:
            # disjunctions, then negated untils, then eventualities
            rank += 0 if isinstance(f, Not) and isinstance(f.arg, And) else 1 if isinstance(f, Not) else 2
    except NegatedExistsError:
        rank = 9
    return (rank, show(f))


def canonical(fs: Iterable[Formula]) -> list[Formula]:
    return sorted(set(fs), key=sort_key)
