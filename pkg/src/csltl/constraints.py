"""Constraint systems: entailment lattices that csLTL atoms are drawn from.

Two instances are provided:

* :class:`FlatSystem` -- stores are finite sets of basic facts (``x=k``,
  stream cells ``S=[c|T]``, current stream values ``S~=c`` and opaque
  propositions).  Entailment is fact inclusion and two different constants
  for the same variable are jointly inconsistent.
* :class:`FiniteTableSystem` -- a user supplied finite preorder with an
  explicit join table, for desk-scale experiments.

Every :class:`Constraint` remembers the system that created it; mixing
constraints from two systems raises :class:`ForeignConstraintError`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Hashable, Iterable, NamedTuple


class ConstraintError(Exception):
    pass


class ForeignConstraintError(ConstraintError):
    pass


class ClosureViolationError(ConstraintError):
    """A finite table breaks a lattice law; ``triple`` names the culprits."""

    def __init__(self, message: str, triple: tuple[str, str, str] | None = None):
        super().__init__(message)
        self.triple = triple


class UnknownAtomError(ConstraintError):
    pass


@dataclass(frozen=True)
class Constraint:
    system: "ConstraintSystem" = field(repr=False)
    token: Hashable

    def __str__(self) -> str:
        return self.system.show(self)


class ConstraintSystem:
    """Interface shared by all constraint systems.

    Subclasses implement the ``_``-prefixed hooks on raw tokens; the public
    methods check ownership first.
    """

    name = "abstract"

    def _own(self, *cs: Constraint) -> None:
        for c in cs:
            if not isinstance(c, Constraint) or c.system is not self:
                raise ForeignConstraintError(f"{c!r} does not belong to {self.name} system")

    def make(self, token: Hashable) -> Constraint:
        return Constraint(self, token)

    def entails(self, c: Constraint, d: Constraint) -> bool:
        self._own(c, d)
        return self._entails(c.token, d.token)

    def join(self, c: Constraint, d: Constraint) -> Constraint:
        self._own(c, d)
        return self.make(self._join(c.token, d.token))

    def join_all(self, cs: Iterable[Constraint]) -> Constraint:
        out = self.true_c()
        for c in cs:
            out = self.join(out, c)
        return out

    def is_false(self, c: Constraint) -> bool:
        return self.entails(c, self.false_c())

    def vars(self, c: Constraint) -> frozenset[str]:
        self._own(c)
        return self._vars(c.token)

    def rename(self, c: Constraint, x: str, y: str) -> Constraint:
        self._own(c)
        return self.make(self._rename(c.token, x, y))

    def show(self, c: Constraint) -> str:
        return str(c.token)

    def true_c(self) -> Constraint:
        raise NotImplementedError

    def false_c(self) -> Constraint:
        raise NotImplementedError

    def parse_atom(self, text: str) -> Constraint:
        raise NotImplementedError

    def _entails(self, c, d) -> bool:
        raise NotImplementedError

    def _join(self, c, d):
        raise NotImplementedError

    def _vars(self, c) -> frozenset[str]:
        return frozenset()

    def _rename(self, c, x: str, y: str):
        return c


# --------------------------------------------------------------------------
# flat equality / stream system


class Eq(NamedTuple):
    var: str
    const: str

    def __str__(self):
        return f"{self.var}={self.const}"


class StreamCons(NamedTuple):
    """``stream = [head | tail]``"""

    stream: str
    head: str
    tail: str

    def __str__(self):
        return f"{self.stream}=[{self.head}|{self.tail}]"


class StreamCur(NamedTuple):
    """``stream ~= value``: the last instantiated value of a stream."""

    stream: str
    value: str

    def __str__(self):
        return f"{self.stream}~={self.value}"


class Prop(NamedTuple):
    name: str

    def __str__(self):
        return self.name


FALSE_STORE = "⊥"

_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_CONST = r"[A-Za-z0-9_.'+-]+"
_EQ_RE = re.compile(rf"^({_IDENT})\s*=\s*({_CONST})$")
_CONS_RE = re.compile(rf"^({_IDENT})\s*=\s*\[\s*({_CONST})\s*\|\s*({_IDENT})\s*\]$")
_CUR_RE = re.compile(rf"^({_IDENT})\s*~=\s*({_CONST})$")
_PROP_RE = re.compile(rf"^{_IDENT}$")


def _fact_vars(f) -> tuple[str, ...]:
    if isinstance(f, Eq):
        return (f.var,)
    if isinstance(f, StreamCons):
        return (f.stream, f.tail)
    if isinstance(f, StreamCur):
        return (f.stream,)
    return ()


def _rename_fact(f, x: str, y: str):
    def r(v):
        return y if v == x else v

    if isinstance(f, Eq):
        return Eq(r(f.var), f.const)
    if isinstance(f, StreamCons):
        return StreamCons(r(f.stream), f.head, r(f.tail))
    if isinstance(f, StreamCur):
        return StreamCur(r(f.stream), f.value)
    return f


def _consistent(facts: frozenset) -> bool:
    values: dict[str, str] = {}
    heads: dict[str, str] = {}
    for f in facts:
        if isinstance(f, Eq):
            if values.setdefault(f.var, f.const) != f.const:
                return False
        elif isinstance(f, StreamCons):
            if heads.setdefault(f.stream, f.head) != f.head:
                return False
    return True


class FlatSystem(ConstraintSystem):
    """Stores are frozensets of facts; the inconsistent store is ``FALSE_STORE``.

    ``S~=c`` facts never conflict with each other: replacing the current
    value of a stream is the job of the stream-aware next operator.
    """

    name = "flat"

    def true_c(self) -> Constraint:
        return self.make(frozenset())

    def false_c(self) -> Constraint:
        return self.make(FALSE_STORE)

    def fact(self, f) -> Constraint:
        return self.make(frozenset([f]))

    def eq(self, var: str, const) -> Constraint:
        return self.fact(Eq(var, str(const)))

    def cons(self, stream: str, head, tail: str) -> Constraint:
        return self.fact(StreamCons(stream, str(head), tail))

    def cur(self, stream: str, value) -> Constraint:
        return self.fact(StreamCur(stream, str(value)))

    def prop(self, name: str) -> Constraint:
        return self.fact(Prop(name))

    def facts(self, c: Constraint) -> frozenset:
        self._own(c)
        return frozenset() if c.token == FALSE_STORE else c.token

    def stream_current(self, c: Constraint) -> StreamCur | None:
        """The ``S~=v`` fact if ``c`` is exactly one such fact."""
        self._own(c)
        if c.token != FALSE_STORE and len(c.token) == 1:
            (f,) = c.token
            if isinstance(f, StreamCur):
                return f
        return None

    def _entails(self, c, d) -> bool:
        if c == FALSE_STORE:
            return True
        if d == FALSE_STORE:
            return False
        return d <= c

    def _join(self, c, d):
        if c == FALSE_STORE or d == FALSE_STORE:
            return FALSE_STORE
        u = c | d
        return u if _consistent(u) else FALSE_STORE

    def _vars(self, c) -> frozenset[str]:
        if c == FALSE_STORE:
            return frozenset()
        return frozenset(v for f in c for v in _fact_vars(f))

    def _rename(self, c, x, y):
        if c == FALSE_STORE:
            return c
        return frozenset(_rename_fact(f, x, y) for f in c)

    def show(self, c: Constraint) -> str:
        t = c.token
        if t == FALSE_STORE:
            return "false"
        if not t:
            return "true"
        return " & ".join(sorted(str(f) for f in t))

    def parse_atom(self, text: str) -> Constraint:
        s = text.strip()
        if s == "true":
            return self.true_c()
        if s == "false":
            return self.false_c()
        if "&" in s:
            return self.join_all(self.parse_atom(part) for part in s.split("&"))
        if m := _CONS_RE.match(s):
            return self.cons(*m.groups())
        if m := _CUR_RE.match(s):
            return self.cur(*m.groups())
        if m := _EQ_RE.match(s):
            return self.eq(*m.groups())
        if _PROP_RE.match(s):
            return self.prop(s)
        raise UnknownAtomError(f"cannot read {text!r} as a flat constraint")


# --------------------------------------------------------------------------
# finite table system


class FiniteTableSystem(ConstraintSystem):
    """A finite preorder of named atoms with a total, commutative join table.

    Build with :func:`build_finite_system`; the entailment relation stored
    here is already reflexive-transitively closed.
    """

    name = "table"

    def __init__(self, atoms: tuple[str, ...], closure: frozenset, joins: dict):
        self.atoms = atoms
        self.closure = closure
        self.joins = joins

    def true_c(self) -> Constraint:
        return self.make("true")

    def false_c(self) -> Constraint:
        return self.make("false")

    def atom(self, name: str) -> Constraint:
        if name not in self.atoms:
            raise UnknownAtomError(f"unknown atom {name!r}")
        return self.make(name)

    def all_constraints(self) -> list[Constraint]:
        return [self.make(a) for a in self.atoms]

    def parse_atom(self, text: str) -> Constraint:
        return self.atom(text.strip())

    def _entails(self, c, d) -> bool:
        return (c, d) in self.closure

    def _join(self, c, d):
        return self.joins[c, d]


def _closure(atoms: list[str], pairs: Iterable[tuple[str, str]]) -> set[tuple[str, str]]:
    rel = {a: {a, "true"} for a in atoms}
    rel["false"] = set(atoms)
    for c, d in pairs:
        rel[c].add(d)
    changed = True
    while changed:
        changed = False
        for a in atoms:
            reach = set(rel[a])
            for b in rel[a]:
                reach |= rel[b]
            if reach != rel[a]:
                rel[a] = reach
                changed = True
    return {(a, b) for a in atoms for b in rel[a]}


def build_finite_system(
    atoms: Iterable[str],
    entail_pairs: Iterable[tuple[str, str]] = (),
    join_table: dict[tuple[str, str], str] | None = None,
) -> FiniteTableSystem:
    """Close the entailment pairs and complete the join table.

    ``true`` and ``false`` are always present, every atom entails ``true``
    and ``false`` entails every atom.  Missing join entries are filled with
    the least upper bound of the closed preorder; a missing entry without a
    least upper bound, or a given entry that is not an upper bound of its
    arguments, raises :class:`ClosureViolationError`.  Antisymmetry is not
    required.
    """
    names = ["true", "false"]
    for a in atoms:
        if a not in names:
            names.append(a)
    pairs = list(entail_pairs)
    for c, d in pairs:
        for x in (c, d):
            if x not in names:
                raise ConstraintError(f"entails mentions undeclared atom {x!r}")
    closure = _closure(names, pairs)

    def ent(c, d):
        return (c, d) in closure

    joins: dict[tuple[str, str], str] = {}
    for (c, d), e in (join_table or {}).items():
        for x in (c, d, e):
            if x not in names:
                raise ConstraintError(f"join mentions undeclared atom {x!r}")
        if not (ent(e, c) and ent(e, d)):
            raise ClosureViolationError(
                f"join({c},{d}) = {e} does not entail both arguments", (c, d, e)
            )
        for key in ((c, d), (d, c)):
            if joins.get(key, e) != e:
                raise ClosureViolationError(
                    f"join({c},{d}) given twice: {joins[key]} and {e}", (c, d, e)
                )
            joins[key] = e

    for c, d in product(names, repeat=2):
        if (c, d) in joins:
            continue
        e = _least_upper_bound(names, ent, c, d)
        if e is None:
            raise ClosureViolationError(f"join({c},{d}) has no least upper bound", (c, d, "?"))
        joins[c, d] = joins[d, c] = e
    return FiniteTableSystem(tuple(names), frozenset(closure), joins)


def _least_upper_bound(names, ent, c, d):
    uppers = [u for u in names if ent(u, c) and ent(u, d)]
    least = [u for u in uppers if all(ent(v, u) for v in uppers)]
    for pick in (c, d):
        if pick in least:
            return pick
    return least[0] if least else None


def parse_table(text: str) -> FiniteTableSystem:
    """Read ``atom``/``entails``/``join`` lines (``#`` starts a comment)."""
    atoms: list[str] = []
    pairs: list[tuple[str, str]] = []
    joins: dict[tuple[str, str], str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        match words:
            case ["atom", *names] if names:
                atoms.extend(names)
            case ["entails", c, d]:
                pairs.append((c, d))
            case ["join", c, d, "=", e]:
                joins[c, d] = e
            case _:
                raise ConstraintError(f"line {lineno}: cannot parse {raw.strip()!r}")
    return build_finite_system(atoms, pairs, joins)


def load_table(path: str | Path) -> FiniteTableSystem:
    return parse_table(Path(path).read_text(encoding="utf-8"))
