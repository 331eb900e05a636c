"""Stream preprocessing.

A stream cell ``S=[c|T]`` says that ``T`` is the tail of ``S``.  The
simplification rewrites every cell into ``H~=c`` where ``H`` is the first
name the stream was given, so the tableau only ever sees current values.
"""

from __future__ import annotations

from .constraints import FlatSystem, StreamCons, StreamCur
from .formula import And, Atom, Exists, Formula, Next, Not, Until, map_atoms


class StreamError(Exception):
    pass


class DuplicateTailError(StreamError):
    pass


class StreamCycleError(StreamError):
    pass


StreamDeps = frozenset  # of (stream, tail) pairs


def dep(f: Formula) -> StreamDeps:
    out: set[tuple[str, str]] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case Atom(c) if isinstance(c.system, FlatSystem):
                for fact in c.system.facts(c):
                    if isinstance(fact, StreamCons):
                        out.add((fact.stream, fact.tail))
            case Not(a) | Next(a) | Exists(_, a):
                stack.append(a)
            case And(a, b) | Until(a, b):
                stack.extend((a, b))
    owners: dict[str, str] = {}
    for s, t in sorted(out):
        if owners.setdefault(t, s) != s:
            raise DuplicateTailError(f"{t} is the tail of both {owners[t]} and {s}")
    return frozenset(out)


def head(stream: str, deps: StreamDeps) -> str:
    parent = {t: s for s, t in deps}
    seen = {stream}
    while stream in parent:
        stream = parent[stream]
        if stream in seen:
            raise StreamCycleError(f"stream dependencies loop through {stream}")
        seen.add(stream)
    return stream


def simplify(f: Formula) -> Formula:
    deps = dep(f)

    def rewrite(a: Atom) -> Atom:
        cs = a.constraint.system
        if not isinstance(cs, FlatSystem):
            return a
        facts = cs.facts(a.constraint)
        if not any(isinstance(x, StreamCons) for x in facts):
            return a
        new = [
            StreamCur(head(x.stream, deps), x.head) if isinstance(x, StreamCons) else x for x in facts
        ]
        return Atom(cs.join_all(cs.fact(x) for x in new))

    return map_atoms(f, rewrite)
