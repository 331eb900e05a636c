"""Conditional traces: the models csLTL formulas are evaluated on."""

from __future__ import annotations

from dataclasses import dataclass

from .constraints import Constraint, ConstraintSystem


class TraceError(Exception):
    pass


@dataclass(frozen=True)
class CondStore:
    """``<(positive, negative), store>``."""

    positive: Constraint
    negative: frozenset = frozenset()
    store: Constraint | None = None

    def __post_init__(self):
        if self.store is None:
            object.__setattr__(self, "store", self.positive)

    def __str__(self):
        neg = "{" + ", ".join(sorted(str(c) for c in self.negative)) + "}" if self.negative else "∅"
        return f"<{self.positive},{neg},{self.store}>"


@dataclass(frozen=True)
class Stutt:
    """Stuttering state ``stutt(C)``: none of ``C`` may be entailed."""

    negative: frozenset

    def __str__(self):
        return "stutt{" + ", ".join(sorted(str(c) for c in self.negative)) + "}"


@dataclass(frozen=True)
class End:
    def __str__(self):
        return "⊠"


State = CondStore | Stutt | End


def store_state(c: Constraint) -> CondStore:
    return CondStore(c, frozenset(), c)


@dataclass(frozen=True)
class ConditionalTrace:
    """A finite trace (``cycle`` empty) or an ultimately periodic one.

    Finite traces may end with an explicit :class:`End`; either way they are
    read as repeating their last store forever (see :meth:`lasso`).
    """

    prefix: tuple = ()
    cycle: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if any(isinstance(s, End) for s in self.cycle):
            raise TraceError("End cannot occur inside a cycle")
        for i, s in enumerate(self.prefix):
            if isinstance(s, End) and i != len(self.prefix) - 1:
                raise TraceError("End must be the last state")

    @property
    def is_lasso(self) -> bool:
        return bool(self.cycle)

    def states(self) -> tuple:
        return self.prefix + self.cycle

    def lasso(self, system: ConstraintSystem) -> "ConditionalTrace":
        """Infinite form: finite traces replicate their last store."""
        if self.cycle:
            return self
        body = tuple(s for s in self.prefix if not isinstance(s, End))
        last = next((s.store for s in reversed(body) if isinstance(s, CondStore)), None)
        if last is None:
            last = system.true_c()
        return ConditionalTrace(body, (store_state(last),))

    def stores(self) -> list[Constraint]:
        return [s.store for s in self.states() if isinstance(s, CondStore)]

    def __str__(self):
        head = "·".join(str(s) for s in self.prefix)
        if not self.cycle:
            return head or "ε"
        loop = "(" + "·".join(str(s) for s in self.cycle) + ")^ω"
        return f"{head}·{loop}" if head else loop


LassoTrace = ConditionalTrace


def check_monotone(trace: ConditionalTrace, system: ConstraintSystem) -> bool:
    """Stores only grow, also across the cycle seam."""
    stores = trace.stores()
    if trace.cycle:
        stores = stores + [s.store for s in trace.cycle if isinstance(s, CondStore)][:1]
    return all(system.entails(later, earlier) for earlier, later in zip(stores, stores[1:]))


def check_consistent(trace: ConditionalTrace, system: ConstraintSystem) -> bool:
    for s in trace.states():
        if isinstance(s, CondStore):
            if system.is_false(s.store):
                return False
            if any(system.entails(s.positive, d) for d in s.negative):
                return False
            if any(system.entails(s.store, d) for d in s.negative):
                return False
    return True


def trace_to_json(trace: ConditionalTrace) -> dict:
    def state(s):
        if isinstance(s, CondStore):
            return {
                "positive": str(s.positive),
                "negative": sorted(str(c) for c in s.negative),
                "store": str(s.store),
            }
        if isinstance(s, Stutt):
            return {"stutt": sorted(str(c) for c in s.negative)}
        return {"end": True}

    return {"prefix": [state(s) for s in trace.prefix], "cycle": [state(s) for s in trace.cycle]}
