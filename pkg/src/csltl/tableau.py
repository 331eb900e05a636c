"""Systematic one-pass tableau for csLTL.

Nodes carry a :class:`Label` (a formula set plus at most one distinguished
eventuality).  The construction is a depth-first loop over unmarked leaves:

1. inconsistent label            -> closed
2. only constraint formulas      -> open
3. label repeats an ancestor and every eventuality between the oldest such
   ancestor and here is fulfilled -> open (lasso model)
4. otherwise decompose a formula (alpha, then exists, then beta; the
   distinguished eventuality goes through the context rule R6)
5. fully elementary label        -> next stage via :func:`next_label`
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .constraints import ConstraintSystem
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Exists,
    Formula,
    Kind,
    Next,
    Not,
    Until,
    all_vars,
    canonical,
    classify,
    disj,
    free_vars,
    fresh_var,
    is_constraint_formula,
    neg,
    rename_free,
    show,
)
from .traces import ConditionalTrace, store_state


class TableauError(Exception):
    pass


class RuleError(TableauError):
    pass


class NonElementaryError(TableauError):
    pass


class BranchNotOpenError(TableauError):
    pass


class BudgetExceeded(TableauError):
    def __init__(self, tableau: "Tableau"):
        super().__init__(f"node budget of {tableau.options.node_budget} exceeded")
        self.tableau = tableau


class Rule(enum.Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"
    R4 = "R4"
    R5 = "R5"
    R6 = "R6"
    EXISTS = "Exists"
    NEXT = "NextStep"

    @property
    def edge(self) -> str:
        if self in (Rule.R1, Rule.R2):
            return "α"
        if self is Rule.EXISTS:
            return "∃"
        if self is Rule.NEXT:
            return "X"
        return "β"


class Mark(enum.Enum):
    UNMARKED = "unmarked"
    CLOSED = "closed"
    OPEN = "open"


@dataclass(frozen=True)
class Label:
    """Formula set with an optional distinguished eventuality.

    The distinguished formula is an :class:`Until` that occurs either
    directly in ``formulas`` or wrapped once in ``X`` (right after R6 it
    sits inside the next formula until the stage ends).
    """

    formulas: frozenset
    distinguished: Formula | None = None

    def __post_init__(self):
        object.__setattr__(self, "formulas", frozenset(self.formulas))
        d = self.distinguished
        if d is not None:
            if not isinstance(d, Until):
                raise TableauError(f"distinguished formula must be an until: {show(d)}")
            if d not in self.formulas and Next(d) not in self.formulas:
                raise TableauError(f"distinguished {show(d)} not in label")

    def replace(self, drop: Formula, add: Iterable[Formula], distinguished=...) -> "Label":
        formulas = (self.formulas - {drop}) | frozenset(add)
        d = self.distinguished if distinguished is ... else distinguished
        if d is not None and d not in formulas and Next(d) not in formulas:
            d = None
        return Label(formulas, d)

    def with_distinguished(self, f: Formula) -> "Label":
        return Label(self.formulas, f)

    def ordered(self) -> list[Formula]:
        return canonical(self.formulas)

    def __str__(self):
        parts = []
        for f in self.ordered():
            s = show(f)
            if f == self.distinguished or Next(self.distinguished) == f:
                s = f"[{s}]"
            parts.append(s)
        return "{" + ", ".join(parts) + "}"


def make_label(formulas: Iterable[Formula], distinguished: Formula | None = None) -> Label:
    return Label(frozenset(formulas), distinguished)


# inconsistency -----------------------------------------------------------


def is_inconsistent(label: Label, cs: ConstraintSystem) -> bool:
    fs = label.formulas
    if FALSE in fs or Not(TRUE) in fs:
        return True
    positives, negatives = [], []
    for f in fs:
        if Not(f) in fs:
            return True
        if isinstance(f, Atom):
            positives.append(f.constraint)
        elif isinstance(f, Not) and isinstance(f.arg, Atom):
            negatives.append(f.arg.constraint)
    if not positives:
        return any(cs.entails(cs.true_c(), d) for d in negatives)
    store = cs.join_all(positives)
    return cs.is_false(store) or any(cs.entails(store, d) for d in negatives)


def positive_store(formulas: Iterable[Formula], cs: ConstraintSystem):
    return cs.join_all(f.constraint for f in formulas if isinstance(f, Atom))


# rules -------------------------------------------------------------------


def alpha_rule(f: Formula) -> Rule:
    match f:
        case Not(Not(_)):
            return Rule.R1
        case And():
            return Rule.R2
    raise RuleError(f"not an alpha formula: {show(f)}")


def apply_alpha(label: Label, f: Formula) -> Label:
    if f not in label.formulas:
        raise RuleError(f"{show(f)} not in label")
    match f:
        case Not(Not(g)):
            return label.replace(f, [g])
        case And(a, b):
            return label.replace(f, [a, b])
    raise RuleError(f"not an alpha formula: {show(f)}")


def beta_rule(f: Formula, use_context: bool = False) -> Rule:
    match f:
        case Not(And()):
            return Rule.R3
        case Not(Until()):
            return Rule.R4
        case Until():
            return Rule.R6 if use_context else Rule.R5
    raise RuleError(f"not a beta formula: {show(f)}")


def context(gamma: Iterable[Formula]) -> Formula:
    """Disjunction of the negated context, with ``~~g`` written as ``g``."""
    return disj(*(neg(g) for g in canonical(gamma)))


def apply_beta(label: Label, f: Formula, use_context: bool = False) -> tuple[Label, Label]:
    if f not in label.formulas:
        raise RuleError(f"{show(f)} not in label")
    if use_context and not isinstance(f, Until):
        raise RuleError(f"context rule applies to untils only: {show(f)}")
    if use_context and label.distinguished != f:
        raise RuleError(f"context rule on non-distinguished {show(f)}")
    match f:
        case Not(And(a, b)):
            return label.replace(f, [Not(a)]), label.replace(f, [Not(b)])
        case Not(Until(a, b) as u):
            return (
                label.replace(f, [Not(a), Not(b)]),
                label.replace(f, [a, Not(b), Not(Next(u))]),
            )
        case Until(a, b) if not use_context:
            return label.replace(f, [b]), label.replace(f, [a, Not(b), Next(f)])
        case Until(a, b):
            cntx = context(label.formulas - {f})
            grown = Until(cntx if a == TRUE else And(cntx, a), b)
            return (
                label.replace(f, [b], distinguished=None),
                label.replace(f, [a, Not(b), Next(grown)], distinguished=grown),
            )
    raise RuleError(f"not a beta formula: {show(f)}")


def apply_exists(label: Label, f: Formula, fresh: str) -> Label:
    if f not in label.formulas or not isinstance(f, Exists):
        raise RuleError(f"not an existential in label: {show(f)}")
    taken = set()
    for g in label.formulas:
        taken |= all_vars(g)
    if fresh in taken:
        raise RuleError(f"variable {fresh} is not fresh for {label}")
    rest_free = set()
    for g in label.formulas - {f}:
        rest_free |= free_vars(g)
    body = rename_free(f.body, f.var, fresh) if f.var in rest_free else f.body
    return label.replace(f, [body])


def next_label(label: Label, cs: ConstraintSystem | None = None, stream_mode: bool = False) -> Label:
    current_of = getattr(cs, "stream_current", None) if stream_mode else None
    out = set()
    written: dict[str, set] = {}
    if current_of:
        for f in label.formulas:
            if isinstance(f, Next) and isinstance(f.arg, Atom):
                cur = current_of(f.arg.constraint)
                if cur:
                    written.setdefault(cur.stream, set()).add(cur.value)
    for f in label.formulas:
        kind = classify(f)
        if kind not in (Kind.CONSTRAINT, Kind.NEXT, Kind.TRUE_FALSE):
            raise NonElementaryError(f"{show(f)} is not elementary")
        match f:
            case Next(g):
                out.add(g)
            case Not(Next(g)):
                out.add(Not(g))
            case Atom(c):
                cur = current_of(c) if current_of else None
                if cur is None or not (written.get(cur.stream, set()) - {cur.value}):
                    out.add(f)
    d = label.distinguished
    if d is not None and Next(d) in label.formulas:
        return Label(frozenset(out), d)
    return Label(frozenset(out))


def select_formula(label: Label, fairness: Sequence[Formula] = ()) -> Formula | None:
    """Next formula to decompose, or ``None`` for an elementary label.

    Order: alpha, exists, the distinguished eventuality, other beta
    formulas, then eventualities.  Without a distinguished eventuality the
    least recently distinguished one (per ``fairness``, oldest first) wins.
    """
    alphas, exists, betas, evs = [], [], [], []
    for f in label.ordered():
        kind = classify(f)
        if kind is Kind.ALPHA:
            alphas.append(f)
        elif kind is Kind.EXISTS:
            exists.append(f)
        elif kind is Kind.BETA:
            (evs if isinstance(f, Until) else betas).append(f)
    if alphas:
        return alphas[0]
    if exists:
        return exists[0]
    if label.distinguished is not None and label.distinguished in label.formulas:
        return label.distinguished
    if betas:
        return betas[0]
    if not evs:
        return None
    if label.distinguished is not None:
        return evs[0]
    recency = {f: i for i, f in enumerate(fairness)}
    return min(evs, key=lambda f: recency.get(f, -1))


# tableau -----------------------------------------------------------------


@dataclass
class TableauOptions:
    stream_mode: bool = False
    node_budget: int = 10**6
    stop_at_first_open: bool = False

    def __post_init__(self):
        if self.node_budget < 1:
            raise ValueError("node_budget must be >= 1")


@dataclass
class TableauNode:
    id: int
    label: Label
    parent: int | None = None
    rule: Rule | None = None
    children: list[int] = field(default_factory=list)
    mark: Mark = Mark.UNMARKED
    depth: int = 0
    selected: Formula | None = None
    fairness: tuple = ()
    open_reason: str | None = None
    cycle_to: int | None = None


@dataclass
class Tableau:
    nodes: list[TableauNode]
    system: ConstraintSystem
    options: TableauOptions
    root: int = 0
    witness: int | None = None

    @property
    def closed(self) -> bool:
        return self.witness is None and all(n.mark is Mark.CLOSED for n in self.leaves())

    @property
    def verdict(self) -> str:
        return "closed" if self.closed else "open"

    def leaves(self) -> list[TableauNode]:
        return [n for n in self.nodes if not n.children]

    def branch(self, leaf: int) -> list[TableauNode]:
        path = []
        n: int | None = leaf
        while n is not None:
            path.append(self.nodes[n])
            n = self.nodes[n].parent
        return path[::-1]

    def branches(self) -> list[list[TableauNode]]:
        return [self.branch(n.id) for n in self.leaves()]

    def stages(self, leaf: int) -> list[list[TableauNode]]:
        out: list[list[TableauNode]] = []
        for n in self.branch(leaf):
            if not out or n.rule is Rule.NEXT:
                out.append([])
            out[-1].append(n)
        return out


def _fulfilled(segment: list[TableauNode]) -> bool:
    seen = set()
    for n in segment:
        seen |= n.label.formulas
    return all(f.right in seen for f in seen if isinstance(f, Until))


def build_tableau(
    formulas: Iterable[Formula], cs: ConstraintSystem, opts: TableauOptions | None = None
) -> Tableau:
    opts = opts or TableauOptions()
    nodes = [TableauNode(0, Label(frozenset(formulas)))]
    tab = Tableau(nodes, cs, opts)

    def child(parent: TableauNode, label: Label, rule: Rule, fairness) -> int:
        if len(nodes) >= opts.node_budget:
            raise BudgetExceeded(tab)
        n = TableauNode(len(nodes), label, parent.id, rule, depth=parent.depth + 1, fairness=fairness)
        nodes.append(n)
        parent.children.append(n.id)
        return n.id

    path: list[int] = []
    oldest: dict[Label, int] = {}
    stack: list[tuple[int, bool]] = [(0, False)]
    while stack:
        nid, leaving = stack.pop()
        node = nodes[nid]
        if leaving:
            path.pop()
            if oldest.get(node.label) == nid:
                del oldest[node.label]
            continue
        path.append(nid)
        stack.append((nid, True))
        label = node.label

        if is_inconsistent(label, cs):
            node.mark = Mark.CLOSED
            continue
        if all(is_constraint_formula(f) for f in label.formulas):
            node.mark, node.open_reason = Mark.OPEN, "constraints"
        elif label in oldest:
            anc = nodes[oldest[label]]
            if _fulfilled([nodes[i] for i in path[anc.depth :]]):
                node.mark, node.open_reason, node.cycle_to = Mark.OPEN, "cycle", anc.id
        if node.mark is Mark.OPEN:
            if tab.witness is None:
                tab.witness = nid
            if opts.stop_at_first_open:
                break
            continue
        oldest.setdefault(label, nid)

        f = select_formula(label, node.fairness)
        node.selected = f
        fair = node.fairness
        if f is None:
            kids = [child(node, next_label(label, cs, opts.stream_mode), Rule.NEXT, fair)]
        else:
            kind = classify(f)
            if kind is Kind.ALPHA:
                kids = [child(node, apply_alpha(label, f), alpha_rule(f), fair)]
            elif kind is Kind.EXISTS:
                taken = set()
                for g in label.formulas:
                    taken |= all_vars(g)
                fresh = fresh_var(f.var, taken)
                kids = [child(node, apply_exists(label, f, fresh), Rule.EXISTS, fair)]
            else:
                use_context = False
                if isinstance(f, Until):
                    if label.distinguished is None:
                        label = label.with_distinguished(f)
                        fair = tuple(e for e in fair if e != f) + (f,)
                    use_context = label.distinguished == f
                b1, b2 = apply_beta(label, f, use_context)
                rule = beta_rule(f, use_context)
                kids = [child(node, b1, rule, fair), child(node, b2, rule, fair)]
        for k in reversed(kids):
            stack.append((k, False))
    return tab


# models ------------------------------------------------------------------


def extract_model(tab: Tableau, leaf: int | None = None) -> ConditionalTrace:
    """One store per stage: the join of the stage's positive atoms."""
    leaf = tab.witness if leaf is None else leaf
    if leaf is None or tab.nodes[leaf].mark is not Mark.OPEN:
        raise BranchNotOpenError(f"node {leaf} is not an open leaf")
    cs = tab.system
    stages = tab.stages(leaf)
    stores = []
    for stage in stages:
        formulas = set()
        for n in stage:
            formulas |= n.label.formulas
        stores.append(store_state(positive_store(formulas, cs)))
    node = tab.nodes[leaf]
    if node.open_reason == "cycle":
        anc = tab.nodes[node.cycle_to]
        start = next(i for i, st in enumerate(stages) if anc in st)
        # the leaf's stage is the ancestor's stage again
        return ConditionalTrace(stores[:start], stores[start:-1])
    return ConditionalTrace(stores[:-1], stores[-1:])


def stores(stage_labels: Sequence[Iterable[Formula]], cs: ConstraintSystem) -> list:
    """``<C,∅,C>`` per stage, ``C`` the join of its constraint atoms."""
    return [store_state(positive_store(fs, cs)) for fs in stage_labels]


# decision procedures -----------------------------------------------------


@dataclass
class SatResult:
    satisfiable: bool
    tableau: Tableau
    model: ConditionalTrace | None = None


@dataclass
class ValidityResult:
    valid: bool
    tableau: Tableau
    countermodel: ConditionalTrace | None = None


def check_sat(formulas: Iterable[Formula], cs: ConstraintSystem, opts: TableauOptions | None = None) -> SatResult:
    tab = build_tableau(formulas, cs, opts)
    if tab.closed:
        return SatResult(False, tab)
    return SatResult(True, tab, extract_model(tab))


def check_valid(f: Formula, cs: ConstraintSystem, opts: TableauOptions | None = None) -> ValidityResult:
    res = check_sat([Not(f)], cs, opts)
    return ValidityResult(not res.satisfiable, res.tableau, res.model)
