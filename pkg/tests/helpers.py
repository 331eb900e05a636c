"""Shared strategies and small utilities for the test suite."""

from hypothesis import strategies as st

from csltl.formula import TRUE, And, Atom, Exists, Next, Not, TrueF, Until, always, eventually, or_

EXAMPLE_PHI = "((`y=1` & X `x=5` & X F `y=1`) | (~`y=1` & X `y=1`))"
EXAMPLE_PHI_ALWAYS = "((`y=1` & X `x=5` & X G `y=1`) | (~`y=1` & X `y=1`))"


def formulas(atoms, depth=2, size=4):
    """Quantifier-free formulas over ``atoms`` with temporal depth <= depth."""
    leaf = st.sampled_from(atoms).map(Atom) | st.just(TRUE)
    if size == 0:
        return leaf
    same = formulas(atoms, depth, size - 1)
    parts = [
        leaf,
        same.map(Not),
        st.tuples(same, same).map(lambda p: And(*p)),
        st.tuples(same, same).map(lambda p: or_(*p)),
    ]
    if depth > 0:
        lower = formulas(atoms, depth - 1, size - 1)
        parts += [
            lower.map(Next),
            lower.map(eventually),
            lower.map(always),
            st.tuples(lower, lower).map(lambda p: Until(*p)),
        ]
    return st.one_of(*parts)


def strip_nn(f):
    """Deep removal of double negations, used to compare against the worked tableaux."""
    match f:
        case Not(Not(a)):
            return strip_nn(a)
        case Not(Next(a)):
            return Next(strip_nn(Not(a)))
        case Not(a):
            return Not(strip_nn(a))
        case Next(a):
            return Next(strip_nn(a))
        case And(a, b):
            return And(strip_nn(a), strip_nn(b))
        case Until(a, b):
            return Until(strip_nn(a), strip_nn(b))
        case Exists(x, a):
            return Exists(x, strip_nn(a))
    return f


def normalize(formulas_):
    return frozenset(strip_nn(f) for f in formulas_) - {TRUE}


def is_true(f):
    return isinstance(f, TrueF)
