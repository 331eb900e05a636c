from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csltl.constraints import FlatSystem
from csltl.formula import FALSE, TRUE, And, Atom, Exists, Next, Not, Until, always, eventually, or_
from csltl.oracle import (
    EnumerationTooLarge,
    ExistsUnsupported,
    NoWitnessWithinBound,
    OracleBounds,
    SatWitness,
    candidate_stores,
    count_traces,
    enumerate_traces,
    evaluate,
    oracle_sat,
    strip_exists,
)
from csltl.traces import CondStore, ConditionalTrace, End, Stutt, check_consistent, check_monotone, store_state

from helpers import formulas

CS = FlatSystem()
Y1 = CS.eq("y", 1)
y1 = Atom(Y1)
T = CS.true_c()


def lasso(prefix, cycle):
    return ConditionalTrace(tuple(store_state(c) for c in prefix), tuple(store_state(c) for c in cycle))


def test_eventually_on_constant_trace():
    assert evaluate(lasso([], [Y1]), eventually(y1), CS)


def test_always_fails_when_first_store_is_true():
    assert not evaluate(lasso([T], [Y1]), always(y1), CS)


def test_atom_clause_reads_positive_condition():
    state = CondStore(Y1, frozenset(), CS.join(Y1, CS.eq("x", 5)))
    assert evaluate(ConditionalTrace((state,), (store_state(Y1),)), y1, CS)
    state = CondStore(T, frozenset(), Y1)  # the store knows y=1 but the condition does not
    assert not evaluate(ConditionalTrace((state,), (store_state(Y1),)), y1, CS)


def test_until_and_next():
    a, b = CS.eq("a", 1), CS.eq("b", 1)
    ab = CS.join(a, b)
    t = lasso([a, a], [ab])
    assert evaluate(t, Until(Atom(a), Atom(b)), CS)
    assert evaluate(t, Next(Next(Atom(b))), CS)
    assert not evaluate(t, Next(Atom(b)), CS)
    assert not evaluate(lasso([a], [a]), Until(Atom(a), Atom(b)), CS)


def test_stutter_clause():
    x5 = CS.eq("x", 5)
    stutt = Stutt(frozenset([x5]))
    # y=1 does not entail x=5 and the rest of the trace entails y=1
    assert evaluate(ConditionalTrace((stutt,), (store_state(Y1),)), y1, CS)
    assert not evaluate(ConditionalTrace((stutt,), (store_state(T),)), y1, CS)
    # a constraint entailing a forbidden one is false on the stutter state
    assert not evaluate(ConditionalTrace((stutt,), (store_state(x5),)), Atom(x5), CS)
    # a cycle made only of stuttering states is a greatest fixpoint
    assert evaluate(ConditionalTrace((), (stutt,)), y1, CS)


def test_finite_trace_replicates_last_store():
    finite = ConditionalTrace((store_state(T), store_state(Y1), End()))
    assert finite.lasso(CS) == lasso([T, Y1], [Y1])
    assert ConditionalTrace((End(),)).lasso(CS) == lasso([], [T])
    for f in [always(y1), eventually(y1), Next(y1), Not(y1)]:
        assert evaluate(finite, f, CS) == evaluate(lasso([T, Y1], [Y1]), f, CS)


def test_exists_unsupported():
    with pytest.raises(ExistsUnsupported):
        evaluate(lasso([], [T]), Exists("x", y1), CS)


def test_strip_exists_renames_on_clash():
    x1, x5 = Atom(CS.eq("x", 1)), Atom(CS.eq("x", 5))
    out = strip_exists([Exists("x", x5), x1])
    assert out == [Atom(CS.eq("x'", 5)), x1]
    assert strip_exists([Exists("x", x5)]) == [x5]


def _independent_lasso_count(cs, atoms, max_prefix):
    """Brute force over raw store sequences, independent of the enumerator."""
    stores = [cs.join_all(s) for k in range(len(atoms) + 1) for s in product(atoms, repeat=k)]
    stores = [s for s in dict.fromkeys(stores) if not cs.is_false(s)]
    seen = set()
    for n in range(max_prefix + 1):
        for seq in product(stores, repeat=n + 1):
            if all(cs.entails(b, a) for a, b in zip(seq, seq[1:])):
                seen.add(seq)
    return len(seen)


def test_enumeration_count_single_atom():
    a = CS.prop("a")
    # prefixes: empty (2 cycle stores), [true] (2), [a] (1)
    assert count_traces(CS, [a], 1, 1) == 5
    assert count_traces(CS, [a], 1, 1) == _independent_lasso_count(CS, [a], 1)


@pytest.mark.parametrize("prefix", [0, 1, 2, 3])
def test_enumeration_count_matches_brute_force(prefix):
    atoms = [CS.eq("x", 1), CS.eq("x", 2), CS.prop("p")]
    assert count_traces(CS, atoms, prefix, 1) == _independent_lasso_count(CS, atoms, prefix)


def test_enumeration_without_atoms_is_all_true():
    traces = list(enumerate_traces(CS, [], 2, 1))
    assert traces and all(set(t.stores()) == {T} for t in traces)


def test_enumerated_traces_are_monotone_and_consistent(four):
    atoms = four.all_constraints()[2:]
    for t in enumerate_traces(four, atoms, 3, 1):
        assert check_monotone(t, four) and check_consistent(t, four)


def test_candidate_stores_skip_false(four):
    names = {c.token for c in candidate_stores(four, four.all_constraints()[2:])}
    assert names == {"true", "a", "b", "c", "d"}


def test_explosion_guard():
    with pytest.raises(EnumerationTooLarge):
        list(enumerate_traces(CS, [CS.prop(p) for p in "abcd"], 4, 1, limit=100))


def test_oracle_sat_examples():
    assert isinstance(oracle_sat([And(Not(y1), Next(y1))], CS, [Y1], OracleBounds(2, 1)), SatWitness)
    assert isinstance(oracle_sat([FALSE], CS, [Y1]), NoWitnessWithinBound)
    assert isinstance(oracle_sat([TRUE], CS, []), SatWitness)


def test_oracle_refutes_closed_example_conjunction():
    x5 = Atom(CS.eq("x", 5))
    phi = or_(And(y1, And(Next(x5), Next(eventually(y1)))), And(Not(y1), Next(y1)))
    fs = strip_exists([And(Exists("x", phi), always(Not(y1)))])
    assert isinstance(oracle_sat(fs, CS, [Y1, CS.eq("x", 5)]), NoWitnessWithinBound)


@settings(max_examples=60)
@given(formulas([CS.eq("a", 1), CS.eq("b", 1)], depth=2), st.integers(0, 2))
def test_replication_rule(f, k):
    stores = [T, CS.eq("a", 1), CS.join(CS.eq("a", 1), CS.eq("b", 1))][: k + 1]
    finite = ConditionalTrace(tuple(store_state(c) for c in stores) + (End(),))
    assert evaluate(finite, f, CS) == evaluate(lasso(stores, [stores[-1]]), f, CS)


@settings(max_examples=60)
@given(formulas([CS.eq("a", 1), CS.eq("b", 1)], depth=2))
def test_unrolling_the_cycle_changes_nothing(f):
    a, ab = CS.eq("a", 1), CS.join(CS.eq("a", 1), CS.eq("b", 1))
    assert evaluate(lasso([T, a], [ab]), f, CS) == evaluate(lasso([T, a, ab], [ab, ab]), f, CS)
