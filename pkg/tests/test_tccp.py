import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csltl.constraints import FlatSystem
from csltl.formula import TRUE, And, Atom, Exists, Next, Not, eventually, implies, or_, subformulas
from csltl.oracle import SatWitness, oracle_sat, relevant_atoms
from csltl.parsing import parse_formula, parse_program, parse_spec
from csltl.tableau import build_tableau
from csltl.tccp import (
    Call,
    Choice,
    Hide,
    Interpretation,
    Now,
    Par,
    Program,
    Skip,
    SpecUsesExistsError,
    Tell,
    UnboundProcessError,
    diagnose,
    faa,
    fdd,
    instantiate,
    uncovered_hint,
)

from helpers import EXAMPLE_PHI

CS = FlatSystem()
y1 = Atom(CS.eq("y", 1))


def spec_of(text):
    return parse_spec(text, CS)


@pytest.fixture
def example(fx):
    return parse_program((fx / "simple.tccp").read_text(), CS)


def test_faa_example(example):
    sem = fdd(example, spec_of("p(y) |= F `y=1`."))
    assert sem.formula(("p", 1)) == parse_formula(f"E x. {EXAMPLE_PHI}", CS)


def test_faa_base_cases():
    c = CS.eq("c", 1)
    assert faa(Skip(), Interpretation()) == TRUE
    assert faa(Tell(c), Interpretation()) == Next(Atom(c))


def test_faa_choice_literal():
    c, d = CS.prop("c"), CS.prop("d")
    got = faa(Choice(((c, Skip()), (d, Tell(c)))), Interpretation())
    expected = or_(And(Atom(c), Next(TRUE)), or_(And(Atom(d), Next(Next(Atom(c)))), And(Not(Atom(c)), Not(Atom(d)))))
    assert got == expected


def test_faa_unbound_call():
    with pytest.raises(UnboundProcessError):
        faa(Call("q", ("y",)), Interpretation())


def test_call_renames_parameters():
    interp = spec_of("p(y) |= F `y=1`.")
    assert faa(Call("p", ("z",)), interp) == Next(eventually(Atom(CS.eq("z", 1))))


def test_instantiate_swaps_simultaneously():
    f = And(Atom(CS.eq("x", 1)), Atom(CS.eq("y", 2)))
    assert instantiate(f, ("x", "y"), ("y", "x")) == And(Atom(CS.eq("y", 1)), Atom(CS.eq("x", 2)))


def test_instantiate_avoids_capture():
    f = Exists("z", And(Atom(CS.eq("z", 1)), Atom(CS.eq("y", 2))))
    got = instantiate(f, ("y",), ("z",))
    assert got == Exists("z'", And(Atom(CS.eq("z'", 1)), Atom(CS.eq("z", 2))))


def test_fdd_two_bodies_is_disjunction():
    prog = parse_program("p(y) :- tell `y=1`.\np(z) :- tell `z=2`.", CS)
    sem = fdd(prog, spec_of("p(y) |= true."))
    assert sem.formula(("p", 1)) == or_(Next(y1), Next(Atom(CS.eq("y", 2))))


def test_diagnose_examples(example):
    (ok,) = diagnose(example, spec_of("p(y) |= F `y=1`."), CS)
    assert ok.verdict == "Correct" and ok.tableau.closed
    (warn,) = diagnose(example, spec_of("p(y) |= G `y=1`."), CS)
    assert warn.verdict == "Warning" and warn.countermodel is not None


def test_diagnose_skip_true():
    prog = parse_program("p(y) :- skip.", CS)
    (res,) = diagnose(prog, spec_of("p(y) |= true."), CS)
    assert res.correct


def test_diagnose_empty_program():
    assert diagnose(Program(), Interpretation(), CS) == []


def test_diagnose_rejects_existential_spec(example):
    spec = Interpretation()
    spec.define("p", ("y",), Exists("x", y1))
    with pytest.raises(SpecUsesExistsError):
        diagnose(example, spec, CS)


def test_diagnose_needs_total_spec(example):
    with pytest.raises(UnboundProcessError):
        diagnose(example, Interpretation(), CS)


def test_correct_means_closed_tableau(example):
    spec = spec_of("p(y) |= F `y=1`.")
    (res,) = diagnose(example, spec, CS)
    assert build_tableau([Not(res.implication)], CS).closed == res.correct


def test_uncovered_hint_example(example):
    spec = spec_of("p(y) |= F `y=1`.")
    assert uncovered_hint(example, spec, CS) == {("p", 1): False}
    # independent confirmation: the bounded oracle finds a trace with F y=1 but no behavior of p
    body = parse_formula(EXAMPLE_PHI, CS)
    neg = [Not(implies(eventually(y1), body))]
    assert isinstance(oracle_sat(neg, CS, relevant_atoms(neg)), SatWitness)


def test_uncovered_hint_false_spec(example):
    assert uncovered_hint(example, spec_of("p(y) |= false."), CS) == {("p", 1): True}


def test_uncovered_hint_true_spec():
    prog = parse_program("q() :- tell `c`.", CS)
    assert uncovered_hint(prog, spec_of("q() |= true."), CS) == {("q", 0): False}
    neg = [Not(implies(TRUE, Next(Atom(CS.prop("c")))))]
    assert isinstance(oracle_sat(neg, CS, relevant_atoms(neg)), SatWitness)


# structural properties of the abstract semantics

CONSTRAINTS = [CS.eq("y", 1), CS.eq("x", 5), CS.prop("c")]
constraint = st.sampled_from(CONSTRAINTS)


def agents(size=3):
    base = st.one_of(st.just(Skip()), constraint.map(Tell), st.just(Call("p", ("y",))))
    if size == 0:
        return base
    sub = agents(size - 1)
    return st.one_of(
        base,
        st.tuples(sub, sub).map(lambda p: Par(*p)),
        st.tuples(constraint, sub, sub).map(lambda t: Now(*t)),
        st.tuples(st.sampled_from("xz"), sub).map(lambda t: Hide(*t)),
        st.lists(st.tuples(constraint, sub), min_size=1, max_size=2).map(lambda bs: Choice(tuple(bs))),
    )


INTERP = spec_of("p(y) |= G `y=1`.")


def count_hides(a):
    match a:
        case Hide(_, b):
            return 1 + count_hides(b)
        case Par(l, r) | Now(_, l, r):
            return count_hides(l) + count_hides(r)
        case Choice(bs):
            return sum(count_hides(b) for _, b in bs)
    return 0


@settings(max_examples=100)
@given(agents(), agents())
def test_faa_compositional(p, q):
    assert faa(Par(p, q), INTERP) == And(faa(p, INTERP), faa(q, INTERP))
    assert faa(Hide("x", p), INTERP) == Exists("x", faa(p, INTERP))
    c = CONSTRAINTS[0]
    assert faa(Now(c, p, q), INTERP) == or_(And(Atom(c), faa(p, INTERP)), And(Not(Atom(c)), faa(q, INTERP)))


@settings(max_examples=100)
@given(agents())
def test_exists_only_at_hide(p):
    n = sum(1 for g in subformulas(faa(p, INTERP)) if isinstance(g, Exists))
    assert n == count_hides(p)
