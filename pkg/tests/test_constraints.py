import pytest
from hypothesis import given
from hypothesis import strategies as st

from csltl.constraints import (
    ClosureViolationError,
    ConstraintError,
    FlatSystem,
    ForeignConstraintError,
    UnknownAtomError,
    build_finite_system,
    load_table,
    parse_table,
)

from conftest import FIXTURES

FOUR = load_table(FIXTURES / "four.table")


def test_flat_entailment_is_fact_inclusion(flat):
    x1, y1 = flat.eq("x", 1), flat.eq("y", 1)
    both = flat.join(x1, y1)
    assert flat.entails(both, x1) and flat.entails(both, y1)
    assert not flat.entails(x1, both)
    assert flat.entails(x1, flat.true_c())


def test_flat_conflicting_values_are_false(flat):
    assert flat.is_false(flat.join(flat.eq("x", 1), flat.eq("x", 2)))
    assert flat.is_false(flat.join(flat.cons("S", "a", "T"), flat.cons("S", "b", "U")))


def test_flat_current_values_never_conflict(flat):
    assert not flat.is_false(flat.join(flat.cur("S", "a"), flat.cur("S", "b")))


def test_false_entails_everything(flat):
    assert flat.entails(flat.false_c(), flat.eq("x", 3))


def test_parse_atom_forms(flat):
    assert flat.parse_atom("x = 5") == flat.eq("x", 5)
    assert flat.parse_atom("S=[near|T]") == flat.cons("S", "near", "T")
    assert flat.parse_atom("S~=a") == flat.cur("S", "a")
    assert flat.parse_atom("busy") == flat.prop("busy")
    assert flat.parse_atom("x=1 & y=2") == flat.join(flat.eq("x", 1), flat.eq("y", 2))
    with pytest.raises(UnknownAtomError):
        flat.parse_atom("x < 3")


def test_show_round_trips(flat):
    for text in ["x=5", "S=[a|T]", "S~=a", "busy", "true", "false", "x=1 & y=2"]:
        c = flat.parse_atom(text)
        assert flat.parse_atom(flat.show(c)) == c


def test_rename_and_vars(flat):
    c = flat.cons("S", "a", "T")
    assert flat.vars(c) == {"S", "T"}
    assert flat.rename(c, "T", "U") == flat.cons("S", "a", "U")


def test_foreign_constraints_rejected(flat):
    other = FlatSystem()
    with pytest.raises(ForeignConstraintError):
        flat.entails(flat.eq("x", 1), other.eq("x", 1))


def test_finite_table_closure(four):
    a, b, c, d = (four.atom(n) for n in "abcd")
    assert four.entails(d, a) and four.entails(d, b) and four.entails(c, a)
    assert four.join(a, b) == d
    assert four.join(a, c) == c
    assert four.is_false(four.join(b, c))
    assert four.entails(four.false_c(), d)
    assert four.entails(a, four.true_c())


def test_finite_table_transitive():
    cs = build_finite_system(["p", "q", "r"], [("p", "q"), ("q", "r")])
    assert cs.entails(cs.atom("p"), cs.atom("r"))


def test_finite_table_bad_join_reports_triple():
    with pytest.raises(ClosureViolationError) as err:
        build_finite_system(["p", "q"], [], {("p", "q"): "p"})
    assert err.value.triple == ("p", "q", "p")


def test_finite_table_missing_lub():
    # p and q have two incomparable upper bounds and no least one
    with pytest.raises(ClosureViolationError):
        build_finite_system(["p", "q", "r", "s"], [("r", "p"), ("r", "q"), ("s", "p"), ("s", "q")])


def test_parse_table_errors():
    with pytest.raises(ConstraintError):
        parse_table("atom a\nentails a zz\n")
    with pytest.raises(ConstraintError):
        parse_table("bogus line\n")


def test_unknown_table_atom(four):
    with pytest.raises(UnknownAtomError):
        four.parse_atom("zz")


@given(st.lists(st.sampled_from(["a", "b", "c", "d", "true"]), max_size=4))
def test_table_join_is_upper_bound(names):
    cs = FOUR
    cs_atoms = [cs.make(n) for n in names]
    j = cs.join_all(cs_atoms)
    assert all(cs.entails(j, c) for c in cs_atoms)


@given(st.lists(st.tuples(st.sampled_from("xyz"), st.integers(0, 2)), max_size=4))
def test_flat_join_commutative_and_upper(pairs):
    cs = FlatSystem()
    cons = [cs.eq(v, k) for v, k in pairs]
    j = cs.join_all(cons)
    assert j == cs.join_all(reversed(cons))
    assert all(cs.entails(j, c) for c in cons)
