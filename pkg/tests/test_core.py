import pytest
from hypothesis import given, settings, strategies as st

from slaw.core import (
    EMPTY, Compound, Const, Literal, TermError, Var, add_disequality, apply, constraints_on,
    fresh_var, is_ground, rename_apart, subsumes_args, unify, unify_args, variables, Clause,
)

VARS = [Var(n, i) for i, n in enumerate("XYZW", 1)]
ATOMS = [Const(c) for c in "abc"]


def terms(depth=2):
    leaf = st.sampled_from(VARS + ATOMS)
    if depth == 0:
        return leaf
    return st.one_of(leaf, st.builds(
        lambda f, args: Compound(f, tuple(args)),
        st.sampled_from("fg"), st.lists(terms(depth - 1), min_size=1, max_size=2)))


@settings(max_examples=300, deadline=None)
@given(terms(), terms())
def test_unify_is_symmetric(a, b):
    left, right = unify(a, b), unify(b, a)
    assert (left is None) == (right is None)
    if left is not None:
        assert apply(left, a) == apply(left, b)
        assert apply(right, a) == apply(right, b)


@settings(max_examples=300, deadline=None)
@given(terms(), terms())
def test_unifier_is_idempotent(a, b):
    s = unify(a, b)
    if s is not None:
        t = apply(s, a)
        assert apply(s, t) == t
        assert unify(t, apply(s, b), s) is s


def test_occurs_check_rejects_cyclic_binding():
    x = Var("X", 1)
    assert unify(x, Compound("f", (x,))) is None
    assert unify(x, Compound("f", (Const("a"),))) is not None


def test_variable_identity_is_by_id():
    assert Var("X", 1) == Var("other", 1)
    assert Var("X", 1) != Var("X", 2)


def test_newer_variable_points_to_older():
    old, new = Var("A", 10), Var("B", 20)
    s = unify(new, old)
    assert apply(s, new) == old
    assert apply(unify(old, new), new) == old


def test_compound_needs_arguments():
    with pytest.raises(TermError):
        Compound("f", ())
    with pytest.raises(TermError):
        unify("a", Const("a"))


def test_disequality_rejects_identical_and_ignores_non_unifiable():
    a, b = Const("a"), Const("b")
    assert add_disequality(a, a) is None
    assert add_disequality(a, b) is EMPTY


def test_disequality_blocks_later_binding():
    x = Var("X", 1)
    s = add_disequality(x, Const("a"))
    assert unify(x, Const("a"), s) is None
    s2 = unify(x, Const("b"), s)
    assert s2 is not None and s2.disequalities == ()


def test_disequality_between_variables():
    x, y = Var("X", 1), Var("Y", 2)
    s = add_disequality(x, y)
    assert unify(x, y, s) is None
    s = unify(x, Const("a"), s)
    assert unify(y, Const("a"), s) is None
    assert unify(y, Const("b"), s) is not None


def test_compound_disequality_is_narrowed():
    x = Var("X", 1)
    s = add_disequality(Compound("f", (Const("a"), x)), Compound("f", (Const("a"), Const("b"))))
    assert constraints_on(x, s) == (Const("b"),)


def test_constraints_keep_insertion_order():
    x = Var("X", 1)
    s = add_disequality(x, Const("foreign_student"))
    s = add_disequality(x, Const("specific_etnia"), s)
    assert constraints_on(x, s) == (Const("foreign_student"), Const("specific_etnia"))


def test_subsumption_respects_constraints():
    x, y = Var("X", 1), Var("Y", 2)
    a = Const("a")
    assert subsumes_args((x,), (a,))
    assert not subsumes_args((a,), (x,))
    s = add_disequality(x, a)
    assert not subsumes_args((x,), (a,), s)
    assert subsumes_args((x,), (Const("b"),), s)
    s = add_disequality(y, a, s)
    assert subsumes_args((x,), (y,), s)


def test_rename_apart_gives_fresh_variables():
    x = fresh_var("X")
    c = Clause(Literal("p", (x,)), (Literal("q", (x,)),))
    r = rename_apart(c)
    (v,) = variables(r)
    assert v != x and v.name == "X"
    assert r.head.args == r.body[0].args


def test_variables_in_first_occurrence_order():
    x, y = Var("X", 1), Var("Y", 2)
    t = Compound("f", (y, Compound("g", (x, y))))
    assert list(variables(t)) == [y, x]
    assert not is_ground(t) and is_ground(Compound("f", (Const("a"),)))


def test_literal_text_and_key():
    lit = Literal("evidence", (Const("st04"), Const("large_family")), negated=True, naf=True)
    assert str(lit) == "not -evidence(st04,large_family)"
    assert lit.key == ("evidence", 2, True)
    assert str(Literal("want", (Const("2nd ESO"),))) == "want('2nd ESO')"


def test_naf_head_rejected():
    with pytest.raises(ValueError):
        Clause(Literal("p", naf=True))


def test_fresh_vars_are_distinct():
    assert fresh_var("X") != fresh_var("X")
    assert unify_args((VARS[0],), ()) is None


def test_disequality_with_one_binding_is_narrowed_to_a_variable():
    x = fresh_var("X")
    s = add_disequality(Compound("f", (x, x)), Compound("f", (Const("b"), Const("b"))))
    assert s.disequalities == ((x, Const("b")),)
