from slaw import corpus
from slaw.compiler import compile_program, dump_duals, olon_clauses
from slaw.parser import parse_program


def compiled(text):
    return compile_program(parse_program(text))


def test_dual_of_facts_with_constants():
    p = compiled("q(b). q(c).")
    dual = p.duals[("q", 1, False)]
    assert len(dual.clauses) == 2
    alts = [[str(g) for g in dc.alternatives[0]] for dc in dual.clauses]
    assert alts == [[f"{dual.params[0]} \\= b"], [f"{dual.params[0]} \\= c"]]


def test_dual_negates_one_goal_at_a_time():
    p = compiled("p(X) :- q(X), not r(X).")
    (dc,) = p.duals[("p", 1, False)].clauses
    text = [[str(g) for g in alt] for alt in dc.alternatives]
    assert text == [["not q(P0)"], ["q(P0)", "r(P0)"]]
    assert dc.forall_vars == ()


def test_body_only_variables_are_universal():
    p = compiled("p(X) :- q(X, Y), not r(Y).")
    (dc,) = p.duals[("p", 1, False)].clauses
    assert [v.name for v in dc.forall_vars] == ["Y"]


def test_repeated_head_variable_becomes_equality():
    p = compiled("same(X, X).")
    (dc,) = p.duals[("same", 2, False)].clauses
    (alt,) = dc.alternatives
    assert alt[0].predicate == "\\="


def test_fact_with_only_fresh_variables_has_unrefutable_dual():
    p = compiled("any(X).")
    (dc,) = p.duals[("any", 1, False)].clauses
    assert dc.alternatives == ()


def test_undefined_predicate_dual_always_holds():
    p = compiled("p :- not ghost.")
    assert p.dual_for(("ghost", 0, False)).clauses == ()
    assert p.dual_for(("never_seen", 2, False)).clauses == ()


def test_denials_for_both_polarities():
    p = compiled("evidence(a, k). -evidence(b, k). other(a).")
    assert [str(d) for d in p.denials] == [":- evidence(X0,X1), -evidence(X0,X1)."]


def test_olon_detection():
    src = parse_program("p :- not p. a :- not b. b :- not a. c :- not d. d :- c.")
    heads = [str(c.head) for c in olon_clauses(src.clauses)]
    assert heads == ["p", "c", "d"]
    assert len(compile_program(src).checks) == 3


def test_corpus_has_no_odd_loops():
    assert compile_program(corpus.students_program()).checks == ()


def test_dump_duals_parses_back():
    p = compile_program(corpus.students_program())
    text = dump_duals(p)
    again = parse_program(text)
    assert again.clauses
    heads = {c.head.predicate for c in again.clauses}
    assert "not obtain_place" in heads
    assert any(b.predicate == "forall" for c in again.clauses for b in c.body)
    assert "% denial :- evidence(Var0,Var1), -evidence(Var0,Var1)." in text


def test_compile_is_deterministic():
    src = corpus.students_program()
    assert dump_duals(compile_program(src)) == dump_duals(compile_program(src))
