import pytest
from hypothesis import given, settings

import generators as gen
from catlogic.corpus import list_corpus, read_text
from catlogic.dsl import (
    ParseError, tokenize, parse_theory, parse_sequent, parse_model, parse_proof, parse_items,
    format_theory, format_derivation, format_model, format_formula, format_sequent,
)
from catlogic.kernel import check_derivation
from catlogic.syntax import (
    Var, App, Rel, And, Or, Implies, Not, Exists, Forall, TOP, Sequent, Theory, Fragment,
)

BASE = "version 1;\nsort A;\nrel P : A;\nvar x : A;\n"


def _files(suffix):
    out = []
    for e in list_corpus():
        out += [f for f in e.files if f.endswith(suffix)]
    return sorted(set(out))


@pytest.mark.parametrize("path", _files(".clt"))
def test_theory_round_trip(path):
    T = parse_theory(read_text(path))
    again = parse_theory(format_theory(T))
    assert again.axioms == T.axioms and again.queries == T.queries
    assert again.signature.sorts == T.signature.sorts


@pytest.mark.parametrize("path", _files(".clp"))
def test_proof_round_trip(path):
    d = parse_proof(read_text(path))
    again = parse_proof(format_derivation(d))
    assert again.lines == d.lines and again.goals == d.goals and again.fragment == d.fragment
    assert check_derivation(again) == check_derivation(d)


@pytest.mark.parametrize("path", _files(".clm"))
def test_model_round_trip(path):
    T = parse_theory(read_text(path.replace(".clm", ".clt")))
    M = parse_model(read_text(path), T.signature)
    again = parse_model(format_model(M), T.signature)
    assert again.funs == M.funs and again.rels == M.rels
    assert {s: (it.carrier, it.step) for s, it in again.sorts.items()} == \
           {s: (it.carrier, it.step) for s, it in M.sorts.items()}


@pytest.mark.parametrize("path", _files(".clu"))
def test_items_parse(path):
    sig, items = parse_items(read_text(path))
    assert items
    if "section4" in path:
        assert all(hasattr(i, "ctx") for i in items)


@settings(max_examples=150, deadline=None)
@given(gen.seeds())
def test_random_theory_round_trip(rng):
    sig = gen.signature(rng, n_sorts=rng.randint(1, 3), n_funs=3, n_rels=3)
    pool = gen.variables(sig)
    axioms = []
    for _ in range(rng.randint(1, 4)):
        lhs = gen.formula(rng, sig, pool, depth=3)
        rhs = gen.formula(rng, sig, pool, depth=3)
        axioms.append(Sequent(lhs, gen.context_for(rng, And(lhs, rhs), pool), rhs))
    T = Theory(sig, axioms)
    for uni in (False, True):
        again = parse_theory(format_theory(T, unicode=uni))
        assert again.axioms == T.axioms


def test_precedence_and_unicode():
    T = parse_theory(BASE + "rel Q : A;\n")
    s = parse_sequent("[x:A] P(x) & Q(x) | ~P(x) => Q(x) |- top", T)
    P, Q = Rel("P", (Var("x", "A"),)), Rel("Q", (Var("x", "A"),))
    assert s.lhs == Implies(Or(And(P, Q), Not(P)), Q)
    u = parse_sequent("[x:A] P(x) ∧ Q(x) ∨ ¬P(x) ⇒ Q(x) ⊢ ⊤", T)
    assert u == s
    assert parse_sequent(format_sequent(s, unicode=True), T) == s
    q = parse_sequent("[] exists x:A. P(x) |- forall x:A. P(x)", T)
    assert isinstance(q.lhs, Exists) and isinstance(q.rhs, Forall)


def test_tokens_carry_positions():
    toks = tokenize("version 1;\n  sort A;")
    sort = [t for t in toks if t.text == "sort"][0]
    assert (sort.line, sort.col) == (2, 3)


def _error(text):
    with pytest.raises(ParseError) as e:
        parse_theory(text)
    return e.value


def test_unknown_sort_reported_with_position():
    err = _error("version 1;\nsort A;\nrel P : B;\n")
    assert err.line == 3 and err.col > 0
    assert "B" in str(err)
    assert str(err).startswith(f"{err.line}:{err.col}:")


def test_unknown_symbol_in_axiom():
    err = _error(BASE + "axiom [x] Q(x) |- P(x);\n")
    assert err.line == 5


def test_arity_and_sort_errors():
    assert _error(BASE + "axiom [x] P(x, x) |- top;\n").line == 5
    err = _error(BASE + "sort B;\nvar b : B;\naxiom [b] P(b) |- top;\n")
    assert err.line == 7


def test_version_header_required():
    assert _error("sort A;\n").line == 1
    assert "version" in str(_error("version 2;\nsort A;\n"))


def test_fragment_header_required_for_proofs():
    with pytest.raises(ParseError, match="fragment"):
        parse_proof(BASE + "goal [x] P(x) |- P(x);\n1: [x] P(x) |- P(x); id;\n")
    d = parse_proof(BASE + "fragment atomic;\ngoal [x] P(x) |- P(x);\n1: [x] P(x) |- P(x); id;\n")
    assert d.fragment == Fragment.ATOMIC and check_derivation(d) == []


def test_model_missing_step_entry():
    text = "version 1;\nsort A;\niterator A { elems a b; step a->b; }\n"
    with pytest.raises(ParseError):
        parse_model(text)


def test_context_must_cover_free_variables():
    T = parse_theory(BASE + "var y : A;\n")
    with pytest.raises(ParseError):
        parse_sequent("[x:A] P(y:A) |- top", T)


def test_terms_print_plainly():
    f = App("f", (Var("x", "A"), App("c", ())))
    assert format_formula(Rel("R", (f,))) == "R(f(x, c))"
    assert format_formula(TOP) == "top"
