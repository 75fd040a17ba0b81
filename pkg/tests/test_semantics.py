import itertools
import random

import pytest
from hypothesis import given, settings

import generators as gen
from catlogic.corpus import read_text, proof_corpus, list_corpus
from catlogic.dsl import parse_theory, parse_model
from catlogic.semantics import (
    FiniteIterator, FiniteModel, validate_model, interior, interpret_term, interpret_formula,
    satisfies, satisfies_theory, check_substitution_properties, random_model, all_closed_subsets,
)
from catlogic.substitution import FreshVariableSource
from catlogic.syntax import (
    Var, App, Rel, TOP, BOT, Implies, Not, Exists, Forall, Sequent, Signature,
    TermInContext, FormulaInContext, Fragment,
)


def load(theory, model):
    T = parse_theory(read_text(theory))
    return T, parse_model(read_text(model), T.signature)


def points_lines():
    return load("points-lines.clt", "points-lines.clm")


def test_points_lines_model_validates_and_satisfies():
    T, M = points_lines()
    assert validate_model(M) == []
    assert satisfies(M, T.axioms[0])
    ax = T.axioms[0]
    full, _ = M.context_product(ax.ctx)
    assert interpret_formula(M, ax.ctx, ax.rhs) == frozenset(full)


def test_points_lines_term_interpretation():
    T, M = points_lines()
    px, py = Var("x", "Points"), Var("y", "Points")
    fxy = interpret_term(M, TermInContext((px, py), App("f", (px, py))))
    assert fxy[("x", "y")] == "o1"
    first = interpret_term(M, TermInContext((px, py), px))
    assert all(first[a] == a[0] for a in first)
    diag = interpret_term(M, TermInContext((px,), App("f", (px, px))))
    assert all(diag[(p,)] == M.funs["f"][(p, p)] for p in M.sorts["Points"].carrier)


def test_perturbations_are_reported():
    T, M = points_lines()
    M.funs["f"] = dict(M.funs["f"])
    M.funs["f"][("w", "w")] = "o2"
    problems = validate_model(M)
    assert len(problems) == 1 and "(w, w)" in problems[0]
    # dropping a pair nothing steps into keeps I closed
    T, M = points_lines()
    M.rels["I"] = set(M.rels["I"]) - {("w", "e2")}
    assert validate_model(M) == []
    # dropping (y, star) breaks closure at each of its predecessors
    T, M = points_lines()
    M.rels["I"] = set(M.rels["I"]) - {("y", "star")}
    problems = validate_model(M)
    assert len(problems) == 4 and all("not closed" in p for p in problems)
    assert {p.split(" at ")[1].split(":")[0] for p in problems} == {"(x, e1)", "(x, o1)", "(z, e1)", "(z, star)"}


def test_counterexample_model():
    T, M = load("counterexample-section5.clt", "counterexample-section5.clm")
    wide, narrow = T.axioms[0], T.queries[0]
    assert interpret_formula(M, wide.ctx, wide.lhs) == frozenset()
    assert satisfies(M, wide) is True
    assert satisfies(M, narrow) is False


def test_top_and_bottom():
    T, M = points_lines()
    px = Var("x", "Points")
    assert interpret_formula(M, (px,), TOP) == frozenset((p,) for p in M.sorts["Points"].carrier)
    assert interpret_formula(M, (px,), BOT) == frozenset()
    assert satisfies(M, Sequent(Rel("I", (px, App("f", (px, px)))), (px,), TOP))


def test_missing_step_entry_rejected():
    with pytest.raises(Exception):
        FiniteIterator(("a", "b"), {"a": "b"})


# ------------------------------------------------------------ Heyting

def _all_iterators(n):
    labels = tuple(range(n))
    for image in itertools.product(labels, repeat=n):
        yield labels, dict(zip(labels, image))


def _greatest_closed_below(subset, closed):
    best = frozenset()
    for c in closed:
        if c <= subset and len(c) > len(best):
            best = c
    return best


def heyting_exhaustive(max_size):
    """Interior against brute force and the implication adjunction, on every iterator."""
    checked = 0
    for n in range(1, max_size + 1):
        for carrier, step in _all_iterators(n):
            st = step.__getitem__
            closed = all_closed_subsets(carrier, st)
            for bits in range(1 << n):
                u = frozenset(c for c in carrier if bits >> c & 1)
                got = interior(u, carrier, st)
                assert got == _greatest_closed_below(u, closed)
                assert got in closed
            whole = set(carrier)
            for b in closed:
                for c in closed:
                    imp = interior((whole - b) | c, carrier, st)
                    for a in closed:
                        assert ((a & b) <= c) == (a <= imp)
                        checked += 1
    return checked


def test_heyting_small_carriers():
    assert heyting_exhaustive(4) > 0


def test_identity_steps_give_boolean_connectives():
    sig = Signature()
    sig.add_sort("A")
    sig.add_relation("P", ["A"])
    sig.add_relation("Q", ["A"])
    M = FiniteModel(sig, {"A": FiniteIterator.identity("abcd")}, {},
                    {"P": {("a",), ("b",)}, "Q": {("b",), ("c",)}})
    x = Var("x", "A")
    P, Q = Rel("P", (x,)), Rel("Q", (x,))
    every = {(e,) for e in "abcd"}
    assert interpret_formula(M, (x,), Not(P)) == frozenset(every - M.rels["P"])
    assert interpret_formula(M, (x,), Implies(P, Q)) == frozenset((every - M.rels["P"]) | M.rels["Q"])


# ------------------------------------------------------ quantifier adjoints

def _iterators_up_to(n):
    """One representative per isomorphism class of iterators with 1..n elements."""
    reps = []
    for k in range(1, n + 1):
        seen = set()
        for carrier, step in _all_iterators(k):
            key = min(tuple(p.index(step[p[i]]) for i in range(k)) for p in itertools.permutations(carrier))
            if key not in seen:
                seen.add(key)
                reps.append(FiniteIterator(tuple(f"e{i}" for i in carrier),
                                           {f"e{i}": f"e{step[i]}" for i in carrier}))
    return reps


def _adjoint_check(X, Y, rng=None, samples=None):
    sig = Signature()
    sig.add_sort("X")
    sig.add_sort("Y")
    sig.add_relation("R", ["X", "Y"])
    sig.add_relation("P", ["X"])
    M = FiniteModel(sig, {"X": X, "Y": Y}, {}, {"R": set(), "P": set()})
    x, y = Var("x", "X"), Var("y", "Y")
    prod, pstep = M.product(["X", "Y"])
    base, bstep = M.product(["X"])
    Ss = all_closed_subsets(prod, pstep) if len(prod) <= 12 else None
    if Ss is None:
        from catlogic.semantics import random_closed_subset
        Ss = [random_closed_subset(rng, prod, pstep, rng.random()) for _ in range(samples)]
    Ts = all_closed_subsets(base, bstep)
    R = Rel("R", (x, y))
    for S in Ss:
        M.rels["R"] = S
        ex = interpret_formula(M, (x,), Exists(y, R))
        fa = interpret_formula(M, (x,), Forall(y, R))
        for T in Ts:
            pull = {a for a in prod if a[:1] in T}
            assert (ex <= T) == (S <= pull)
            assert (pull <= S) == (T <= fa)


def test_quantifier_adjunctions_exhaustive_small():
    reps = _iterators_up_to(3)
    for X in reps:
        for Y in reps:
            _adjoint_check(X, Y)


def test_quantifier_adjunctions_size_four_sampled():
    rng = random.Random(11)
    reps = _iterators_up_to(4)
    for _ in range(25):
        _adjoint_check(rng.choice(reps), rng.choice(reps), rng, samples=40)


# ------------------------------------------------------------ substitution

def substitution_triple(rng):
    sig = gen.signature(rng, n_sorts=2, n_funs=3, n_rels=2, max_arity=2)
    pool = gen.variables(sig, per_sort=2)
    M = random_model(sig, rng, max_size=5)
    if rng.random() < 0.5:
        s = rng.choice(sig.sorts)
        t = gen.term(rng, sig, s, pool, 3) or Var("q", s)
        sample = TermInContext(gen.context_for(rng, t, pool), t)
    else:
        phi = gen.formula(rng, sig, pool, depth=2)
        sample = FormulaInContext(gen.context_for(rng, phi, pool), phi)
    ctx = sample.ctx
    theta = gen.substitution(rng, sig, rng.sample(ctx, rng.randint(0, len(ctx))), pool[:3], depth=2)
    return M, sample, theta


def _small_enough(M, sample, theta):
    from catlogic.substitution import extend
    from catlogic.syntax import canonical_context
    ctx = canonical_context(extend(theta, sample.ctx).replacements)
    size = 1
    for v in tuple(ctx) + tuple(sample.ctx):
        size *= len(M.sorts[v.sort].carrier)
    return size <= 20000


@settings(max_examples=150, deadline=None)
@given(gen.seeds())
def test_substitution_square_commutes(rng):
    M, sample, theta = substitution_triple(rng)
    if _small_enough(M, sample, theta):
        assert check_substitution_properties(M, sample, theta, FreshVariableSource()) is None


# ------------------------------------------------------------ soundness

def _models_satisfying(theory, rng, tries=60, identity=False):
    for _ in range(tries):
        M = random_model(theory.signature, rng, max_size=3)
        if identity:
            for s, it in M.sorts.items():
                M.sorts[s] = FiniteIterator.identity(it.carrier)
            M = _reinterpret_identity(M, rng)
        if satisfies_theory(M, theory):
            yield M


def _reinterpret_identity(M, rng):
    """With identity steps every map is equivariant and every subset closed."""
    for name, f in M.signature.functions.items():
        dom, _ = M.product(f.arg_sorts)
        M.funs[name] = {a: rng.choice(M.sorts[f.result].carrier) for a in dom}
    for name, r in M.signature.relations.items():
        dom, _ = M.product(r.arg_sorts)
        M.rels[name] = {a for a in dom if rng.random() < 0.5}
    return M


def test_corpus_conclusions_hold_in_models_of_their_axioms():
    rng = random.Random(3)
    proofs = proof_corpus()
    checked = 0
    for e in list_corpus():
        if e.kind != "proof":
            continue
        d = proofs[e.name]
        classical = d.fragment == Fragment.CLASSICAL
        for M in _models_satisfying(d.theory, rng, identity=classical):
            for goal in d.goals:
                assert satisfies(M, goal), (e.name, goal)
                checked += 1
    assert checked > 100
