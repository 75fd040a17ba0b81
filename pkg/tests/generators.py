"""Seeded random generators for signatures, terms, formulae, sequents and models."""

import random

from hypothesis import strategies as st

from catlogic.syntax import (
    Var, App, Rel, Eq, TOP, BOT, And, Or, Implies, Not, Exists, Forall, Signature,
    Sequent, Theory, canonical_context, conj,
)
from catlogic.substitution import Substitution


def signature(rng, n_sorts=2, n_funs=3, n_rels=2, max_arity=2, constants=True):
    sig = Signature()
    for i in range(n_sorts):
        sig.add_sort(f"S{i}")
    for i in range(n_funs):
        arity = rng.randint(0 if constants else 1, max_arity)
        sig.add_function(f"f{i}", [rng.choice(sig.sorts) for _ in range(arity)], rng.choice(sig.sorts))
    for i in range(n_rels):
        sig.add_relation(f"R{i}", [rng.choice(sig.sorts) for _ in range(rng.randint(0, max_arity))])
    return sig


def variables(sig, per_sort=2, prefix="v"):
    return [Var(f"{prefix}{s.lower()}{i}", s) for s in sig.sorts for i in range(per_sort)]


def term(rng, sig, sort, vars_, depth):
    """Random term of a sort, or None when nothing of that sort is reachable."""
    vs = [v for v in vars_ if v.sort == sort]
    fs = [f for f in sig.functions.values() if f.result == sort]
    if depth <= 0 or not fs or (vs and rng.random() < 0.35):
        if vs:
            return rng.choice(vs)
        fs = [f for f in fs if not f.arg_sorts] or fs
        if not fs or depth < -3:
            return None
    rng.shuffle(fs)
    for f in fs:
        args = [term(rng, sig, s, vars_, depth - 1) for s in f.arg_sorts]
        if all(a is not None for a in args):
            return App(f.name, tuple(args))
    return rng.choice(vs) if vs else None


def atom(rng, sig, vars_, depth=2):
    rels = list(sig.relations.values())
    for _ in range(10):
        if rels and rng.random() < 0.8:
            r = rng.choice(rels)
            args = [term(rng, sig, s, vars_, depth) for s in r.arg_sorts]
            if all(a is not None for a in args):
                return Rel(r.name, tuple(args))
        else:
            s = rng.choice(sig.sorts)
            a, b = term(rng, sig, s, vars_, depth), term(rng, sig, s, vars_, depth)
            if a is not None and b is not None:
                return Eq(a, b)
    return TOP


_BINARY = {"and": And, "or": Or, "imp": Implies}


def formula(rng, sig, vars_, depth=3, ops=("and", "or", "imp", "not", "exists", "forall", "top", "bot"),
            counter=None):
    """Random formula whose free variables come from vars_; bound names are fresh."""
    counter = counter if counter is not None else [0]
    if depth <= 0 or rng.random() < 0.25:
        pick = rng.random()
        if "top" in ops and pick < 0.08:
            return TOP
        if "bot" in ops and pick < 0.14:
            return BOT
        return atom(rng, sig, vars_)
    choices = [o for o in ops if o not in ("top", "bot")]
    if not choices:
        return atom(rng, sig, vars_)
    op = rng.choice(choices)
    if op in _BINARY:
        return _BINARY[op](formula(rng, sig, vars_, depth - 1, ops, counter),
                           formula(rng, sig, vars_, depth - 1, ops, counter))
    if op == "not":
        return Not(formula(rng, sig, vars_, depth - 1, ops, counter))
    counter[0] += 1
    bv = Var(f"b{counter[0]}", rng.choice(sig.sorts))
    body = formula(rng, sig, vars_ + [bv], depth - 1, ops, counter)
    return (Exists if op == "exists" else Forall)(bv, body)


def context_for(rng, e, pool, extra=1):
    """canonical variables of e plus a few extra ones from pool, shuffled."""
    ctx = list(canonical_context(e))
    spare = [v for v in pool if v not in ctx]
    rng.shuffle(spare)
    ctx += spare[:rng.randint(0, extra)]
    rng.shuffle(ctx)
    return tuple(ctx)


def substitution(rng, sig, ctx, pool, depth=2):
    """A substitution with targets ctx (all of them) and replacements over pool."""
    pairs = []
    for y in ctx:
        t = term(rng, sig, y.sort, pool, depth)
        pairs.append((t if t is not None else y, y))
    return Substitution(tuple(pairs))


HORN_OPS = ("and", "top")


def horn_formula(rng, sig, vars_, size):
    parts = [atom(rng, sig, vars_, depth=1) for _ in range(size)]
    return conj(parts) if parts else TOP


def horn_sequent(rng, sig, pool):
    lhs = horn_formula(rng, sig, pool, rng.randint(0, 3))
    rhs = horn_formula(rng, sig, pool, rng.randint(0, 3))
    return Sequent(lhs, context_for(rng, And(lhs, rhs), pool), rhs)


def propositional_signature(n):
    sig = Signature()
    for i in range(n):
        sig.add_relation(f"P{i}", [])
    return sig


def propositional_theory(rng, n_symbols=6, n_axioms=5):
    """Random theory of normal Horn sequents over nullary relations."""
    sig = propositional_signature(n_symbols)
    props = [Rel(f"P{i}") for i in range(n_symbols)]
    axioms = []
    for _ in range(n_axioms):
        k = rng.randint(0, 3)
        lhs = conj(rng.sample(props, k)) if k else TOP
        axioms.append(Sequent(lhs, (), rng.choice(props)))
    k = rng.randint(1, 3)
    goal = Sequent(conj(rng.sample(props, k)), (), rng.choice(props))
    return Theory(sig, axioms), goal


def seeds():
    return st.integers(min_value=0, max_value=2 ** 32 - 1).map(random.Random)
