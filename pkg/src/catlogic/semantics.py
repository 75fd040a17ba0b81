"""Finite iterator models (sets with an endofunction) and sequent satisfaction.

Subobjects are step-closed subsets.  The right adjoints (negation, implication,
universal quantification) are computed with the interior operator, which gives
the largest closed subset contained in its argument.
"""

import itertools
import random
from dataclasses import dataclass, field

from .syntax import (
    Var, Rel, Eq, Top, Bot, And, Or, Implies, Not, Exists, Forall,
    LogicError, TermInContext, FormulaInContext,
)
from .substitution import (
    extend, apply_term_in_context, apply_formula_in_context, FreshVariableSource,
)

PRODUCT_CAP = 10 ** 6


class ModelError(LogicError):
    pass


@dataclass
class FiniteIterator:
    carrier: tuple
    step: dict

    def __post_init__(self):
        self.carrier = tuple(self.carrier)
        for e in self.carrier:
            if e not in self.step:
                raise ModelError(f"step undefined on {e}")
            if self.step[e] not in self.step:
                raise ModelError(f"step sends {e} outside the carrier")

    @classmethod
    def identity(cls, labels):
        return cls(tuple(labels), {e: e for e in labels})

    def orbit(self, e):
        seen = []
        while e not in seen:
            seen.append(e)
            e = self.step[e]
        return seen

    def is_closed(self, subset):
        return all(self.step[e] in subset for e in subset)


@dataclass
class FiniteModel:
    signature: object
    sorts: dict = field(default_factory=dict)
    funs: dict = field(default_factory=dict)
    rels: dict = field(default_factory=dict)

    def product(self, sort_names):
        """Carrier of the product iterator, lexicographic, and its step."""
        iters = [self.sorts[s] for s in sort_names]
        size = 1
        for it in iters:
            size *= len(it.carrier)
        if size > PRODUCT_CAP:
            raise ModelError(f"product carrier of size {size} exceeds {PRODUCT_CAP}")
        carrier = list(itertools.product(*(it.carrier for it in iters)))

        def step(a):
            return tuple(it.step[c] for it, c in zip(iters, a))
        return carrier, step

    def context_product(self, ctx):
        return self.product([v.sort for v in ctx])


def validate_model(M):
    """List every violation of totality, equivariance and closure."""
    out = []
    sig = M.signature
    for s in sig.sorts:
        if s not in M.sorts:
            out.append(f"sort {s} has no carrier")
    if out:
        return out
    for name, f in sig.functions.items():
        table = M.funs.get(name)
        if table is None:
            out.append(f"function {name} has no table")
            continue
        dom, step = M.product(f.arg_sorts)
        res = M.sorts[f.result]
        for a in dom:
            if a not in table:
                out.append(f"{name} undefined at {_fmt(a)}")
            elif table[a] not in res.step:
                out.append(f"{name}{_fmt(a)} = {table[a]} is not in {f.result}")
        if any(a not in table or table[a] not in res.step for a in dom):
            continue
        for a in dom:
            if table[step(a)] != res.step[table[a]]:
                out.append(f"{name} is not equivariant at {_fmt(a)}: "
                           f"{name}(g{_fmt(a)}) = {table[step(a)]} but g({name}{_fmt(a)}) = {res.step[table[a]]}")
    for name, r in sig.relations.items():
        members = M.rels.get(name)
        if members is None:
            out.append(f"relation {name} has no extension")
            continue
        dom, step = M.product(r.arg_sorts)
        domset = set(dom)
        for a in sorted(members):
            if a not in domset:
                out.append(f"{name} contains {_fmt(a)} outside its domain")
            elif step(a) not in members:
                out.append(f"{name} is not closed at {_fmt(a)}: successor {_fmt(step(a))} missing")
    return out


def _fmt(a):
    return "(" + ", ".join(a) + ")"


def interior(subset, carrier, step):
    """Largest step-closed subset of subset."""
    cur = set(subset) & set(carrier)
    while True:
        nxt = {u for u in cur if step(u) in cur}
        if nxt == cur:
            return frozenset(cur)
        cur = nxt


def _eval(M, t, env):
    if isinstance(t, Var):
        return env[t]
    return M.funs[t.fn][tuple(_eval(M, a, env) for a in t.args)]


def interpret_term(M, ctx, t=None):
    """Map from the product carrier of ctx to the carrier of t's sort."""
    if isinstance(ctx, TermInContext):
        ctx, t = ctx.ctx, ctx.body
    carrier, _ = M.context_product(ctx)
    return {a: _eval(M, t, dict(zip(ctx, a))) for a in carrier}


def interpret_formula(M, ctx, phi=None):
    """Closed subset of the product carrier of ctx."""
    if isinstance(ctx, FormulaInContext):
        ctx, phi = ctx.ctx, ctx.body
    ctx = tuple(ctx)
    carrier, step = M.context_product(ctx)
    return _interp(M, ctx, carrier, step, phi)


def _interp(M, ctx, carrier, step, phi):
    if isinstance(phi, Top):
        return frozenset(carrier)
    if isinstance(phi, Bot):
        return frozenset()
    if isinstance(phi, Rel):
        members = M.rels[phi.name]
        return frozenset(a for a in carrier
                         if tuple(_eval(M, t, dict(zip(ctx, a))) for t in phi.args) in members)
    if isinstance(phi, Eq):
        return frozenset(a for a in carrier
                         if _eval(M, phi.left, dict(zip(ctx, a))) == _eval(M, phi.right, dict(zip(ctx, a))))
    if isinstance(phi, And):
        return _interp(M, ctx, carrier, step, phi.left) & _interp(M, ctx, carrier, step, phi.right)
    if isinstance(phi, Or):
        return _interp(M, ctx, carrier, step, phi.left) | _interp(M, ctx, carrier, step, phi.right)
    if isinstance(phi, Implies):
        s = _interp(M, ctx, carrier, step, phi.left)
        t = _interp(M, ctx, carrier, step, phi.right)
        return interior((set(carrier) - s) | t, carrier, step)
    if isinstance(phi, Not):
        s = _interp(M, ctx, carrier, step, phi.body)
        return interior(set(carrier) - s, carrier, step)
    if isinstance(phi, (Exists, Forall)):
        wide = ctx + (phi.var,)
        wcarrier, wstep = M.context_product(wide)
        body = _interp(M, wide, wcarrier, wstep, phi.body)
        if isinstance(phi, Exists):
            return frozenset(a[:-1] for a in body)
        fiber = M.sorts[phi.var.sort].carrier
        full = {a for a in carrier if all(a + (b,) in body for b in fiber)}
        return interior(full, carrier, step)
    raise ModelError(f"cannot interpret {phi!r}")


def satisfies(M, seq):
    lhs = interpret_formula(M, seq.ctx, seq.lhs)
    rhs = interpret_formula(M, seq.ctx, seq.rhs)
    return lhs <= rhs


def satisfies_theory(M, theory):
    return all(satisfies(M, ax) for ax in theory.axioms)


def check_substitution_properties(M, sample, theta, fresh=None):
    """Compare the syntactic and the compositional readings of sample.theta.

    Returns None when they agree, otherwise the first disagreeing element.
    """
    full = extend(theta, sample.ctx)
    images = full.mapping()
    if isinstance(sample, TermInContext):
        syn = apply_term_in_context(sample, theta)
    else:
        syn = apply_formula_in_context(sample, theta, fresh or FreshVariableSource())
    xs = syn.ctx
    carrier, _ = M.context_product(xs)
    if isinstance(sample, TermInContext):
        left = interpret_term(M, syn)
        inner = interpret_term(M, sample)
    else:
        left = interpret_formula(M, syn)
        inner = interpret_formula(M, sample)
    for a in carrier:
        env = dict(zip(xs, a))
        b = tuple(_eval(M, images[z], env) for z in sample.ctx)
        if isinstance(sample, TermInContext):
            if left[a] != inner[b]:
                return a
        elif (a in left) != (b in inner):
            return a
    return None


# ---------------------------------------------------------------- random

def random_iterator(rng, size, prefix="e"):
    """Random iterator with at least one fixed point (size >= 1)."""
    labels = [f"{prefix}{i}" for i in range(size)]
    step = {e: rng.choice(labels) for e in labels}
    if size and not any(step[e] == e for e in labels):
        e = rng.choice(labels)
        step[e] = e
    return FiniteIterator(tuple(labels), step)


def _cycle_points(carrier, step):
    on = set()
    for e in carrier:
        x = e
        for _ in range(len(carrier)):
            x = step(x)
        on.add(x)
    # every point reached after |carrier| steps lies on a cycle; close under step
    frontier = list(on)
    while frontier:
        x = step(frontier.pop())
        if x not in on:
            on.add(x)
            frontier.append(x)
    return on


def random_equivariant(rng, dom, dstep, target, tries=20):
    """Random map f with f(dstep(a)) = target.step(f(a)) for all a in dom."""
    tstep = target.step
    tcar = list(target.carrier)
    cycles = _cycle_points(dom, dstep)
    for _ in range(tries):
        f = {}
        ok = True
        for a in dom:
            if a not in cycles or a in f:
                continue
            cyc = [a]
            x = dstep(a)
            while x != a:
                cyc.append(x)
                x = dstep(x)
            n = len(cyc)
            starts = [y for y in tcar if _iterate(tstep, y, n) == y]
            y = rng.choice(starts)
            for c in cyc:
                f[c] = y
                y = tstep[y]
        pending = [a for a in dom if a not in f]
        while pending and ok:
            progress = False
            rest = []
            for a in pending:
                nxt = dstep(a)
                if nxt not in f:
                    rest.append(a)
                    continue
                pre = [y for y in tcar if tstep[y] == f[nxt]]
                if not pre:
                    ok = False
                    break
                f[a] = rng.choice(pre)
                progress = True
            pending = rest
            if not progress and pending:
                ok = False
        if ok:
            return f
    fixed = [y for y in tcar if tstep[y] == y]
    if not fixed:
        raise ModelError("no equivariant map found")
    y = rng.choice(fixed)
    return {a: y for a in dom}


def _iterate(step, y, n):
    for _ in range(n):
        y = step[y]
    return y


def random_closed_subset(rng, carrier, step, density=0.3):
    seed = [a for a in carrier if rng.random() < density]
    out = set()
    for a in seed:
        while a not in out:
            out.add(a)
            a = step(a)
    return frozenset(out)


def random_model(signature, rng=None, max_size=4, min_size=1):
    rng = rng or random.Random()
    M = FiniteModel(signature)
    for s in signature.sorts:
        M.sorts[s] = random_iterator(rng, rng.randint(min_size, max_size), prefix=f"{s.lower()}")
    for name, f in signature.functions.items():
        dom, step = M.product(f.arg_sorts)
        M.funs[name] = random_equivariant(rng, dom, step, M.sorts[f.result])
    for name, r in signature.relations.items():
        dom, step = M.product(r.arg_sorts)
        M.rels[name] = random_closed_subset(rng, dom, step, rng.choice([0.1, 0.3, 0.6]))
    return M


def all_closed_subsets(carrier, step):
    """Every step-closed subset, by brute force over the power set."""
    carrier = list(carrier)
    out = []
    for bits in range(1 << len(carrier)):
        s = frozenset(c for i, c in enumerate(carrier) if bits >> i & 1)
        if all(step(c) in s for c in s):
            out.append(s)
    return out
