"""Simultaneous, capture-avoiding substitution."""

import re
from dataclasses import dataclass

from .syntax import (
    App, Var, Rel, Eq, Not, BINARY, QUANTIFIERS, LogicError,
    all_variables, canonical_context, FormulaInContext, TermInContext,
)

_SUFFIX = re.compile(r"_\d+$")


@dataclass(frozen=True)
class Substitution:
    """Ordered pairs (replacement, target); targets are distinct."""
    pairs: tuple = ()

    def __post_init__(self):
        pairs = tuple((s, y) for s, y in self.pairs)
        object.__setattr__(self, "pairs", pairs)
        ys = [y for _, y in pairs]
        if len(set(ys)) != len(ys):
            raise LogicError("substitution targets must be distinct")
        for s, y in pairs:
            if not isinstance(y, Var):
                raise LogicError(f"substitution target {y!r} is not a variable")

    @classmethod
    def of(cls, replacements, targets):
        return cls(tuple(zip(replacements, targets)))

    @property
    def targets(self):
        return tuple(y for _, y in self.pairs)

    @property
    def replacements(self):
        return tuple(s for s, _ in self.pairs)

    def mapping(self):
        return {y: s for s, y in self.pairs}

    def nontrivial(self):
        """Mapping without identity pairs."""
        return {y: s for s, y in self.pairs if s != y}

    def restrict(self, ctx):
        """Pairs whose target lies in ctx, keeping this substitution's order."""
        keep = set(ctx)
        return Substitution(tuple(p for p in self.pairs if p[1] in keep))

    def __len__(self):
        return len(self.pairs)

    def __str__(self):
        shown = [(s, y) for s, y in self.pairs if s != y]
        if not shown:
            return "[]"
        return "[" + ", ".join(str(s) for s, _ in shown) + " / " + ", ".join(y.name for _, y in shown) + "]"


IDENTITY = Substitution()


def identity(ctx):
    return Substitution(tuple((v, v) for v in ctx))


class FreshVariableSource:
    """Emits variables named <base>_<n> that avoid every name seen so far."""

    def __init__(self, avoid=()):
        self.used = set()
        self.next = {}      # names below next[base] are all taken
        self.avoid(avoid)

    def avoid(self, items):
        for v in items:
            self.used.add(v.name if isinstance(v, Var) else v)

    def fresh(self, like):
        base = _SUFFIX.sub("", like.name)
        n = self.next.get(base, 1)
        while f"{base}_{n}" in self.used:
            n += 1
        name = f"{base}_{n}"
        self.used.add(name)
        self.next[base] = n + 1
        return Var(name, like.sort)


def extend(theta, ctx):
    """theta^ctx: theta plus identity pairs for untargeted context variables."""
    have = set(theta.targets)
    return Substitution(theta.pairs + tuple((z, z) for z in ctx if z not in have))


def over_context(theta, ctx):
    """theta^ctx listed in ctx order; theta itself when it targets a variable outside ctx."""
    if not set(theta.targets) <= set(ctx):
        return theta
    m = theta.mapping()
    return Substitution(tuple((m.get(z, z), z) for z in ctx))


def apply_term(t, theta):
    return _apply_term(t, theta.mapping())


def _apply_term(t, m):
    if isinstance(t, Var):
        return m.get(t, t)
    if not t.args:
        return t
    return App(t.fn, tuple(_apply_term(a, m) for a in t.args))


def apply_formula(phi, theta, fresh=None):
    """phi with theta applied simultaneously; every bound variable is renamed."""
    if fresh is None:
        fresh = FreshVariableSource()
    fresh.avoid(all_variables(phi))
    fresh.avoid(theta.targets)
    fresh.avoid(all_variables(theta.replacements))
    return _apply_formula(phi, theta.mapping(), fresh)


def _apply_formula(phi, m, fresh):
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(_apply_term(a, m) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(_apply_term(phi.left, m), _apply_term(phi.right, m))
    if isinstance(phi, BINARY):
        return type(phi)(_apply_formula(phi.left, m, fresh), _apply_formula(phi.right, m, fresh))
    if isinstance(phi, Not):
        return Not(_apply_formula(phi.body, m, fresh))
    if isinstance(phi, QUANTIFIERS):
        u = fresh.fresh(phi.var)
        inner = dict(m)
        inner[phi.var] = u
        return type(phi)(u, _apply_formula(phi.body, inner, fresh))
    return phi


def apply_term_in_context(zt, theta):
    full = extend(theta, zt.ctx)
    return TermInContext(canonical_context(full.replacements), apply_term(zt.body, full))


def apply_formula_in_context(zphi, theta, fresh=None):
    full = extend(theta, zphi.ctx)
    ctx = canonical_context(full.replacements)
    return FormulaInContext(ctx, apply_formula(zphi.body, full, fresh))


def compose(theta, theta2):
    """The substitution t -> (t theta) theta2, flattened.

    Inert pairs come first, then the active ones; each group keeps the order
    of theta followed by the new targets of theta2.
    """
    if not theta2.pairs:
        return theta
    if not theta.pairs:
        return theta2
    m2 = theta2.mapping()
    pairs = [(_apply_term(s, m2), y) for s, y in theta.pairs]
    have = set(theta.targets)
    pairs += [(s, y) for s, y in theta2.pairs if y not in have]
    inert = [p for p in pairs if p[0] == p[1]]
    active = [p for p in pairs if p[0] != p[1]]
    return Substitution(tuple(inert + active))


def same_mapping(a, b):
    """Equal as maps on variables, ignoring identity pairs and order."""
    return a.nontrivial() == b.nontrivial()
