"""Unification of term and formula lists, bare and in context.

All four entry points run the same worklist machine.  A step that produces a
substitution applies it to every pending pair (in context when the pairs carry
contexts) and composes it onto the accumulator.  Bound variables met in the
quantifier case are replaced by rigid proxies that may never be bound.
"""

from dataclasses import dataclass, field
from enum import Enum

from .syntax import (
    App, Var, Rel, Eq, Top, Bot, Not, BINARY, LogicError,
    TermInContext, FormulaInContext, all_variables,
    concat_contexts, term_vars, sort_of,
)
from .substitution import (
    Substitution, IDENTITY, FreshVariableSource, apply_term, apply_formula,
    apply_term_in_context, apply_formula_in_context, compose, identity,
)

DEFAULT_FUEL = 200_000


class Reason(Enum):
    LengthMismatch = "LengthMismatch"
    SortClash = "SortClash"
    SymbolClash = "SymbolClash"
    OccursCheck = "OccursCheck"
    QuantifierSortClash = "QuantifierSortClash"

    def __str__(self):
        return self.value


class FuelExhausted(LogicError):
    pass


@dataclass
class Unifier:
    theta: Substitution
    trace: list = field(default_factory=list)
    ok = True

    def __bool__(self):
        return True


@dataclass
class NoUnifier:
    reason: Reason
    detail: str = ""
    trace: list = field(default_factory=list)
    ok = False
    theta = None

    def __bool__(self):
        return False


class _Fail(Exception):
    def __init__(self, reason, detail):
        self.reason, self.detail = reason, detail


class _Machine:
    def __init__(self, pairs, theta, sig, in_context, fuel, fresh):
        self.pairs = list(pairs)
        self.theta = theta if theta is not None else IDENTITY
        self.sig = sig
        self.in_context = in_context
        self.fuel = fuel
        self.rigid = set()
        self.trace = []
        self.fresh = fresh or FreshVariableSource()
        for a, b in self.pairs:
            self.fresh.avoid(_vars_of(a) | _vars_of(b))
        self.fresh.avoid(all_variables(self.theta.replacements) | set(self.theta.targets))

    def run(self):
        try:
            while self.pairs:
                self.fuel -= 1
                if self.fuel < 0:
                    raise FuelExhausted("unification fuel exhausted")
                a, b = self.pairs.pop(0)
                self.step(a, b)
        except _Fail as f:
            self.trace.append(f"fail: {f.reason} ({f.detail})")
            return NoUnifier(f.reason, f.detail, self.trace)
        return Unifier(self.theta, self.trace)

    # helpers -------------------------------------------------------------

    def body(self, e):
        return e.body if self.in_context else e

    def ctx(self, e):
        return e.ctx if self.in_context else ()

    def wrap(self, ctx, body):
        if not self.in_context:
            return body
        if isinstance(body, (Var, App)):
            return TermInContext(ctx, body)
        return FormulaInContext(ctx, body)

    def sort(self, t):
        if isinstance(t, Var):
            return t.sort
        if self.sig is None or t.fn not in self.sig.functions:
            return None
        return sort_of(self.sig, t)

    def apply(self, e, theta):
        if self.in_context:
            if isinstance(e, TermInContext):
                return apply_term_in_context(e, theta)
            return apply_formula_in_context(e, theta, self.fresh)
        if isinstance(e, (Var, App)):
            return apply_term(e, theta)
        return apply_formula(e, theta, self.fresh)

    def emit(self, label, theta1, head=None):
        """Record theta1, apply it to the pending pairs and the accumulator."""
        self.trace.append(f"{label}: {theta1}")
        self.pairs = [(self.apply(a, theta1), self.apply(b, theta1)) for a, b in self.pairs]
        if head is not None:
            self.pairs.insert(0, head)
        self.theta = compose(self.theta, theta1)

    # one step --------------------------------------------------------------

    def step(self, a, b):
        x, y = self.body(a), self.body(b)
        if isinstance(x, (Var, App)) and isinstance(y, (Var, App)):
            return self.step_terms(a, b, x, y)
        if isinstance(x, (Var, App)) or isinstance(y, (Var, App)):
            raise _Fail(Reason.SymbolClash, "term paired with formula")
        return self.step_formulae(a, b, x, y)

    def step_terms(self, a, b, x, y):
        sx, sy = self.sort(x), self.sort(y)
        if sx is not None and sy is not None and sx != sy:
            raise _Fail(Reason.SortClash, f"{x} : {sx} vs {y} : {sy}")
        union = concat_contexts(self.ctx(a), self.ctx(b))
        if isinstance(x, Var):
            if x == y:
                if self.in_context:
                    z = tuple(v for v in union if v != x)
                    self.emit("case A", Substitution.of(z + (x,), z + (x,)))
                else:
                    self.trace.append(f"equal variables {x}")
                return
            if x in self.rigid:
                raise _Fail(Reason.SymbolClash, f"bound variable {x} cannot be bound to {y}")
            if isinstance(y, Var):
                if y in self.rigid:
                    raise _Fail(Reason.SymbolClash, f"{x} cannot be bound to bound variable {y}")
                if self.in_context:
                    z = tuple(v for v in union if v not in (x, y))
                    return self.emit("case B", Substitution.of(z + (y,), z + (x,)))
                return self.emit("bind", Substitution(((y, x),)))
            fv = term_vars(y)
            if x in fv:
                raise _Fail(Reason.OccursCheck, f"{x} occurs in {y}")
            if any(v in self.rigid for v in fv):
                raise _Fail(Reason.SymbolClash, f"{y} mentions a bound variable")
            if self.in_context:
                z = tuple(v for v in union if v != x and v not in fv)
                return self.emit("case C", Substitution.of(z + (y,), z + (x,)))
            return self.emit("bind", Substitution(((y, x),)))
        if isinstance(y, Var):
            self.trace.append("swap" if not self.in_context else "case D")
            self.pairs.insert(0, (b, a))
            return
        if x.fn != y.fn or len(x.args) != len(y.args):
            raise _Fail(Reason.SymbolClash, f"{x.fn} vs {y.fn}")
        if not x.args:
            if self.in_context:
                self.emit("constant", identity(union))
            return
        self.trace.append(f"case E: {x.fn}" if self.in_context else f"decompose {x.fn}")
        cx, cy = self.ctx(a), self.ctx(b)
        new = [(self.wrap(cx, s), self.wrap(cy, t)) for s, t in zip(x.args, y.args)]
        self.pairs[:0] = new

    def step_formulae(self, a, b, x, y):
        cx, cy = self.ctx(a), self.ctx(b)
        if type(x) is not type(y):
            raise _Fail(Reason.SymbolClash, f"{type(x).__name__} vs {type(y).__name__}")
        if isinstance(x, Rel):
            if x.name != y.name or len(x.args) != len(y.args):
                raise _Fail(Reason.SymbolClash, f"{x.name} vs {y.name}")
            if not x.args:
                if self.in_context:
                    self.emit("proposition", identity(concat_contexts(cx, cy)))
                return
            self.pairs[:0] = [(self.wrap(cx, s), self.wrap(cy, t)) for s, t in zip(x.args, y.args)]
        elif isinstance(x, Eq):
            self.pairs[:0] = [(self.wrap(cx, x.left), self.wrap(cy, y.left)),
                              (self.wrap(cx, x.right), self.wrap(cy, y.right))]
        elif isinstance(x, (Top, Bot)):
            if self.in_context:
                self.emit("constant formula", identity(concat_contexts(cx, cy)))
        elif isinstance(x, BINARY):
            self.pairs[:0] = [(self.wrap(cx, x.left), self.wrap(cy, y.left)),
                              (self.wrap(cx, x.right), self.wrap(cy, y.right))]
        elif isinstance(x, Not):
            self.pairs.insert(0, (self.wrap(cx, x.body), self.wrap(cy, y.body)))
        else:
            self.step_quantifier(cx, cy, x, y)

    def step_quantifier(self, cx, cy, x, y):
        bx, by = x.var, y.var
        if bx.sort != by.sort:
            raise _Fail(Reason.QuantifierSortClash, f"{bx.name}:{bx.sort} vs {by.name}:{by.sort}")
        u1 = self.fresh.fresh(bx)
        u2 = self.fresh.fresh(bx)
        u3 = u2 if bx == by else self.fresh.fresh(bx)
        self.rigid.add(u1)
        left_body = apply_formula(x.body, Substitution(((u1, bx),)), self.fresh)
        right_body = apply_formula(y.body, Substitution(((u1, by),)), self.fresh)
        if self.in_context:
            left = apply_formula_in_context(FormulaInContext(cx + (u1,), left_body),
                                            Substitution(((u3, by),)), self.fresh)
            right = apply_formula_in_context(FormulaInContext(cy + (u1,), right_body),
                                             Substitution(((u2, bx),)), self.fresh)
        else:
            left = apply_formula(left_body, Substitution(((u3, by),)), self.fresh)
            right = apply_formula(right_body, Substitution(((u2, bx),)), self.fresh)
        rest = Substitution(((u2, bx),)) if bx == by else Substitution(((u2, bx), (u3, by)))
        self.emit(f"quantifier (proxy {u1})", rest, head=(left, right))


def _vars_of(e):
    if isinstance(e, (TermInContext, FormulaInContext)):
        return set(e.ctx) | all_variables(e.body)
    return set(all_variables(e))


def _run(as_, bs, theta, signature, in_context, fuel, fresh):
    as_, bs = list(as_), list(bs)
    if len(as_) != len(bs):
        return NoUnifier(Reason.LengthMismatch, f"{len(as_)} vs {len(bs)} items")
    return _Machine(zip(as_, bs), theta, signature, in_context, fuel, fresh).run()


def unify_terms(as_, bs, theta=None, signature=None, fuel=DEFAULT_FUEL):
    return _run(as_, bs, theta, signature, False, fuel, None)


def unify_formulae(as_, bs, theta=None, signature=None, fuel=DEFAULT_FUEL, fresh=None):
    return _run(as_, bs, theta, signature, False, fuel, fresh)


def unify_terms_in_context(as_, bs, theta=None, signature=None, fuel=DEFAULT_FUEL):
    return _run(as_, bs, theta, signature, True, fuel, None)


def unify_formulae_in_context(as_, bs, theta=None, signature=None, fuel=DEFAULT_FUEL, fresh=None):
    return _run(as_, bs, theta, signature, True, fuel, fresh)


def rename_apart(phi, avoid, fresh=None):
    """phi with every bound variable renamed away from avoid."""
    fresh = fresh or FreshVariableSource()
    fresh.avoid(avoid)
    return apply_formula(phi, IDENTITY, fresh)


__all__ = [
    "Reason", "Unifier", "NoUnifier", "FuelExhausted", "unify_terms", "unify_formulae",
    "unify_terms_in_context", "unify_formulae_in_context", "rename_apart",
]
