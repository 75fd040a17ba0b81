"""Forward chaining over Horn theories and closed-sort detection.

Both chainers build kernel-checkable derivations as they go.  Queue facts are
sequents whose left side is either the goal's premises or top; facts with top
on the left are moved under the goal's premises with a Top step and a Cut.
"""

import itertools
import unicodedata
from collections import deque
from dataclasses import dataclass, field

from .kernel import Derivation, Line, Rule, _and_paths
from .normal_form import NormalHornSequent, NotNormalForm
from .substitution import (
    Substitution, FreshVariableSource, apply_formula, apply_formula_in_context,
    compose, over_context,
)
from .syntax import (
    Var, App, Rel, Top, And, Fragment, LogicError, Sequent, FormulaInContext,
    UnknownSort, all_variables, canonical_context, conjuncts, suitable,
)
from .unification import unify_formulae_in_context


class NotPropositional(LogicError):
    pass


class BudgetExhausted(LogicError):
    pass


@dataclass(frozen=True)
class IterationBudget:
    passes: int = 64
    queue: int = 4096


@dataclass(frozen=True)
class FactInContext:
    ctx: tuple
    atom: object

    def __post_init__(self):
        if not suitable(self.ctx, self.atom):
            raise LogicError(f"context unsuitable for {self.atom}")

    def __str__(self):
        from .dsl import format_formula
        names = ", ".join(v.name for v in self.ctx)
        body = format_formula(self.atom)
        return f"{names}. {body}" if names else body


@dataclass
class TraceRow:
    queue: tuple            # (item, already popped) pairs, oldest first
    popped: object = None
    counts: tuple = ()      # 1-based axiom indices whose counter moved
    lines: tuple = ()       # derivation lines emitted in this row


@dataclass
class ChainResult:
    derivable: bool
    trace: list = field(default_factory=list)
    derivation: Derivation = None

    def __bool__(self):
        return self.derivable


# --------------------------------------------------------- line bookkeeping

class _Lines:
    def __init__(self):
        self.lines = []
        self._tops = {}

    def add(self, seq, rule, premises=()):
        ln = Line(len(self.lines) + 1, seq, rule, tuple(premises))
        self.lines.append(ln)
        return ln.number

    def seq(self, n):
        return self.lines[n - 1].sequent

    def top(self, lhs, ctx):
        key = (lhs, ctx)
        if key not in self._tops:
            self._tops[key] = self.add(Sequent(lhs, ctx, Top()), Rule("Top"))
        return self._tops[key]

    def project(self, whole, part, ctx):
        """Line for whole |- part, where part is built from conjuncts of whole."""
        if part == whole:
            return self.add(Sequent(whole, ctx, part), Rule("ID"))
        sides = _and_paths(whole, part)
        if sides:
            return self.add(Sequent(whole, ctx, part), Rule("AndE0" if min(sides) == 0 else "AndE1"))
        if isinstance(part, Top):
            return self.top(whole, ctx)
        if isinstance(part, And):
            a = self.project(whole, part.left, ctx)
            b = self.project(whole, part.right, ctx)
            return self.add(Sequent(whole, ctx, part), Rule("AndI"), (a, b))
        raise LogicError(f"{part} is not a conjunct of {whole}")

    def cut(self, a, b):
        p, q = self.seq(a), self.seq(b)
        return self.add(Sequent(p.lhs, p.ctx, q.rhs), Rule("Cut"), (a, b))

    def sub(self, n, theta, ctx=None):
        """Apply theta to line n; the result lives in ctx, or the image context."""
        p = self.seq(n)
        full = over_context(theta.restrict(p.ctx), p.ctx)
        if ctx is None:
            ctx = canonical_context(full.replacements)
        if ctx == p.ctx and all(s == y for s, y in full.pairs):
            return n
        fresh = FreshVariableSource(ctx)
        c = Sequent(apply_formula(p.lhs, full, fresh), ctx, apply_formula(p.rhs, full, fresh))
        return self.add(c, Rule("Sub", theta=full), (n,))


def _derivation(lines, goal, theory, name):
    return Derivation(Fragment.HORN, list(lines.lines), [goal], name, theory)


# ----------------------------------------------------- propositional chaining

def _normal(seq, what):
    try:
        return NormalHornSequent.from_sequent(seq)
    except NotNormalForm as e:
        raise NotNormalForm(f"{what} is not in normal form: {e}") from None


def _propositional(seq, what):
    if seq.ctx:
        raise NotPropositional(f"{what} has a non-empty context")
    for part in (seq.lhs, seq.rhs):
        for a in conjuncts(part):
            if not (isinstance(a, Rel) and not a.args):
                raise NotPropositional(f"{what} mentions {a}, which is not a proposition symbol")


def propositional_forward_chaining(theory, goal):
    """Queue-and-counter chaining; the trace mirrors one row per popped symbol."""
    for i, ax in enumerate(theory.axioms, 1):
        _propositional(ax, f"axiom {i}")
        _normal(ax, f"axiom {i}")
    _propositional(goal, "the goal")
    _normal(goal, "the goal")

    L, S = goal.lhs, goal.rhs
    ctx = ()
    out = _Lines()
    trace = []
    if isinstance(S, Top):
        out.top(L, ctx)
        trace.append(TraceRow((), None, (), tuple(out.lines)))
        return ChainResult(True, trace, _derivation(out, goal, theory, "chain"))

    rules = []
    for i, ax in enumerate(theory.axioms, 1):
        if isinstance(ax.rhs, Top):
            continue
        rules.append((i, ax, list(dict.fromkeys(conjuncts(ax.lhs)))))
    count = {i: len(ps) for i, _, ps in rules}

    derived = {}            # symbol -> line of L |- symbol
    state = {"H": L, "LH": None}
    pending = []

    def derive(i, ax):
        H = state["H"]
        if isinstance(ax.lhs, Top):
            c = out.cut(out.top(L, ctx), out.add(ax, Rule("Hypothesis", index=i)))
            return c
        if ax.lhs == H:
            hyp = out.add(ax, Rule("Hypothesis", index=i))
            return hyp if H == L else out.cut(state["LH"], hyp)
        proj = out.project(H, ax.lhs, ctx)
        c = out.cut(proj, out.add(ax, Rule("Hypothesis", index=i)))
        return c if H == L else out.cut(state["LH"], c)

    def extend():
        for q in pending:
            if state["LH"] is None:
                state["LH"] = out.add(Sequent(L, ctx, L), Rule("ID"))
            state["LH"] = out.add(Sequent(L, ctx, And(state["H"], q)), Rule("AndI"),
                                  (state["LH"], derived[q]))
            state["H"] = And(state["H"], q)
        pending.clear()

    history = list(dict.fromkeys(conjuncts(L)))
    for i, ax, ps in rules:
        if not ps:
            history.append(ax.rhs)
            if ax.rhs not in derived:
                derived[ax.rhs] = derive(i, ax)
                pending.append(ax.rhs)
    queue = deque(history)
    popped = 0
    inferred = set()
    found = False
    while queue:
        U = queue.popleft()
        popped += 1
        snap = tuple((u, k < popped) for k, u in enumerate(history))
        start = len(out.lines)
        counts = []
        if U == S:
            if U not in derived:
                derived[U] = out.project(L, U, ctx)
            trace.append(TraceRow(snap, U, (), tuple(out.lines[start:])))
            found = True
            break
        extend()
        if U not in inferred:
            inferred.add(U)
            for i, ax, ps in rules:
                if U in ps:
                    count[i] -= 1
                    counts.append(i)
                    if count[i] == 0:
                        queue.append(ax.rhs)
                        history.append(ax.rhs)
                        if ax.rhs not in derived:
                            derived[ax.rhs] = derive(i, ax)
                            pending.append(ax.rhs)
        trace.append(TraceRow(snap, U, tuple(counts), tuple(out.lines[start:])))
    if not found:
        return ChainResult(False, trace, None)
    return ChainResult(True, trace, _derivation(out, goal, theory, "chain"))


def format_trace(result, unicode=False):
    """The trace as an aligned text table, one block per row."""
    from .dsl import format_sequent, format_rule, format_formula

    def show(u):
        return str(u) if isinstance(u, FactInContext) else format_formula(u, unicode)

    def mark(text):
        return "".join(ch + "\u0332" for ch in text) if unicode else f"_{text}_"

    amp = " ∧ " if unicode else " & "
    rows = []
    for r in result.trace:
        q = amp.join(mark(show(u)) if done else show(u) for u, done in r.queue)
        u = "" if r.popped is None else show(r.popped)
        body = [f"{ln.number}. {format_sequent(ln.sequent, unicode)}  {format_rule(ln)}" for ln in r.lines]
        rows.append((q, u, ",".join(map(str, r.counts)), body or [""]))
    heads = ("Q history", "U", "Count")

    def width(text):
        return sum(not unicodedata.combining(ch) for ch in text)

    def pad(text, n):
        return text + " " * (n - width(text))

    w = [max([len(h)] + [width(r[k]) for r in rows]) for k, h in enumerate(heads)]
    out = ["  ".join(pad(h, w[k]) for k, h in enumerate(heads)) + "  Derivation"]
    for q, u, cnt, body in rows:
        out.append(f"{pad(q, w[0])}  {pad(u, w[1])}  {pad(cnt, w[2])}  {body[0]}".rstrip())
        out += [f"{'':<{w[0]}}  {'':<{w[1]}}  {'':<{w[2]}}  {b}" for b in body[1:]]
    return "\n".join(out) + "\n"


# ------------------------------------------------------------- closed sorts

def sort_closed(signature, sort):
    """Is there a closed term of the given sort?"""
    if sort not in signature.sorts:
        raise UnknownSort(f"unknown sort {sort}")
    funs = list(signature.functions.values())
    queue = deque(f.result for f in funs if not f.arg_sorts)
    count = {f.name: len(set(f.arg_sorts)) for f in funs}
    closed = set()
    while queue:
        s = queue.popleft()
        if s == sort:
            return True
        if s in closed:
            continue
        closed.add(s)
        for f in funs:
            if f.arg_sorts and s in f.arg_sorts:
                count[f.name] -= 1
                if count[f.name] == 0:
                    queue.append(f.result)
    return False


def closed_term_witness(signature, sort):
    """A closed term of least depth, earlier-declared symbols first; None if the sort is open."""
    if sort not in signature.sorts:
        raise UnknownSort(f"unknown sort {sort}")
    best = {}
    changed = True
    while changed:
        changed = False
        for f in signature.functions.values():
            if not all(a in best for a in f.arg_sorts):
                continue
            depth = 1 + max((best[a][0] for a in f.arg_sorts), default=-1)
            if f.result not in best or depth < best[f.result][0]:
                best[f.result] = (depth, App(f.name, tuple(best[a][1] for a in f.arg_sorts)))
                changed = True
    return best[sort][1] if sort in best else None


# ---------------------------------------------------- first-order chaining

def enumerate_premise_tuples(queue, n):
    """Every n-tuple of queue entries, lexicographic in queue position, repeats allowed."""
    return itertools.product(list(queue), repeat=n)


class _Fact:
    def __init__(self, ctx, atom, lhs, origin):
        self.ctx, self.atom, self.lhs, self.origin = tuple(ctx), atom, lhs, origin
        self.line = None

    @property
    def fic(self):
        return FormulaInContext(self.ctx, self.atom)

    def key(self):
        ren = Substitution(tuple((Var(f"_{k}", v.sort), v) for k, v in enumerate(self.ctx)))
        return (tuple(v.sort for v in self.ctx), apply_formula(self.atom, ren))

    def public(self):
        return FactInContext(self.ctx, self.atom)


class _Axiom:
    def __init__(self, index, seq, avoid, fresh):
        self.index, self.original = index, seq
        ren = {}
        for v in seq.ctx:
            if v in avoid:
                ren[v] = fresh.fresh(v)
        self.rename = Substitution(tuple((ren.get(v, v), v) for v in seq.ctx))
        f = FreshVariableSource()
        self.seq = Sequent(apply_formula(seq.lhs, self.rename, f), tuple(ren.get(v, v) for v in seq.ctx),
                           apply_formula(seq.rhs, self.rename, f))
        self.premises = [p for p in conjuncts(self.seq.lhs)]

    def apart(self, facts, fresh):
        """A copy renamed away from the variables of the given facts."""
        used = set()
        for f in facts:
            used |= set(f.ctx) | all_variables(f.atom)
        if not used & set(self.seq.ctx):
            return self.seq, Substitution(tuple((v, v) for v in self.seq.ctx))
        fresh.avoid(used | set(self.seq.ctx))
        rho = Substitution(tuple((fresh.fresh(v) if v in used else v, v) for v in self.seq.ctx))
        f = FreshVariableSource()
        seq = Sequent(apply_formula(self.seq.lhs, rho, f), tuple(rho.mapping()[v] for v in self.seq.ctx),
                      apply_formula(self.seq.rhs, rho, f))
        return seq, rho

    def hyp_theta(self, rho, theta):
        """theta pulled back to the axiom's own variables, as a Hypothesis substitution."""
        m = theta.mapping()
        pre = self.rename.mapping()
        out = []
        for v in self.original.ctx:
            w = rho.mapping().get(pre[v], pre[v])
            out.append((m.get(w, w), v))
        return Substitution(tuple(out))


def _fix_goal(theta, goal_vars):
    """theta adjusted to leave the goal variables alone, or None when impossible."""
    m = theta.mapping()
    back = []
    taken = set()
    for g in goal_vars:
        img = m.get(g, g)
        if img == g:
            continue
        if not isinstance(img, Var) or img in goal_vars or img in taken:
            return None
        taken.add(img)
        back.append((g, img))
    if back:
        theta = compose(theta, Substitution(tuple(back)))
        m = theta.mapping()
        if any(m.get(g, g) != g for g in goal_vars):
            return None
    return theta


def forward_chaining(theory, goal, limits=None):
    """Saturate a queue of facts-in-context until one reconciles with the goal."""
    limits = limits or IterationBudget()
    for i, ax in enumerate(theory.axioms, 1):
        _normal(ax, f"axiom {i}")
    _normal(goal, "the goal")
    sig = theory.signature
    L, ys, S = goal.lhs, goal.ctx, goal.rhs
    goal_vars = set(ys)
    out = _Lines()
    trace = []
    if isinstance(S, Top):
        out.top(L, ys)
        return ChainResult(True, trace, _derivation(out, goal, theory, "chain"))

    fresh = FreshVariableSource(goal_vars)
    for ax in theory.axioms:
        fresh.avoid(set(ax.ctx) | all_variables(ax.lhs) | all_variables(ax.rhs))
    axioms = [_Axiom(i, ax, goal_vars, fresh) for i, ax in enumerate(theory.axioms, 1)
              if not isinstance(ax.rhs, Top)]

    queue = []
    keys = set()

    def push(f):
        k = f.key()
        if k in keys:
            return False
        keys.add(k)
        queue.append(f)
        if len(queue) > limits.queue:
            raise BudgetExhausted(f"queue grew past {limits.queue} facts")
        return True

    for a in dict.fromkeys(conjuncts(L)):
        f = _Fact(ys, a, L, ("goal",))
        f.line = out.project(L, a, ys)
        push(f)
    for ax in axioms:
        if not ax.premises:
            push(_Fact(ax.seq.ctx, ax.seq.rhs, Top(), ("axiom", ax)))

    def instantiate(f, theta, delta, lhs):
        if f.origin[0] == "axiom":
            ax = f.origin[1]
            ident = Substitution(tuple((v, v) for v in ax.seq.ctx))
            th = ax.hyp_theta(ident, theta)
            c = Sequent(Top(), delta, apply_formula(ax.original.rhs, th))
            n = out.add(c, Rule("Hypothesis", theta=th, index=ax.index))
        else:
            n = out.sub(build(f), theta, delta)
        if lhs != f.lhs:
            n = out.cut(out.top(lhs, delta), n)
        return n

    def build(f):
        if f.line is not None:
            return f.line
        if f.origin[0] == "axiom":
            ax = f.origin[1]
            f.line = out.add(ax.original, Rule("Hypothesis", index=ax.index))
            if ax.original.ctx != f.ctx:
                f.line = out.sub(f.line, Substitution(tuple((v, w) for v, w in zip(f.ctx, ax.original.ctx))), f.ctx)
            return f.line
        _, ax, seq, rho, tup, theta, delta = f.origin
        for g in tup:
            if g.origin[0] != "axiom":
                build(g)
        lhs = f.lhs
        lines = [None] * len(tup)
        for k, g in enumerate(tup):
            if not isinstance(g.lhs, Top):
                lines[k] = instantiate(g, theta, delta, lhs)
        th = ax.hyp_theta(rho, theta)
        fr = FreshVariableSource(delta)
        hyp = out.add(Sequent(apply_formula(ax.original.lhs, th, fr), delta,
                              apply_formula(ax.original.rhs, th, fr)),
                      Rule("Hypothesis", theta=th, index=ax.index))
        for k, g in enumerate(tup):
            if lines[k] is None:
                lines[k] = instantiate(g, theta, delta, lhs)
        leaves = iter(lines)

        def tree(phi):
            if isinstance(phi, And):
                a, b = tree(phi.left), tree(phi.right)
                p, q = out.seq(a), out.seq(b)
                return out.add(Sequent(lhs, delta, And(p.rhs, q.rhs)), Rule("AndI"), (a, b))
            if isinstance(phi, Top):
                return out.top(lhs, delta)
            return next(leaves)

        conj_line = tree(seq.lhs)
        f.line = out.cut(conj_line, hyp)
        return f.line

    def try_goal(f):
        d = unify_formulae_in_context([f.fic], [FormulaInContext(ys, S)], signature=sig)
        if not d:
            return None
        d = _fix_goal(d.theta, goal_vars)
        if d is None:
            return None
        img = apply_formula_in_context(f.fic, d)
        if img.body != S:
            return None
        residual = sorted((v for v in img.ctx if v not in goal_vars), key=lambda v: v.name)
        to_goal, to_closed = [], []
        for v in residual:
            same = [y for y in ys if y.sort == v.sort]
            if same:
                to_goal.append((same[0], v))
                continue
            k = closed_term_witness(sig, v.sort)
            if k is None:
                return None
            to_closed.append((k, v))
        steps = [d] + [Substitution((p,)) for p in to_goal + to_closed]
        n = build(f)
        for k, th in enumerate(steps):
            n = out.sub(n, th, ys if k == len(steps) - 1 else None)
        if f.lhs != L:
            n = out.cut(out.top(L, ys), n)
        return n

    for f in list(queue):
        if try_goal(f) is not None:
            return ChainResult(True, trace, _derivation(out, goal, theory, "chain"))

    passes = 0
    new = True
    while new:
        passes += 1
        if passes > limits.passes:
            raise BudgetExhausted(f"no answer within {limits.passes} passes")
        new = False
        for ax in axioms:
            if not ax.premises:
                continue
            for tup in enumerate_premise_tuples(queue, len(ax.premises)):
                seq, rho = ax.apart(tup, fresh)
                prem = [FormulaInContext(seq.ctx, p) for p in conjuncts(seq.lhs)]
                r = unify_formulae_in_context(prem, [g.fic for g in tup], signature=sig)
                if not r:
                    continue
                theta = r.theta
                lhs = Top()
                if any(g.lhs != Top() for g in tup):
                    lhs = L
                    theta = _fix_goal(theta, goal_vars)
                    if theta is None:
                        continue
                img = apply_formula_in_context(FormulaInContext(seq.ctx, seq.rhs), theta)
                f = _Fact(img.ctx, img.body, lhs, ("fire", ax, seq, rho, tup, theta, img.ctx))
                if not push(f):
                    continue
                new = True
                trace.append(TraceRow(tuple((g.public(), False) for g in queue), None,
                                      (ax.index,), ()))
                if try_goal(f) is not None:
                    return ChainResult(True, trace, _derivation(out, goal, theory, "chain"))
    return ChainResult(False, trace, None)


__all__ = [
    "NotPropositional", "BudgetExhausted", "IterationBudget", "FactInContext", "TraceRow",
    "ChainResult", "propositional_forward_chaining", "format_trace", "sort_closed",
    "closed_term_witness", "enumerate_premise_tuples", "forward_chaining",
]
