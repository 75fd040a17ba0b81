"""Rule-by-rule proof checker for the sequent calculus, gated by fragment.

Every comparison treats a negation as an implication into bottom.  Premise
matching is syntactic except where a rule is about renaming (Sub, AlphaRename,
Eq1, Frobenius), which compare up to alpha-equivalence.
"""

from dataclasses import dataclass, field

from .syntax import (
    Var, App, Rel, Eq, Top, Bot, And, Or, Implies, Not, Exists, Forall,
    BINARY, QUANTIFIERS, Fragment, LogicError, Sequent, alpha_equivalent,
    unfold_not, free_variables, all_variables, classify, conjuncts,
)
from .substitution import Substitution, FreshVariableSource, apply_formula, extend


# ------------------------------------------------------------------ rules

RULE_FRAGMENT = {
    "ID": Fragment.ATOMIC, "Cut": Fragment.ATOMIC, "Sub": Fragment.ATOMIC,
    "Eq0": Fragment.ATOMIC, "AlphaRename": Fragment.ATOMIC,
    "Hypothesis": Fragment.ATOMIC, "TheoremRef": Fragment.ATOMIC,
    "Eq1": Fragment.HORN, "Top": Fragment.HORN, "AndE0": Fragment.HORN,
    "AndE1": Fragment.HORN, "AndI": Fragment.HORN,
    "ExistsDown": Fragment.REGULAR, "ExistsUp": Fragment.REGULAR, "Frobenius": Fragment.REGULAR,
    "Bot": Fragment.COHERENT, "OrI0": Fragment.COHERENT, "OrI1": Fragment.COHERENT,
    "OrRule": Fragment.COHERENT, "Distributive": Fragment.COHERENT,
    "ImpliesDown": Fragment.INTUITIONISTIC, "ImpliesUp": Fragment.INTUITIONISTIC,
    "ForallDown": Fragment.INTUITIONISTIC, "ForallUp": Fragment.INTUITIONISTIC,
    "NegDef": Fragment.INTUITIONISTIC,
    "EM": Fragment.CLASSICAL,
}

ARITY = {
    "ID": 0, "Eq0": 0, "Eq1": 0, "Top": 0, "Bot": 0, "AndE0": 0, "AndE1": 0,
    "OrI0": 0, "OrI1": 0, "Distributive": 0, "EM": 0, "Frobenius": 0, "Hypothesis": 0,
    "Cut": 2, "AndI": 2, "OrRule": 2,
    "Sub": 1, "AlphaRename": 1, "ImpliesDown": 1, "ImpliesUp": 1,
    "ExistsDown": 1, "ExistsUp": 1, "ForallDown": 1, "ForallUp": 1,
}


@dataclass(frozen=True)
class Rule:
    kind: str
    theta: Substitution = None
    index: int = None
    name: str = None

    def __post_init__(self):
        if self.kind not in RULE_FRAGMENT:
            raise LogicError(f"unknown rule {self.kind}")

    @property
    def fragment(self):
        return RULE_FRAGMENT[self.kind]

    def __str__(self):
        if self.kind == "Sub":
            return f"Sub {self.theta}"
        if self.kind == "Hypothesis":
            return f"Hyp {self.index}" + (f" {self.theta}" if self.theta is not None else "")
        if self.kind == "TheoremRef":
            return f"Thm {self.name}"
        return self.kind


@dataclass(frozen=True)
class Line:
    number: int
    sequent: Sequent
    rule: Rule
    premises: tuple = ()


@dataclass
class Derivation:
    fragment: Fragment
    lines: list = field(default_factory=list)
    goals: list = field(default_factory=list)
    name: str = ""
    theory: object = None

    def line(self, n):
        for ln in self.lines:
            if ln.number == n:
                return ln
        raise KeyError(n)

    def cone(self, n):
        """Line numbers the given line depends on, itself included."""
        by = {ln.number: ln for ln in self.lines}
        seen, todo = set(), [n]
        while todo:
            k = todo.pop()
            if k in seen or k not in by:
                continue
            seen.add(k)
            todo.extend(by[k].premises)
        return seen

    def goal_line(self, goal):
        """Last line deriving goal, preferring one that does not merely cite it as a hypothesis."""
        hits = [ln for ln in self.lines if same_sequent(ln.sequent, goal)]
        for ln in reversed(hits):
            cone = [self.line(n) for n in self.cone(ln.number)]
            if not any(c.rule.kind == "Hypothesis" and same_sequent(c.sequent, goal) for c in cone):
                return ln
        return hits[-1] if hits else None


@dataclass(frozen=True)
class StepError:
    kind: str
    line: int
    message: str

    def __str__(self):
        return f"line {self.line}: {self.kind}: {self.message}"


class _Err(Exception):
    def __init__(self, kind, message):
        self.kind, self.message = kind, message


def _schema(msg):
    return _Err("SchemaMismatch", msg)


N = unfold_not


def same_sequent(a, b):
    return a.ctx == b.ctx and N(a.lhs) == N(b.lhs) and N(a.rhs) == N(b.rhs)


# ------------------------------------------------------------- the steps

def check_step(rule, premises, conclusion, fragment=Fragment.CLASSICAL, theory=None, corpus=None):
    """Errors (as (kind, message) pairs) for one inference; empty when valid."""
    if rule.fragment > fragment:
        return [("FragmentViolation", f"{rule.kind} needs the {rule.fragment} fragment, declared {fragment}")]
    if classify(conclusion) > fragment:
        return [("FragmentViolation", f"sequent lies in the {classify(conclusion)} fragment, declared {fragment}")]
    want = ARITY.get(rule.kind)
    if rule.kind == "NegDef":
        if len(premises) > 1:
            return [("SchemaMismatch", "NegDef takes at most one premise")]
    elif want is not None and len(premises) != want:
        return [("SchemaMismatch", f"{rule.kind} takes {want} premise(s), got {len(premises)}")]
    try:
        _CHECKS[rule.kind](rule, list(premises), conclusion, fragment, theory, corpus)
    except _Err as e:
        return [(e.kind, e.message)]
    return []


def _same_ctx(*seqs):
    c = seqs[0].ctx
    for s in seqs[1:]:
        if s.ctx != c:
            raise _Err("ContextMismatch", "contexts differ")


def _ck_id(rule, ps, c, *_):
    if N(c.lhs) != N(c.rhs):
        raise _schema("identity needs equal sides")


def _ck_cut(rule, ps, c, *_):
    p, q = ps
    _same_ctx(p, q, c)
    if N(p.rhs) != N(q.lhs):
        raise _schema("middle formulas differ")
    if N(c.lhs) != N(p.lhs) or N(c.rhs) != N(q.rhs):
        raise _schema("conclusion is not the composite")


def sub_errors(theta, p, c):
    """Validate c as p with theta applied; raises _Err."""
    ctx = list(p.ctx)
    for y in theta.targets:
        if y not in ctx:
            raise _Err("ContextMismatch", f"substitution target {y} is not in the premise context")
    pos = [ctx.index(y) for y in theta.targets]
    if pos != sorted(pos):
        raise _Err("ContextMismatch", "substitution targets must follow the premise context order")
    full = extend(theta, p.ctx)
    need = set()
    for s in full.replacements:
        need |= free_variables(s)
    missing = need - set(c.ctx)
    if missing:
        names = ", ".join(sorted(v.name for v in missing))
        raise _Err("ContextMismatch", f"conclusion context lacks {names}")
    fresh = FreshVariableSource(all_variables(c.lhs) | all_variables(c.rhs) | set(c.ctx))
    lhs = apply_formula(N(p.lhs), full, fresh)
    rhs = apply_formula(N(p.rhs), full, fresh)
    if not alpha_equivalent(lhs, N(c.lhs)) or not alpha_equivalent(rhs, N(c.rhs)):
        raise _schema(f"conclusion is not the premise under {theta}")


def _ck_sub(rule, ps, c, *_):
    if rule.theta is None:
        raise _schema("Sub needs a substitution")
    sub_errors(rule.theta, ps[0], c)


def _ck_eq0(rule, ps, c, *_):
    if len(c.ctx) != 1:
        raise _Err("ContextMismatch", "Eq0 needs a one-variable context")
    x = c.ctx[0]
    if N(c.lhs) != Top() or N(c.rhs) != Eq(x, x):
        raise _schema("Eq0 concludes top |- x = x")


def _ck_eq1(rule, ps, c, *_):
    lhs = N(c.lhs)
    if not isinstance(lhs, And):
        raise _schema("Eq1 needs a conjunction on the left")
    eqs = conjuncts(lhs.left)
    if not eqs or not all(isinstance(e, Eq) and isinstance(e.left, Var) and isinstance(e.right, Var)
                          for e in eqs):
        raise _schema("Eq1 needs equations between variables")
    xs = [e.left for e in eqs]
    if len(set(xs)) != len(xs):
        raise _schema("Eq1 needs distinct variables on the left of its equations")
    theta = Substitution(tuple((e.right, e.left) for e in eqs))
    out = apply_formula(lhs.right, theta, FreshVariableSource(all_variables(c.lhs) | all_variables(c.rhs)))
    if not alpha_equivalent(out, N(c.rhs)):
        raise _schema("Eq1 conclusion is not the substituted formula")


def _ck_top(rule, ps, c, *_):
    if N(c.rhs) != Top():
        raise _schema("Top concludes top")


def _ck_bot(rule, ps, c, *_):
    if N(c.lhs) != Bot():
        raise _schema("Bot starts from bottom")


def _and_paths(phi, target, first=None, out=None):
    out = set() if out is None else out
    if isinstance(phi, And):
        for side, child in ((0, phi.left), (1, phi.right)):
            f = side if first is None else first
            if child == target:
                out.add(f)
            _and_paths(child, target, f, out)
    return out


def _ck_ande(rule, ps, c, *_):
    side = 0 if rule.kind == "AndE0" else 1
    if side not in _and_paths(N(c.lhs), N(c.rhs)):
        raise _schema("right side is not a conjunct on that side of the left")


def _ck_andi(rule, ps, c, *_):
    p, q = ps
    _same_ctx(p, q, c)
    if not (N(p.lhs) == N(q.lhs) == N(c.lhs)):
        raise _schema("premises must share the left side of the conclusion")
    if N(c.rhs) != And(N(p.rhs), N(q.rhs)):
        raise _schema("conclusion is not the conjunction of the premises")


def _ck_ori(rule, ps, c, *_):
    rhs = N(c.rhs)
    if not isinstance(rhs, Or):
        raise _schema("right side must be a disjunction")
    part = rhs.left if rule.kind == "OrI0" else rhs.right
    if part != N(c.lhs):
        raise _schema("left side is not the introduced disjunct")


def _ck_or(rule, ps, c, *_):
    p, q = ps
    _same_ctx(p, q, c)
    if not (N(p.rhs) == N(q.rhs) == N(c.rhs)):
        raise _schema("premises must share the right side of the conclusion")
    if N(c.lhs) != Or(N(p.lhs), N(q.lhs)):
        raise _schema("left side is not the disjunction of the premises")


def _imp_match(top, bottom):
    """top: psi |- phi => chi; bottom: phi & psi |- chi (either conjunct order)."""
    rhs = N(top.rhs)
    if not isinstance(rhs, Implies):
        raise _schema("expected an implication on the right")
    phi, chi, psi = rhs.left, rhs.right, N(top.lhs)
    if N(bottom.rhs) != chi:
        raise _schema("consequent mismatch")
    if N(bottom.lhs) not in (And(phi, psi), And(psi, phi)):
        raise _schema("left side must conjoin the antecedent with the hypothesis")


def _ck_imp_down(rule, ps, c, *_):
    _same_ctx(ps[0], c)
    _imp_match(ps[0], c)


def _ck_imp_up(rule, ps, c, *_):
    _same_ctx(ps[0], c)
    _imp_match(c, ps[0])


def _quant(wide, narrow, cls, on_left):
    """wide: phi |-_{x,y} psi; narrow carries (Qv) on one side over context x.

    The bound variable v may have any name of y's sort; its body with v
    replaced by y must be the wide side verbatim.
    """
    if wide.ctx[:-1] != narrow.ctx or not wide.ctx:
        raise _Err("ContextMismatch", "premise context must be the conclusion context plus one variable")
    y = wide.ctx[-1]
    q, other_w, other_n, inner = ((N(narrow.lhs), N(wide.rhs), N(narrow.rhs), N(wide.lhs)) if on_left
                                  else (N(narrow.rhs), N(wide.lhs), N(narrow.lhs), N(wide.rhs)))
    if not isinstance(q, cls) or q.var.sort != y.sort:
        raise _schema(f"expected a {cls.__name__.lower()} over the sort of {y}")
    if _rename_free(q.body, q.var, y) != inner or other_w != other_n:
        raise _schema("quantifier rule mismatch")
    if y in free_variables(other_n):
        raise _Err("SideConditionViolated", f"{y} is free in the other side")


def _rename_free(phi, old, new):
    """Replace free occurrences of old by new, without renaming binders."""
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(_rename_term(a, old, new) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(_rename_term(phi.left, old, new), _rename_term(phi.right, old, new))
    if isinstance(phi, BINARY):
        return type(phi)(_rename_free(phi.left, old, new), _rename_free(phi.right, old, new))
    if isinstance(phi, Not):
        return Not(_rename_free(phi.body, old, new))
    if isinstance(phi, QUANTIFIERS) and phi.var != old:
        return type(phi)(phi.var, _rename_free(phi.body, old, new))
    return phi


def _rename_term(t, old, new):
    if isinstance(t, Var):
        return new if t == old else t
    return App(t.fn, tuple(_rename_term(a, old, new) for a in t.args))


def _ck_exists_down(rule, ps, c, *_):
    _quant(ps[0], c, Exists, True)


def _ck_exists_up(rule, ps, c, *_):
    _quant(c, ps[0], Exists, True)


def _ck_forall_down(rule, ps, c, *_):
    _quant(ps[0], c, Forall, False)


def _ck_forall_up(rule, ps, c, *_):
    _quant(c, ps[0], Forall, False)


def _ck_dist(rule, ps, c, *_):
    lhs = N(c.lhs)
    if not (isinstance(lhs, And) and isinstance(lhs.right, Or)):
        raise _schema("expected phi & (psi | chi) on the left")
    phi, psi, chi = lhs.left, lhs.right.left, lhs.right.right
    if N(c.rhs) != Or(And(phi, psi), And(phi, chi)):
        raise _schema("right side is not the distributed disjunction")


def _ck_em(rule, ps, c, *_):
    rhs = N(c.rhs)
    if N(c.lhs) != Top() or not isinstance(rhs, Or) or rhs.right != Implies(rhs.left, Bot()):
        raise _schema("EM concludes top |- phi | ~phi")


def _ck_frob(rule, ps, c, *_):
    lhs = N(c.lhs)
    if not (isinstance(lhs, And) and isinstance(lhs.right, Exists)):
        raise _schema("expected phi & (exists y) psi on the left")
    phi, ex = lhs.left, lhs.right
    if ex.var in free_variables(phi):
        raise _Err("SideConditionViolated", f"{ex.var} is free in {phi}")
    if not alpha_equivalent(N(c.rhs), Exists(ex.var, And(phi, ex.body))):
        raise _schema("right side is not (exists y)(phi & psi)")


def _ck_alpha(rule, ps, c, *_):
    p = ps[0]
    _same_ctx(p, c)
    if not (alpha_equivalent(N(p.lhs), N(c.lhs)) and alpha_equivalent(N(p.rhs), N(c.rhs))):
        raise _schema("sides are not alpha-equivalent to the premise")


def _ck_negdef(rule, ps, c, *_):
    if not ps:
        if N(c.lhs) != N(c.rhs):
            raise _schema("sides differ beyond the definition of negation")
        return
    _same_ctx(ps[0], c)
    if not same_sequent(ps[0], c):
        raise _schema("sequents differ beyond the definition of negation")


def _ck_hyp(rule, ps, c, fragment, theory, corpus):
    if theory is None or rule.index is None or not 1 <= rule.index <= len(theory.axioms):
        raise _schema(f"no hypothesis {rule.index}")
    ax = theory.axioms[rule.index - 1]
    if rule.theta is None:
        if ax.ctx != c.ctx:
            raise _Err("ContextMismatch", f"hypothesis {rule.index} has a different context")
        if not same_sequent(ax, c):
            raise _schema(f"sequent is not hypothesis {rule.index}")
        return
    sub_errors(rule.theta, ax, c)


def _ck_thm(rule, ps, c, fragment, theory, corpus):
    expand_theorem(rule.name, ps, c, fragment, corpus)


_CHECKS = {
    "ID": _ck_id, "Cut": _ck_cut, "Sub": _ck_sub, "Eq0": _ck_eq0, "Eq1": _ck_eq1,
    "Top": _ck_top, "Bot": _ck_bot, "AndE0": _ck_ande, "AndE1": _ck_ande, "AndI": _ck_andi,
    "OrI0": _ck_ori, "OrI1": _ck_ori, "OrRule": _ck_or,
    "ImpliesDown": _ck_imp_down, "ImpliesUp": _ck_imp_up,
    "ExistsDown": _ck_exists_down, "ExistsUp": _ck_exists_up,
    "ForallDown": _ck_forall_down, "ForallUp": _ck_forall_up,
    "Distributive": _ck_dist, "EM": _ck_em, "Frobenius": _ck_frob,
    "AlphaRename": _ck_alpha, "NegDef": _ck_negdef,
    "Hypothesis": _ck_hyp, "TheoremRef": _ck_thm,
}


# ------------------------------------------------------ theorem references

_THM_CACHE = {}
_PINNED = {}  # keeps every cached corpus alive so its id stays unique


class _Matcher:
    def __init__(self, metas):
        self.metas = metas
        self.meta = {}
        self.vars = {}

    def var(self, s, h):
        if not isinstance(h, Var) or s.sort != h.sort:
            return False
        if s in self.vars:
            return self.vars[s] == h
        if h in self.vars.values():
            return False
        self.vars[s] = h
        return True

    def term(self, s, h):
        if isinstance(s, Var):
            return self.var(s, h)
        return (isinstance(h, App) and s.fn == h.fn and len(s.args) == len(h.args)
                and all(self.term(a, b) for a, b in zip(s.args, h.args)))

    def formula(self, s, h):
        if isinstance(s, Rel) and not s.args and s.name in self.metas:
            if s.name in self.meta:
                return self.meta[s.name] == h
            self.meta[s.name] = h
            return True
        if type(s) is not type(h):
            return False
        if isinstance(s, Rel):
            return (s.name == h.name and len(s.args) == len(h.args)
                    and all(self.term(a, b) for a, b in zip(s.args, h.args)))
        if isinstance(s, Eq):
            return self.term(s.left, h.left) and self.term(s.right, h.right)
        if isinstance(s, BINARY):
            return self.formula(s.left, h.left) and self.formula(s.right, h.right)
        if isinstance(s, QUANTIFIERS):
            return self.var(s.var, h.var) and self.formula(s.body, h.body)
        return True

    def sequent(self, s, h):
        return self.formula(N(s.lhs), N(h.lhs)) and self.formula(N(s.rhs), N(h.rhs))


def _instantiate_term(t, vmap):
    if isinstance(t, Var):
        return vmap[t]
    return App(t.fn, tuple(_instantiate_term(a, vmap) for a in t.args))


def _instantiate(phi, m):
    if isinstance(phi, Rel):
        if not phi.args and phi.name in m.metas:
            return m.meta[phi.name]
        return Rel(phi.name, tuple(_instantiate_term(a, m.vars) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(_instantiate_term(phi.left, m.vars), _instantiate_term(phi.right, m.vars))
    if isinstance(phi, BINARY):
        return type(phi)(_instantiate(phi.left, m), _instantiate(phi.right, m))
    if isinstance(phi, QUANTIFIERS):
        return type(phi)(m.vars[phi.var], _instantiate(phi.body, m))
    return phi


def _schema_vars(seq):
    return set(seq.ctx) | all_variables(seq.lhs) | all_variables(seq.rhs)


def expand_theorem(name, premises, c, fragment, corpus):
    """Check a TheoremRef step by expanding the cited derivation in place."""
    if corpus is None:
        from .corpus import _proofs
        corpus = _proofs()
    entry = corpus.get(name)
    if entry is None:
        raise _Err("UnknownCorpusEntry", f"no corpus entry named {name!r}")
    _PINNED.setdefault(id(corpus), corpus)
    key = (name, c, tuple(premises), fragment, id(corpus))
    if key in _THM_CACHE:
        if _THM_CACHE[key] is not None:
            raise _Err(*_THM_CACHE[key])
        return
    reasons = []
    deep = []
    metas = {r for r, sym in entry.theory.signature.relations.items() if not sym.arg_sorts}
    for goal in entry.goals:
        gl = entry.goal_line(goal)
        if gl is None:
            continue
        cone = sorted(entry.cone(gl.number))
        lines = [entry.line(n) for n in cone]
        hyps = sorted({ln.rule.index for ln in lines if ln.rule.kind == "Hypothesis"})
        if len(hyps) != len(premises):
            reasons.append(f"goal {goal} needs {len(hyps)} premise(s)")
            continue
        m = _Matcher(metas)
        if not m.sequent(goal, c):
            reasons.append("conclusion does not match")
            continue
        ok = True
        for idx, prem in zip(hyps, premises):
            if not m.sequent(entry.theory.axioms[idx - 1], prem):
                ok = False
                break
        if not ok:
            reasons.append("premises do not match the cited theorem's hypotheses")
            continue
        host_vars = set(c.ctx) | all_variables(c.lhs) | all_variables(c.rhs)
        for p in premises:
            host_vars |= _schema_vars(p)
        for meta in m.meta.values():
            host_vars |= all_variables(meta)
        fresh = FreshVariableSource(host_vars)
        used = set(m.vars.values())
        for s in goal.ctx:
            if s not in m.vars:
                cand = [h for h in c.ctx if h.sort == s.sort and h not in used]
                if not cand:
                    ok = False
                    break
                m.vars[s] = cand[0]
                used.add(cand[0])
        if not ok:
            reasons.append("goal context cannot be matched")
            continue
        for ln in lines:
            for v in sorted(_schema_vars(ln.sequent), key=lambda v: (v.name, v.sort)):
                if v not in m.vars:
                    m.vars[v] = fresh.fresh(v)
            if ln.rule.theta is not None:
                for v in all_variables(ln.rule.theta.replacements) | set(ln.rule.theta.targets):
                    if v not in m.vars:
                        m.vars[v] = fresh.fresh(v)
        err = _replay(entry, lines, hyps, premises, m, c, fragment, corpus)
        if err is None:
            _THM_CACHE[key] = None
            return
        deep.append(err[0])
        reasons.append(err[1])
    # an instantiation that matched but failed inside reports the inner kind
    kind = deep[0] if deep else "SchemaMismatch"
    msg = f"cannot instantiate {name}: " + "; ".join(reasons or ["no goals"])
    _THM_CACHE[key] = (kind, msg)
    raise _Err(kind, msg)


def _replay(entry, lines, hyps, premises, m, c, fragment, corpus):
    out = {}
    hyp_prem = dict(zip(hyps, premises))
    image_set = set(m.vars.values())
    base = tuple(v for v in c.ctx if v not in image_set)
    for ln in lines:
        s = ln.sequent
        try:
            seq = Sequent(_instantiate(N(s.lhs), m), base + tuple(m.vars[v] for v in s.ctx),
                          _instantiate(N(s.rhs), m))
        except LogicError as e:
            return "SchemaMismatch", f"line {ln.number} does not instantiate: {e}"
        rule = ln.rule
        if rule.theta is not None:
            theta = Substitution(tuple((_instantiate_term(t, m.vars), m.vars[y]) for t, y in rule.theta.pairs))
            rule = Rule(rule.kind, theta, rule.index, rule.name)
        if rule.kind == "Hypothesis":
            prem = hyp_prem[rule.index]
            if rule.theta is None:
                if not same_sequent(seq, prem):
                    return "SchemaMismatch", f"hypothesis {rule.index} instantiates to {seq}, not {prem}"
            else:
                try:
                    sub_errors(rule.theta, prem, seq)
                except _Err as e:
                    return e.kind, f"line {ln.number}: {e.message}"
        else:
            errs = check_step(rule, [out[p] for p in ln.premises], seq, fragment, None, corpus)
            if errs:
                return errs[0][0], f"line {ln.number} of {entry.name}: {errs[0][1]}"
        out[ln.number] = seq
    last = out[lines[-1].number]
    if not same_sequent(last, c):
        return "SchemaMismatch", f"expansion concludes {last}"
    return None


# ------------------------------------------------------------- derivations

def check_derivation(d, theory=None, corpus=None):
    """All step errors of a derivation; an empty list means it checks."""
    theory = theory if theory is not None else d.theory
    errors = []
    seen = {}
    for ln in d.lines:
        bad = [p for p in ln.premises if p not in seen]
        if bad:
            errors.append(StepError("SchemaMismatch", ln.number,
                                    f"premise {bad[0]} is not an earlier line"))
            seen[ln.number] = ln.sequent
            continue
        for kind, msg in check_step(ln.rule, [seen[p] for p in ln.premises], ln.sequent,
                                    d.fragment, theory, corpus):
            errors.append(StepError(kind, ln.number, msg))
        seen[ln.number] = ln.sequent
    for g in d.goals:
        if d.goal_line(g) is None:
            last = d.lines[-1].number if d.lines else 0
            errors.append(StepError("SchemaMismatch", last, f"goal {g} is not derived"))
    return errors


def used_rules(d):
    return {ln.rule.kind for ln in d.lines}
