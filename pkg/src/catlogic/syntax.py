"""Multi-sorted first-order syntax: signatures, terms, formulae, contexts, sequents."""

from dataclasses import dataclass, field
from enum import IntEnum
from functools import lru_cache


class LogicError(Exception):
    """Base class for every error raised by the library."""


class UnknownSymbol(LogicError):
    pass


class UnknownSort(LogicError):
    pass


class ArityMismatch(LogicError):
    pass


class SortMismatch(LogicError):
    pass


class ContextError(LogicError):
    """Invalid context, or a context unsuitable for an expression."""


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str
    sort: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    fn: str
    args: tuple = ()

    def __str__(self):
        if not self.args:
            return self.fn
        return f"{self.fn}({', '.join(map(str, self.args))})"


# ------------------------------------------------------------- formulae

@dataclass(frozen=True)
class Rel:
    name: str
    args: tuple = ()


@dataclass(frozen=True)
class Eq:
    left: object
    right: object


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class Exists:
    var: Var
    body: object


@dataclass(frozen=True)
class Forall:
    var: Var
    body: object


TOP = Top()
BOT = Bot()
BINARY = (And, Or, Implies)
QUANTIFIERS = (Exists, Forall)
ATOMS = (Rel, Eq)


def is_atomic(phi):
    return isinstance(phi, ATOMS)


def conj(parts):
    """Left-associated conjunction; the empty conjunction is top."""
    parts = list(parts)
    if not parts:
        return TOP
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts):
    parts = list(parts)
    if not parts:
        return BOT
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def conjuncts(phi):
    """Leaves of a conjunction tree, left to right; top contributes nothing."""
    if isinstance(phi, And):
        return conjuncts(phi.left) + conjuncts(phi.right)
    if isinstance(phi, Top):
        return []
    return [phi]


# ------------------------------------------------------------- fragments

class Fragment(IntEnum):
    ATOMIC = 0
    HORN = 1
    REGULAR = 2
    COHERENT = 3
    INTUITIONISTIC = 4
    CLASSICAL = 5

    @classmethod
    def parse(cls, name):
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise LogicError(f"unknown fragment {name!r}") from None

    def __str__(self):
        return self.name.lower()


_NODE_FRAGMENT = {
    Rel: Fragment.ATOMIC, Eq: Fragment.ATOMIC,
    Top: Fragment.ATOMIC, And: Fragment.HORN,
    Exists: Fragment.REGULAR,
    Bot: Fragment.COHERENT, Or: Fragment.COHERENT,
    Implies: Fragment.INTUITIONISTIC, Not: Fragment.INTUITIONISTIC,
    Forall: Fragment.INTUITIONISTIC,
}


def classify(e):
    """Least fragment admitting every connective of a formula, sequent or theory."""
    if isinstance(e, Sequent):
        return max(classify(e.lhs), classify(e.rhs))
    if isinstance(e, Theory):
        return max((classify(a) for a in e.axioms), default=Fragment.ATOMIC)
    return _classify(e)


@lru_cache(maxsize=1 << 16)
def _classify(phi):
    frag = _NODE_FRAGMENT[type(phi)]
    for child in _children(phi):
        frag = max(frag, _classify(child))
    return frag


def _children(phi):
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, (Not, Exists, Forall)):
        return (phi.body,)
    return ()


# ------------------------------------------------------------- variables

def term_vars(t, out=None):
    """Variables of a term in first-occurrence order."""
    out = [] if out is None else out
    if isinstance(t, Var):
        if t not in out:
            out.append(t)
    else:
        for a in t.args:
            term_vars(a, out)
    return out


def _fv_ordered(phi, bound, out):
    if isinstance(phi, Rel):
        for a in phi.args:
            for v in term_vars(a):
                if v not in bound and v not in out:
                    out.append(v)
    elif isinstance(phi, Eq):
        for a in (phi.left, phi.right):
            for v in term_vars(a):
                if v not in bound and v not in out:
                    out.append(v)
    elif isinstance(phi, QUANTIFIERS):
        _fv_ordered(phi.body, bound | {phi.var}, out)
    else:
        for c in _children(phi):
            _fv_ordered(c, bound, out)
    return out


def free_variables(e):
    """FV of a term, formula, or sequence of terms, as a frozenset."""
    return frozenset(canonical_context(e))


def canonical_context(e):
    """Free variables in order of first occurrence, left to right."""
    if isinstance(e, (Var, App)):
        return tuple(term_vars(e))
    if isinstance(e, (list, tuple)):
        out = []
        for t in e:
            if isinstance(t, (Var, App)):
                term_vars(t, out)
            else:
                _fv_ordered(t, frozenset(), out)
        return tuple(out)
    return tuple(_fv_ordered(e, frozenset(), []))


def bound_variables(phi):
    out = set()
    if isinstance(phi, QUANTIFIERS):
        out.add(phi.var)
    for c in _children(phi):
        out |= bound_variables(c)
    return frozenset(out)


def all_variables(e):
    """Every variable occurring anywhere (free or bound)."""
    if isinstance(e, (Var, App)):
        return frozenset(term_vars(e))
    if isinstance(e, (list, tuple)):
        out = frozenset()
        for x in e:
            out |= all_variables(x)
        return out
    return free_variables(e) | bound_variables(e)


# --------------------------------------------------------------- contexts

def make_context(vars_):
    ctx = tuple(vars_)
    if len(set(ctx)) != len(ctx):
        raise ContextError(f"repeated variable in context {format_context(ctx)}")
    names = {}
    for v in ctx:
        if not isinstance(v, Var):
            raise ContextError(f"context entry {v!r} is not a variable")
        names.setdefault(v.name, v)
    return ctx


def concat_contexts(xs, ys):
    return tuple(xs) + tuple(v for v in ys if v not in xs)


def suitable(ctx, e):
    return free_variables(e) <= set(ctx)


def format_context(ctx):
    return ", ".join(f"{v.name}:{v.sort}" for v in ctx)


@dataclass(frozen=True)
class TermInContext:
    ctx: tuple
    body: object

    def __post_init__(self):
        object.__setattr__(self, "ctx", make_context(self.ctx))
        if not suitable(self.ctx, self.body):
            raise ContextError(f"context [{format_context(self.ctx)}] unsuitable for {self.body}")


@dataclass(frozen=True)
class FormulaInContext:
    ctx: tuple
    body: object

    def __post_init__(self):
        object.__setattr__(self, "ctx", make_context(self.ctx))
        if not suitable(self.ctx, self.body):
            raise ContextError(f"context [{format_context(self.ctx)}] unsuitable for formula")


# --------------------------------------------------------------- sequents

@dataclass(frozen=True)
class Sequent:
    lhs: object
    ctx: tuple
    rhs: object

    def __post_init__(self):
        object.__setattr__(self, "ctx", make_context(self.ctx))
        ctx = set(self.ctx)
        for side in (self.lhs, self.rhs):
            if not free_variables(side) <= ctx:
                missing = sorted(v.name for v in free_variables(side) - ctx)
                raise ContextError(f"context lacks free variable(s) {', '.join(missing)}")
        bound = bound_variables(self.lhs) | bound_variables(self.rhs)
        free = free_variables(self.lhs) | free_variables(self.rhs) | ctx
        clash = bound & free
        if clash:
            names = ", ".join(sorted(v.name for v in clash))
            raise ContextError(f"variable(s) {names} occur both bound and free")

    def __str__(self):
        from .dsl import format_sequent
        return format_sequent(self)


# -------------------------------------------------------------- signature

@dataclass(frozen=True)
class FunSym:
    name: str
    arg_sorts: tuple
    result: str


@dataclass(frozen=True)
class RelSym:
    name: str
    arg_sorts: tuple


@dataclass
class Signature:
    sorts: list = field(default_factory=list)
    functions: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)

    def add_sort(self, name):
        if name in self.sorts:
            raise LogicError(f"sort {name} declared twice")
        self.sorts.append(name)

    def add_function(self, name, arg_sorts, result):
        if name in self.functions:
            raise LogicError(f"function {name} declared twice")
        for s in (*arg_sorts, result):
            self._need_sort(s)
        self.functions[name] = FunSym(name, tuple(arg_sorts), result)

    def add_relation(self, name, arg_sorts):
        if name in self.relations:
            raise LogicError(f"relation {name} declared twice")
        for s in arg_sorts:
            self._need_sort(s)
        self.relations[name] = RelSym(name, tuple(arg_sorts))

    def _need_sort(self, s):
        if s not in self.sorts:
            raise UnknownSort(f"unknown sort {s}")

    def constants(self):
        return [f for f in self.functions.values() if not f.arg_sorts]

    def merged(self, other):
        out = Signature(list(self.sorts), dict(self.functions), dict(self.relations))
        for s in other.sorts:
            if s not in out.sorts:
                out.sorts.append(s)
        for k, v in other.functions.items():
            if out.functions.setdefault(k, v) != v:
                raise LogicError(f"conflicting declarations of function {k}")
        for k, v in other.relations.items():
            if out.relations.setdefault(k, v) != v:
                raise LogicError(f"conflicting declarations of relation {k}")
        return out


def sort_of(sig, t):
    if isinstance(t, Var):
        if sig is not None and t.sort not in sig.sorts:
            raise UnknownSort(f"variable {t.name} has unknown sort {t.sort}")
        return t.sort
    f = sig.functions.get(t.fn)
    if f is None:
        raise UnknownSymbol(f"unknown function symbol {t.fn} in {t}")
    if len(f.arg_sorts) != len(t.args):
        raise ArityMismatch(f"{t.fn} expects {len(f.arg_sorts)} argument(s), got {len(t.args)} in {t}")
    for a, s in zip(t.args, f.arg_sorts):
        got = sort_of(sig, a)
        if got != s:
            raise SortMismatch(f"argument {a} of {t} has sort {got}, expected {s}")
    return f.result


def check_formula(sig, phi):
    """Raise if phi is not well-formed over sig."""
    if isinstance(phi, Rel):
        r = sig.relations.get(phi.name)
        if r is None:
            raise UnknownSymbol(f"unknown relation symbol {phi.name}")
        if len(r.arg_sorts) != len(phi.args):
            raise ArityMismatch(f"{phi.name} expects {len(r.arg_sorts)} argument(s), got {len(phi.args)}")
        for a, s in zip(phi.args, r.arg_sorts):
            got = sort_of(sig, a)
            if got != s:
                raise SortMismatch(f"argument {a} of {phi.name} has sort {got}, expected {s}")
    elif isinstance(phi, Eq):
        a, b = sort_of(sig, phi.left), sort_of(sig, phi.right)
        if a != b:
            raise SortMismatch(f"equation {phi.left} = {phi.right} mixes sorts {a} and {b}")
    elif isinstance(phi, QUANTIFIERS):
        sort_of(sig, phi.var)
        check_formula(sig, phi.body)
    else:
        for c in _children(phi):
            check_formula(sig, c)


def check_sequent(sig, seq):
    for v in seq.ctx:
        sort_of(sig, v)
    check_formula(sig, seq.lhs)
    check_formula(sig, seq.rhs)


@dataclass
class Theory:
    signature: Signature
    axioms: list = field(default_factory=list)
    queries: list = field(default_factory=list)

    def check(self):
        for ax in self.axioms:
            check_sequent(self.signature, ax)
        return self


# -------------------------------------------------------- alpha-equivalence

def alpha_equivalent(a, b):
    return _alpha(a, b, {}, {}, 0)


def _alpha_term(s, t, envs, envt):
    if isinstance(s, Var) and isinstance(t, Var):
        ls, lt = envs.get(s), envt.get(t)
        if ls is None and lt is None:
            return s == t
        return ls == lt
    if isinstance(s, App) and isinstance(t, App):
        return (s.fn == t.fn and len(s.args) == len(t.args)
                and all(_alpha_term(x, y, envs, envt) for x, y in zip(s.args, t.args)))
    return False


def _alpha(a, b, envs, envt, depth):
    if type(a) is not type(b):
        return False
    if isinstance(a, Rel):
        return (a.name == b.name and len(a.args) == len(b.args)
                and all(_alpha_term(x, y, envs, envt) for x, y in zip(a.args, b.args)))
    if isinstance(a, Eq):
        return _alpha_term(a.left, b.left, envs, envt) and _alpha_term(a.right, b.right, envs, envt)
    if isinstance(a, QUANTIFIERS):
        if a.var.sort != b.var.sort:
            return False
        return _alpha(a.body, b.body, {**envs, a.var: depth}, {**envt, b.var: depth}, depth + 1)
    return all(_alpha(x, y, envs, envt, depth) for x, y in zip(_children(a), _children(b)))


@lru_cache(maxsize=1 << 16)
def unfold_not(phi):
    """Replace every negation by implication into bottom."""
    if isinstance(phi, Not):
        return Implies(unfold_not(phi.body), BOT)
    if isinstance(phi, BINARY):
        return type(phi)(unfold_not(phi.left), unfold_not(phi.right))
    if isinstance(phi, QUANTIFIERS):
        return type(phi)(phi.var, unfold_not(phi.body))
    return phi


def map_terms(phi, fn):
    """Apply fn to every top-level term argument of every atom."""
    if isinstance(phi, Rel):
        return Rel(phi.name, tuple(fn(a) for a in phi.args))
    if isinstance(phi, Eq):
        return Eq(fn(phi.left), fn(phi.right))
    if isinstance(phi, BINARY):
        return type(phi)(map_terms(phi.left, fn), map_terms(phi.right, fn))
    if isinstance(phi, Not):
        return Not(map_terms(phi.body, fn))
    if isinstance(phi, QUANTIFIERS):
        return type(phi)(fn(phi.var), map_terms(phi.body, fn))
    return phi
