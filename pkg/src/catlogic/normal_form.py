"""Atomic subformulae, Horn normal form, sequent/formula and clause/sequent translations."""

from dataclasses import dataclass

from .syntax import (
    Top, Bot, Not, Implies, Forall, BINARY, QUANTIFIERS,
    Fragment, LogicError, Sequent, Theory, classify, conj, conjuncts, is_atomic,
    make_context,
)


class NotHorn(LogicError):
    pass


class ShapeMismatch(LogicError):
    pass


class NoPositiveLiteral(LogicError):
    pass


class NotNormalForm(LogicError):
    pass


@dataclass(frozen=True)
class NormalHornSequent:
    premises: tuple
    ctx: tuple
    conclusion: object

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "ctx", make_context(self.ctx))
        for p in (*self.premises, self.conclusion):
            if not (is_atomic(p) or isinstance(p, Top)):
                raise NotNormalForm(f"{p} is neither atomic nor top")
        self.sequent()

    @property
    def lhs(self):
        return conj(self.premises)

    def sequent(self):
        return Sequent(self.lhs, self.ctx, self.conclusion)

    @classmethod
    def from_sequent(cls, seq):
        if not (is_atomic(seq.rhs) or isinstance(seq.rhs, Top)):
            raise NotNormalForm(f"conclusion {seq.rhs} is not atomic")
        if classify(seq.lhs) > Fragment.HORN:
            raise NotNormalForm("premises use connectives beyond conjunction")
        return cls(tuple(conjuncts(seq.lhs)), seq.ctx, seq.rhs)

    def __str__(self):
        return str(self.sequent())


def atomic_subformulae(phi):
    if is_atomic(phi):
        return [phi]
    if isinstance(phi, BINARY):
        return atomic_subformulae(phi.left) + atomic_subformulae(phi.right)
    if isinstance(phi, (Not,) + QUANTIFIERS):
        return atomic_subformulae(phi.body)
    return []


def unique_atomic_subformulae(phi):
    return list(dict.fromkeys(atomic_subformulae(phi)))


def horn_normal_form(seq):
    if classify(seq) > Fragment.HORN:
        raise NotHorn(f"sequent uses connectives beyond the Horn fragment: {seq}")
    atoms = unique_atomic_subformulae(seq.rhs) or [Top()]
    return [Sequent(seq.lhs, seq.ctx, a) for a in atoms]


def horn_theory_normal_form(theory):
    out = []
    for i, ax in enumerate(theory.axioms, 1):
        try:
            parts = horn_normal_form(ax)
        except NotHorn:
            raise NotHorn(f"axiom {i} is not Horn: {ax}") from None
        for p in parts:
            if p not in out:
                out.append(p)
    return Theory(theory.signature, out, list(theory.queries))


def is_normal(seq):
    return ((is_atomic(seq.rhs) or isinstance(seq.rhs, Top))
            and classify(seq.lhs) <= Fragment.HORN)


def sequent_to_formula(seq):
    """alpha |-_x beta  to  (forall x)(alpha => beta), innermost quantifier last."""
    body = Implies(seq.lhs, seq.rhs)
    for v in reversed(seq.ctx):
        body = Forall(v, body)
    return body


def formula_to_sequent(phi):
    ctx = []
    while isinstance(phi, Forall):
        ctx.append(phi.var)
        phi = phi.body
    if not isinstance(phi, Implies):
        raise ShapeMismatch("expected a universally quantified implication")
    try:
        return Sequent(phi.left, tuple(ctx), phi.right)
    except LogicError as e:
        raise ShapeMismatch(str(e)) from None


def horn_clause_to_sequent(literals, ctx):
    """Literals are atoms (positive) or Not(atom) (negative)."""
    neg, pos = [], []
    for lit in literals:
        if isinstance(lit, Not) and (is_atomic(lit.body) or isinstance(lit.body, (Top, Bot))):
            neg.append(lit.body)
        elif is_atomic(lit) or isinstance(lit, (Top, Bot)):
            pos.append(lit)
        else:
            raise ShapeMismatch(f"{lit} is not a literal")
    if not pos:
        raise NoPositiveLiteral("clause has no positive literal, so it is not Horn")
    if len(pos) > 1:
        raise ShapeMismatch("clause has more than one positive literal")
    return Sequent(conj(neg), tuple(ctx), pos[0])


__all__ = [
    "NotHorn", "ShapeMismatch", "NoPositiveLiteral", "NotNormalForm", "NormalHornSequent",
    "atomic_subformulae", "unique_atomic_subformulae", "horn_normal_form",
    "horn_theory_normal_form", "is_normal", "sequent_to_formula", "formula_to_sequent",
    "horn_clause_to_sequent",
]
