"""Text format for theories (.clt), models (.clm) and proofs (.clp), plus printers.

A document starts with ``version 1;`` and holds ``;``-terminated declarations.
``#`` starts a comment.  Sequents carry an explicit context, written first
(``[x:A] phi |- psi``) or just before the turnstile (``phi [x] |- psi``).
"""

import re
from dataclasses import dataclass

from .syntax import (
    Var, App, Rel, Eq, Top, Bot, And, Or, Implies, Not, Exists, Forall,
    Fragment, LogicError, Signature, Theory, Sequent, TermInContext, FormulaInContext,
    check_sequent, check_formula, sort_of, QUANTIFIERS,
)
from .substitution import Substitution, over_context


class ParseError(LogicError):
    def __init__(self, message, line=0, col=0, kind="ParseError"):
        self.line, self.col, self.kind, self.message = line, col, kind, message
        super().__init__(f"{line}:{col}: {kind}: {message}")


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


_UNICODE = {"⊢": "|-", "∧": "&", "∨": "|", "⇒": "=>", "→": "->", "¬": "~",
            "∃": "exists", "∀": "forall", "⊤": "top", "⊥": "bot"}
_SYMBOLS = ["|-", "=>", "->", "&", "|", "~", "=", "(", ")", "[", "]", ",", ";", ":", ".", "/", "{", "}"]
_IDENT = re.compile(r"[A-Za-z0-9_*'](?:[A-Za-z0-9_*']|-(?=[A-Za-z0-9]))*")


def tokenize(text):
    toks = []
    line, col, i = 1, 1, 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i, col = i + 1, col + 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in _UNICODE:
            word = _UNICODE[ch]
            toks.append(Token("id" if word.isalpha() else "sym", word, line, col))
            i, col = i + 1, col + 1
            continue
        m = _IDENT.match(text, i)
        if m:
            toks.append(Token("id", m.group(), line, col))
            col += m.end() - i
            i = m.end()
            continue
        for s in _SYMBOLS:
            if text.startswith(s, i):
                toks.append(Token("sym", s, line, col))
                i, col = i + len(s), col + len(s)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text, signature=None):
        self.toks = tokenize(text)
        self.i = 0
        self.sig = signature if signature is not None else Signature()
        self.vars = {}          # declared default variables: name -> Var
        self.axioms = []
        self.queries = []
        self.fragment = None
        self.goals = []
        self.lines = []
        self.items = []
        self.model = None
        self.saw_version = False

    # token helpers --------------------------------------------------------

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None, kind="ParseError"):
        tok = tok or self.tok
        return ParseError(msg, tok.line, tok.col, kind)

    def at(self, text):
        return self.tok.text == text and self.tok.kind != "eof"

    def eat(self, text):
        if not self.at(text):
            shown = self.tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, text):
        if self.at(text):
            self.i += 1
            return True
        return False

    def ident(self, what="identifier"):
        if self.tok.kind != "id":
            raise self.error(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        t = self.tok
        self.i += 1
        return t.text

    def number(self):
        t = self.tok
        text = self.ident("number")
        if not text.isdigit():
            raise self.error(f"expected a number, found {text!r}", t)
        return int(text)

    # documents --------------------------------------------------------------

    def document(self):
        if self.at("version"):
            self.eat("version")
            t = self.tok
            v = self.number()
            if v != 1:
                raise self.error(f"unsupported version {v}", t)
            self.eat(";")
            self.saw_version = True
        else:
            raise self.error("document must start with 'version 1;'")
        while self.tok.kind != "eof":
            self.declaration()

    def declaration(self):
        start = self.tok
        try:
            self._declaration()
        except ParseError:
            raise
        except LogicError as e:
            raise ParseError(str(e), start.line, start.col, type(e).__name__) from None

    def _declaration(self):
        t = self.tok
        kw = t.text
        if t.kind == "id" and kw.isdigit() and self.peek().text == ":":
            return self.proof_line()
        self.i += 1
        if kw == "sort":
            for name in self.names():
                self.sig.add_sort(name)
        elif kw == "fun" and self.at_next_brace():
            self.fun_table()
            return
        elif kw == "fun":
            name = self.ident("function name")
            self.eat(":")
            args = self.sort_list()
            self.eat("->")
            res = self.ident("result sort")
            self.sig.add_function(name, args, res)
        elif kw == "const":
            names = self.names()
            self.eat(":")
            res = self.ident("sort")
            for name in names:
                self.sig.add_function(name, (), res)
        elif kw == "rel" and self.at_next_brace():
            self.rel_table()
            return
        elif kw == "rel":
            name = self.ident("relation name")
            args = ()
            if self.accept(":"):
                args = self.sort_list()
            self.sig.add_relation(name, args)
        elif kw == "prop":
            for name in self.names():
                self.sig.add_relation(name, ())
        elif kw == "var":
            names = self.names()
            self.eat(":")
            st = self.tok
            sort = self.ident("sort")
            if sort not in self.sig.sorts:
                raise self.error(f"unknown sort {sort}", st, "UnknownSort")
            for name in names:
                self.vars[name] = Var(name, sort)
        elif kw == "axiom":
            seq = self.sequent()
            check_sequent(self.sig, seq)
            self.axioms.append(seq)
        elif kw == "query":
            seq = self.sequent()
            check_sequent(self.sig, seq)
            self.queries.append(seq)
        elif kw == "goal":
            seq = self.sequent()
            check_sequent(self.sig, seq)
            self.goals.append(seq)
        elif kw == "fragment":
            ft = self.tok
            try:
                self.fragment = Fragment.parse(self.ident("fragment"))
            except LogicError as e:
                raise self.error(str(e), ft) from None
        elif kw == "iterator":
            self.iterator()
            return
        elif kw in ("term", "formula"):
            self.unify_item(kw)
        else:
            raise self.error(f"unknown declaration {kw!r}", t)
        self.eat(";")

    def at_next_brace(self):
        return self.peek(0).kind == "id" and self.peek(1).text == "{"

    def names(self):
        out = [self.ident()]
        while self.accept(","):
            out.append(self.ident())
        return out

    def sort_list(self):
        out = []
        if self.tok.kind == "id":
            out.append(self.ident("sort"))
            while self.accept(","):
                out.append(self.ident("sort"))
        return tuple(out)

    # contexts and sequents -------------------------------------------------

    def context(self):
        self.eat("[")
        out = []
        if not self.at("]"):
            while True:
                nt = self.tok
                name = self.ident("variable")
                if self.accept(":"):
                    st = self.tok
                    sort = self.ident("sort")
                    if sort not in self.sig.sorts:
                        raise self.error(f"unknown sort {sort}", st, "UnknownSort")
                    v = Var(name, sort)
                elif name in self.vars:
                    v = self.vars[name]
                else:
                    raise self.error(f"variable {name} needs a sort", nt)
                if v in out:
                    raise self.error(f"variable {name} repeated in context", nt, "ContextError")
                out.append(v)
                if not self.accept(","):
                    break
        self.eat("]")
        return tuple(out)

    def sequent(self):
        start = self.tok
        if self.at("["):
            ctx = self.context()
            scope = {v.name: v for v in ctx}
            lhs = self.formula(scope)
            self.eat("|-")
            rhs = self.formula(scope)
        else:
            j = self.i
            depth = 0
            while True:
                tk = self.toks[j]
                if tk.kind == "eof" or tk.text == ";" and depth == 0:
                    raise self.error("sequent needs a context before '|-'", start)
                if tk.text in ("(",):
                    depth += 1
                elif tk.text == ")":
                    depth -= 1
                elif tk.text == "|-" and depth == 0:
                    break
                j += 1
            if j == 0 or self.toks[j - 1].text != "]":
                raise self.error("sequent needs a context before '|-'", self.toks[j])
            k = j - 1
            while k > self.i and self.toks[k].text != "[":
                k -= 1
            save = self.i
            self.i = k
            ctx = self.context()
            self.i = save
            scope = {v.name: v for v in ctx}
            lhs = self.formula(scope)
            if self.i != k:
                raise self.error("unexpected text before the context")
            self.i = j + 1
            rhs = self.formula(scope)
        try:
            return Sequent(lhs, ctx, rhs)
        except LogicError as e:
            raise ParseError(str(e), start.line, start.col, type(e).__name__) from None

    # formulae -------------------------------------------------------------

    def formula(self, scope):
        left = self.disj(scope)
        if self.accept("=>"):
            return Implies(left, self.formula(scope))
        return left

    def disj(self, scope):
        out = self.conj(scope)
        while self.accept("|"):
            out = Or(out, self.conj(scope))
        return out

    def conj(self, scope):
        out = self.unary(scope)
        while self.accept("&"):
            out = And(out, self.unary(scope))
        return out

    def unary(self, scope):
        if self.accept("~"):
            return Not(self.unary(scope))
        if self.at("exists") or self.at("forall"):
            cls = Exists if self.tok.text == "exists" else Forall
            self.i += 1
            bound = []
            inner = dict(scope)
            while True:
                nt = self.tok
                name = self.ident("variable")
                if self.accept(":"):
                    st = self.tok
                    sort = self.ident("sort")
                    if sort not in self.sig.sorts:
                        raise self.error(f"unknown sort {sort}", st, "UnknownSort")
                    v = Var(name, sort)
                elif name in self.vars:
                    v = self.vars[name]
                else:
                    raise self.error(f"bound variable {name} needs a sort", nt)
                bound.append(v)
                inner[name] = v
                if not self.accept(","):
                    break
            self.eat(".")
            body = self.formula(inner)
            for v in reversed(bound):
                body = cls(v, body)
            return body
        return self.atom(scope)

    def atom(self, scope):
        t = self.tok
        if self.accept("("):
            phi = self.formula(scope)
            self.eat(")")
            return phi
        if self.accept("top"):
            return Top()
        if self.accept("bot"):
            return Bot()
        if t.kind != "id":
            raise self.error(f"expected a formula, found {t.text or 'end of input'!r}")
        name = t.text
        if name not in scope and name in self.sig.relations:
            self.i += 1
            args = ()
            if self.accept("("):
                args = self.term_args(scope)
            return Rel(name, args)
        left = self.term(scope)
        if not self.at("="):
            raise self.error(f"{name} is not a relation; expected '=' after a term", t, "UnknownSymbol")
        self.eat("=")
        return Eq(left, self.term(scope))

    def term_args(self, scope):
        args = []
        if not self.at(")"):
            args.append(self.term(scope))
            while self.accept(","):
                args.append(self.term(scope))
        self.eat(")")
        return tuple(args)

    def term(self, scope):
        t = self.tok
        name = self.ident("term")
        if name in scope:
            if self.at("("):
                raise self.error(f"variable {name} applied to arguments", t)
            return scope[name]
        if name in self.sig.functions:
            args = ()
            if self.accept("("):
                args = self.term_args(scope)
            return App(name, args)
        if name in self.vars:
            return self.vars[name]
        raise self.error(f"unknown symbol {name}", t, "UnknownSymbol")

    # proofs -----------------------------------------------------------------

    def proof_line(self):
        from .kernel import Line, Rule
        nt = self.tok
        num = self.number()
        if self.lines and num <= self.lines[-1].number:
            raise self.error(f"line {num} is not after line {self.lines[-1].number}", nt)
        self.eat(":")
        seq = self.sequent()
        check_sequent(self.sig, seq)
        self.eat(";")
        rt = self.tok
        name = self.ident("rule name")
        simple = {
            "id": "ID", "eq0": "Eq0", "eq1": "Eq1", "top": "Top", "bot": "Bot",
            "and-e0": "AndE0", "and-e1": "AndE1", "or-i0": "OrI0", "or-i1": "OrI1",
            "distributive": "Distributive", "em": "EM", "frobenius": "Frobenius",
        }
        unary = {"imp-down": "ImpliesDown", "imp-up": "ImpliesUp", "exists-down": "ExistsDown",
                 "exists-up": "ExistsUp", "forall-down": "ForallDown", "forall-up": "ForallUp",
                 "alpha": "AlphaRename"}
        binary = {"cut": "Cut", "and-i": "AndI", "or": "OrRule"}
        prem = ()
        if name in simple:
            rule = Rule(simple[name])
        elif name in unary:
            prem = (self.number(),)
            rule = Rule(unary[name])
        elif name in binary:
            a = self.number()
            self.eat(",")
            prem = (a, self.number())
            rule = Rule(binary[name])
        elif name == "negdef":
            if self.tok.kind == "id":
                prem = (self.number(),)
            rule = Rule("NegDef")
        elif name == "sub":
            p = self.number()
            prem = (p,)
            src = self._line_ctx(p)
            rule = Rule("Sub", theta=over_context(self.substitution(src, seq.ctx), src))
        elif name == "hyp":
            idx = self.number()
            theta = None
            if self.at("["):
                src = self.axioms[idx - 1].ctx if 1 <= idx <= len(self.axioms) else ()
                theta = over_context(self.substitution(src, seq.ctx), src)
            rule = Rule("Hypothesis", theta=theta, index=idx)
        elif name == "thm":
            ref = self.ident("theorem name")
            nums = []
            if self.tok.kind == "id":
                nums.append(self.number())
                while self.accept(","):
                    nums.append(self.number())
            prem = tuple(nums)
            rule = Rule("TheoremRef", name=ref)
        else:
            raise self.error(f"unknown rule {name!r}", rt)
        self.eat(";")
        self.lines.append(Line(num, seq, rule, prem))

    def _line_ctx(self, n):
        for ln in self.lines:
            if ln.number == n:
                return ln.sequent.ctx
        return ()

    def substitution(self, target_ctx, repl_ctx):
        self.eat("[")
        if self.accept("]"):
            return Substitution()
        scope = {v.name: v for v in target_ctx}
        scope.update({v.name: v for v in repl_ctx})
        reps = [self.term(scope)]
        while self.accept(","):
            reps.append(self.term(scope))
        self.eat("/")
        tscope = {v.name: v for v in target_ctx}
        targets = []
        while True:
            t = self.tok
            name = self.ident("variable")
            if name in tscope:
                targets.append(tscope[name])
            elif name in self.vars:
                targets.append(self.vars[name])
            else:
                raise self.error(f"substitution target {name} is not a known variable", t)
            if not self.accept(","):
                break
        self.eat("]")
        if len(reps) != len(targets):
            raise self.error("substitution needs as many terms as variables")
        try:
            return Substitution(tuple(zip(reps, targets)))
        except LogicError as e:
            raise self.error(str(e)) from None

    # models -----------------------------------------------------------------

    def _model(self):
        from .semantics import FiniteModel
        if self.model is None:
            self.model = FiniteModel(self.sig)
        return self.model

    def iterator(self):
        from .semantics import FiniteIterator
        st = self.tok
        sort = self.ident("sort")
        if sort not in self.sig.sorts:
            raise self.error(f"unknown sort {sort}", st, "UnknownSort")
        self.eat("{")
        self.eat("elems")
        elems = []
        while self.tok.kind == "id":
            elems.append(self.ident())
        self.eat(";")
        step = {}
        if self.accept("step"):
            while self.tok.kind == "id":
                at = self.tok
                a = self.ident()
                self.eat("->")
                b = self.ident()
                if a not in elems or b not in elems:
                    raise self.error(f"step {a}->{b} mentions an element outside {sort}", at)
                if a in step:
                    raise self.error(f"step of {a} given twice", at)
                step[a] = b
            self.eat(";")
        end = self.tok
        self.eat("}")
        missing = [e for e in elems if e not in step]
        if missing:
            raise self.error(f"missing step entry for {missing[0]} in {sort}", end)
        self._model().sorts[sort] = FiniteIterator(tuple(elems), step)

    def tuple_(self):
        self.eat("(")
        out = []
        if not self.at(")"):
            out.append(self.ident("element"))
            while self.accept(","):
                out.append(self.ident("element"))
        self.eat(")")
        return tuple(out)

    def fun_table(self):
        nt = self.tok
        name = self.ident("function name")
        if name not in self.sig.functions:
            raise self.error(f"unknown function {name}", nt, "UnknownSymbol")
        self.eat("{")
        table = {}
        while self.at("("):
            args = self.tuple_()
            self.eat("->")
            table[args] = self.ident("element")
            self.eat(";")
        self.eat("}")
        self._model().funs[name] = table

    def rel_table(self):
        nt = self.tok
        name = self.ident("relation name")
        if name not in self.sig.relations:
            raise self.error(f"unknown relation {name}", nt, "UnknownSymbol")
        self.eat("{")
        members = set()
        while self.at("("):
            members.add(self.tuple_())
            self.eat(";")
        self.eat("}")
        self._model().rels[name] = frozenset(members)

    # unification inputs ---------------------------------------------------------

    def unify_item(self, kind):
        ctx = None
        if self.at("["):
            ctx = self.context()
        scope = {v.name: v for v in ctx or ()}
        body = self.term(scope) if kind == "term" else self.formula(scope)
        if kind == "term":
            sort_of(self.sig, body)
        else:
            check_formula(self.sig, body)
        if ctx is None:
            self.items.append(body)
        elif kind == "term":
            self.items.append(TermInContext(ctx, body))
        else:
            self.items.append(FormulaInContext(ctx, body))


# ------------------------------------------------------------- entry points

def _parse(text, signature=None):
    p = _Parser(text, signature)
    p.document()
    return p


def parse_theory(text, signature=None):
    p = _parse(text, signature)
    return Theory(p.sig, p.axioms, p.queries)


def parse_sequent(text, theory):
    """A single sequent over an existing theory's signature."""
    p = _Parser(text, theory.signature)
    seq = p.sequent()
    if p.tok.kind != "eof":
        p.accept(";")
    if p.tok.kind != "eof":
        raise p.error("trailing text after sequent")
    check_sequent(theory.signature, seq)
    return seq


def parse_model(text, signature=None):
    from .semantics import validate_model
    p = _parse(text, signature.merged(Signature()) if signature is not None else None)
    if p.model is None:
        from .semantics import FiniteModel
        p.model = FiniteModel(p.sig)
    p.model.signature = p.sig
    problems = validate_model(p.model)
    if problems:
        raise ParseError("; ".join(problems), 1, 1, "ModelInvalid")
    return p.model


def parse_proof(text, theory=None, name=""):
    from .kernel import Derivation
    sig = theory.signature.merged(Signature()) if theory is not None else None
    p = _parse(text, sig)
    if p.fragment is None:
        raise ParseError("proof needs a 'fragment' declaration", 1, 1)
    axioms = (list(theory.axioms) if theory is not None else []) + p.axioms
    return Derivation(p.fragment, p.lines, p.goals, name, Theory(p.sig, axioms, p.queries))


def parse_items(text, signature=None):
    """Declarations followed by 'term' / 'formula' items, for unification."""
    p = _parse(text, signature)
    return p.sig, p.items


# ----------------------------------------------------------------- printing

_ASCII = {"turn": "|-", "and": "&", "or": "|", "imp": "=>", "not": "~",
          "ex": "exists ", "all": "forall ", "top": "top", "bot": "bot", "arrow": "->"}
_UNI = {"turn": "⊢", "and": "∧", "or": "∨", "imp": "⇒", "not": "¬",
        "ex": "∃", "all": "∀", "top": "⊤", "bot": "⊥", "arrow": "→"}

_PREC = {Implies: 1, Or: 2, And: 3}


def format_term(t):
    return str(t)


def _open_right(phi):
    if isinstance(phi, QUANTIFIERS):
        return True
    if isinstance(phi, Not):
        return False
    if isinstance(phi, (And, Or, Implies)):
        return _open_right(phi.right)
    return False


def format_formula(phi, unicode=False):
    return _fmt(phi, _UNI if unicode else _ASCII)


def _fmt(phi, sy):
    if isinstance(phi, Top):
        return sy["top"]
    if isinstance(phi, Bot):
        return sy["bot"]
    if isinstance(phi, Rel):
        if not phi.args:
            return phi.name
        return f"{phi.name}({', '.join(map(str, phi.args))})"
    if isinstance(phi, Eq):
        return f"{phi.left} = {phi.right}"
    if isinstance(phi, Not):
        inner = _fmt(phi.body, sy)
        if isinstance(phi.body, (And, Or, Implies, Eq) + QUANTIFIERS):
            inner = f"({inner})"
        return sy["not"] + inner
    if isinstance(phi, QUANTIFIERS):
        q = sy["ex"] if isinstance(phi, Exists) else sy["all"]
        return f"{q}{phi.var.name}:{phi.var.sort}. {_fmt(phi.body, sy)}"
    p = _PREC[type(phi)]
    op = {And: sy["and"], Or: sy["or"], Implies: sy["imp"]}[type(phi)]
    left, right = _fmt(phi.left, sy), _fmt(phi.right, sy)
    lp = _PREC.get(type(phi.left), 9)
    rp = _PREC.get(type(phi.right), 9)
    if isinstance(phi.left, QUANTIFIERS):
        lp = 0
    if isinstance(phi, Implies):
        if lp <= p or _open_right(phi.left):
            left = f"({left})"
        if rp < p:
            right = f"({right})"
    else:
        if lp < p or _open_right(phi.left):
            left = f"({left})"
        if rp <= p and not isinstance(phi.right, QUANTIFIERS):
            right = f"({right})"
    return f"{left} {op} {right}"


def format_context(ctx):
    return "[" + ", ".join(f"{v.name}:{v.sort}" for v in ctx) + "]"


def format_sequent(seq, unicode=False):
    sy = _UNI if unicode else _ASCII
    return f"{format_context(seq.ctx)} {_fmt(seq.lhs, sy)} {sy['turn']} {_fmt(seq.rhs, sy)}"


def format_substitution(theta):
    if not theta.pairs:
        return "[]"
    return ("[" + ", ".join(str(s) for s in theta.replacements) + " / "
            + ", ".join(v.name for v in theta.targets) + "]")


def format_signature(sig):
    out = []
    if sig.sorts:
        out.append(f"sort {', '.join(sig.sorts)};")
    for f in sig.functions.values():
        if f.arg_sorts:
            out.append(f"fun {f.name} : {', '.join(f.arg_sorts)} -> {f.result};")
        else:
            out.append(f"const {f.name} : {f.result};")
    for r in sig.relations.values():
        if r.arg_sorts:
            out.append(f"rel {r.name} : {', '.join(r.arg_sorts)};")
        else:
            out.append(f"prop {r.name};")
    return out


def format_theory(theory, unicode=False):
    out = ["version 1;"] + format_signature(theory.signature)
    out += [f"axiom {format_sequent(a, unicode)};" for a in theory.axioms]
    out += [f"query {format_sequent(q, unicode)};" for q in theory.queries]
    return "\n".join(out) + "\n"


_RULE_NAMES = {
    "ID": "id", "Eq0": "eq0", "Eq1": "eq1", "Top": "top", "Bot": "bot",
    "AndE0": "and-e0", "AndE1": "and-e1", "OrI0": "or-i0", "OrI1": "or-i1",
    "Distributive": "distributive", "EM": "em", "Frobenius": "frobenius",
    "ImpliesDown": "imp-down", "ImpliesUp": "imp-up", "ExistsDown": "exists-down",
    "ExistsUp": "exists-up", "ForallDown": "forall-down", "ForallUp": "forall-up",
    "AlphaRename": "alpha", "Cut": "cut", "AndI": "and-i", "OrRule": "or", "NegDef": "negdef",
}


def format_rule(ln):
    r = ln.rule
    nums = ",".join(map(str, ln.premises))
    if r.kind == "Sub":
        return f"sub {nums} {format_substitution(r.theta)}"
    if r.kind == "Hypothesis":
        return f"hyp {r.index}" + (f" {format_substitution(r.theta)}" if r.theta is not None else "")
    if r.kind == "TheoremRef":
        return f"thm {r.name}" + (f" {nums}" if nums else "")
    base = _RULE_NAMES[r.kind]
    return f"{base} {nums}" if nums else base


def format_derivation(d, unicode=False, with_theory=True):
    out = ["version 1;"]
    if with_theory and d.theory is not None:
        out += format_signature(d.theory.signature)
        out += [f"axiom {format_sequent(a, unicode)};" for a in d.theory.axioms]
    out.append(f"fragment {d.fragment};")
    out += [f"goal {format_sequent(g, unicode)};" for g in d.goals]
    for ln in d.lines:
        out.append(f"{ln.number}: {format_sequent(ln.sequent, unicode)} ; {format_rule(ln)};")
    return "\n".join(out) + "\n"


def format_model(M):
    out = ["version 1;"]
    for s, it in M.sorts.items():
        steps = " ".join(f"{a}->{it.step[a]}" for a in it.carrier)
        out.append(f"iterator {s} {{ elems {' '.join(it.carrier)}; step {steps}; }}")
    for name, table in M.funs.items():
        rows = " ".join(f"({', '.join(k)}) -> {v};" for k, v in sorted(table.items()))
        out.append(f"fun {name} {{ {rows} }}")
    for name, members in M.rels.items():
        rows = " ".join(f"({', '.join(m)});" for m in sorted(members))
        out.append(f"rel {name} {{ {rows} }}")
    return "\n".join(out) + "\n"
