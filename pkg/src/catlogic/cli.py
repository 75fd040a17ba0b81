"""Command line front end.

Exit codes: 0 success or true, 1 false or invalid, 2 usage or parse error,
3 search budget exhausted.
"""

import argparse
import sys
import time

from . import corpus as _corpus
from .dsl import (
    ParseError, parse_theory, parse_sequent, parse_model, parse_proof, parse_items,
    format_theory, format_sequent, format_substitution, format_derivation, format_formula,
)
from .inference import (
    IterationBudget, BudgetExhausted, NotPropositional, propositional_forward_chaining,
    forward_chaining, format_trace, sort_closed, closed_term_witness,
)
from .kernel import check_derivation
from .normal_form import NotHorn, NotNormalForm, horn_theory_normal_form
from .semantics import satisfies
from .substitution import apply_term_in_context, apply_formula_in_context, apply_term, apply_formula
from .syntax import LogicError, TermInContext, classify
from .unification import unify_terms, unify_formulae, unify_terms_in_context, unify_formulae_in_context

OK, FALSE, USAGE, BUDGET = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise _Usage(f"cannot read {path}: {e.strerror}") from None


def _theory(path):
    return parse_theory(_read(path))


def cmd_check(a, out):
    T = _theory(a.theory)
    sig = T.signature
    print(f"sorts: {len(sig.sorts)}  functions: {len(sig.functions)}  "
          f"relations: {len(sig.relations)}  axioms: {len(T.axioms)}  queries: {len(T.queries)}", file=out)
    print(f"fragment: {classify(T)}", file=out)
    return OK


def cmd_normalize(a, out):
    T = _theory(a.theory)
    try:
        N = horn_theory_normal_form(T)
    except NotHorn as e:
        print(f"NotHorn: {e}", file=out)
        return FALSE
    out.write(format_theory(N, a.unicode))
    return OK


def cmd_chain(a, out):
    T = _theory(a.theory)
    if a.goal:
        goal = parse_sequent(a.goal, T)
    elif T.queries:
        goal = T.queries[0]
    else:
        raise _Usage("chain needs --goal or a query in the theory")
    start = time.perf_counter()
    try:
        try:
            res = propositional_forward_chaining(T, goal)
        except NotPropositional:
            res = forward_chaining(T, goal, IterationBudget(a.budget_passes, a.budget_queue))
    except (NotNormalForm, NotHorn) as e:
        print(f"{type(e).__name__}: {e}", file=out)
        return USAGE
    except BudgetExhausted as e:
        print(f"unknown: {e}", file=out)
        return BUDGET
    elapsed = time.perf_counter() - start
    print("true" if res.derivable else "false", file=out)
    if a.trace:
        out.write(format_trace(res, a.unicode))
    if a.derivation and res.derivation is not None:
        out.write(format_derivation(res.derivation, a.unicode))
    if a.timing:
        print(f"# {elapsed * 1000:.2f} ms", file=out)
    return OK if res.derivable else FALSE


_UNIFIERS = {
    "terms": unify_terms, "formulae": unify_formulae,
    "terms-in-context": unify_terms_in_context, "formulae-in-context": unify_formulae_in_context,
}


def cmd_unify(a, out):
    if a.kind not in _UNIFIERS:
        raise _Usage(f"unknown unification kind {a.kind!r}; choose from {', '.join(_UNIFIERS)}")
    sig1, lhs = parse_items(_read(a.lhs))
    sig2, rhs = parse_items(_read(a.rhs))
    sig = sig1.merged(sig2)
    res = _UNIFIERS[a.kind](lhs, rhs, signature=sig)
    for step in res.trace:
        print(f"# {step}", file=out)
    if not res:
        print(f"no unifier: {res.reason} {res.detail}".rstrip(), file=out)
        return FALSE
    print(format_substitution(res.theta), file=out)
    for item in lhs + rhs:
        print(f"  {_show_applied(item, res.theta, a.unicode)}", file=out)
    return OK


def _show_applied(item, theta, unicode):
    if isinstance(item, TermInContext):
        r = apply_term_in_context(item, theta)
        return f"{', '.join(v.name for v in r.ctx)}. {r.body}"
    if hasattr(item, "ctx"):
        r = apply_formula_in_context(item, theta)
        return f"{', '.join(v.name for v in r.ctx)}. {format_formula(r.body, unicode)}"
    if hasattr(item, "fn") or hasattr(item, "sort"):
        return str(apply_term(item, theta))
    return format_formula(apply_formula(item, theta), unicode)


def cmd_check_proof(a, out):
    files = [f for f in (a.first, a.second) if f]
    if not files:
        raise _Usage("check-proof needs a proof file")
    theory = _theory(files[0]) if len(files) == 2 else None
    d = parse_proof(_read(files[-1]), theory)
    errors = check_derivation(d)
    for e in errors:
        print(e, file=out)
    if errors:
        return FALSE
    print(f"ok: {len(d.lines)} lines in the {d.fragment} fragment", file=out)
    return OK


def cmd_model_check(a, out):
    T = _theory(a.theory)
    M = parse_model(_read(a.model), T.signature)
    ok = True
    for kind, seqs in (("axiom", T.axioms), ("query", T.queries)):
        for s in seqs:
            sat = satisfies(M, s)
            ok = ok and (sat or kind == "query")
            print(f"{'satisfied' if sat else 'refuted'}  {kind}  {format_sequent(s, a.unicode)}", file=out)
    return OK if ok else FALSE


def cmd_closed_sort(a, out):
    T = _theory(a.theory)
    if not sort_closed(T.signature, a.sort):
        print("false", file=out)
        return FALSE
    print(f"true  witness {closed_term_witness(T.signature, a.sort)}", file=out)
    return OK


def cmd_report(a, out):
    from .report import write_report
    for path in write_report(a.outdir):
        print(path, file=out)
    return OK


def build_parser():
    def common(default):
        c = argparse.ArgumentParser(add_help=False)
        c.add_argument("--unicode", action="store_true", default=default(False),
                       help="print with logical symbols")
        c.add_argument("--corpus", metavar="NAME", default=default(None),
                       help="take input files from a bundled corpus entry")
        return c

    # subcommands repeat the global options without clobbering values given earlier
    p = argparse.ArgumentParser(prog="catlogic", description="Multi-sorted sequent logic toolkit.",
                                parents=[common(lambda v: v)])
    sub = p.add_subparsers(dest="command", required=True)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common(lambda v: argparse.SUPPRESS)], **k)

    s = sub.add_parser("check", help="parse a theory and summarise it")
    s.add_argument("theory", nargs="?")
    s.set_defaults(run=cmd_check, files=["theory"])

    s = sub.add_parser("normalize", help="print the Horn normal form of a theory")
    s.add_argument("theory", nargs="?")
    s.set_defaults(run=cmd_normalize, files=["theory"])

    s = sub.add_parser("chain", help="forward chaining towards a goal sequent")
    s.add_argument("theory", nargs="?")
    s.add_argument("--goal", help="goal sequent; defaults to the theory's first query")
    s.add_argument("--trace", action="store_true")
    s.add_argument("--derivation", action="store_true")
    s.add_argument("--timing", action="store_true")
    s.add_argument("--budget-passes", type=int, default=IterationBudget.passes)
    s.add_argument("--budget-queue", type=int, default=IterationBudget.queue)
    s.set_defaults(run=cmd_chain, files=["theory"])

    s = sub.add_parser("unify", help="unify two lists read from files")
    s.add_argument("kind", help=", ".join(_UNIFIERS))
    s.add_argument("lhs", nargs="?")
    s.add_argument("rhs", nargs="?")
    s.set_defaults(run=cmd_unify, files=["lhs", "rhs"])

    s = sub.add_parser("check-proof", help="check a proof script, optionally against a theory")
    s.add_argument("first", nargs="?", metavar="theory")
    s.add_argument("second", nargs="?", metavar="proof")
    s.set_defaults(run=cmd_check_proof, files=["first", "second"])

    s = sub.add_parser("model-check", help="evaluate a theory's sequents in a finite model")
    s.add_argument("theory", nargs="?")
    s.add_argument("model", nargs="?")
    s.set_defaults(run=cmd_model_check, files=["theory", "model"])

    s = sub.add_parser("closed-sort", help="is there a closed term of a sort?")
    s.add_argument("theory", nargs="?", help="omit when --corpus names the theory")
    s.add_argument("sort")
    s.set_defaults(run=cmd_closed_sort, files=["theory"])

    s = sub.add_parser("report", help="write corpus statistics as TSV and PNG charts")
    s.add_argument("outdir", nargs="?", default="report")
    s.set_defaults(run=cmd_report, files=[])
    return p


def _fill_from_corpus(a):
    try:
        e = _corpus.entry(a.corpus)
    except KeyError:
        raise _Usage(f"no corpus entry named {a.corpus!r}") from None
    paths = e.paths()
    slots = [s for s in a.files if getattr(a, s) is None]
    for slot, path in zip(slots, paths):
        setattr(a, slot, path)


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        if a.corpus:
            _fill_from_corpus(a)
        missing = [s for s in a.files if getattr(a, s) is None and s != "second"]
        if missing:
            raise _Usage(f"missing argument: {missing[0]}")
        return a.run(a, out)
    except _Usage as e:
        print(f"usage error: {e}", file=sys.stderr)
        return USAGE
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return USAGE
    except LogicError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
