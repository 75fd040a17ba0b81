import io
import re
import subprocess
import sys
import unicodedata

from catlogic.cli import main
from catlogic.corpus import corpus_path


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_chain_trace_table():
    code, out = run("chain", corpus_path("pl-fc-section3.clt"), "--goal", "[] A & B & C |- E", "--trace")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "true"
    assert lines[1].split() == ["Q", "history", "U", "Count", "Derivation"]
    assert lines[-1].split() == ["_A_", "&", "_B_", "&", "_C_", "&", "_D_", "&", "_E_", "E"]
    assert sum(1 for l in lines if "cut 5,10" in l) == 1


def test_chain_unicode_trace_aligns():
    code, out = run("--unicode", "chain", corpus_path("pl-fc-section3.clt"), "--trace")
    assert code == 0
    rows = out.splitlines()[1:]
    assert "∧" in out and "⊢" in out
    # the popped symbol column lines up across rows despite combining underlines
    width = lambda t: sum(1 for c in t if not unicodedata.combining(c))
    starts = {width(r[:re.search(r"  +\S", r).end() - 1]) for r in rows if not r.startswith(" ")}
    assert len(starts) == 1


def test_chain_false_and_derivation_round_trip(tmp_path):
    code, out = run("--corpus", "fo-fc-section6-open", "chain")
    assert (code, out.strip()) == (1, "false")
    code, out = run("--corpus", "fo-fc-section6", "chain", "--derivation")
    assert code == 0
    proof = tmp_path / "chain.clp"
    proof.write_text(out.split("\n", 1)[1])
    code, msg = run("check-proof", str(proof))
    assert code == 0 and msg.startswith("ok: 13 lines")


def test_budget_exit_code(tmp_path):
    t = tmp_path / "nat.clt"
    t.write_text("version 1;\nsort N;\nconst z : N;\nfun s : N -> N;\nrel Nat : N;\nrel Never : N;\n"
                 "axiom [] top |- Nat(z);\naxiom [n:N] Nat(n) |- Nat(s(n));\n"
                 "query [m:N] top |- Never(m);\n")
    code, out = run("chain", str(t), "--budget-passes", "3")
    assert code == 3 and out.startswith("unknown")


def test_check_proof_reports_errors(tmp_path):
    text = open(corpus_path("and-comm.clp")).read().replace("and-i 2,1", "and-i 1,2")
    p = tmp_path / "bad.clp"
    p.write_text(text)
    code, out = run("check-proof", str(p))
    assert code == 1 and "SchemaMismatch" in out and "line 3" in out


def test_unify_outputs():
    code, out = run("--corpus", "unify-occurs", "unify", "terms")
    assert code == 1 and "no unifier: OccursCheck" in out
    code, out = run("--corpus", "unify-section4", "unify", "terms-in-context")
    assert code == 0 and any(l.startswith("# ") for l in out.splitlines())


def test_model_check_output():
    code, out = run("--corpus", "counterexample-section5", "model-check")
    rows = [l.split()[:2] for l in out.splitlines()]
    assert rows == [["satisfied", "axiom"], ["refuted", "query"]]
    assert code == 0


def test_closed_sort():
    code, out = run("--corpus", "fo-fc-section6", "closed-sort", "Y")
    assert code == 0 and out.split() == ["true", "witness", "k"]
    code, out = run("--corpus", "fo-fc-section6", "closed-sort", "X")
    assert code == 1 and out.strip() == "false"


def test_normalize_and_check():
    code, out = run("--corpus", "pl-fc-section3", "normalize")
    assert code == 0 and out.startswith("version 1;")
    code, out = run("check", corpus_path("points-lines.clt"))
    assert code == 0 and "fragment: horn" in out


def test_usage_errors(capsys, tmp_path):
    assert run("check", str(tmp_path / "missing.clt"))[0] == 2
    bad = tmp_path / "bad.clt"
    bad.write_text("version 1;\nrel P : Nope;\n")
    assert run("check", str(bad))[0] == 2
    err = capsys.readouterr().err
    assert "2:" in err and "Nope" in err
    assert run("closed-sort", corpus_path("fo-fc-section6.clt"), "Nope")[0] == 2


def test_report(tmp_path):
    code, out = run("report", str(tmp_path / "r"))
    assert code == 0
    names = {p.name for p in (tmp_path / "r").iterdir()}
    assert {"proofs.tsv", "proof_lines.png", "rule_usage.png", "check_time.png"} <= names
    rows = (tmp_path / "r" / "proofs.tsv").read_text().splitlines()
    assert len(rows) == 42 and rows[0].split("\t")[0] == "name"
    assert all(r.split("\t")[-1] == "True" for r in rows[1:])


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "catlogic.cli", "--corpus", "fo-fc-section6", "closed-sort", "Y"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.startswith("true")
