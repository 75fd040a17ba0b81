import io
from collections import Counter

import pytest

from catlogic.cli import main
from catlogic.corpus import list_corpus, entry, proof_corpus

CATEGORIES = {
    "equality": 2, "permutation": 1, "assoc-comm": 4, "top-bot": 4, "frobenius": 2, "two-rule": 2,
    "distributive": 4, "or-exists": 2, "implication": 4, "negation": 2, "contradiction": 1,
    "double-negation": 2, "contrapositive": 2, "de-morgan": 4, "resolution": 2,
}


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_manifest_size_and_required_names():
    names = [e.name for e in list_corpus()]
    assert len(names) == 51 and len(set(names)) == 51
    for n in ("pl-fc-section3", "fo-fc-section6", "fo-fc-section6-open", "counterexample-section5",
              "unify-section4", "points-lines", "points-lines-model"):
        assert n in names


def test_category_counts():
    got = Counter(e.expected.get("category") for e in list_corpus() if e.kind == "proof")
    for cat, n in CATEGORIES.items():
        assert got[cat] == n, cat
    assert sum(CATEGORIES.values()) == 38
    extra = set(got) - set(CATEGORIES)
    assert extra == {"horn-translation"}


def test_every_proof_is_listed_once():
    proofs = proof_corpus()
    assert sorted(proofs) == sorted(e.name for e in list_corpus() if e.kind == "proof")


def _split(text):
    parts, depth, cur = [], 0, ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    return parts + [cur.strip()] if cur.strip() else parts


def _moving(text):
    """The non-identity pairs of a printed substitution."""
    left, right = text.strip()[1:-1].split(" / ")
    return {(a, b) for a, b in zip(_split(left), _split(right)) if a != b}


@pytest.mark.parametrize("e", list_corpus(), ids=lambda e: e.name)
def test_expected_outcome_via_cli(e):
    x = e.expected
    if e.kind == "proof":
        code, out = run("--corpus", e.name, "check-proof")
        assert code == 0 and out.startswith("ok")
    elif e.kind == "chain-case":
        code, out = run("--corpus", e.name, "chain", "--derivation")
        assert code == (0 if x["derivable"] else 1)
        assert out.splitlines()[0] == ("true" if x["derivable"] else "false")
        if "derivation_lines" in x:
            assert sum(1 for l in out.splitlines() if l[:1].isdigit()) == x["derivation_lines"]
    elif e.kind == "unify-case":
        code, out = run("--corpus", e.name, "unify", x["kind"])
        assert code == (0 if x["unifiable"] else 1)
        if x["unifiable"]:
            shown = next(l for l in out.splitlines() if l.startswith("["))
            assert _moving(shown) == _moving(x["substitution"])
        else:
            assert x["reason"] in out
    elif e.kind == "model":
        code, out = run("--corpus", e.name, "model-check")
        verdicts = [l.split()[0] == "satisfied" for l in out.splitlines() if l.split()[:1]]
        assert verdicts == x["satisfied"]
        assert code == 0
    else:
        code, out = run("--corpus", e.name, "check")
        assert code == 0
        assert f"fragment: {x['fragment']}" in out and f"axioms: {x['axioms']}" in out


def test_entry_lookup():
    assert entry("eq-symm").files == ("eq-symm.clp",)
    with pytest.raises(KeyError):
        entry("nope")
