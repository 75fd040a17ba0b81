"""Corpus statistics: a TSV table plus a few matplotlib charts."""

import csv
import os
import time
from collections import Counter

from .corpus import list_corpus, proof_corpus
from .kernel import check_derivation


def proof_metrics(repeats=5):
    """One row per corpus proof: size, rule mix and median checking time."""
    proofs = proof_corpus()
    rows = []
    for e in list_corpus():
        if e.kind != "proof":
            continue
        d = proofs[e.name]
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            errors = check_derivation(d)
            times.append(time.perf_counter() - t0)
        times.sort()
        rules = Counter(ln.rule.kind for ln in d.lines)
        rows.append({
            "name": e.name,
            "category": e.expected.get("category", ""),
            "fragment": d.fragment.name.lower(),
            "lines": len(d.lines),
            "distinct_rules": len(rules),
            "theorem_refs": rules.get("TheoremRef", 0),
            "check_ms": round(times[len(times) // 2] * 1000, 4),
            "ok": not errors,
            "rules": rules,
        })
    return rows


_COLUMNS = ("name", "category", "fragment", "lines", "distinct_rules", "theorem_refs", "check_ms", "ok")


def write_report(outdir):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(outdir, exist_ok=True)
    rows = proof_metrics()
    written = []

    tsv = os.path.join(outdir, "proofs.tsv")
    with open(tsv, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(_COLUMNS)
        for r in rows:
            w.writerow([r[c] for c in _COLUMNS])
    written.append(tsv)

    names = [r["name"] for r in rows]
    fig, ax = plt.subplots(figsize=(10, 4.5))
    ax.bar(names, [r["lines"] for r in rows], color="tab:blue")
    ax.set_ylabel("derivation lines")
    ax.tick_params(axis="x", labelrotation=75, labelsize=7)
    fig.tight_layout()
    written.append(_save(fig, outdir, "proof_lines.png", plt))

    totals = Counter()
    for r in rows:
        totals.update(r["rules"])
    kinds = sorted(totals, key=lambda k: -totals[k])
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.barh(kinds, [totals[k] for k in kinds], color="tab:green")
    ax.invert_yaxis()
    ax.set_xlabel("uses across the corpus")
    fig.tight_layout()
    written.append(_save(fig, outdir, "rule_usage.png", plt))

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.scatter([r["lines"] for r in rows], [r["check_ms"] for r in rows], s=14)
    ax.set_xlabel("derivation lines")
    ax.set_ylabel("median check time (ms)")
    fig.tight_layout()
    written.append(_save(fig, outdir, "check_time.png", plt))
    return written


def _save(fig, outdir, name, plt):
    path = os.path.join(outdir, name)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path
