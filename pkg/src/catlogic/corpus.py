"""Bundled example theories, models, unification cases and proof scripts."""

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    kind: str
    files: tuple
    expected: dict

    def paths(self):
        return [corpus_path(f) for f in self.files]

    def texts(self):
        return [read_text(f) for f in self.files]


def _root():
    return resources.files("catlogic") / "corpus"


def corpus_path(filename):
    return str(_root() / filename)


def read_text(filename):
    return (_root() / filename).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def list_corpus():
    raw = json.loads(read_text("manifest.json"))
    return tuple(CorpusEntry(e["name"], e["kind"], tuple(e["files"]), e.get("expected", {}))
                 for e in raw["entries"])


def entry(name):
    for e in list_corpus():
        if e.name == name:
            return e
    raise KeyError(name)


def resolve(name_or_path):
    """A corpus entry name becomes its first file path; anything else is returned unchanged."""
    try:
        return entry(name_or_path).paths()[0]
    except KeyError:
        return name_or_path


@lru_cache(maxsize=None)
def _proofs():
    from .dsl import parse_proof
    return {e.name: parse_proof(read_text(e.files[0]), name=e.name)
            for e in list_corpus() if e.kind == "proof"}


def proof_corpus():
    """Mapping from corpus name to parsed Derivation (shared, treat as read-only)."""
    return dict(_proofs())


corpus = proof_corpus
