"""The bundled corpus of checked proof scripts.

Each entry pairs a .pf script with the judgment it must produce: the
exact conclusion, hypotheses, and set of extension schemes used.  The
scripts are frozen text; running the corpus re-checks every one from
scratch, so nothing depends on the tools that produced them.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .kernel import ProofCheckError, check_proof
from .parser import parse_formula
from .script import ScriptError, parse_script
from .syntax import pformat

CORPUS_DIR_VAR = "MATHKERNEL_CORPUS"


class CorpusError(Exception):
    """Missing script, malformed manifest, or an unexpected judgment."""


@dataclass(frozen=True)
class CorpusEntry:
    script: str
    description: str
    hypotheses: tuple[str, ...]
    conclusion: str
    extensions: tuple[tuple[str, Optional[str]], ...]


@dataclass(frozen=True)
class EntryResult:
    entry: CorpusEntry
    passed: bool
    detail: str
    seconds: float


@dataclass(frozen=True)
class CorpusReport:
    results: tuple[EntryResult, ...]
    seconds: float

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def corpus_dir() -> Path:
    """The directory holding the scripts; overridable for testing."""
    override = os.environ.get(CORPUS_DIR_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files(__package__) / "corpus"))


def load_manifest(directory: Optional[Path] = None) -> tuple[CorpusEntry, ...]:
    directory = directory or corpus_dir()
    manifest = directory / "manifest.json"
    if not manifest.is_file():
        raise CorpusError(f"no manifest at {manifest}")
    try:
        raw = json.loads(manifest.read_text())
    except json.JSONDecodeError as exc:
        raise CorpusError(f"malformed manifest: {exc}") from exc
    entries = []
    for item in raw:
        entries.append(CorpusEntry(
            script=item["script"],
            description=item.get("description", ""),
            hypotheses=tuple(item.get("hypotheses", [])),
            conclusion=item["conclusion"],
            extensions=tuple(
                (e["scheme"], e.get("formula")) for e in item["extensions"]),
        ))
    return tuple(entries)


def check_entry(entry: CorpusEntry, directory: Optional[Path] = None
                ) -> EntryResult:
    directory = directory or corpus_dir()
    start = time.perf_counter()

    def done(passed: bool, detail: str) -> EntryResult:
        return EntryResult(entry, passed, detail, time.perf_counter() - start)

    path = directory / entry.script
    if not path.is_file():
        return done(False, f"missing script {path}")
    try:
        script, env = parse_script(path.read_text())
        judgment = check_proof(env, script.proof())
    except (ScriptError, ProofCheckError) as exc:
        return done(False, str(exc))
    expected_conclusion = parse_formula(entry.conclusion, env)
    if judgment.conclusion != expected_conclusion:
        return done(False, f"concluded {pformat(judgment.conclusion)}, "
                           f"expected {entry.conclusion}")
    got_hyps = tuple(pformat(h) for h in judgment.hypotheses)
    want_hyps = tuple(
        pformat(parse_formula(h, env)) for h in entry.hypotheses)
    if got_hyps != want_hyps:
        return done(False, f"hypotheses {list(got_hyps)}, "
                           f"expected {list(want_hyps)}")
    got_ext = tuple(sorted(
        (g.scheme, None if g.formula is None else pformat(g.formula))
        for g in judgment.extensions_used))
    want_ext = tuple(sorted(
        (scheme, None if f is None else pformat(parse_formula(f, env)))
        for scheme, f in entry.extensions))
    if got_ext != want_ext:
        return done(False, f"extensions {list(got_ext)}, "
                           f"expected {list(want_ext)}")
    return done(True, f"⊦ {pformat(judgment.conclusion)}")


def run_corpus(directory: Optional[Path] = None) -> CorpusReport:
    directory = directory or corpus_dir()
    start = time.perf_counter()
    results = tuple(check_entry(e, directory) for e in load_manifest(directory))
    return CorpusReport(results, time.perf_counter() - start)
