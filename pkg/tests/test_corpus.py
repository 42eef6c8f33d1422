"""The bundled corpus: every entry checks, and corrupted variants do not."""

import random
from pathlib import Path

import pytest

from mutation import drop_step, mutations

from mathkernel.corpus import (
    CorpusError,
    check_entry,
    corpus_dir,
    load_manifest,
    run_corpus,
)
from mathkernel.kernel import ByTheory, ProofCheckError, check_proof
from mathkernel.script import parse_script


ENTRIES = load_manifest()


def load(script_name):
    path = corpus_dir() / script_name
    return parse_script(path.read_text())


def test_manifest_covers_all_scripts():
    names = {e.script for e in ENTRIES}
    on_disk = {p.name for p in corpus_dir().glob("*.pf")}
    assert names == on_disk
    assert len(ENTRIES) >= 12


def test_every_entry_passes():
    report = run_corpus()
    failures = [f"{r.entry.script}: {r.detail}"
                for r in report.results if not r.passed]
    assert not failures, failures


def test_gated_entries_fail_without_caller_grants():
    for name in ("release_paradox.pf", "unrestricted_T_paradox.pf",
                 "liar_meaningful_collapse_released.pf",
                 "quantified_holding_law_released.pf"):
        script, env = load(name)
        with pytest.raises(ProofCheckError):
            check_proof(env, script.proof(), granted=set())


def test_ungated_entries_use_no_extensions():
    gated = {"release_paradox.pf", "unrestricted_T_paradox.pf",
             "liar_meaningful_collapse_released.pf",
             "quantified_holding_law_released.pf"}
    for entry in ENTRIES:
        if entry.script not in gated:
            assert entry.extensions == (), entry.script
            script, env = load(entry.script)
            judgment = check_proof(env, script.proof(), granted=set())
            assert judgment.extensions_used == ()


def test_missing_script_reported():
    entry = ENTRIES[0]
    from dataclasses import replace
    result = check_entry(replace(entry, script="absent.pf"))
    assert not result.passed
    assert "absent.pf" in result.detail


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.script)
def test_twenty_mutations_rejected(entry):
    script, env = load(entry.script)
    proof = script.proof()
    rng = random.Random(entry.script)
    for mutated in mutations(rng, proof, count=20):
        with pytest.raises(ProofCheckError):
            check_proof(env, mutated)


def test_deleting_the_capture_step_breaks_the_anomaly():
    script, env = load("anomaly_assertible_liar.pf")
    proof = script.proof()
    capture_steps = [i for i, st in enumerate(proof.steps)
                     if isinstance(st.just, ByTheory)
                     and st.just.scheme == "Capture"]
    assert capture_steps, "the anomaly derivation must use Capture"
    for i in capture_steps:
        with pytest.raises(ProofCheckError):
            check_proof(env, drop_step(proof, i))


def test_corpus_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("MATHKERNEL_CORPUS", str(tmp_path))
    with pytest.raises(CorpusError):
        load_manifest()  # no manifest in the empty override directory
