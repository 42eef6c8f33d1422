"""Proof-script reading, writing, and the text round trip."""

import pytest

from mathkernel.kernel import ByMP, ByTheory, ExtensionGrant, check_proof
from mathkernel.script import ScriptError, emit_script, parse_script, script_of
from mathkernel.syntax import BOT, pformat


GOOD = """\
# a tiny but representative script
def la := ~A(`la`)
def ala := A(`la`)
hyp 1: M(`la`)
1: M(`la`) by hyp 1
2: M(`la`) -> ~A(`la`) -> A(`la`) by Capture[la]
3: ~A(`la`) -> A(`la`) by MP 1 2
"""


def test_parse_basic_script():
    script, env = parse_script(GOOD)
    assert len(script.hypotheses) == 1
    assert len(script.steps) == 3
    assert isinstance(script.steps[1].just, ByTheory)
    assert isinstance(script.steps[2].just, ByMP)
    judgment = check_proof(env, script.proof())
    assert pformat(judgment.conclusion) == "~A(`la`) -> A(`la`)"


def test_emit_parse_round_trip():
    script, env = parse_script(GOOD)
    text = emit_script(script_of(env, script.proof()))
    script2, env2 = parse_script(text)
    assert script2.proof() == script.proof()
    assert emit_script(script_of(env2, script2.proof())) == text


def test_step_numbers_must_be_consecutive():
    bad = GOOD.replace("3: ~A(`la`)", "4: ~A(`la`)")
    with pytest.raises(ScriptError):
        parse_script(bad)


def test_errors_carry_line_numbers():
    bad = GOOD + "4: bot by MP 1\n"  # MP needs two premises
    with pytest.raises(ScriptError) as exc:
        parse_script(bad)
    assert exc.value.line_no == 8


def test_unknown_justification_rejected():
    bad = GOOD.replace("by Capture[la]", "by Seize[la]")
    with pytest.raises(ScriptError):
        parse_script(bad)


def test_enable_may_quote_later_definitions():
    text = """\
enable ReleaseRule(~A(`la`))
def la := ~A(`la`)
1: M(`la`) -> ~A(`la`) -> A(`la`) by Capture[la]
"""
    script, env = parse_script(text)
    (grant,) = script.enables
    assert grant.scheme == "ReleaseRule"
    assert grant.formula is not None


def test_enable_without_formula_grants_scheme_wholesale():
    text = """\
enable ReleaseRule
def s := bot
1: M(`s`) by MBot[s]
"""
    script, _ = parse_script(text)
    assert script.enables == [ExtensionGrant("ReleaseRule", None)]


def test_domain_and_const_declarations():
    text = """\
domain Sent = {s1, s2} definite
const c
def ws1 := A(s1)
1: Sent(s1) | ~Sent(s1) by DefiniteEM[Sent; s1]
"""
    script, env = parse_script(text)
    assert script.domains == [("Sent", ("s1", "s2"), True)]
    assert "c" in script.consts
    check_proof(env, script.proof())


def test_parameterized_definition_forms():
    text = """\
def w/1 := A(v0)
def g(x, y) := H(`w`, x) & H(`w`, y)
def s := bot
1: M(`s`) by MBot[s]
"""
    script, env = parse_script(text)
    assert env.resolve("w") is not None
    assert env.resolve("g") is not None
    judgment = check_proof(env, script.proof())
    assert judgment.conclusion is not None


def test_hypothesis_numbering_is_one_based():
    bad = GOOD.replace("hyp 1:", "hyp 0:")
    with pytest.raises(ScriptError):
        parse_script(bad)
