"""Axiom-scheme instantiation, scheme recognition, and proof checking."""

import pytest

from mathkernel.kernel import (
    ByExtension,
    ByHyp,
    ByLogical,
    ByMP,
    ByRelease,
    ByTheory,
    ExtensionGrant,
    Proof,
    ProofCheckError,
    SchemeError,
    Step,
    check_proof,
    define_total_extension,
    extension_instance,
    is_log_instance,
    logical_instance,
    theory_instance,
)
from mathkernel.parser import parse_formula
from mathkernel.syntax import (
    AApp,
    And,
    Atom,
    BOT,
    Const,
    Environment,
    Implies,
    MApp,
    Quote,
    Var,
    iff,
    neg,
    pformat,
)

P, Q, R = Atom("p"), Atom("q"), Atom("r")


# -- logical schemes


def test_logical_instances_exact_shapes():
    cases = {
        ("L1", (P, Q)): "p -> q -> p",
        ("L2", (P, Q, R)): "(p -> q -> r) -> (p -> q) -> p -> r",
        ("L3", (P, Q)): "p -> q -> p & q",
        ("L4", (P, Q)): "p & q -> p",
        ("L5", (P, Q)): "p & q -> q",
        ("L6", (P, Q)): "p -> p | q",
        ("L7", (P, Q)): "q -> p | q",
        ("L8", (P, Q, R)): "(p -> r) -> (q -> r) -> p | q -> r",
        ("L9", (P,)): "bot -> p",
    }
    for (scheme, params), expected in cases.items():
        assert pformat(logical_instance(scheme, params)) == expected


def test_logical_quantifier_instances():
    phi = Atom("P1", (Var("x"),))
    inst = logical_instance("L10", ("x", phi, Const("c")))
    assert pformat(inst) == "(forall x. P1(x)) -> P1(c)"
    inst = logical_instance("L11", ("x", phi, Const("c")))
    assert pformat(inst) == "P1(c) -> (exists x. P1(x))"


def test_logical_instance_rejects_capture():
    phi = Atom("R1", (Var("x"), Var("y")))
    from mathkernel.syntax import Exists, Forall
    body = Forall("y", phi)
    with pytest.raises(SchemeError):
        logical_instance("L10", ("x", body, Var("y")))


def test_is_log_instance_recognizes_instances():
    for scheme, params in [("L1", (P, Q)), ("L2", (P, Q, R)),
                           ("L8", (P, Q, R)), ("L9", (And(P, Q),))]:
        phi = logical_instance(scheme, params)
        found = is_log_instance(phi)
        assert found is not None
        assert logical_instance(found[0], found[1]) == phi


def test_is_log_instance_recognizes_quantifier_axioms():
    phi = Atom("P1", (Var("x"),))
    for scheme in ("L10", "L11"):
        inst = logical_instance(scheme, ("x", phi, Const("c")))
        found = is_log_instance(inst)
        assert found is not None and found[0] == scheme


def test_is_log_instance_rejects_classical_principles():
    em = parse_formula("p | ~p", _prop_env())
    dne = parse_formula("~~p -> p", _prop_env())
    peirce = parse_formula("((p -> q) -> p) -> p", _prop_env())
    for phi in (em, dne, peirce):
        assert is_log_instance(phi) is None


def _prop_env():
    env = Environment()
    for name in ("p", "q", "r"):
        env.register_predicate(name, 0)
    return env


# -- theory schemes


def liar_env() -> Environment:
    env = Environment()
    env.define("la", (), neg(AApp(Quote("la"))))
    env.define("ala", (), AApp(Quote("la")))
    env.define("zero_eq_one", (), BOT)
    return env


def test_capture_instance():
    env = liar_env()
    inst = theory_instance(env, "Capture", ("la",))
    assert pformat(inst) == "M(`la`) -> ~A(`la`) -> A(`la`)"


def test_m_compositionality_cycle():
    env = liar_env()
    env.define("c1", (), And(AApp(Quote("la")), BOT))
    env.define("c2", (), parse_formula("A(`la`) | bot", env))
    env.define("c3", (), parse_formula("A(`la`) -> bot", env))
    assert pformat(theory_instance(env, "MComp1", ("ala", "zero_eq_one", "c1"))) \
        == "M(`ala`) & M(`zero_eq_one`) -> M(`c1`)"
    assert pformat(theory_instance(env, "MComp2", ("c1", "c2"))) \
        == "M(`c1`) -> M(`c2`)"
    assert pformat(theory_instance(env, "MComp3", ("c2", "c3"))) \
        == "M(`c2`) -> M(`c3`)"
    assert pformat(theory_instance(env, "MComp4", ("c3", "ala", "zero_eq_one"))) \
        == "M(`c3`) -> M(`ala`) & M(`zero_eq_one`)"


def test_m_cycle_side_conditions():
    env = liar_env()
    with pytest.raises(SchemeError):
        theory_instance(env, "MComp1", ("ala", "ala", "zero_eq_one"))
    with pytest.raises(SchemeError):
        theory_instance(env, "MComp2", ("ala", "zero_eq_one"))


def test_m_leaf_schemes():
    env = liar_env()
    assert pformat(theory_instance(env, "MBot", ("zero_eq_one",))) \
        == "M(`zero_eq_one`)"
    assert pformat(theory_instance(env, "MofA", ("ala",))) == "M(`ala`)"
    env.define("mla", (), MApp(Quote("la")))
    assert pformat(theory_instance(env, "MofM", ("mla",))) == "M(`mla`)"
    with pytest.raises(SchemeError):
        theory_instance(env, "MBot", ("la",))
    with pytest.raises(SchemeError):
        theory_instance(env, "MofA", ("la",))


def test_alog_gated_on_axiomhood():
    env = liar_env()
    env.define("ax", (), parse_formula("A(`la`) -> bot -> A(`la`)", env))
    assert pformat(theory_instance(env, "ALog", ("ax",))) \
        == "M(`ax`) -> A(`ax`)"
    with pytest.raises(SchemeError):
        theory_instance(env, "ALog", ("la",))  # the liar is no axiom


def test_amp_instance_and_side_condition():
    env = liar_env()
    inst = theory_instance(env, "AMP", ("ala", "zero_eq_one", "la"))
    assert pformat(inst) == "A(`ala`) & A(`la`) -> A(`zero_eq_one`)"
    with pytest.raises(SchemeError):
        theory_instance(env, "AMP", ("zero_eq_one", "ala", "la"))


def test_agen_side_conditions():
    env = Environment()
    env.register_predicate("D", 1)
    env.register_predicate("E", 1)
    env.define("i1", ("x",), parse_formula("(exists z. E(z)) -> D(x)", env))
    env.define("g1", (), parse_formula("(exists z. E(z)) -> forall x. D(x)", env))
    inst = theory_instance(env, "AGenF", ("i1", "g1", "x", "x"))
    assert pformat(inst) == "A(`i1`) -> A(`g1`)"
    # x free on the fixed side is rejected
    env.define("i2", ("x",), parse_formula("D(x) -> D(x)", env))
    env.define("g2", ("x",), parse_formula("D(x) -> forall x. D(x)", env))
    with pytest.raises(SchemeError):
        theory_instance(env, "AGenF", ("i2", "g2", "x", "x"))


def test_atom_scheme():
    env = liar_env()
    assert pformat(theory_instance(env, "AtoM", ("la",))) \
        == "A(`la`) -> M(`la`)"


def test_tdef_tneg():
    env = Environment()
    env.define("s", (), BOT)
    env.define("tb", (), iff(parse_formula("T(`s`)", env), BOT))
    assert pformat(theory_instance(env, "TDef", ("s", "tb"))) \
        == "M(`s`) -> A(`tb`)"
    env.define("tn", (), neg(parse_formula("T(`s`)", env)))
    assert pformat(theory_instance(env, "TNeg", ("s", "tn"))) \
        == "~M(`s`) -> A(`tn`)"
    with pytest.raises(SchemeError):
        theory_instance(env, "TDef", ("s", "tn"))


def test_hdef_hneg():
    env = Environment()
    env.register_predicate("D", 1)
    env.define("w", ("x",), parse_formula("D(x)", env))
    env.declare_constant("c")
    env.define("wc", (), parse_formula("D(c)", env))
    env.define("hb", (), iff(parse_formula("H(`w`, c)", env),
                             parse_formula("D(c)", env)))
    assert pformat(theory_instance(env, "HDef", ("w", Const("c"), "wc", "hb"))) \
        == "M(`wc`) -> A(`hb`)"
    env.define("hn", (), neg(parse_formula("H(`w`, c)", env)))
    assert pformat(theory_instance(env, "HNeg", ("w", Const("c"), "wc", "hn"))) \
        == "~M(`wc`) -> A(`hn`)"


def test_forall_capture_finite_domain():
    env = Environment()
    env.declare_domain("Sent", ("s1", "s2"), definite=True)
    env.define("w", ("x",), AApp(Var("x")))
    env.define("w1", (), AApp(Const("s1")))
    env.define("w2", (), AApp(Const("s2")))
    env.define("u", (), parse_formula("forall x. Sent(x) -> A(x)", env))
    inst = theory_instance(env, "ForallCapture", ("Sent", "w", "u", "w1", "w2"))
    assert pformat(inst) == "A(`w1`) & A(`w2`) -> A(`u`)"
    with pytest.raises(SchemeError):
        theory_instance(env, "ForallCapture", ("Sent", "w", "u", "w1"))


def test_definite_em_and_total_extension():
    env = Environment()
    env.declare_domain("Sent", ("s1",), definite=True)
    instances = define_total_extension(env, "Tr", "Sent")
    rendered = {pformat(f) for f in instances}
    assert "Sent(s1) -> (Tr_ext(s1) <-> Tr(s1))" in rendered
    assert "~Sent(s1) -> (Tr_ext(s1) <-> bot)" in rendered
    assert "Sent(s1) | ~Sent(s1)" in rendered
    assert "M(`Tr_ext_s1`)" in rendered


def test_definite_em_requires_definiteness():
    env = Environment()
    env.declare_domain("Open", ("c1",), definite=False)
    with pytest.raises(SchemeError):
        theory_instance(env, "DefiniteEM", ("Open", Const("c1")))


# -- extension schemes


def test_extension_instances():
    env = liar_env()
    assert pformat(extension_instance(env, "ReleaseAxiom", ("zero_eq_one",))) \
        == "~A(`zero_eq_one`)"
    assert pformat(extension_instance(env, "UnrestrictedT", ("la",))) \
        == "T(`la`) <-> ~A(`la`)"


# -- proof checking


def test_check_simple_proof():
    env = liar_env()
    phi = AApp(Quote("la"))
    proof = Proof(
        hypotheses=(phi,),
        steps=(
            Step(phi, ByHyp(0)),
            Step(logical_instance("L1", (phi, BOT)), ByLogical("L1", (phi, BOT))),
            Step(Implies(BOT, phi), ByMP(0, 1)),
        ),
        enabled=frozenset(),
    )
    judgment = check_proof(env, proof)
    assert judgment.conclusion == Implies(BOT, phi)
    assert judgment.extensions_used == ()


def test_check_rejects_formula_mismatch():
    env = liar_env()
    proof = Proof((), (Step(BOT, ByLogical("L1", (P, Q))),), frozenset())
    with pytest.raises(ProofCheckError):
        check_proof(env, proof)


def test_check_rejects_forward_reference():
    env = liar_env()
    phi = AApp(Quote("la"))
    proof = Proof(
        (phi, Implies(phi, BOT)),
        (
            Step(BOT, ByMP(1, 2)),  # premises not yet established
            Step(phi, ByHyp(0)),
            Step(Implies(phi, BOT), ByHyp(1)),
        ),
        frozenset(),
    )
    with pytest.raises(ProofCheckError):
        check_proof(env, proof)


def test_check_rejects_bad_hyp_index():
    env = liar_env()
    proof = Proof((), (Step(BOT, ByHyp(0)),), frozenset())
    with pytest.raises(ProofCheckError):
        check_proof(env, proof)


def test_extension_gating_is_double_keyed():
    env = liar_env()
    inst = extension_instance(env, "ReleaseAxiom", ("zero_eq_one",))
    step = Step(inst, ByExtension("ReleaseAxiom", ("zero_eq_one",)))
    grant = ExtensionGrant("ReleaseAxiom", BOT)

    # header grant missing: rejected even when the caller grants the scheme
    bare = Proof((), (step,), frozenset())
    with pytest.raises(ProofCheckError):
        check_proof(env, bare, granted={"ReleaseAxiom"})

    # caller grant missing: rejected even with the header grant
    headed = Proof((), (step,), frozenset({grant}))
    with pytest.raises(ProofCheckError):
        check_proof(env, headed, granted=set())

    # both keys present: accepted, and the use is reported
    judgment = check_proof(env, headed, granted={"ReleaseAxiom"})
    assert judgment.extensions_used == (grant,)


def test_release_rule_gating():
    env = liar_env()
    a_bot = AApp(Quote("zero_eq_one"))
    steps = (
        Step(a_bot, ByHyp(0)),
        Step(BOT, ByRelease(0)),
    )
    grant = ExtensionGrant("ReleaseRule", BOT)
    with pytest.raises(ProofCheckError):
        check_proof(env, Proof((a_bot,), steps, frozenset()),
                    granted={"ReleaseRule"})
    judgment = check_proof(env, Proof((a_bot,), steps, frozenset({grant})),
                           granted={"ReleaseRule"})
    assert judgment.extensions_used == (grant,)


def test_partial_grant_by_formula():
    env = liar_env()
    other = ExtensionGrant("ReleaseAxiom", AApp(Quote("la")))
    inst = extension_instance(env, "ReleaseAxiom", ("zero_eq_one",))
    proof = Proof((), (Step(inst, ByExtension("ReleaseAxiom", ("zero_eq_one",))),),
                  frozenset({other}))
    # the header grants ReleaseAxiom only for a different sentence
    with pytest.raises(ProofCheckError):
        check_proof(env, proof, granted={"ReleaseAxiom"})
