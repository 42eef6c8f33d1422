"""Formula parsing, and the parse/print/parse identity."""

import pytest
from hypothesis import given, settings, strategies as st

from mathkernel.parser import ParseError, parse_formula, parse_term
from mathkernel.syntax import (
    IllFormedError,
    AApp,
    And,
    Atom,
    BOT,
    Const,
    Environment,
    Exists,
    Forall,
    HApp,
    Implies,
    MApp,
    Or,
    Quote,
    SimApp,
    TApp,
    Var,
    iff,
    neg,
    pformat,
)


def env_with_vocab() -> Environment:
    env = Environment()
    for name in ("p", "q", "r"):
        env.register_predicate(name, 0)
    env.register_predicate("P", 1)
    env.register_predicate("R", 2)
    env.declare_constant("c")
    env.declare_constant("d")
    env.define("s", (), BOT)
    env.define("w", ("x",), MApp(Var("x")))
    env.define("u", ("x",), AApp(Var("x")))
    return env


ENV = env_with_vocab()


def rt(phi):
    """Round-trip a formula through its textual rendering."""
    return parse_formula(pformat(phi), ENV)


def test_parse_connectives_and_precedence():
    p, q, r = Atom("p"), Atom("q"), Atom("r")
    assert parse_formula("p -> q -> r", ENV) == Implies(p, Implies(q, r))
    assert parse_formula("p & q | r", ENV) == Or(And(p, q), r)
    assert parse_formula("~p & q", ENV) == And(neg(p), q)
    assert parse_formula("p <-> q", ENV) == iff(p, q)
    assert parse_formula("bot", ENV) == BOT


def test_parse_quantifiers_greedy_body():
    out = parse_formula("forall x. P(x) -> p", ENV)
    assert out == Forall("x", Implies(Atom("P", (Var("x"),)), Atom("p")))
    out = parse_formula("exists y. R(y, c)", ENV)
    assert out == Exists("y", Atom("R", (Var("y"), Const("c"))))


def test_parse_ascriptions():
    assert parse_formula("M(`s`)", ENV) == MApp(Quote("s"))
    assert parse_formula("A(x)", ENV) == AApp(Var("x"))
    assert parse_formula("T(`s`)", ENV) == TApp(Quote("s"))
    assert parse_formula("H(`w`, c)", ENV) == HApp(Quote("w"), Const("c"))
    assert parse_formula("sim(`w`, `u`)", ENV) == SimApp(Quote("w"), Quote("u"))


def test_parse_terms():
    assert parse_term("c", ENV) == Const("c")
    assert parse_term("x", ENV) == Var("x")
    assert parse_term("`s`", ENV) == Quote("s")


def test_parse_errors():
    for bad in ("p ->", "(p", "forall. p", "M()", "`nosuch`", "p q"):
        with pytest.raises(ParseError):
            parse_formula(bad, ENV)


def test_ill_formed_rejected():
    with pytest.raises(IllFormedError):
        parse_formula("P(c, d)", ENV)  # arity
    with pytest.raises((ParseError, IllFormedError)):
        parse_formula("T(`w`)", ENV)  # T needs a sentence quotation


# -- the parse/print/parse identity, property-tested


terms = st.one_of(
    st.sampled_from([Var("x"), Var("y"), Var("z"),
                     Const("c"), Const("d"), Quote("s")]))

leaves = st.one_of(
    st.just(BOT),
    st.sampled_from([Atom("p"), Atom("q"), Atom("r")]),
    st.builds(lambda t: Atom("P", (t,)), terms),
    st.builds(lambda a, b: Atom("R", (a, b)), terms, terms),
    st.builds(MApp, terms),
    st.builds(AApp, terms),
    st.just(TApp(Quote("s"))),
    st.builds(lambda t: HApp(Quote("w"), t), terms),
    st.just(SimApp(Quote("w"), Quote("u"))),
)


def compounds(sub):
    return st.one_of(
        st.builds(And, sub, sub),
        st.builds(Or, sub, sub),
        st.builds(Implies, sub, sub),
        st.builds(Forall, st.sampled_from(["x", "y", "z"]), sub),
        st.builds(Exists, st.sampled_from(["x", "y", "z"]), sub),
    )


formulas = st.recursive(leaves, compounds, max_leaves=12)


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_roundtrip_random_formulas(phi):
    assert rt(phi) == phi
