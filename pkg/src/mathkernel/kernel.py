"""The trusted checker.

Eleven logical axiom schemes (L1..L11) for the intuitionistic predicate
calculus, three deduction rules (modus ponens and the two generalization
rules), the theory schemes for meaningfulness (M), assertibility (A),
truth (T), holding (H) and concept equivalence (sim), and gated extension
schemes that are unsound in general and must be enabled explicitly.

Quoted-formula side conditions are checked by syntactic equality after one
level of name resolution: quotation terms inside resolved bodies are never
unfolded further.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .syntax import (
    AApp,
    And,
    Atom,
    BOT,
    Bot,
    Const,
    DefinitionError,
    Environment,
    Exists,
    Forall,
    Formula,
    HApp,
    IllFormedError,
    Implies,
    MApp,
    Or,
    Quote,
    SimApp,
    TApp,
    Term,
    TotalExtension,
    Var,
    captures,
    free_vars,
    iff,
    neg,
    substitute,
)

LOGICAL_SCHEMES = (
    "L1", "L2", "L3", "L4", "L5", "L6", "L7", "L8", "L9", "L10", "L11",
)

THEORY_SCHEMES = (
    "MComp1", "MComp2", "MComp3", "MComp4",
    "MQuant1", "MQuant2", "MQuant3",
    "MBot", "MofM", "MofA",
    "ALog", "AMP", "AGenF", "AGenE", "AtoM",
    "ForallCapture", "Capture",
    "TDef", "TNeg", "HDef", "HNeg", "SimDef",
    "DefiniteEM", "TotalExtPos", "TotalExtNeg", "TotalExtM",
)

EXTENSION_SCHEMES = ("ReleaseAxiom", "ReleaseRule", "UnrestrictedT")

# parameter kinds, used by the proof-script reader/writer:
#   f formula, t term, v variable, n quotation name, d domain, p predicate
LOGICAL_PARAMS = {
    "L1": ("f", "f"),
    "L2": ("f", "f", "f"),
    "L3": ("f", "f"),
    "L4": ("f", "f"),
    "L5": ("f", "f"),
    "L6": ("f", "f"),
    "L7": ("f", "f"),
    "L8": ("f", "f", "f"),
    "L9": ("f",),
    "L10": ("v", "f", "t"),
    "L11": ("v", "f", "t"),
}

THEORY_PARAMS = {
    "MComp1": ("n", "n", "n"),
    "MComp2": ("n", "n"),
    "MComp3": ("n", "n"),
    "MComp4": ("n", "n", "n"),
    "MQuant1": ("n", "n", "v"),
    "MQuant2": ("n", "n", "v"),
    "MQuant3": ("n", "n", "v"),
    "MBot": ("n",),
    "MofM": ("n",),
    "MofA": ("n",),
    "ALog": ("n",),
    "AMP": ("n", "n", "n"),
    "AGenF": ("n", "n", "v", "v"),
    "AGenE": ("n", "n", "v", "v"),
    "AtoM": ("n",),
    "ForallCapture": ("d", "n", "n", "n*"),
    "Capture": ("n",),
    "TDef": ("n", "n"),
    "TNeg": ("n", "n"),
    "HDef": ("n", "t", "n", "n"),
    "HNeg": ("n", "t", "n", "n"),
    "SimDef": ("n", "n", "n", "n"),
    "DefiniteEM": ("d", "t"),
    "TotalExtPos": ("p", "t"),
    "TotalExtNeg": ("p", "t"),
    "TotalExtM": ("p", "t"),
}

EXTENSION_PARAMS = {
    "ReleaseAxiom": ("n",),
    "UnrestrictedT": ("n",),
}


class SchemeError(Exception):
    """Malformed scheme parameters or a violated side condition."""


# ---------------------------------------------------------------------------
# the eleven logical schemes


def logical_instance(scheme: str, params: Sequence) -> Formula:
    """The exact instance of a logical scheme for the given parameters."""

    def fs(n: int) -> Sequence[Formula]:
        if len(params) != n:
            raise SchemeError(f"{scheme} takes {n} parameters, got {len(params)}")
        return params

    if scheme == "L1":
        a, b = fs(2)
        return Implies(a, Implies(b, a))
    if scheme == "L2":
        a, b, c = fs(3)
        return Implies(
            Implies(a, Implies(b, c)), Implies(Implies(a, b), Implies(a, c))
        )
    if scheme == "L3":
        a, b = fs(2)
        return Implies(a, Implies(b, And(a, b)))
    if scheme == "L4":
        a, b = fs(2)
        return Implies(And(a, b), a)
    if scheme == "L5":
        a, b = fs(2)
        return Implies(And(a, b), b)
    if scheme == "L6":
        a, b = fs(2)
        return Implies(a, Or(a, b))
    if scheme == "L7":
        a, b = fs(2)
        return Implies(b, Or(a, b))
    if scheme == "L8":
        a, b, c = fs(3)
        return Implies(
            Implies(a, c), Implies(Implies(b, c), Implies(Or(a, b), c))
        )
    if scheme == "L9":
        (a,) = fs(1)
        return Implies(BOT, a)
    if scheme in ("L10", "L11"):
        if len(params) != 3:
            raise SchemeError(f"{scheme} takes (variable, formula, term)")
        x, body, t = params
        if not isinstance(x, str) or not isinstance(t, (Var, Const, Quote)):
            raise SchemeError(f"{scheme} takes (variable, formula, term)")
        if captures(body, x, t):
            raise SchemeError(
                f"{scheme}: substituting {t} for {x} would capture a variable"
            )
        inst = substitute(body, x, t)
        if scheme == "L10":
            return Implies(Forall(x, body), inst)
        return Implies(inst, Exists(x, body))
    raise SchemeError(f"unknown logical scheme: {scheme}")


# ---------------------------------------------------------------------------
# recognizing logical axiom instances


def _infer_term(bt: Term, gt: Term, x: str, bound: frozenset[str],
                cands: list[Term]) -> bool:
    if isinstance(bt, Var) and bt.name == x and x not in bound:
        cands.append(gt)
        return True
    return bt == gt


def _infer(body: Formula, g: Formula, x: str, bound: frozenset[str],
           cands: list[Term]) -> bool:
    if type(body) is not type(g):
        return False
    if isinstance(body, Bot):
        return True
    if isinstance(body, Atom):
        assert isinstance(g, Atom)
        return (
            body.pred == g.pred
            and len(body.args) == len(g.args)
            and all(
                _infer_term(a, b, x, bound, cands)
                for a, b in zip(body.args, g.args)
            )
        )
    if isinstance(body, (MApp, AApp, TApp)):
        return _infer_term(body.arg, g.arg, x, bound, cands)
    if isinstance(body, HApp):
        assert isinstance(g, HApp)
        return _infer_term(body.pred, g.pred, x, bound, cands) and _infer_term(
            body.arg, g.arg, x, bound, cands
        )
    if isinstance(body, SimApp):
        assert isinstance(g, SimApp)
        return _infer_term(body.left, g.left, x, bound, cands) and _infer_term(
            body.right, g.right, x, bound, cands
        )
    if isinstance(body, (And, Or, Implies)):
        assert isinstance(g, (And, Or, Implies))
        return _infer(body.left, g.left, x, bound, cands) and _infer(
            body.right, g.right, x, bound, cands
        )
    if isinstance(body, (Forall, Exists)):
        assert isinstance(g, (Forall, Exists))
        if body.var != g.var:
            return False
        return _infer(body.body, g.body, x, bound | {body.var}, cands)
    return False


def _match_subst(body: Formula, x: str, g: Formula) -> Optional[Term]:
    """Find t with body[t/x] == g, without renaming any binder."""
    cands: list[Term] = []
    if not _infer(body, g, x, frozenset(), cands):
        return None
    t: Term = cands[0] if cands else Var(x)
    if any(c != t for c in cands):
        return None
    if captures(body, x, t):
        return None
    if substitute(body, x, t) != g:
        return None
    return t


def is_log_instance(phi: Formula) -> Optional[tuple[str, tuple]]:
    """A witness (scheme, params) if phi is an L1..L11 axiom instance."""
    if not isinstance(phi, Implies):
        return None
    l, r = phi.left, phi.right
    # L1: a -> (b -> a)
    if isinstance(r, Implies) and r.right == l:
        return ("L1", (l, r.left))
    # L2: (a -> (b -> c)) -> ((a -> b) -> (a -> c))
    if (
        isinstance(l, Implies)
        and isinstance(l.right, Implies)
        and isinstance(r, Implies)
        and isinstance(r.left, Implies)
        and isinstance(r.right, Implies)
    ):
        a, b, c = l.left, l.right.left, l.right.right
        if r.left == Implies(a, b) and r.right == Implies(a, c):
            return ("L2", (a, b, c))
    # L3: a -> (b -> a & b)
    if (
        isinstance(r, Implies)
        and isinstance(r.right, And)
        and r.right.left == l
        and r.right.right == r.left
    ):
        return ("L3", (l, r.left))
    # L4 / L5
    if isinstance(l, And):
        if r == l.left:
            return ("L4", (l.left, l.right))
        if r == l.right:
            return ("L5", (l.left, l.right))
    # L6 / L7
    if isinstance(r, Or):
        if l == r.left:
            return ("L6", (r.left, r.right))
        if l == r.right:
            return ("L7", (r.left, r.right))
    # L8: (a -> c) -> ((b -> c) -> (a | b -> c))
    if (
        isinstance(l, Implies)
        and isinstance(r, Implies)
        and isinstance(r.left, Implies)
        and isinstance(r.right, Implies)
        and isinstance(r.right.left, Or)
    ):
        a, c = l.left, l.right
        if (
            r.left.right == c
            and r.right.right == c
            and r.right.left == Or(a, r.left.left)
        ):
            return ("L8", (a, r.left.left, c))
    # L9: bot -> a
    if l == BOT:
        return ("L9", (r,))
    # L10: (forall x. b) -> b[t/x]
    if isinstance(l, Forall):
        t = _match_subst(l.body, l.var, r)
        if t is not None:
            return ("L10", (l.var, l.body, t))
    # L11: b[t/x] -> (exists x. b)
    if isinstance(r, Exists):
        t = _match_subst(r.body, r.var, l)
        if t is not None:
            return ("L11", (r.var, r.body, t))
    return None


# ---------------------------------------------------------------------------
# theory schemes


def _name(env: Environment, p, scheme: str) -> str:
    if not isinstance(p, str):
        raise SchemeError(f"{scheme}: expected a quotation name, got {p!r}")
    env.definition(p)  # raises if unbound
    return p


def _sentence(env: Environment, p, scheme: str) -> str:
    name = _name(env, p, scheme)
    if env.arity(name) != 0:
        raise SchemeError(
            f"{scheme}: {name} has arity {env.arity(name)}; a sentence is required"
        )
    return name


def _unary(env: Environment, p, scheme: str) -> str:
    name = _name(env, p, scheme)
    if env.arity(name) != 1:
        raise SchemeError(
            f"{scheme}: {name} has arity {env.arity(name)}; a unary predicate "
            "is required"
        )
    return name


def _term(env: Environment, p, scheme: str) -> Term:
    if not isinstance(p, (Var, Const, Quote)):
        raise SchemeError(f"{scheme}: expected a term, got {p!r}")
    env.check_term(p)
    return p


def _var(p, scheme: str) -> str:
    if not isinstance(p, str):
        raise SchemeError(f"{scheme}: expected a variable, got {p!r}")
    return p


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise SchemeError(message)


def _fold_and(parts: Sequence[Formula]) -> Formula:
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def theory_instance(env: Environment, scheme: str, params: Sequence) -> Formula:
    """The exact instance of a theory scheme, or SchemeError naming the
    violated side condition."""
    M = lambda n: MApp(Quote(n))
    A = lambda n: AApp(Quote(n))

    def arity_check(scheme_: str, n: int) -> None:
        if len(params) != n:
            raise SchemeError(f"{scheme_} takes {n} parameters, got {len(params)}")

    if scheme == "MComp1":
        arity_check(scheme, 3)
        qa, qb, qand = (_name(env, p, scheme) for p in params)
        _expect(
            env.resolve(qand) == And(env.resolve(qa), env.resolve(qb)),
            f"MComp1: body of {qand} is not the conjunction of {qa} and {qb}",
        )
        return Implies(And(M(qa), M(qb)), M(qand))
    if scheme == "MComp2":
        arity_check(scheme, 2)
        qand, qor = (_name(env, p, scheme) for p in params)
        ba, bo = env.resolve(qand), env.resolve(qor)
        _expect(
            isinstance(ba, And) and bo == Or(ba.left, ba.right),
            f"MComp2: {qand} and {qor} are not a matching conjunction/disjunction",
        )
        return Implies(M(qand), M(qor))
    if scheme == "MComp3":
        arity_check(scheme, 2)
        qor, qimp = (_name(env, p, scheme) for p in params)
        bo, bi = env.resolve(qor), env.resolve(qimp)
        _expect(
            isinstance(bo, Or) and bi == Implies(bo.left, bo.right),
            f"MComp3: {qor} and {qimp} are not a matching disjunction/implication",
        )
        return Implies(M(qor), M(qimp))
    if scheme == "MComp4":
        arity_check(scheme, 3)
        qimp, qa, qb = (_name(env, p, scheme) for p in params)
        _expect(
            env.resolve(qimp) == Implies(env.resolve(qa), env.resolve(qb)),
            f"MComp4: body of {qimp} is not the implication from {qa} to {qb}",
        )
        return Implies(M(qimp), And(M(qa), M(qb)))
    if scheme in ("MQuant1", "MQuant2", "MQuant3"):
        arity_check(scheme, 3)
        q1, q2 = _name(env, params[0], scheme), _name(env, params[1], scheme)
        x = _var(params[2], scheme)
        b1, b2 = env.resolve(q1), env.resolve(q2)
        if scheme == "MQuant1":
            _expect(b2 == Forall(x, b1),
                    f"MQuant1: body of {q2} is not (forall {x}) applied to {q1}")
        elif scheme == "MQuant2":
            _expect(
                isinstance(b1, Forall) and b1.var == x and b2 == Exists(x, b1.body),
                f"MQuant2: {q1} and {q2} are not matching forall/exists bodies",
            )
        else:
            _expect(b1 == Exists(x, b2),
                    f"MQuant3: body of {q1} is not (exists {x}) applied to {q2}")
        return Implies(M(q1), M(q2))
    if scheme == "MBot":
        arity_check(scheme, 1)
        q = _name(env, params[0], scheme)
        _expect(env.resolve(q) == BOT, f"MBot: body of {q} is not bot")
        return M(q)
    if scheme == "MofM":
        arity_check(scheme, 1)
        q = _name(env, params[0], scheme)
        _expect(isinstance(env.resolve(q), MApp),
                f"MofM: body of {q} is not a meaningfulness ascription")
        return M(q)
    if scheme == "MofA":
        arity_check(scheme, 1)
        q = _name(env, params[0], scheme)
        _expect(isinstance(env.resolve(q), AApp),
                f"MofA: body of {q} is not an assertibility ascription")
        return M(q)
    if scheme == "ALog":
        arity_check(scheme, 1)
        q = _name(env, params[0], scheme)
        _expect(is_log_instance(env.resolve(q)) is not None,
                f"ALog: body of {q} is not a logical axiom instance")
        return Implies(M(q), A(q))
    if scheme == "AMP":
        arity_check(scheme, 3)
        qphi, qpsi, qimp = (_name(env, p, scheme) for p in params)
        _expect(
            env.resolve(qimp) == Implies(env.resolve(qphi), env.resolve(qpsi)),
            f"AMP: body of {qimp} is not the implication from {qphi} to {qpsi}",
        )
        return Implies(And(A(qphi), A(qimp)), A(qpsi))
    if scheme in ("AGenF", "AGenE"):
        arity_check(scheme, 4)
        qimp = _name(env, params[0], scheme)
        qres = _name(env, params[1], scheme)
        x, y = _var(params[2], scheme), _var(params[3], scheme)
        bi = env.resolve(qimp)
        _expect(isinstance(bi, Implies),
                f"{scheme}: body of {qimp} is not an implication")
        assert isinstance(bi, Implies)
        if scheme == "AGenF":
            ctx, gen = bi.left, bi.right
        else:
            gen, ctx = bi.left, bi.right
        _expect(x not in free_vars(ctx),
                f"{scheme}: {x} occurs free in the fixed side of {qimp}")
        _expect(y == x or y not in free_vars(gen),
                f"{scheme}: {y} occurs free in the generalized side of {qimp}")
        _expect(not captures(gen, x, Var(y)),
                f"{scheme}: renaming {x} to {y} would capture a variable")
        shifted = substitute(gen, x, Var(y))
        if scheme == "AGenF":
            expected = Implies(ctx, Forall(y, shifted))
        else:
            expected = Implies(Exists(y, shifted), ctx)
        _expect(env.resolve(qres) == expected,
                f"{scheme}: body of {qres} is not the generalization of {qimp}")
        return Implies(A(qimp), A(qres))
    if scheme == "AtoM":
        arity_check(scheme, 1)
        q = _name(env, params[0], scheme)
        return Implies(A(q), M(q))
    if scheme == "ForallCapture":
        if len(params) < 4:
            raise SchemeError(
                "ForallCapture takes (domain, predicate-name, universal-name, "
                "instance-names...)"
            )
        dom_name = params[0]
        _expect(dom_name in env.domains,
                f"ForallCapture: {dom_name} is not a declared domain")
        dom = env.domains[dom_name]
        pred = _unary(env, params[1], scheme)
        quniv = _sentence(env, params[2], scheme)
        insts = [_sentence(env, p, scheme) for p in params[3:]]
        _expect(
            len(insts) == len(dom.constants),
            f"ForallCapture: {len(insts)} instances given for the "
            f"{len(dom.constants)} constants of {dom_name}",
        )
        for qi, c in zip(insts, dom.constants):
            _expect(
                env.resolve(qi) == env.instantiate(pred, [Const(c)]),
                f"ForallCapture: body of {qi} is not {pred} applied to {c}",
            )
        bu = env.resolve(quniv)
        _expect(isinstance(bu, Forall),
                f"ForallCapture: body of {quniv} is not universally quantified")
        assert isinstance(bu, Forall)
        x = bu.var
        _expect(
            bu.body
            == Implies(Atom(dom.predicate, (Var(x),)),
                       env.instantiate(pred, [Var(x)])),
            f"ForallCapture: body of {quniv} does not relativize {pred} "
            f"to {dom_name}",
        )
        return Implies(_fold_and([A(q) for q in insts]), A(quniv))
    if scheme == "Capture":
        arity_check(scheme, 1)
        q = _sentence(env, params[0], scheme)
        return Implies(M(q), Implies(env.resolve(q), A(q)))
    if scheme == "TDef":
        arity_check(scheme, 2)
        q = _sentence(env, params[0], scheme)
        qbic = _sentence(env, params[1], scheme)
        _expect(
            env.resolve(qbic) == iff(TApp(Quote(q)), env.resolve(q)),
            f"TDef: body of {qbic} is not the truth biconditional for {q}",
        )
        return Implies(M(q), A(qbic))
    if scheme == "TNeg":
        arity_check(scheme, 2)
        q = _sentence(env, params[0], scheme)
        qneg = _sentence(env, params[1], scheme)
        _expect(
            env.resolve(qneg) == neg(TApp(Quote(q))),
            f"TNeg: body of {qneg} is not the negated truth ascription for {q}",
        )
        return Implies(neg(M(q)), A(qneg))
    if scheme in ("HDef", "HNeg"):
        arity_check(scheme, 4)
        pred = _unary(env, params[0], scheme)
        c = _term(env, params[1], scheme)
        qinst = _sentence(env, params[2], scheme)
        qlast = _sentence(env, params[3], scheme)
        inst = env.instantiate(pred, [c])
        _expect(env.resolve(qinst) == inst,
                f"{scheme}: body of {qinst} is not {pred} applied to {c}")
        if scheme == "HDef":
            _expect(
                env.resolve(qlast) == iff(HApp(Quote(pred), c), inst),
                f"HDef: body of {qlast} is not the holding biconditional",
            )
            return Implies(M(qinst), A(qlast))
        _expect(
            env.resolve(qlast) == neg(HApp(Quote(pred), c)),
            f"HNeg: body of {qlast} is not the negated holding ascription",
        )
        return Implies(neg(M(qinst)), A(qlast))
    if scheme == "SimDef":
        arity_check(scheme, 4)
        qp = _unary(env, params[0], scheme)
        qq = _unary(env, params[1], scheme)
        quniv = _sentence(env, params[2], scheme)
        qbic = _sentence(env, params[3], scheme)
        bu = env.resolve(quniv)
        _expect(isinstance(bu, Forall),
                "SimDef: the extensional-equivalence body is not quantified")
        assert isinstance(bu, Forall)
        x = bu.var
        _expect(
            bu.body == iff(env.instantiate(qp, [Var(x)]),
                           env.instantiate(qq, [Var(x)])),
            f"SimDef: body of {quniv} is not the pointwise biconditional of "
            f"{qp} and {qq}",
        )
        _expect(
            env.resolve(qbic)
            == iff(SimApp(Quote(qp), Quote(qq)), TApp(Quote(quniv))),
            f"SimDef: body of {qbic} is not the concept-equivalence "
            "biconditional",
        )
        return Implies(And(M(qp), M(qq)), A(qbic))
    if scheme == "DefiniteEM":
        arity_check(scheme, 2)
        dom_name = params[0]
        _expect(dom_name in env.domains,
                f"DefiniteEM: {dom_name} is not a declared domain")
        dom = env.domains[dom_name]
        _expect(dom.definite, f"DefiniteEM: domain {dom_name} is not definite")
        c = _term(env, params[1], scheme)
        _expect(isinstance(c, Const) and c.name in env.constants,
                "DefiniteEM: the witness must be a declared object constant")
        at = Atom(dom.predicate, (c,))
        return Or(at, neg(at))
    if scheme in ("TotalExtPos", "TotalExtNeg", "TotalExtM"):
        arity_check(scheme, 2)
        base = params[0]
        _expect(base in env.extensions,
                f"{scheme}: no total extension registered for {base}")
        ext = env.extensions[base]
        c = _term(env, params[1], scheme)
        _expect(isinstance(c, Const) and c.name in env.constants,
                f"{scheme}: the witness must be a declared object constant")
        assert isinstance(c, Const)
        rho = Atom(env.domains[ext.domain].predicate, (c,))
        rtil = Atom(ext.extended, (c,))
        if scheme == "TotalExtPos":
            return Implies(rho, iff(rtil, Atom(base, (c,))))
        if scheme == "TotalExtNeg":
            return Implies(neg(rho), iff(rtil, BOT))
        return MApp(Quote(total_extension_name(base, c.name)))
    raise SchemeError(f"unknown theory scheme: {scheme}")


# ---------------------------------------------------------------------------
# total extensions


def total_extension_name(base: str, constant: str) -> str:
    return f"{base}_ext_{constant}"


def define_total_extension(env: Environment, base: str, domain: str) -> list[Formula]:
    """Extend predicate ``base``, defined on a definite domain, to the whole
    object universe, defaulting to bot outside the domain.

    Registers the extended predicate and a quotation name for each of its
    instances, and returns every axiom instance this makes available.
    """
    if domain not in env.domains:
        raise SchemeError(f"{domain} is not a declared domain")
    dom = env.domains[domain]
    if not dom.definite:
        raise SchemeError(
            f"domain {domain} is not declared definite; a predicate can only "
            "be totalized over a definite range"
        )
    env.register_predicate(base, 1)
    extended = f"{base}_ext"
    env.register_predicate(extended, 1)
    env.extensions[base] = TotalExtension(base, domain, extended)
    out: list[Formula] = []
    for c in env.universe:
        env.define(total_extension_name(base, c), (), Atom(extended, (Const(c),)))
    for c in env.universe:
        ct = Const(c)
        out.append(theory_instance(env, "TotalExtPos", (base, ct)))
        out.append(theory_instance(env, "TotalExtNeg", (base, ct)))
        out.append(theory_instance(env, "DefiniteEM", (domain, ct)))
        out.append(theory_instance(env, "TotalExtM", (base, ct)))
    return out


# ---------------------------------------------------------------------------
# extension schemes


def extension_instance(env: Environment, scheme: str, params: Sequence) -> Formula:
    if scheme == "ReleaseAxiom":
        if len(params) != 1:
            raise SchemeError("ReleaseAxiom takes one quotation name")
        q = _sentence(env, params[0], scheme)
        return Implies(AApp(Quote(q)), env.resolve(q))
    if scheme == "UnrestrictedT":
        if len(params) != 1:
            raise SchemeError("UnrestrictedT takes one quotation name")
        q = _sentence(env, params[0], scheme)
        return iff(TApp(Quote(q)), env.resolve(q))
    raise SchemeError(f"unknown extension scheme: {scheme}")


def _extension_subject(env: Environment, scheme: str, params: Sequence) -> Formula:
    """The sentence an extension-scheme use is about, for gating."""
    q = _sentence(env, params[0], scheme)
    return env.resolve(q)


# ---------------------------------------------------------------------------
# proofs


@dataclass(frozen=True)
class ByHyp:
    index: int  # 0-based into Proof.hypotheses


@dataclass(frozen=True)
class ByLogical:
    scheme: str
    params: tuple


@dataclass(frozen=True)
class ByTheory:
    scheme: str
    params: tuple


@dataclass(frozen=True)
class ByMP:
    minor: int  # step proving phi
    major: int  # step proving phi -> psi


@dataclass(frozen=True)
class ByGenF:
    premise: int
    var: str
    to_var: str


@dataclass(frozen=True)
class ByGenE:
    premise: int
    var: str
    to_var: str


@dataclass(frozen=True)
class ByExtension:
    scheme: str
    params: tuple


@dataclass(frozen=True)
class ByRelease:
    premise: int


Justification = Union[
    ByHyp, ByLogical, ByTheory, ByMP, ByGenF, ByGenE, ByExtension, ByRelease
]


@dataclass(frozen=True)
class Step:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class ExtensionGrant:
    scheme: str
    formula: Optional[Formula] = None  # None grants every instance

    def __str__(self) -> str:
        if self.formula is None:
            return self.scheme
        return f"{self.scheme}({self.formula})"


@dataclass(frozen=True)
class Proof:
    hypotheses: tuple[Formula, ...]
    steps: tuple[Step, ...]
    enabled: frozenset[ExtensionGrant] = frozenset()

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula


@dataclass(frozen=True)
class Judgment:
    hypotheses: tuple[Formula, ...]
    conclusion: Formula
    extensions_used: tuple[ExtensionGrant, ...]


@dataclass(frozen=True)
class StepError:
    index: Optional[int]  # 0-based step index; None for proof-level errors
    message: str

    def __str__(self) -> str:
        where = "proof" if self.index is None else f"step {self.index + 1}"
        return f"{where}: {self.message}"


class ProofCheckError(Exception):
    def __init__(self, errors: Sequence[StepError]) -> None:
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = tuple(errors)


def _grant_covers(enabled: frozenset[ExtensionGrant], scheme: str,
                  subject: Formula) -> bool:
    return any(
        g.scheme == scheme and (g.formula is None or g.formula == subject)
        for g in enabled
    )


def check_proof(
    env: Environment,
    proof: Proof,
    granted: Optional[Iterable[str]] = None,
) -> Judgment:
    """Validate every step of a proof against its justification.

    ``granted`` is the second gate on extension schemes: when given, any
    extension enabled by the proof header must also be named there.  Raises
    ProofCheckError with per-step errors on any violation.
    """
    errors: list[StepError] = []
    if not proof.steps:
        raise ProofCheckError([StepError(None, "a proof must have steps")])
    if granted is not None:
        allowed = set(granted)
        for g in proof.enabled:
            if g.scheme not in allowed:
                errors.append(StepError(
                    None, f"extension {g.scheme} enabled by the header but "
                    "not granted by the caller"))
    for i, h in enumerate(proof.hypotheses):
        try:
            env.check_formula(h)
        except (DefinitionError, IllFormedError) as exc:
            errors.append(StepError(None, f"hypothesis {i + 1}: {exc}"))
    used: dict[str, ExtensionGrant] = {}
    n = len(proof.steps)

    def premise(idx: int, here: int) -> Optional[Formula]:
        if not (0 <= idx < here):
            errors.append(StepError(
                here, f"cited step {idx + 1} does not precede this step"))
            return None
        return proof.steps[idx].formula

    for i, step in enumerate(proof.steps):
        stated = step.formula
        try:
            env.check_formula(stated)
        except (DefinitionError, IllFormedError) as exc:
            errors.append(StepError(i, str(exc)))
            continue
        just = step.just
        expected: Optional[Formula] = None
        try:
            if isinstance(just, ByHyp):
                if not (0 <= just.index < len(proof.hypotheses)):
                    errors.append(StepError(i, f"no hypothesis {just.index + 1}"))
                    continue
                expected = proof.hypotheses[just.index]
            elif isinstance(just, ByLogical):
                expected = logical_instance(just.scheme, just.params)
            elif isinstance(just, ByTheory):
                expected = theory_instance(env, just.scheme, just.params)
            elif isinstance(just, ByMP):
                minor = premise(just.minor, i)
                major = premise(just.major, i)
                if minor is None or major is None:
                    continue
                if major != Implies(minor, stated):
                    errors.append(StepError(
                        i,
                        f"modus ponens mismatch: step {just.major + 1} is not "
                        f"({minor}) -> ({stated})",
                    ))
                    continue
                expected = stated
            elif isinstance(just, (ByGenF, ByGenE)):
                prem = premise(just.premise, i)
                if prem is None:
                    continue
                if not isinstance(prem, Implies):
                    errors.append(StepError(
                        i, "generalization premise is not an implication"))
                    continue
                x, y = just.var, just.to_var
                if isinstance(just, ByGenF):
                    ctx, gen = prem.left, prem.right
                else:
                    gen, ctx = prem.left, prem.right
                if x in free_vars(ctx):
                    errors.append(StepError(
                        i, f"{x} occurs free in the fixed side of the premise"))
                    continue
                if y != x and y in free_vars(gen):
                    errors.append(StepError(
                        i, f"{y} occurs free in the generalized formula"))
                    continue
                if captures(gen, x, Var(y)):
                    errors.append(StepError(
                        i, f"renaming {x} to {y} would capture a variable"))
                    continue
                shifted = substitute(gen, x, Var(y))
                if isinstance(just, ByGenF):
                    expected = Implies(ctx, Forall(y, shifted))
                else:
                    expected = Implies(Exists(y, shifted), ctx)
            elif isinstance(just, ByExtension):
                if just.scheme not in EXTENSION_SCHEMES:
                    errors.append(StepError(
                        i, f"unknown extension scheme {just.scheme}"))
                    continue
                subject = _extension_subject(env, just.scheme, just.params)
                if not _grant_covers(proof.enabled, just.scheme, subject):
                    errors.append(StepError(
                        i, f"extension not enabled: {just.scheme}({subject})"))
                    continue
                expected = extension_instance(env, just.scheme, just.params)
                used.setdefault(str(ExtensionGrant(just.scheme, subject)),
                                ExtensionGrant(just.scheme, subject))
            elif isinstance(just, ByRelease):
                prem = premise(just.premise, i)
                if prem is None:
                    continue
                if not (isinstance(prem, AApp) and isinstance(prem.arg, Quote)):
                    errors.append(StepError(
                        i, "release premise is not an assertibility ascription "
                        "of a quotation"))
                    continue
                subject = env.resolve(prem.arg.name)
                if not _grant_covers(proof.enabled, "ReleaseRule", subject):
                    errors.append(StepError(
                        i, f"extension not enabled: ReleaseRule({subject})"))
                    continue
                expected = subject
                used.setdefault(str(ExtensionGrant("ReleaseRule", subject)),
                                ExtensionGrant("ReleaseRule", subject))
            else:
                errors.append(StepError(i, f"unknown justification {just!r}"))
                continue
        except (SchemeError, DefinitionError, IllFormedError) as exc:
            errors.append(StepError(i, str(exc)))
            continue
        if expected != stated:
            errors.append(StepError(
                i, f"stated formula ({stated}) differs from the justified "
                f"formula ({expected})"))
    if errors:
        raise ProofCheckError(errors)
    return Judgment(
        proof.hypotheses,
        proof.steps[-1].formula,
        tuple(sorted(used.values(), key=str)),
    )


def try_check(env: Environment, proof: Proof,
              granted: Optional[Iterable[str]] = None
              ) -> tuple[Optional[Judgment], tuple[StepError, ...]]:
    try:
        return check_proof(env, proof, granted), ()
    except ProofCheckError as exc:
        return None, exc.errors
