"""Proof transformers built on top of the checker.

Nothing here extends the trusted base: every tactic produces an ordinary
proof object that the checker validates step by step.  The main entry
points are:

* ``deduction_theorem`` -- discharge a hypothesis H, turning a proof of
  phi from Gamma, H into a proof of H -> phi from Gamma.
* ``internalize`` -- turn a purely logical proof of phi from psi_1..psi_k
  into a proof of A(`phi`) from A(`psi_1`)..A(`psi_k`), given
  meaningfulness proofs for the logical axioms it uses.
* ``meaningfulness_closure`` -- derive M(`phi`) by recursion on the shape
  of phi from the compositional meaningfulness schemes, given M facts for
  any atomic leaves that have no scheme of their own.
"""

from __future__ import annotations

from typing import Callable, Mapping, Optional, Sequence

from .kernel import (
    ByExtension,
    ByGenE,
    ByGenF,
    ByHyp,
    ByLogical,
    ByMP,
    ByRelease,
    ByTheory,
    ExtensionGrant,
    Justification,
    Proof,
    Step,
    logical_instance,
    theory_instance,
)
from .syntax import (
    AApp,
    And,
    Atom,
    BOT,
    Bot,
    Environment,
    Exists,
    Forall,
    Formula,
    HApp,
    Implies,
    MApp,
    Or,
    Quote,
    SimApp,
    TApp,
    Var,
    free_vars,
    substitute,
)


class TacticError(Exception):
    """A tactic's precondition is not met."""


# ---------------------------------------------------------------------------
# fresh quotation names


class NameStore:
    """Hands out quotation names for formulas, reusing an existing binding
    when some definition already has exactly the requested body."""

    def __init__(self, env: Environment, prefix: str = "q") -> None:
        self.env = env
        self.prefix = prefix
        self._counter = 0

    def name_for(self, phi: Formula) -> str:
        params = _ordered_free_vars(phi)
        for name, d in self.env.definitions.items():
            if d.body == phi and d.params == params:
                return name
        while True:
            self._counter += 1
            name = f"{self.prefix}{self._counter}"
            if not self.env.is_bound(name):
                break
        self.env.define(name, params, phi)
        return name


def _ordered_free_vars(phi: Formula) -> tuple[str, ...]:
    """Free variables in order of first occurrence, left to right."""
    from .script import _first_occurrence_vars

    return _first_occurrence_vars(phi)


# ---------------------------------------------------------------------------
# proof builder


class ProofBuilder:
    """Accumulates steps, deduplicating by formula: adding a formula that is
    already proven returns the existing step index."""

    def __init__(self, env: Environment, hypotheses: Sequence[Formula] = (),
                 enabled: frozenset[ExtensionGrant] = frozenset()) -> None:
        self.env = env
        self.hypotheses = tuple(hypotheses)
        self.enabled: set[ExtensionGrant] = set(enabled)
        self.steps: list[Step] = []
        self._cache: dict[Formula, int] = {}

    def __len__(self) -> int:
        return len(self.steps)

    def formula_at(self, index: int) -> Formula:
        return self.steps[index].formula

    def index_of(self, phi: Formula) -> Optional[int]:
        return self._cache.get(phi)

    def add(self, formula: Formula, just: Justification) -> int:
        cached = self._cache.get(formula)
        if cached is not None:
            return cached
        self.steps.append(Step(formula, just))
        index = len(self.steps) - 1
        self._cache[formula] = index
        return index

    # -- convenience constructors; the checker re-validates everything

    def hyp(self, index: int) -> int:
        return self.add(self.hypotheses[index], ByHyp(index))

    def logical(self, scheme: str, *params) -> int:
        return self.add(logical_instance(scheme, params),
                        ByLogical(scheme, tuple(params)))

    def theory(self, scheme: str, *params) -> int:
        return self.add(theory_instance(self.env, scheme, params),
                        ByTheory(scheme, tuple(params)))

    def extension(self, scheme: str, *params) -> int:
        from .kernel import _extension_subject, extension_instance

        subject = _extension_subject(self.env, scheme, params)
        self.enabled.add(ExtensionGrant(scheme, subject))
        return self.add(extension_instance(self.env, scheme, params),
                        ByExtension(scheme, tuple(params)))

    def mp(self, minor: int, major: int) -> int:
        big = self.formula_at(major)
        if not isinstance(big, Implies) or big.left != self.formula_at(minor):
            raise TacticError(
                f"modus ponens mismatch: ({self.formula_at(minor)}) against "
                f"({big})")
        return self.add(big.right, ByMP(minor, major))

    def genf(self, premise: int, x: str, y: Optional[str] = None) -> int:
        return self._gen(premise, x, y, forall=True)

    def gene(self, premise: int, x: str, y: Optional[str] = None) -> int:
        return self._gen(premise, x, y, forall=False)

    def _gen(self, premise: int, x: str, y: Optional[str], forall: bool) -> int:
        y = x if y is None else y
        prem = self.formula_at(premise)
        if not isinstance(prem, Implies):
            raise TacticError("generalization premise is not an implication")
        if forall:
            ctx, gen = prem.left, prem.right
        else:
            gen, ctx = prem.left, prem.right
        shifted = substitute(gen, x, Var(y))
        if forall:
            out: Formula = Implies(ctx, Forall(y, shifted))
            return self.add(out, ByGenF(premise, x, y))
        out = Implies(Exists(y, shifted), ctx)
        return self.add(out, ByGenE(premise, x, y))

    def release(self, premise: int) -> int:
        prem = self.formula_at(premise)
        if not (isinstance(prem, AApp) and isinstance(prem.arg, Quote)):
            raise TacticError("release premise must be A of a quotation")
        body = self.env.resolve(prem.arg.name)
        self.enabled.add(ExtensionGrant("ReleaseRule", body))
        return self.add(body, ByRelease(premise))

    def embed(self, sub: Proof) -> int:
        """Splice another proof in, mapping its hypotheses onto this
        builder's hypotheses or already-proven steps."""
        self.enabled |= sub.enabled
        hyp_map: list[tuple[str, int]] = []
        for h in sub.hypotheses:
            if h in self._cache:
                hyp_map.append(("step", self._cache[h]))
            elif h in self.hypotheses:
                hyp_map.append(("hyp", self.hypotheses.index(h)))
            else:
                raise TacticError(
                    f"embedded proof needs unavailable hypothesis ({h})")
        loc: dict[int, int] = {}
        for i, st in enumerate(sub.steps):
            j = st.just
            if isinstance(j, ByHyp):
                kind, k = hyp_map[j.index]
                loc[i] = k if kind == "step" else self.add(st.formula, ByHyp(k))
            elif isinstance(j, ByMP):
                loc[i] = self.add(st.formula, ByMP(loc[j.minor], loc[j.major]))
            elif isinstance(j, (ByGenF, ByGenE)):
                cls = ByGenF if isinstance(j, ByGenF) else ByGenE
                loc[i] = self.add(st.formula, cls(loc[j.premise], j.var, j.to_var))
            elif isinstance(j, ByRelease):
                loc[i] = self.add(st.formula, ByRelease(loc[j.premise]))
            else:  # axiom-style steps have no premises
                loc[i] = self.add(st.formula, j)
        return loc[len(sub.steps) - 1]

    def ensure_last(self, index: int) -> None:
        """Make the step at ``index`` the proof's conclusion, re-deriving it
        at the end if later steps were appended since."""
        if index != len(self.steps) - 1:
            self.steps.append(self.steps[index])

    def build(self) -> Proof:
        return Proof(self.hypotheses, tuple(self.steps), frozenset(self.enabled))


def identity_imp(b: ProofBuilder, phi: Formula) -> int:
    """The five-step derivation of phi -> phi."""
    pp = Implies(phi, phi)
    a1 = b.logical("L1", phi, pp)
    a2 = b.logical("L2", phi, pp, phi)
    t = b.mp(a1, a2)
    a3 = b.logical("L1", phi, phi)
    return b.mp(a3, t)


def weaken(b: ProofBuilder, index: int, hyp: Formula) -> int:
    """From phi derive hyp -> phi."""
    phi = b.formula_at(index)
    a = b.logical("L1", phi, hyp)
    return b.mp(index, a)


def _derive(b: ProofBuilder, antecedents: Sequence[Formula],
            forward: Callable[[ProofBuilder, Sequence[int]], int]) -> int:
    """Prove the curried implication from ``antecedents`` to the formula
    ``forward`` builds from them, then splice it into ``b``.

    ``forward`` receives a scratch builder whose hypotheses are the
    already-proven formulas of ``b`` it may cite (resolved by ``embed``)
    followed by ``antecedents``; it must use only hypothesis, logical-axiom
    and modus-ponens steps, so the repeated discharges below never recurse
    back into a generalization case.
    """
    known = tuple(b._cache)  # formulas already proven in the outer builder
    mini = ProofBuilder(b.env, known + tuple(antecedents))
    goal = forward(mini, tuple(range(len(known), len(known) + len(antecedents))))
    mini.ensure_last(goal)  # the goal may have deduplicated onto an early step
    proof = mini.build()
    for _ in antecedents:
        proof = deduction_theorem(b.env, proof)
    return b.embed(proof)


def curry(b: ProofBuilder, h: Formula, ctx: Formula, index: int) -> int:
    """From (h & ctx) -> phi derive h -> (ctx -> phi)."""
    src = b.formula_at(index)

    def forward(mini: ProofBuilder, hx: Sequence[int]) -> int:
        ih, ictx = (mini.hyp(k) for k in hx)
        l3 = mini.logical("L3", h, ctx)
        conj = mini.mp(ictx, mini.mp(ih, l3))
        s = mini.hyp(mini.hypotheses.index(src))
        return mini.mp(conj, s)

    return _derive(b, (h, ctx), forward)


def uncurry(b: ProofBuilder, h: Formula, ctx: Formula, index: int) -> int:
    """From h -> (ctx -> phi) derive (h & ctx) -> phi."""
    src = b.formula_at(index)
    conj = And(h, ctx)

    def forward(mini: ProofBuilder, hx: Sequence[int]) -> int:
        ic = mini.hyp(hx[0])
        s = mini.hyp(mini.hypotheses.index(src))
        ih = mini.mp(mini.mp(ic, mini.logical("L4", h, ctx)), s)
        return mini.mp(mini.mp(ic, mini.logical("L5", h, ctx)), ih)

    return _derive(b, (conj,), forward)


def commute(b: ProofBuilder, a: Formula, c: Formula, index: int) -> int:
    """From a -> (c -> phi) derive c -> (a -> phi)."""
    src = b.formula_at(index)

    def forward(mini: ProofBuilder, hx: Sequence[int]) -> int:
        ic, ia = (mini.hyp(k) for k in hx)
        s = mini.hyp(mini.hypotheses.index(src))
        return mini.mp(ic, mini.mp(ia, s))

    return _derive(b, (c, a), forward)


# ---------------------------------------------------------------------------
# deduction theorem


def _dependencies(proof: Proof, hyp_index: int) -> list[bool]:
    dep = [False] * len(proof.steps)
    for i, st in enumerate(proof.steps):
        j = st.just
        if isinstance(j, ByHyp):
            dep[i] = j.index == hyp_index
        elif isinstance(j, ByMP):
            dep[i] = dep[j.minor] or dep[j.major]
        elif isinstance(j, (ByGenF, ByGenE, ByRelease)):
            dep[i] = dep[j.premise]
    return dep


def deduction_theorem(env: Environment, proof: Proof,
                      hyp_index: Optional[int] = None) -> Proof:
    """Discharge one hypothesis H: from a proof of phi using H, a proof of
    H -> phi that no longer lists H.

    Steps that never depend on H are copied verbatim and weakened only on
    demand.  Generalization steps under H go through conjunction currying
    (for the universal rule) or antecedent commutation (for the existential
    rule); both fail if the generalized variable occurs free in H.  A
    release step may not depend on H, since release applies only to proven
    assertibility facts.
    """
    if hyp_index is None:
        hyp_index = len(proof.hypotheses) - 1
    if not (0 <= hyp_index < len(proof.hypotheses)):
        raise TacticError(f"no hypothesis {hyp_index + 1} to discharge")
    h = proof.hypotheses[hyp_index]
    new_hyps = (proof.hypotheses[:hyp_index] + proof.hypotheses[hyp_index + 1:])
    dep = _dependencies(proof, hyp_index)
    b = ProofBuilder(env, new_hyps, frozenset(proof.enabled))
    loc: dict[int, int] = {}

    def lifted(i: int) -> int:
        """Builder index of H -> phi_i."""
        if dep[i]:
            return loc[i]
        return weaken(b, loc[i], h)

    for i, st in enumerate(proof.steps):
        j = st.just
        if not dep[i]:
            if isinstance(j, ByHyp):
                k = j.index if j.index < hyp_index else j.index - 1
                loc[i] = b.add(st.formula, ByHyp(k))
            elif isinstance(j, ByMP):
                loc[i] = b.add(st.formula, ByMP(loc[j.minor], loc[j.major]))
            elif isinstance(j, (ByGenF, ByGenE)):
                cls = type(j)
                loc[i] = b.add(st.formula, cls(loc[j.premise], j.var, j.to_var))
            elif isinstance(j, ByRelease):
                loc[i] = b.add(st.formula, ByRelease(loc[j.premise]))
            else:
                loc[i] = b.add(st.formula, j)
            continue
        if isinstance(j, ByHyp):
            loc[i] = identity_imp(b, h)
        elif isinstance(j, ByMP):
            minor = proof.steps[j.minor].formula
            a2 = b.logical("L2", h, minor, st.formula)
            loc[i] = b.mp(lifted(j.minor), b.mp(lifted(j.major), a2))
        elif isinstance(j, (ByGenF, ByGenE)):
            prem = proof.steps[j.premise].formula
            assert isinstance(prem, Implies)
            if j.var in free_vars(h):
                raise TacticError(
                    f"cannot discharge ({h}): its free variable {j.var} is "
                    "generalized later in the proof")
            if isinstance(j, ByGenF):
                ctx = prem.left
                src = lifted(j.premise)          # H -> (ctx -> gen)
                flat = uncurry(b, h, ctx, src)   # (H & ctx) -> gen
                gen_step = b.genf(flat, j.var, j.to_var)
                loc[i] = curry(b, h, ctx, gen_step)
            else:
                ctx = prem.right
                src = lifted(j.premise)          # H -> (gen -> ctx)
                swapped = commute(b, h, prem.left, src)  # gen -> (H -> ctx)
                gen_step = b.gene(swapped, j.var, j.to_var)
                ex = b.formula_at(gen_step)
                assert isinstance(ex, Implies)
                loc[i] = commute(b, ex.left, h, gen_step)
        elif isinstance(j, ByRelease):
            raise TacticError(
                "cannot discharge a hypothesis through a release step")
        else:
            raise TacticError(f"unexpected dependent step: {j!r}")
    final = lifted(len(proof.steps) - 1)
    b.ensure_last(final)
    return b.build()


# ---------------------------------------------------------------------------
# internalization


def _quote_of(phi: Formula, what: str) -> str:
    if isinstance(phi, (MApp, AApp)) and isinstance(phi.arg, Quote):
        return phi.arg.name
    raise TacticError(f"{what} must conclude M or A of a quotation, got ({phi})")


def internalize_into(b: ProofBuilder, ns: NameStore, sub: Proof,
                     a_hyps: Sequence[int],
                     m_facts: Mapping[Formula, int]) -> tuple[int, str]:
    """Simulate a purely logical proof inside the assertibility operator.

    ``a_hyps[i]`` must prove A(`h_i`) for the i-th hypothesis of ``sub``;
    ``m_facts`` maps each logical-axiom instance used by ``sub`` to a step
    proving M of a quotation of it.  Returns the step index and quotation
    name of the conclusion, A(`conclusion`).
    """
    env = b.env
    if len(a_hyps) != len(sub.hypotheses):
        raise TacticError("one assertibility fact per hypothesis is required")
    loc: dict[int, int] = {}
    names: dict[int, str] = {}
    for i, h in enumerate(sub.hypotheses):
        q = _quote_of(b.formula_at(a_hyps[i]), "an assertibility fact")
        if env.resolve(q) != h:
            raise TacticError(
                f"assertibility fact {i + 1} quotes ({env.resolve(q)}), "
                f"not the hypothesis ({h})")
    for i, st in enumerate(sub.steps):
        j = st.just
        if isinstance(j, ByHyp):
            loc[i] = a_hyps[j.index]
            names[i] = _quote_of(b.formula_at(loc[i]), "an assertibility fact")
        elif isinstance(j, ByLogical):
            mi = m_facts.get(st.formula)
            if mi is None:
                raise TacticError(
                    f"no meaningfulness fact for the axiom ({st.formula})")
            q = _quote_of(b.formula_at(mi), "a meaningfulness fact")
            if env.resolve(q) != st.formula:
                raise TacticError(
                    f"the meaningfulness fact for ({st.formula}) quotes a "
                    "different formula")
            loc[i] = b.mp(mi, b.theory("ALog", q))
            names[i] = q
        elif isinstance(j, ByMP):
            qminor, qimp = names[j.minor], names[j.major]
            qres = ns.name_for(st.formula)
            l3 = b.logical("L3", AApp(Quote(qminor)), AApp(Quote(qimp)))
            both = b.mp(loc[j.major], b.mp(loc[j.minor], l3))
            amp = b.theory("AMP", qminor, qres, qimp)
            loc[i] = b.mp(both, amp)
            names[i] = qres
        elif isinstance(j, (ByGenF, ByGenE)):
            scheme = "AGenF" if isinstance(j, ByGenF) else "AGenE"
            qres = ns.name_for(st.formula)
            ag = b.theory(scheme, names[j.premise], qres, j.var, j.to_var)
            loc[i] = b.mp(loc[j.premise], ag)
            names[i] = qres
        else:
            raise TacticError(
                f"only logical steps can be internalized, found {j!r}")
    last = len(sub.steps) - 1
    return loc[last], names[last]


def internalize(env: Environment, proof: Proof,
                m_proofs: Mapping[Formula, Proof]) -> Proof:
    """From a purely logical proof of phi from psi_1..psi_k, a proof of
    A(`phi`) from hypotheses A(`psi_1`)..A(`psi_k`).

    ``m_proofs`` maps each logical-axiom instance used to a proof of M of
    a quotation of it; those proofs may only use hypotheses from the same
    A(`psi_i`) list.
    """
    ns = NameStore(env)
    hyp_names = [ns.name_for(h) for h in proof.hypotheses]
    b = ProofBuilder(env, tuple(AApp(Quote(n)) for n in hyp_names),
                     frozenset(proof.enabled))
    a_hyps = [b.hyp(i) for i in range(len(hyp_names))]
    m_facts = {phi: b.embed(p) for phi, p in m_proofs.items()}
    index, _ = internalize_into(b, ns, proof, a_hyps, m_facts)
    b.ensure_last(index)
    return b.build()


# ---------------------------------------------------------------------------
# meaningfulness closure


def m_closure_into(b: ProofBuilder, ns: NameStore, phi: Formula,
                   leaves: Mapping[Formula, int] = {}) -> tuple[int, str]:
    """Derive M(`phi`) by recursion on phi's shape.  ``leaves`` maps leaf
    formulas with no compositional scheme (atoms, T, H, sim ascriptions) to
    steps already proving M of them.  Returns (step index, quotation name).
    """
    env = b.env
    if phi in leaves:
        index = leaves[phi]
        return index, _quote_of(b.formula_at(index), "a leaf fact")
    if isinstance(phi, Bot):
        q = ns.name_for(phi)
        return b.theory("MBot", q), q
    if isinstance(phi, MApp):
        q = ns.name_for(phi)
        return b.theory("MofM", q), q
    if isinstance(phi, AApp):
        q = ns.name_for(phi)
        return b.theory("MofA", q), q
    if isinstance(phi, And):
        ia, qa = m_closure_into(b, ns, phi.left, leaves)
        ib, qb = m_closure_into(b, ns, phi.right, leaves)
        q = ns.name_for(phi)
        l3 = b.logical("L3", MApp(Quote(qa)), MApp(Quote(qb)))
        both = b.mp(ib, b.mp(ia, l3))
        return b.mp(both, b.theory("MComp1", qa, qb, q)), q
    if isinstance(phi, Or):
        ia, qa = m_closure_into(b, ns, And(phi.left, phi.right), leaves)
        q = ns.name_for(phi)
        return b.mp(ia, b.theory("MComp2", qa, q)), q
    if isinstance(phi, Implies):
        ia, qa = m_closure_into(b, ns, Or(phi.left, phi.right), leaves)
        q = ns.name_for(phi)
        return b.mp(ia, b.theory("MComp3", qa, q)), q
    if isinstance(phi, Forall):
        ib, qb = m_closure_into(b, ns, phi.body, leaves)
        q = ns.name_for(phi)
        return b.mp(ib, b.theory("MQuant1", qb, q, phi.var)), q
    if isinstance(phi, Exists):
        ia, qa = m_closure_into(b, ns, Forall(phi.var, phi.body), leaves)
        q = ns.name_for(phi)
        return b.mp(ia, b.theory("MQuant2", qa, q, phi.var)), q
    raise TacticError(
        f"no compositional meaningfulness scheme applies to ({phi}); "
        "provide it as a leaf fact")


def meaningfulness_closure(env: Environment, phi: Formula,
                           assumed: Sequence[Formula] = ()) -> Proof:
    """A proof of M(`phi`), from hypotheses M(`l`) for each assumed leaf."""
    ns = NameStore(env)
    hyp_names = [ns.name_for(l) for l in assumed]
    b = ProofBuilder(env, tuple(MApp(Quote(n)) for n in hyp_names))
    leaves = {l: b.hyp(i) for i, l in enumerate(assumed)}
    index, _ = m_closure_into(b, ns, phi, leaves)
    b.ensure_last(index)
    return b.build()


def m_decompose_into(b: ProofBuilder, ns: NameStore, index: int,
                     qname: str) -> dict[Formula, tuple[int, str]]:
    """From M(`phi`) for a compound phi, derive M of its immediate parts.

    Walks the compositional cycle: a conjunction fact yields the matching
    disjunction and implication facts on the way to the components.
    Returns a map from component formula to (step index, quotation name).
    """
    env = b.env
    phi = env.resolve(qname)
    if isinstance(phi, And):
        qor = ns.name_for(Or(phi.left, phi.right))
        index = b.mp(index, b.theory("MComp2", qname, qor))
        qname = qor
        phi = env.resolve(qname)
    if isinstance(phi, Or):
        qimp = ns.name_for(Implies(phi.left, phi.right))
        index = b.mp(index, b.theory("MComp3", qname, qimp))
        qname = qimp
        phi = env.resolve(qname)
    if isinstance(phi, Implies):
        qa = ns.name_for(phi.left)
        qb = ns.name_for(phi.right)
        both = b.mp(index, b.theory("MComp4", qname, qa, qb))
        ma, mb = MApp(Quote(qa)), MApp(Quote(qb))
        ia = b.mp(both, b.logical("L4", ma, mb))
        ib = b.mp(both, b.logical("L5", ma, mb))
        return {phi.left: (ia, qa), phi.right: (ib, qb)}
    if isinstance(phi, Forall):
        qex = ns.name_for(Exists(phi.var, phi.body))
        index = b.mp(index, b.theory("MQuant2", qname, qex, phi.var))
        qname = qex
        phi = env.resolve(qname)
    if isinstance(phi, Exists):
        qb = ns.name_for(phi.body)
        ib = b.mp(index, b.theory("MQuant3", qname, qb, phi.var))
        return {phi.body: (ib, qb)}
    raise TacticError(f"({phi}) has no components to extract")
