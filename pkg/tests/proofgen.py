"""Random generation of always-valid proofs and of formulas, shared by the
property tests.  Generated proofs use only hypotheses, the propositional
axiom schemes L1-L9, and modus ponens, so they are in the fragment accepted
by every proof transformation.
"""

from __future__ import annotations

import random

from mathkernel.kernel import Proof
from mathkernel.syntax import (
    AApp,
    And,
    BOT,
    Environment,
    Formula,
    Implies,
    MApp,
    Or,
    Quote,
)
from mathkernel.tactics import ProofBuilder

_MAX_DEPTH = 4
_LOGICAL_ARITY = {"L1": 2, "L2": 3, "L3": 2, "L4": 2, "L5": 2,
                  "L6": 2, "L7": 2, "L8": 3, "L9": 1}


def make_env() -> Environment:
    """An environment with one named sentence; the generated formulas use
    M/A ascriptions of it as their atoms, so meaningfulness closure always
    has a compositional scheme to apply."""
    env = Environment()
    env.define("s0", (), BOT)
    return env


def atoms() -> list[Formula]:
    return [AApp(Quote("s0")), MApp(Quote("s0")), BOT]


def random_formula(rng: random.Random, depth: int = _MAX_DEPTH) -> Formula:
    if depth <= 0 or rng.random() < 0.4:
        return rng.choice(atoms())
    shape = rng.choice((And, Or, Implies))
    return shape(random_formula(rng, depth - 1), random_formula(rng, depth - 1))


def random_proof(rng: random.Random, env: Environment,
                 n_hyps: int = 0, n_moves: int = 6) -> Proof:
    """A valid proof using ByHyp, L1-L9, and MP steps only."""
    hyps = []
    for _ in range(n_hyps):
        phi = random_formula(rng)
        if phi not in hyps:
            hyps.append(phi)
    b = ProofBuilder(env, tuple(hyps))
    for i in range(len(hyps)):
        b.hyp(i)
    b.logical("L9", random_formula(rng, 2))  # never leave the proof empty
    for _ in range(n_moves):
        if rng.random() < 0.3:
            _try_mp(rng, b)
        else:
            scheme = rng.choice(tuple(_LOGICAL_ARITY))
            params = [random_formula(rng, 2)
                      for _ in range(_LOGICAL_ARITY[scheme])]
            b.logical(scheme, *params)
    return b.build()


def _try_mp(rng: random.Random, b: ProofBuilder) -> None:
    have = {step.formula: i for i, step in enumerate(b.steps)}
    candidates = [
        (have[phi.left], i)
        for phi, i in have.items()
        if isinstance(phi, Implies) and phi.left in have
    ]
    if candidates:
        minor, major = rng.choice(candidates)
        b.mp(minor, major)
