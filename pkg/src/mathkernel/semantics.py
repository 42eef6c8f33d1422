"""Finite Kripke models for the intuitionistic propositional fragment.

A frame is a finite poset of worlds; a model adds an upward-closed
valuation.  Evaluation follows the standard clauses: Bot fails everywhere,
conjunction and disjunction are pointwise, and an implication holds at a
world iff every later world forcing the antecedent forces the consequent.

The countermodel search is exhaustive over posets up to isomorphism and
monotone valuations, which is what refutes classical principles like
excluded middle and certifies that the checker's logical base is genuinely
intuitionistic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence

import numpy as np

from .syntax import And, Atom, BOT, Bot, Formula, Implies, Or, pformat


class SemanticsError(Exception):
    """Non-propositional input or an invalid frame or model."""


# ---------------------------------------------------------------------------
# frames and models


@dataclass(frozen=True)
class KripkeFrame:
    """A finite poset.  Worlds are 0..n-1; ``order`` holds the pairs
    (u, v) with u <= v, reflexive pairs included."""

    size: int
    order: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        ws = range(self.size)
        for u, v in self.order:
            if not (0 <= u < self.size and 0 <= v < self.size):
                raise SemanticsError(f"order mentions unknown world ({u}, {v})")
        for w in ws:
            if (w, w) not in self.order:
                raise SemanticsError(f"order is not reflexive at {w}")
        for u, v in self.order:
            if u != v and (v, u) in self.order:
                raise SemanticsError(f"order is not antisymmetric on {u}, {v}")
        for u, v in self.order:
            for v2, t in self.order:
                if v2 == v and (u, t) not in self.order:
                    raise SemanticsError(
                        f"order is not transitive: {u} <= {v} <= {t}")

    @property
    def worlds(self) -> range:
        return range(self.size)

    def above(self, w: int) -> tuple[int, ...]:
        return tuple(v for v in self.worlds if (w, v) in self.order)

    def is_upward_closed(self, s: frozenset[int]) -> bool:
        return all(v in s for w in s for v in self.above(w))

    def upsets(self) -> tuple[frozenset[int], ...]:
        out = []
        for bits in itertools.product((False, True), repeat=self.size):
            s = frozenset(w for w in self.worlds if bits[w])
            if self.is_upward_closed(s):
                out.append(s)
        return tuple(out)


def chain_frame(n: int) -> KripkeFrame:
    return KripkeFrame(n, frozenset(
        (u, v) for u in range(n) for v in range(n) if u <= v))


@dataclass(frozen=True)
class KripkeModel:
    frame: KripkeFrame
    valuation: Mapping[str, frozenset[int]]

    def describe(self) -> str:
        pairs = sorted((u, v) for u, v in self.frame.order if u != v)
        lines = [f"worlds: {list(self.frame.worlds)}",
                 f"order: {pairs or 'discrete'}"]
        for atom in sorted(self.valuation):
            lines.append(f"{atom} true at: {sorted(self.valuation[atom])}")
        return "\n".join(lines)


def check_monotonicity(model: KripkeModel) -> bool:
    return all(model.frame.is_upward_closed(frozenset(ws))
               for ws in model.valuation.values())


# ---------------------------------------------------------------------------
# evaluation


def _require_propositional(phi: Formula) -> None:
    if isinstance(phi, Bot):
        return
    if isinstance(phi, Atom) and not phi.args:
        return
    if isinstance(phi, (And, Or, Implies)):
        _require_propositional(phi.left)
        _require_propositional(phi.right)
        return
    raise SemanticsError(f"not a propositional formula: ({pformat(phi)})")


def eval_at(model: KripkeModel, world: int, phi: Formula) -> bool:
    """Force phi at a world; raises SemanticsError on non-propositional
    input or a non-monotone model."""
    _require_propositional(phi)
    if not check_monotonicity(model):
        raise SemanticsError("the model's valuation is not upward closed")
    return _force(model, world, phi)


def _force(model: KripkeModel, w: int, phi: Formula) -> bool:
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Atom):
        return w in model.valuation.get(phi.pred, frozenset())
    if isinstance(phi, And):
        return _force(model, w, phi.left) and _force(model, w, phi.right)
    if isinstance(phi, Or):
        return _force(model, w, phi.left) or _force(model, w, phi.right)
    if isinstance(phi, Implies):
        return all(
            not _force(model, v, phi.left) or _force(model, v, phi.right)
            for v in model.frame.above(w))
    raise SemanticsError(f"not a propositional formula: ({pformat(phi)})")


# ---------------------------------------------------------------------------
# abstraction of arbitrary formulas to the propositional skeleton


def abstract_propositional(phi: Formula) -> tuple[Formula, dict[str, Formula]]:
    """Replace each maximal non-propositional subformula with a fresh
    propositional atom, identical subformulas sharing an atom.  Returns the
    skeleton and the atom-to-subformula mapping."""
    table: dict[Formula, str] = {}
    names: dict[str, Formula] = {}

    def walk(f: Formula) -> Formula:
        if isinstance(f, Bot):
            return f
        if isinstance(f, Atom) and not f.args:
            return f
        if isinstance(f, (And, Or, Implies)):
            return type(f)(walk(f.left), walk(f.right))
        if f not in table:
            name = f"p{len(table) + 1}"
            table[f] = name
            names[name] = f
        return Atom(table[f])

    return walk(phi), names


# ---------------------------------------------------------------------------
# frame enumeration up to isomorphism


def _canonical(size: int, strict: frozenset[tuple[int, int]]) -> frozenset:
    best = None
    for perm in itertools.permutations(range(size)):
        img = frozenset((perm[u], perm[v]) for u, v in strict)
        key = tuple(sorted(img))
        if best is None or key < best[0]:
            best = (key, img)
    assert best is not None
    return best[1]


@lru_cache(maxsize=None)
def enumerate_frames(size: int) -> tuple[KripkeFrame, ...]:
    """All posets on ``size`` worlds, one per isomorphism class."""
    if size < 1:
        return ()
    pairs = list(itertools.combinations(range(size), 2))
    seen: set[frozenset] = set()
    frames: list[KripkeFrame] = []
    for choice in itertools.product((0, 1, 2), repeat=len(pairs)):
        strict = set()
        for (u, v), c in zip(pairs, choice):
            if c == 1:
                strict.add((u, v))
            elif c == 2:
                strict.add((v, u))
        ok = all(
            (u, t) in strict
            for u, v in strict for v2, t in strict if v2 == v and u != t)
        if not ok:
            continue
        canon = _canonical(size, frozenset(strict))
        if canon in seen:
            continue
        seen.add(canon)
        order = frozenset(canon) | frozenset((w, w) for w in range(size))
        frames.append(KripkeFrame(size, order))
    return tuple(frames)


# ---------------------------------------------------------------------------
# countermodel search


@dataclass(frozen=True)
class Countermodel:
    model: KripkeModel
    world: int
    subformulas: Mapping[str, Formula]  # atom -> abstracted subformula

    def describe(self) -> str:
        lines = [self.model.describe(), f"refuted at world: {self.world}"]
        for name, phi in sorted(self.subformulas.items()):
            lines.append(f"{name} abbreviates: {pformat(phi)}")
        return "\n".join(lines)


def find_countermodel(phi: Formula, max_worlds: int = 4
                      ) -> Optional[Countermodel]:
    """Search all posets up to ``max_worlds`` worlds (up to isomorphism) and
    all monotone valuations for a world refuting phi."""
    skeleton, names = abstract_propositional(phi)
    atoms = sorted({a.pred for a in _atoms(skeleton)})
    for size in range(1, max_worlds + 1):
        for frame in enumerate_frames(size):
            ups = frame.upsets()
            for combo in itertools.product(ups, repeat=len(atoms)):
                model = KripkeModel(frame, dict(zip(atoms, combo)))
                for w in frame.worlds:
                    if not _force(model, w, skeleton):
                        return Countermodel(model, w, names)
    return None


def _atoms(phi: Formula):
    if isinstance(phi, Atom):
        yield phi
    elif isinstance(phi, (And, Or, Implies)):
        yield from _atoms(phi.left)
        yield from _atoms(phi.right)


# ---------------------------------------------------------------------------
# vectorized validity sweep


_MAX_GRID = 50_000_000


def holds_in_all_models(phi: Formula, max_worlds: int = 4) -> bool:
    """True iff phi is forced at every world of every model on every poset
    with at most ``max_worlds`` worlds.

    Valuations form a finite Heyting algebra (the upsets of the frame);
    the sweep tabulates the algebra's operations once per frame and folds
    the formula over a numpy grid of all atom assignments at once.
    """
    skeleton, _ = abstract_propositional(phi)
    atoms = sorted({a.pred for a in _atoms(skeleton)})
    k = len(atoms)
    for size in range(1, max_worlds + 1):
        for frame in enumerate_frames(size):
            ups = frame.upsets()
            m = len(ups)
            if m ** max(k, 1) > _MAX_GRID:
                raise SemanticsError(
                    f"{k} atoms over {m} upsets exceeds the exhaustive sweep "
                    "bound; use find_countermodel on a smaller formula")
            index = {u: i for i, u in enumerate(ups)}
            top = index[frozenset(frame.worlds)]
            bot = index[frozenset()]
            up_of = [frozenset(frame.above(w)) for w in frame.worlds]
            meet = np.empty((m, m), dtype=np.intp)
            join = np.empty((m, m), dtype=np.intp)
            imp = np.empty((m, m), dtype=np.intp)
            for i, a in enumerate(ups):
                for j, b in enumerate(ups):
                    meet[i, j] = index[a & b]
                    join[i, j] = index[a | b]
                    imp[i, j] = index[frozenset(
                        w for w in frame.worlds if up_of[w] & a <= b)]
            shape = (m,) * k if k else (1,)

            def grid(f: Formula) -> np.ndarray:
                if isinstance(f, Bot):
                    return np.full(shape, bot, dtype=np.intp)
                if isinstance(f, Atom):
                    i = atoms.index(f.pred)
                    view = [1] * k
                    view[i] = m
                    return np.broadcast_to(
                        np.arange(m, dtype=np.intp).reshape(view), shape)
                table = {And: meet, Or: join, Implies: imp}[type(f)]
                return table[grid(f.left), grid(f.right)]

            if not (grid(skeleton) == top).all():
                return False
    return True
