"""Translation of standpoint formulas into plain propositional logic.

With a fixed set of ``n`` precisification labels, every atom ``p`` becomes
the family ``p@pi`` and every standpoint symbol ``s`` the family ``s@pi``;
modalities turn into finite conjunctions over the labels.  The translated
formula is satisfiable exactly when the input has a model with ``n``
precisifications, and ``n = |Sub(phi)|`` suffices for satisfiability.
"""
from __future__ import annotations

from dataclasses import dataclass

from .prop import (
    AtomAt, FALSE, Lit, PImplies, PNot, StandAt, StarAt, TRUE, conj, disj,
)
from .semantics import Structure, sigma_eval
from .syntax import (
    And, Atom, Bottom, Box, Diamond, Diff, Implies, Inter, Named, Not, Or,
    Sharper, Star, Top, Union, atoms, precisification_labels, standpoints,
    subformulas,
)


@dataclass(frozen=True)
class Vocabulary:
    labels: tuple          # precisification labels pi1..pin
    atoms: tuple
    standpoints: tuple     # named symbols; '*' is implicit

    def __iter__(self):
        for pi in self.labels:
            for p in self.atoms:
                yield AtomAt(p, pi)
            for s in self.standpoints:
                yield StandAt(s, pi)
            yield StarAt(pi)

    def __len__(self):
        return len(self.labels) * (len(self.atoms) + len(self.standpoints) + 1)


@dataclass(frozen=True)
class Translation:
    formula: object
    vocabulary: Vocabulary


def trans_expr(pi: str, e):
    """Membership of ``pi`` in the standpoint expression ``e``."""
    if isinstance(e, Star):
        return Lit(StarAt(pi))
    if isinstance(e, Named):
        return Lit(StandAt(e.name, pi))
    if isinstance(e, Union):
        return disj(trans_expr(pi, e.left), trans_expr(pi, e.right))
    if isinstance(e, Inter):
        return conj(trans_expr(pi, e.left), trans_expr(pi, e.right))
    if isinstance(e, Diff):
        return conj(trans_expr(pi, e.left), PNot(trans_expr(pi, e.right)))
    raise TypeError(f"not a standpoint expression: {e!r}")


class _Translator:
    def __init__(self, labels):
        self.labels = labels
        self.memo: dict = {}

    def trans(self, pi, phi):
        # modal subformulas do not depend on pi: cache them once
        key = phi if isinstance(phi, (Box, Diamond, Sharper)) else (pi, phi)
        if key in self.memo:
            return self.memo[key]
        result = self._trans(pi, phi)
        self.memo[key] = result
        return result

    def _trans(self, pi, phi):
        if isinstance(phi, Atom):
            return Lit(AtomAt(phi.name, pi))
        if isinstance(phi, Top):
            return TRUE
        if isinstance(phi, Bottom):
            return FALSE
        if isinstance(phi, Not):
            return PNot(self.trans(pi, phi.arg))
        if isinstance(phi, And):
            return conj(self.trans(pi, phi.left), self.trans(pi, phi.right))
        if isinstance(phi, Or):
            return disj(self.trans(pi, phi.left), self.trans(pi, phi.right))
        if isinstance(phi, Implies):
            return PImplies(self.trans(pi, phi.left), self.trans(pi, phi.right))
        if isinstance(phi, Box):
            return conj(*(PImplies(trans_expr(q, phi.expr), self.trans(q, phi.body))
                          for q in self.labels))
        if isinstance(phi, Diamond):
            return disj(*(conj(trans_expr(q, phi.expr), self.trans(q, phi.body))
                          for q in self.labels))
        if isinstance(phi, Sharper):
            return conj(*(PImplies(trans_expr(q, phi.left), trans_expr(q, phi.right))
                          for q in self.labels))
        raise TypeError(f"not a propositional standpoint formula: {phi!r}")


def trans(pi: str, phi, labels):
    """Truth of ``phi`` at ``pi`` over the precisification set ``labels``."""
    return _Translator(tuple(labels)).trans(pi, phi)


def translate_formula(phi, n: int | None = None) -> Translation:
    """``Trans_n(phi)``: ``phi`` at every label, plus ``*@pi`` for every label."""
    if n is None:
        n = subformulas(phi).size
    if n < 1:
        raise ValueError("the number of precisifications must be at least 1")
    labels = precisification_labels(n)
    t = _Translator(labels)
    formula = conj(*(t.trans(pi, phi) for pi in labels),
                   *(Lit(StarAt(pi)) for pi in labels))
    vocab = Vocabulary(labels, tuple(sorted(atoms(phi))), tuple(sorted(standpoints(phi))))
    return Translation(formula, vocab)


def extract_model(valuation, vocab: Vocabulary, check_star: bool = True) -> Structure:
    """The structure ``M_v`` read off a valuation of the vocabulary."""
    if check_star:
        for pi in vocab.labels:
            if StarAt(pi) in valuation and not valuation[StarAt(pi)]:
                raise ValueError(f"*@{pi} is false; the valuation does not describe σ(*) = Π")
    sigma = {s: {pi for pi in vocab.labels if valuation.get(StandAt(s, pi), False)}
             for s in vocab.standpoints}
    delta = {p: {pi for pi in vocab.labels if valuation.get(AtomAt(p, pi), False)}
             for p in vocab.atoms}
    return Structure(vocab.labels, sigma, delta)


def encode_model(m: Structure, vocab: Vocabulary) -> dict:
    """The valuation ``v_M`` of a structure over the translation's labels."""
    if tuple(m.precisifications) != tuple(vocab.labels):
        raise ValueError("the structure's precisifications must be the translation labels "
                         f"{list(vocab.labels)}, got {list(m.precisifications)}")
    v: dict = {}
    for pi in vocab.labels:
        for p in vocab.atoms:
            v[AtomAt(p, pi)] = pi in m.delta_of(p)
        for s in vocab.standpoints:
            v[StandAt(s, pi)] = pi in m.sigma_of(s)
        v[StarAt(pi)] = True
    return v


def expr_members(m: Structure, e) -> frozenset:
    return sigma_eval(m, e)
