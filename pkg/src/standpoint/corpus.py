"""Exhaustive corpora of small formulas for cross-checking the deciders."""
from __future__ import annotations

import itertools

from .fosl import FoInterpretation, FoStructure, is_sentential
from .semantics import Structure
from .syntax import (
    BOTTOM, And, Atom, Box, Const, Diamond, Exists, Forall, Implies, Named, Not, Pred,
    Sharper, Star, Var, children, free_vars, modal_depth, precisification_labels,
)

DEFAULT_LEAVES = (Atom("p"), Atom("q"), BOTTOM,
                  Sharper(Named("s"), Named("t")), Sharper(Named("t"), Named("s")))
DEFAULT_EXPRS = (Star(), Named("s"), Named("t"))


def core_corpus(height: int = 3, leaves=DEFAULT_LEAVES, exprs=DEFAULT_EXPRS) -> list:
    """All core formulas of syntax-tree height at most ``height`` (leaves have
    height 1) built with Not, And and Box from the given leaves."""
    layers = [list(leaves)]
    for _ in range(height - 1):
        below = layers[-1]
        nxt = list(leaves)
        nxt += [Not(f) for f in below]
        nxt += [Box(e, f) for e in exprs for f in below]
        nxt += [And(a, b) for a, b in itertools.product(below, repeat=2)]
        layers.append(nxt)
    return layers[-1]


def random_formula(rng, nodes: int, atom_names=("p", "q", "r"),
                   stand_names=("s", "t")):
    """A random core formula with roughly ``nodes`` syntax-tree nodes."""
    exprs = [Star()] + [Named(s) for s in stand_names]

    def build(k):
        if k <= 1:
            roll = rng.random()
            if roll < 0.8:
                return Atom(rng.choice(atom_names))
            if roll < 0.9:
                return Sharper(rng.choice(exprs), rng.choice(exprs))
            return BOTTOM
        roll = rng.random()
        if roll < 0.25:
            return Not(build(k - 1))
        if roll < 0.5:
            return Box(rng.choice(exprs), build(k - 1))
        left = rng.randint(1, k - 2) if k > 2 else 1
        return And(build(left), build(max(1, k - 1 - left)))

    return build(nodes)


def random_structure(rng, n: int, atom_names=("p", "q", "r"), stand_names=("s", "t")):
    prec = precisification_labels(n)

    def subset():
        return {pi for pi in prec if rng.random() < 0.5}

    return Structure(prec, {s: subset() for s in stand_names},
                     {p: subset() for p in atom_names})


def ssnf_family(m: int):
    """A depth-one formula with exactly ``m`` distinct subformulas, ``m >= 4``.

    Guarded modal conjuncts ``l_i -> [s] p_i`` and ``<t> p_i -> l_i`` cost
    five subformulas each; plain literal conjuncts pad the rest.
    """
    if m < 4:
        raise ValueError("the family starts at four subformulas")
    rest = m - 4
    guard = Not(Atom("l0")) if rest == 1 else Atom("l0")
    out = Implies(guard, Box(Named("s"), Atom("p0")))
    rest -= rest == 1
    i = 1
    while rest >= 7 or rest == 5:
        p = Atom(f"p{i}")
        part = (Implies(Atom(f"l{i}"), Box(Named("s"), p)) if i % 2 == 0
                else Implies(Diamond(Named("t"), p), Atom(f"l{i}")))
        out, rest, i = And(out, part), rest - 5, i + 1
    while rest:
        pad = Atom(f"q{rest}")
        if rest in (3, 6):
            out, rest = And(out, Not(pad)), rest - 3
        else:
            out, rest = And(out, pad), rest - 2
    return out


def _quantifiers(f) -> int:
    own = isinstance(f, (Forall, Exists))
    return own + sum(_quantifiers(c) for c in children(f))


def fo_corpus(height: int = 3) -> list:
    """Closed, sentential first-order formulas of modal depth at most one.

    Built from one unary predicate ``P``, one constant ``a``, the variable
    ``x``, at most one quantifier and the standpoints ``s`` and ``*``.
    Layers are pruned as they grow, so ``height`` counts constructor
    applications above the leaves plus one.
    """
    leaves = [Pred("P", (Const("a"),)), Pred("P", (Var("x"),))]
    layer = list(leaves)
    for _ in range(height - 1):
        nxt = list(layer)
        for f in layer:
            nxt += [Not(f), Forall("x", f), Exists("x", f),
                    Box(Named("s"), f), Diamond(Star(), f)]
        nxt += [And(a, b) for a, b in itertools.combinations(layer, 2)]
        layer = [f for f in dict.fromkeys(nxt)
                 if _quantifiers(f) <= 1 and modal_depth(f) <= 1 and is_sentential(f)]
    return [f for f in layer if not free_vars(f)]


def _subsets(items):
    return [set(c) for k in range(len(items) + 1) for c in itertools.combinations(items, k)]


def all_fo_structures(max_domain: int = 2, max_prec: int = 2, stand_names=("s",)):
    """Every structure interpreting ``P``, ``a`` and the given standpoints
    with |Δ| ≤ ``max_domain`` and |Π| ≤ ``max_prec`` (up to element names)."""
    for d in range(1, max_domain + 1):
        domain = tuple(f"d{i}" for i in range(1, d + 1))
        for n in range(1, max_prec + 1):
            prec = precisification_labels(n)
            exts = _subsets(domain)
            for const in domain:
                for choice in itertools.product(exts, repeat=n):
                    gamma = {pi: FoInterpretation({"P": {(e,) for e in ext}}, {"a": const})
                             for pi, ext in zip(prec, choice)}
                    for sig in itertools.product(_subsets(prec), repeat=len(stand_names)):
                        yield FoStructure(domain, prec, dict(zip(stand_names, sig)), gamma)
