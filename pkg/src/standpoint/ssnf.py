"""Structure-preserving transformation into standpoint standard normal form.

Every compound subformula ``psi`` gets a fresh definitional literal
``L_psi`` and one implication tying it to its immediate structure, oriented
by the polarity in which ``psi`` occurs::

    positive:   L_psi -> op(L_child, ...)
    negative:   op(L_child, ...) -> L_psi

The result ``L_phi & defs`` is equisatisfiable with ``phi`` and has modal
depth at most one.  Literals (atoms, predicates, constants, sharpening
statements and their negations) stand for themselves, and ``L_{~xi}`` is
``~L_xi``.  For first-order input, labels of open subformulas are
predicates over the free variables and every definition is universally
closed.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .frontend import print_formula
from .syntax import (
    And, Atom, Bottom, Box, Diamond, Exists, Forall, Implies, Not, Or, Pred,
    Sharper, Top, Var, atoms, conjoin, free_vars, modal_depth, neg,
    standpoints, subformulas,
)

LABEL_PREFIX = "_def_"

__all__ = ["Definition", "ssnf", "ssnf_definitions", "label_map", "is_literal", "modal_depth"]


def is_literal(phi) -> bool:
    base = phi.arg if isinstance(phi, Not) else phi
    return isinstance(base, (Atom, Pred, Top, Bottom, Sharper))


@dataclass(frozen=True)
class Definition:
    label: object          # Atom, or Pred over the free variables
    body: object
    direction: str         # "->" (positive) or "<-" (negative)
    variables: tuple = ()

    def as_formula(self):
        if self.direction == "->":
            f = Implies(self.label, self.body)
        else:
            f = Implies(self.body, self.label)
        for v in reversed(self.variables):
            f = Forall(v, f)
        return f


class _Labeller:
    def __init__(self, phi, first_order: bool):
        self.first_order = first_order
        self.taken = set(atoms(phi)) | set(standpoints(phi))
        self.taken |= {f.name for f in subformulas(phi) if isinstance(f, Pred)}
        self.labels: dict = {}
        self.owner: dict = {}

    def fresh_name(self, psi) -> str:
        digest = hashlib.sha1(print_formula(psi).encode()).hexdigest()
        width = 8
        while True:
            name = LABEL_PREFIX + digest[:width]
            if name not in self.taken and self.owner.get(name, psi) == psi:
                self.owner[name] = psi
                return name
            width += 2
            if width > len(digest):
                digest = hashlib.sha1(digest.encode()).hexdigest()
                width = 8

    def label(self, psi):
        if is_literal(psi):
            return psi
        if isinstance(psi, Not):
            return neg(self.label(psi.arg))
        if psi not in self.labels:
            name = self.fresh_name(psi)
            if self.first_order:
                args = tuple(Var(v) for v in sorted(free_vars(psi)))
                self.labels[psi] = Pred(name, args)
            else:
                self.labels[psi] = Atom(name)
        return self.labels[psi]


def ssnf_definitions(phi, first_order: bool | None = None):
    """Return the root literal and the ordered list of definitions."""
    root, definitions, _ = _normalize(phi, first_order)
    return root, definitions


def label_map(phi, first_order: bool | None = None) -> dict:
    """The label introduced for each compound, non-negation subformula."""
    return dict(_normalize(phi, first_order)[2])


def _normalize(phi, first_order):
    if first_order is None:
        first_order = any(isinstance(f, (Pred, Forall, Exists))
                          for f in subformulas(phi))
    lab = _Labeller(phi, first_order)
    definitions: list[Definition] = []
    seen: set = set()

    def define(psi, body, positive):
        variables = tuple(sorted(free_vars(psi))) if first_order else ()
        d = Definition(lab.label(psi), body, "->" if positive else "<-", variables)
        if d not in seen:
            seen.add(d)
            definitions.append(d)

    # explicit stack: (formula, polarity); definitions come out parents first
    stack = [(phi, True)]
    visited: set = set()
    while stack:
        psi, positive = stack.pop()
        if (psi, positive) in visited or is_literal(psi):
            continue
        visited.add((psi, positive))
        if isinstance(psi, Not):
            stack.append((psi.arg, not positive))
        elif isinstance(psi, (And, Or)):
            op = type(psi)
            define(psi, op(lab.label(psi.left), lab.label(psi.right)), positive)
            stack.append((psi.right, positive))
            stack.append((psi.left, positive))
        elif isinstance(psi, Implies):
            define(psi, Or(neg(lab.label(psi.left)), lab.label(psi.right)), positive)
            stack.append((psi.right, positive))
            stack.append((psi.left, not positive))
        elif isinstance(psi, (Box, Diamond)):
            define(psi, type(psi)(psi.expr, lab.label(psi.body)), positive)
            stack.append((psi.body, positive))
        elif isinstance(psi, (Forall, Exists)):
            define(psi, type(psi)(psi.var, lab.label(psi.body)), positive)
            stack.append((psi.body, positive))
        else:
            raise TypeError(f"not a formula: {psi!r}")
    return lab.label(phi), definitions, lab.labels


def ssnf(phi, first_order: bool | None = None):
    """``L_phi`` conjoined with the polarity-directed definitions."""
    if is_literal(phi):
        return phi
    root, definitions = ssnf_definitions(phi, first_order)
    return conjoin([root] + [d.as_formula() for d in definitions])


def is_ssnf(phi) -> bool:
    return modal_depth(phi) <= 1
