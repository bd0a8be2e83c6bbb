"""Reference semantics for propositional standpoint logic.

A structure is a triple of precisifications, a standpoint assignment and an
atom valuation.  ``evaluate`` is the recursive textbook evaluator; everything
else in this module (the labeling model checker, the brute-force oracle and
the pruning construction) is checked against it in the test suite.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .syntax import (
    And, Atom, Bottom, Box, Diamond, Diff, Implies, Inter, Named, Not, Or,
    Sharper, Star, Top, Union, atoms, is_core, precisification_labels,
    standpoints, subformulas,
)


class StructureError(ValueError):
    pass


class OracleBudgetError(RuntimeError):
    """The brute-force search would visit more candidates than allowed."""


def _freeze(mapping, universe, what):
    frozen = {}
    for key, members in (mapping or {}).items():
        members = frozenset(members)
        unknown = members - universe
        if unknown:
            raise StructureError(
                f"unknown precisification {sorted(unknown)[0]} in {what}({key})")
        if members:
            frozen[key] = members
    return dict(sorted(frozen.items()))


@dataclass(frozen=True, eq=True)
class Structure:
    """A standpoint structure.

    ``precisifications`` is ordered; the order is the tie-break used by
    ``prune``.  Symbols missing from ``sigma``/``delta`` denote the empty set
    and empty entries are dropped, so equality is semantic.  ``sigma`` never
    stores ``*``.
    """
    precisifications: tuple
    sigma: Mapping[str, frozenset] = field(default_factory=dict)
    delta: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        prec = tuple(self.precisifications)
        if not prec:
            raise StructureError("Π must be non-empty")
        if len(set(prec)) != len(prec):
            dup = next(p for p in prec if prec.count(p) > 1)
            raise StructureError(f"duplicate precisification {dup}")
        if "*" in (self.sigma or {}):
            raise StructureError("'*' cannot be assigned; σ(*) is always Π")
        universe = frozenset(prec)
        object.__setattr__(self, "precisifications", prec)
        object.__setattr__(self, "sigma", _freeze(self.sigma, universe, "σ"))
        object.__setattr__(self, "delta", _freeze(self.delta, universe, "δ"))

    def __hash__(self):
        return hash((self.precisifications,
                     tuple(self.sigma.items()), tuple(self.delta.items())))

    @property
    def universe(self) -> frozenset:
        return frozenset(self.precisifications)

    def sigma_of(self, name: str) -> frozenset:
        return self.sigma.get(name, frozenset())

    def delta_of(self, name: str) -> frozenset:
        return self.delta.get(name, frozenset())

    def restrict(self, keep) -> "Structure":
        keep = set(keep)
        prec = tuple(p for p in self.precisifications if p in keep)
        return Structure(
            prec,
            {s: v & keep for s, v in self.sigma.items()},
            {p: v & keep for p, v in self.delta.items()},
        )


def sigma_eval(m: Structure, e) -> frozenset:
    if isinstance(e, Star):
        return m.universe
    if isinstance(e, Named):
        return m.sigma_of(e.name)
    if isinstance(e, Union):
        return sigma_eval(m, e.left) | sigma_eval(m, e.right)
    if isinstance(e, Inter):
        return sigma_eval(m, e.left) & sigma_eval(m, e.right)
    if isinstance(e, Diff):
        return sigma_eval(m, e.left) - sigma_eval(m, e.right)
    raise TypeError(f"not a standpoint expression: {e!r}")


def evaluate(m: Structure, pi, phi) -> bool:
    """Truth of ``phi`` at precisification ``pi`` of ``m``."""
    if pi not in m.universe:
        raise StructureError(f"{pi} is not a precisification of the structure")
    return _eval(m, pi, phi)


def _eval(m, pi, phi) -> bool:
    if isinstance(phi, Atom):
        return pi in m.delta_of(phi.name)
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Not):
        return not _eval(m, pi, phi.arg)
    if isinstance(phi, And):
        return _eval(m, pi, phi.left) and _eval(m, pi, phi.right)
    if isinstance(phi, Or):
        return _eval(m, pi, phi.left) or _eval(m, pi, phi.right)
    if isinstance(phi, Implies):
        return (not _eval(m, pi, phi.left)) or _eval(m, pi, phi.right)
    if isinstance(phi, Box):
        return all(_eval(m, q, phi.body) for q in sigma_eval(m, phi.expr))
    if isinstance(phi, Diamond):
        return any(_eval(m, q, phi.body) for q in sigma_eval(m, phi.expr))
    if isinstance(phi, Sharper):
        return sigma_eval(m, phi.left) <= sigma_eval(m, phi.right)
    raise TypeError(f"not a propositional standpoint formula: {phi!r}")


def eval_global(m: Structure, phi) -> bool:
    return all(_eval(m, pi, phi) for pi in m.precisifications)


def eval_local(m: Structure, phi) -> bool:
    return any(_eval(m, pi, phi) for pi in m.precisifications)


# -- labeling model checker ---------------------------------------------------

@dataclass
class LabelTable:
    """Labels produced by ``model_check``.

    ``local[i][pi]`` holds the truth of subformula ``i`` at ``pi``; ``model[i]``
    holds the truth of Box and Sharper subformulas, which do not depend on the
    precisification.  ``steps`` counts elementary label checks.
    """
    index: object
    precisifications: tuple
    local: dict
    model: dict
    steps: int = 0

    def value(self, psi, pi) -> bool:
        i = self.index.index(psi)
        if i in self.model:
            return self.model[i]
        return self.local[i][pi]

    def root_at(self, pi) -> bool:
        return self.value(self.index.root, pi)

    def holds_globally(self) -> bool:
        return all(self.root_at(pi) for pi in self.precisifications)


def model_check(m: Structure, phi) -> LabelTable:
    """Label every subformula bottom-up, in O(|Π| · |Sub(φ)|) checks."""
    if not is_core(phi):
        raise ValueError("model_check expects a desugared formula")
    index = subformulas(phi)
    prec = m.precisifications
    local: dict = {}
    model: dict = {}
    steps = 0
    ext_cache: dict = {}

    def ext(e):
        nonlocal steps
        if e not in ext_cache:
            if isinstance(e, (Union, Inter, Diff)):
                ext(e.left)
                ext(e.right)
            # one set operation touches every precisification at most once
            steps += len(prec)
            ext_cache[e] = sigma_eval(m, e)
        return ext_cache[e]

    def at(i, pi):
        return model[i] if i in model else local[i][pi]

    for i, psi in enumerate(index.entries):
        if isinstance(psi, Box):
            body = index.index(psi.body)
            members = ext(psi.expr)
            steps += len(members) + 1
            model[i] = all(at(body, q) for q in members)
        elif isinstance(psi, Sharper):
            left, right = ext(psi.left), ext(psi.right)
            steps += len(left) + 1
            model[i] = all(q in right for q in left)
        else:
            steps += len(prec)
            if isinstance(psi, Atom):
                true_at = m.delta_of(psi.name)
                local[i] = {pi: pi in true_at for pi in prec}
            elif isinstance(psi, Top):
                local[i] = dict.fromkeys(prec, True)
            elif isinstance(psi, Bottom):
                local[i] = dict.fromkeys(prec, False)
            elif isinstance(psi, Not):
                a = index.index(psi.arg)
                local[i] = {pi: not at(a, pi) for pi in prec}
            elif isinstance(psi, And):
                a, b = index.index(psi.left), index.index(psi.right)
                local[i] = {pi: at(a, pi) and at(b, pi) for pi in prec}
            else:
                raise TypeError(f"unexpected node {psi!r}")
    return LabelTable(index, prec, local, model, steps)


# -- bitmask evaluation over precisification types ----------------------------

def _mask_eval(index, symbol_bits, types, full):
    """Evaluate every subformula as a bitmask over a list of precisification types.

    ``types[j]`` is the set of symbol bits true at precisification ``j``.  Only
    used by the oracle, where it replaces thousands of recursive evaluations;
    tests check it against ``evaluate``.
    """
    n = len(types)
    masks: list = []
    pos = index.position
    ext_cache: dict = {}

    def sym_mask(bit):
        m = 0
        for j in range(n):
            if types[j] >> bit & 1:
                m |= 1 << j
        return m

    def ext(e):
        if e in ext_cache:
            return ext_cache[e]
        if isinstance(e, Star):
            r = full
        elif isinstance(e, Named):
            bit = symbol_bits.get(("s", e.name))
            r = sym_mask(bit) if bit is not None else 0
        elif isinstance(e, Union):
            r = ext(e.left) | ext(e.right)
        elif isinstance(e, Inter):
            r = ext(e.left) & ext(e.right)
        else:
            r = ext(e.left) & ~ext(e.right) & full
        ext_cache[e] = r
        return r

    for psi in index.entries:
        if isinstance(psi, Atom):
            r = sym_mask(symbol_bits[("p", psi.name)])
        elif isinstance(psi, Top):
            r = full
        elif isinstance(psi, Bottom):
            r = 0
        elif isinstance(psi, Not):
            r = full ^ masks[pos[psi.arg]]
        elif isinstance(psi, And):
            r = masks[pos[psi.left]] & masks[pos[psi.right]]
        elif isinstance(psi, Or):
            r = masks[pos[psi.left]] | masks[pos[psi.right]]
        elif isinstance(psi, Implies):
            r = (full ^ masks[pos[psi.left]]) | masks[pos[psi.right]]
        elif isinstance(psi, Box):
            r = full if ext(psi.expr) & ~masks[pos[psi.body]] == 0 else 0
        elif isinstance(psi, Diamond):
            r = full if ext(psi.expr) & masks[pos[psi.body]] else 0
        elif isinstance(psi, Sharper):
            r = full if ext(psi.left) & ~ext(psi.right) == 0 else 0
        else:
            raise TypeError(f"unexpected node {psi!r}")
        masks.append(r)
    return masks[-1]


# -- brute-force satisfiability oracle ----------------------------------------

DEFAULT_ORACLE_BUDGET = 250_000


def witness_bound(phi) -> int:
    """Precisifications needed by ``prune``: one per modal or sharpening
    subformula, and at least one."""
    count = sum(isinstance(f, (Box, Diamond, Sharper)) for f in subformulas(phi))
    return max(1, count)


def search_space(phi, cap: int) -> int:
    """Number of candidate structures the oracle may visit for ``cap``."""
    k = len(atoms(phi)) + len(standpoints(phi))
    n_types = 2 ** k
    return sum(math.comb(n_types, n) for n in range(1, min(cap, n_types) + 1))


def iter_models(phi, mode: str = "global", nonempty: bool = False,
                cap: int | None = None,
                budget: int = DEFAULT_ORACLE_BUDGET) -> Iterator[Structure]:
    """Enumerate every model of ``phi`` with at most ``cap`` precisifications.

    Two precisifications that agree on every atom and standpoint symbol of
    ``phi`` are indistinguishable, so a structure is determined (up to
    renaming and duplication) by the *set* of symbol-types its
    precisifications realise.  The search therefore walks all non-empty sets
    of at most ``cap`` types, smallest first, which covers every structure of
    size ``1..cap``.
    """
    if mode not in ("global", "local"):
        raise ValueError(f"unknown mode {mode!r}")
    index = subformulas(phi)
    if cap is None:
        cap = index.size
    if cap < 1:
        raise ValueError("cap must be at least 1")
    space = search_space(phi, cap)
    if space > budget:
        raise OracleBudgetError(
            f"search space too large: {space} candidate structures exceed "
            f"the budget of {budget}")

    atom_names = sorted(atoms(phi))
    stand_names = sorted(standpoints(phi))
    symbol_bits = {("p", a): i for i, a in enumerate(atom_names)}
    symbol_bits.update({("s", s): len(atom_names) + i
                        for i, s in enumerate(stand_names)})
    stand_mask = 0
    for s in stand_names:
        stand_mask |= 1 << symbol_bits[("s", s)]
    n_types = 2 ** len(symbol_bits)

    for n in range(1, min(cap, n_types) + 1):
        full = (1 << n) - 1
        for types in itertools.combinations(range(n_types), n):
            if nonempty:
                covered = 0
                for t in types:
                    covered |= t
                if covered & stand_mask != stand_mask:
                    continue
            value = _mask_eval(index, symbol_bits, types, full)
            if (value == full) if mode == "global" else value != 0:
                yield _structure_from_types(types, atom_names, stand_names,
                                            symbol_bits)


def _structure_from_types(types, atom_names, stand_names, symbol_bits):
    labels = precisification_labels(len(types))
    sigma = {s: {labels[j] for j, t in enumerate(types)
                 if t >> symbol_bits[("s", s)] & 1} for s in stand_names}
    delta = {a: {labels[j] for j, t in enumerate(types)
                 if t >> symbol_bits[("p", a)] & 1} for a in atom_names}
    return Structure(labels, sigma, delta)


def sat_oracle(phi, mode: str = "global", nonempty: bool = False,
               cap: int | None = None,
               budget: int = DEFAULT_ORACLE_BUDGET) -> Structure | None:
    """First model found by exhaustive search, or None when there is none."""
    return next(iter_models(phi, mode, nonempty, cap, budget), None)


# -- small-model pruning -------------------------------------------------------

def prune(m: Structure, phi) -> Structure:
    """Shrink a model of ``phi`` to the witnesses its modal subformulas need.

    For every Box subformula false in ``m`` one precisification refuting its
    body inside the box's standpoint is kept, for every true Diamond one
    verifying its body, and for every false sharpening statement one
    precisification separating the two expressions.  Witnesses are the
    first candidates in ``m.precisifications`` order.
    """
    if not eval_global(m, phi):
        raise ValueError("prune requires a structure that globally satisfies the formula")
    order = m.precisifications
    keep: list = []

    def first(candidates):
        for pi in order:
            if pi in candidates:
                return pi
        return None

    for psi in subformulas(phi):
        witness = None
        if isinstance(psi, Box):
            witness = first({q for q in sigma_eval(m, psi.expr)
                             if not _eval(m, q, psi.body)})
        elif isinstance(psi, Diamond):
            witness = first({q for q in sigma_eval(m, psi.expr)
                             if _eval(m, q, psi.body)})
        elif isinstance(psi, Sharper):
            witness = first(sigma_eval(m, psi.left) - sigma_eval(m, psi.right))
        if witness is not None and witness not in keep:
            keep.append(witness)
    if not keep:
        keep.append(order[0])
    return m.restrict(keep)
