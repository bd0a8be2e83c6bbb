"""Satisfiability and validity through normalization, translation and SAT."""
from __future__ import annotations

from dataclasses import dataclass

from .prop import AtomAt, StandAt, StarAt
from .sat import DEFAULT_DECISION_BUDGET, CnfFormula, solve, to_cnf
from .semantics import Structure, eval_global, evaluate, prune, witness_bound
from .ssnf import ssnf
from .syntax import (
    STAR, TOP, Diamond, Named, Not, atoms, conjoin, standpoints,
)
from .translate import Translation, extract_model, translate_formula


def prepare(phi, mode: str = "global", nonempty: bool = False):
    """The formula whose global satisfiability answers the query.

    Local satisfiability of ``phi`` is global satisfiability of ``<*> phi``;
    non-empty standpoints are requested by conjoining ``<s> true``.
    """
    if mode not in ("global", "local"):
        raise ValueError(f"unknown mode {mode!r}")
    target = Diamond(STAR, phi) if mode == "local" else phi
    if nonempty:
        target = conjoin([target] + [Diamond(Named(s), TOP)
                                     for s in sorted(standpoints(phi))])
    return target


@dataclass(frozen=True)
class SatResult:
    satisfiable: bool
    formula: object                 # the globally checked formula
    model: Structure | None         # pruned, restricted to the input symbols
    valuation: dict | None          # PropAtom -> bool for the translation vocabulary
    translation: Translation
    cnf: CnfFormula
    decisions: int

    def __bool__(self):
        return self.satisfiable


def decide_global(phi, n: int | None = None, normalize: bool = True,
                  budget: int = DEFAULT_DECISION_BUDGET) -> SatResult:
    """Global satisfiability of ``phi`` with the SAT core.

    ``n`` defaults to ``witness_bound(phi)``: pruning leaves a model with
    at most that many precisifications, duplicating a precisification
    changes no truth value, and a model of ``phi`` extends to its normal
    form over the same precisifications.  The bound never exceeds the
    subformula count and keeps the search small.
    """
    if n is None:
        n = witness_bound(phi)
    target = ssnf(phi) if normalize else phi
    translation = translate_formula(target, n)
    cnf = to_cnf(translation.formula)
    result = solve(cnf, budget)
    if not result.satisfiable:
        return SatResult(False, phi, None, None, translation, cnf, result.decisions)
    valuation = {name: result.assignment[i] for i, name in cnf.names.items()
                 if isinstance(name, (AtomAt, StandAt, StarAt))}
    for atom in translation.vocabulary:
        valuation.setdefault(atom, False)
    full = extract_model(valuation, translation.vocabulary)
    keep_atoms = atoms(phi)
    model = Structure(full.precisifications, full.sigma,
                      {p: v for p, v in full.delta.items() if p in keep_atoms})
    if not eval_global(model, phi):
        raise RuntimeError("internal error: extracted structure is not a model")
    return SatResult(True, phi, prune(model, phi), valuation, translation, cnf,
                     result.decisions)


def check_sat(phi, mode: str = "global", nonempty: bool = False,
              n: int | None = None, normalize: bool = True,
              budget: int = DEFAULT_DECISION_BUDGET) -> SatResult:
    return decide_global(prepare(phi, mode, nonempty), n, normalize, budget)


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    countermodel: Structure | None
    point: str | None               # a precisification where the formula fails

    def __bool__(self):
        return self.valid


def check_valid(phi, nonempty: bool = False, n: int | None = None,
                normalize: bool = True,
                budget: int = DEFAULT_DECISION_BUDGET) -> ValidityResult:
    """``phi`` is valid iff ``~phi`` is not locally satisfiable."""
    result = check_sat(Not(phi), "local", nonempty, n, normalize, budget)
    if not result.satisfiable:
        return ValidityResult(True, None, None)
    m = result.model
    point = next(pi for pi in m.precisifications if not evaluate(m, pi, phi))
    return ValidityResult(False, m, point)
