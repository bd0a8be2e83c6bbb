"""Command-line entry point.

Exit codes: 0 valid / holds, 10 satisfiable, 20 unsatisfiable / invalid /
fails, 1 error.  Machine-readable output goes to stdout, diagnostics to
stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from .frontend import ParseError, parse_fo_formula, parse_formula, parse_structure, print_formula, structure_to_dict
from .fosl import NotSententialError, fo_ssnf, fo_translate, is_sentential, to_tptp
from .pipeline import check_sat, check_valid, prepare
from .prop import print_prop
from .sat import DEFAULT_DECISION_BUDGET, SolverBudgetError, emit_dimacs, to_cnf
from .semantics import DEFAULT_ORACLE_BUDGET, OracleBudgetError, StructureError, model_check, sat_oracle
from .ssnf import ssnf
from .syntax import desugar, nnf
from .translate import translate_formula

EXIT_OK, EXIT_ERROR, EXIT_SAT, EXIT_UNSAT = 0, 1, 10, 20

COMMANDS = ("sat", "valid", "translate", "check", "normalize", "oracle",
            "fo-sentential", "fo-translate")


@dataclass
class RunConfig:
    command: str
    formula: str | None = None
    file: str | None = None
    structure: str | None = None
    mode: str = "global"
    nonempty: bool = False
    n: int | None = None
    fmt: str | None = None
    budget: int | None = None
    normalize: bool = True
    form: str = "ssnf"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.n is not None and self.n < 1:
            raise ValueError("--precisifications must be at least 1")
        if (self.formula is None) == (self.file is None):
            raise ValueError("give the formula either inline or with --file, not both")

    def text(self) -> str:
        if self.file is not None:
            with open(self.file, encoding="utf-8") as fh:
                return fh.read()
        return self.formula


class _Output:
    def __init__(self, out, err):
        self.out, self.err = out, err

    def print(self, *lines):
        for line in lines:
            print(line, file=self.out)

    def note(self, line):
        print(line, file=self.err)


def _structure_text(m, fmt) -> str:
    return json.dumps(structure_to_dict(m), indent=None if fmt == "json" else 2)


def _sat(cfg: RunConfig, io: _Output) -> int:
    phi = parse_formula(cfg.text())
    result = check_sat(phi, cfg.mode, cfg.nonempty, cfg.n, cfg.normalize,
                       cfg.budget or DEFAULT_DECISION_BUDGET)
    if cfg.fmt == "json":
        io.print(json.dumps({
            "result": "SAT" if result else "UNSAT",
            "structure": structure_to_dict(result.model) if result else None}))
    elif result:
        io.print("SAT", _structure_text(result.model, cfg.fmt))
    else:
        io.print("UNSAT")
    io.note(f"precisifications: {len(result.translation.vocabulary.labels)}, "
            f"variables: {result.cnf.num_vars}, clauses: {len(result.cnf.clauses)}, "
            f"decisions: {result.decisions}")
    return EXIT_SAT if result else EXIT_UNSAT


def _valid(cfg: RunConfig, io: _Output) -> int:
    phi = parse_formula(cfg.text())
    result = check_valid(phi, cfg.nonempty, cfg.n, cfg.normalize,
                         cfg.budget or DEFAULT_DECISION_BUDGET)
    if cfg.fmt == "json":
        io.print(json.dumps({
            "result": "VALID" if result else "INVALID",
            "countermodel": None if result else structure_to_dict(result.countermodel),
            "point": result.point}))
    elif result:
        io.print("VALID")
    else:
        io.print("INVALID", f"fails at {result.point} in",
                 _structure_text(result.countermodel, cfg.fmt))
    return EXIT_OK if result else EXIT_UNSAT


def _translate(cfg: RunConfig, io: _Output) -> int:
    if cfg.fmt == "tptp":
        return _fo_translate(cfg, io)
    phi = parse_formula(cfg.text())
    target = prepare(phi, cfg.mode, cfg.nonempty)
    if cfg.normalize:
        target = ssnf(target)
    translation = translate_formula(target, cfg.n)
    if cfg.fmt == "dimacs":
        io.print(emit_dimacs(to_cnf(translation.formula)).rstrip("\n"))
    else:
        io.print(print_prop(translation.formula))
    return EXIT_OK


def _check(cfg: RunConfig, io: _Output) -> int:
    if cfg.structure is None:
        raise ValueError("check needs --structure FILE")
    with open(cfg.structure, encoding="utf-8") as fh:
        m = parse_structure(fh.read())
    phi = desugar(parse_formula(cfg.text()))
    table = model_check(m, phi)
    verdicts = {pi: table.root_at(pi) for pi in m.precisifications}
    if cfg.fmt == "json":
        io.print(json.dumps({"verdicts": verdicts, "holds": all(verdicts.values()),
                             "steps": table.steps}))
    else:
        io.print(*(f"{pi}: {'true' if v else 'false'}" for pi, v in verdicts.items()))
    return EXIT_OK if all(verdicts.values()) else EXIT_UNSAT


def _normalize(cfg: RunConfig, io: _Output) -> int:
    phi = parse_formula(cfg.text())
    forms = {"nnf": nnf, "ssnf": ssnf, "desugar": desugar}
    if cfg.form not in forms:
        raise ValueError(f"unknown normal form {cfg.form!r}")
    io.print(print_formula(forms[cfg.form](phi)))
    return EXIT_OK


def _oracle(cfg: RunConfig, io: _Output) -> int:
    phi = parse_formula(cfg.text())
    target = phi
    if cfg.nonempty:
        target = prepare(phi, "global", True)
    m = sat_oracle(target, cfg.mode, False, cfg.n, cfg.budget or DEFAULT_ORACLE_BUDGET)
    if m is None:
        io.print("UNSAT")
        return EXIT_UNSAT
    io.print("SAT", _structure_text(m, cfg.fmt))
    return EXIT_SAT


def _fo_sentential(cfg: RunConfig, io: _Output) -> int:
    verdict = is_sentential(parse_fo_formula(cfg.text()))
    if verdict:
        io.print("SENTENTIAL")
        return EXIT_OK
    io.print(f"NOT SENTENTIAL: {print_formula(verdict.offending)} "
             f"has free variable(s) {', '.join(verdict.free)}")
    return EXIT_UNSAT


def _fo_translate(cfg: RunConfig, io: _Output) -> int:
    phi = parse_fo_formula(cfg.text())
    if cfg.mode == "local":
        phi = prepare(phi, "local")
    if cfg.normalize:
        phi = fo_ssnf(phi)
    translation = fo_translate(phi, cfg.n)
    if cfg.fmt in (None, "tptp"):
        io.print(to_tptp(translation.formula, with_table=True).rstrip("\n"))
    else:
        io.print(print_formula(translation.formula))
    return EXIT_OK


_HANDLERS = {
    "sat": _sat, "valid": _valid, "translate": _translate, "check": _check,
    "normalize": _normalize, "oracle": _oracle, "fo-sentential": _fo_sentential,
    "fo-translate": _fo_translate,
}


def run(cfg: RunConfig, out=None, err=None) -> int:
    io = _Output(out or sys.stdout, err or sys.stderr)
    try:
        return _HANDLERS[cfg.command](cfg, io)
    except (ParseError, StructureError, NotSententialError, OSError, ValueError,
            SolverBudgetError, OracleBudgetError) as exc:
        io.note(f"error: {exc}")
        return EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="standpoint",
        description="Decide, translate and check standpoint-logic formulas.")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sat": "decide satisfiability with the SAT pipeline",
        "valid": "decide validity (unsatisfiability of the negation)",
        "translate": "print the propositional translation (or TPTP for first-order input)",
        "check": "model-check a formula against a JSON structure",
        "normalize": "print a normal form",
        "oracle": "decide satisfiability by exhaustive search (small inputs only)",
        "fo-sentential": "check that a first-order formula is sentential",
        "fo-translate": "normalize and translate a first-order formula",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("formula", nargs="?", help="formula text (or use --file)")
        p.add_argument("-f", "--file", help="read the formula from FILE")
        p.add_argument("--mode", choices=("global", "local"), default="global")
        p.add_argument("--nonempty-standpoints", dest="nonempty", action="store_true",
                       help="require every standpoint in the formula to be non-empty")
        p.add_argument("--precisifications", "-n", dest="n", type=int,
                       help="number of precisifications (default: subformula count)")
        p.add_argument("--format", dest="fmt", choices=("prop", "dimacs", "tptp", "json"))
        p.add_argument("--budget", type=int, help="decision / search-state budget")
        if name in ("translate", "sat", "valid", "fo-translate"):
            p.add_argument("--no-normalize", dest="normalize", action="store_false",
                           help="skip the normal-form step")
        if name == "check":
            p.add_argument("--structure", "-s", required=True, help="structure JSON file")
        if name == "normalize":
            p.add_argument("--form", choices=("ssnf", "nnf", "desugar"), default="ssnf")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(**{k: v for k, v in vars(args).items()})
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
