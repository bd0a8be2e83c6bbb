"""Sentential first-order standpoint logic.

A formula is sentential when every modal body is closed.  For such formulas
the normal form and the precisification-indexed translation carry over from
the propositional case: predicates ``P`` are duplicated into ``P@pi``,
standpoint symbols become nullary predicates ``s@pi``, and constants are
shared because they are rigid.  The finite-domain evaluator is the oracle
used to test both transformations; ``to_tptp`` exports translated formulas
to external first-order provers.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .semantics import Structure, StructureError, sigma_eval
from .ssnf import ssnf
from .syntax import (
    And, Atom, Bottom, Box, Const, Diamond, Diff, Exists, Forall, Implies,
    Inter, Named, Not, Or, Pred, Sharper, Star, Top, Union, Var, children,
    conjoin, disjoin, expr_symbols, free_vars, modal_depth,
    precisification_labels, subformulas,
)


class NotSententialError(ValueError):
    pass


# -- sentential fragment -------------------------------------------------------

@dataclass(frozen=True)
class SententialVerdict:
    accepted: bool
    offending: object = None          # first modal subformula with an open body
    free: tuple = ()                  # its free variables, sorted

    def __bool__(self):
        return self.accepted


def is_sentential(phi) -> SententialVerdict:
    """Accept iff no Box/Diamond body has a free variable."""
    stack = [phi]
    while stack:
        f = stack.pop()
        if isinstance(f, (Box, Diamond)):
            open_vars = free_vars(f.body)
            if open_vars:
                return SententialVerdict(False, f, tuple(sorted(open_vars)))
        stack.extend(reversed(children(f)))
    return SententialVerdict(True)


def _require_sentential(phi):
    verdict = is_sentential(phi)
    if not verdict:
        from .frontend import print_formula
        raise NotSententialError(
            f"not sentential: {print_formula(verdict.offending)} has free "
            f"variable(s) {', '.join(verdict.free)} under a modality")


def fo_ssnf(phi):
    """Normal form of modal depth at most one for a sentential formula."""
    _require_sentential(phi)
    return ssnf(phi, first_order=True)


# -- translation ---------------------------------------------------------------

def _at(name: str, pi: str) -> str:
    return f"{name}@{pi}"


@dataclass(frozen=True)
class FoTranslation:
    formula: object
    labels: tuple
    signature: dict        # predicate name -> arity, after renaming
    constants: tuple


def predicate_signature(phi) -> dict:
    """Predicate arities; raises when one symbol is used with two arities."""
    sig: dict = {}
    for f in subformulas(phi):
        if isinstance(f, Pred):
            if sig.setdefault(f.name, f.arity) != f.arity:
                raise ValueError(f"predicate {f.name} used with arities "
                                 f"{sig[f.name]} and {f.arity}")
    return sig


def fo_standpoints(phi) -> set:
    found: set = set()
    for f in subformulas(phi):
        if isinstance(f, (Box, Diamond)):
            found |= expr_symbols(f.expr)
        elif isinstance(f, Sharper):
            found |= expr_symbols(f.left) | expr_symbols(f.right)
    return found


def constants(phi) -> set:
    return {t.name for f in subformulas(phi) if isinstance(f, Pred)
            for t in f.args if isinstance(t, Const)}


def fo_trans_expr(pi: str, e):
    if isinstance(e, Star):
        return Pred(_at("*", pi))
    if isinstance(e, Named):
        return Pred(_at(e.name, pi))
    if isinstance(e, Union):
        return Or(fo_trans_expr(pi, e.left), fo_trans_expr(pi, e.right))
    if isinstance(e, Inter):
        return And(fo_trans_expr(pi, e.left), fo_trans_expr(pi, e.right))
    if isinstance(e, Diff):
        return And(fo_trans_expr(pi, e.left), Not(fo_trans_expr(pi, e.right)))
    raise TypeError(f"not a standpoint expression: {e!r}")


def _dedup(parts):
    return list(dict.fromkeys(parts))


def fo_translate(phi, n: int | None = None, check_depth: bool = True) -> FoTranslation:
    """Modality-free first-order formula equisatisfiable with ``phi`` over ``n``
    precisifications (``n`` defaults to the number of distinct subformulas)."""
    _require_sentential(phi)
    if check_depth and modal_depth(phi) > 1:
        raise ValueError("modal depth exceeds 1; normalize the formula first")
    sig = predicate_signature(phi)
    stands = fo_standpoints(phi)
    clash = sorted(set(sig) & stands)
    if clash:
        raise ValueError(f"symbol(s) used both as predicate and standpoint: {', '.join(clash)}")
    if n is None:
        n = subformulas(phi).size
    if n < 1:
        raise ValueError("the number of precisifications must be at least 1")
    labels = precisification_labels(n)
    memo: dict = {}

    def trans(pi, f):
        key = f if isinstance(f, (Box, Diamond, Sharper)) else (pi, f)
        if key not in memo:
            memo[key] = _trans(pi, f)
        return memo[key]

    def _trans(pi, f):
        if isinstance(f, Pred):
            return Pred(_at(f.name, pi), f.args)
        if isinstance(f, (Top, Bottom)):
            return f
        if isinstance(f, Atom):
            return Pred(_at(f.name, pi))
        if isinstance(f, Not):
            return Not(trans(pi, f.arg))
        if isinstance(f, (And, Or, Implies)):
            return type(f)(trans(pi, f.left), trans(pi, f.right))
        if isinstance(f, (Forall, Exists)):
            return type(f)(f.var, trans(pi, f.body))
        if isinstance(f, Box):
            return conjoin(_dedup(Implies(fo_trans_expr(q, f.expr), trans(q, f.body))
                                  for q in labels))
        if isinstance(f, Diamond):
            return disjoin(_dedup(And(fo_trans_expr(q, f.expr), trans(q, f.body))
                                  for q in labels))
        if isinstance(f, Sharper):
            return conjoin(_dedup(Implies(fo_trans_expr(q, f.left), fo_trans_expr(q, f.right))
                                  for q in labels))
        raise TypeError(f"not a formula: {f!r}")

    parts = [trans(pi, phi) for pi in labels] + [Pred(_at("*", pi)) for pi in labels]
    formula = conjoin(_dedup(parts))
    signature = {}
    for pi in labels:
        for name, arity in sorted(sig.items()):
            signature[_at(name, pi)] = arity
        for s in sorted(stands):
            signature[_at(s, pi)] = 0
        signature[_at("*", pi)] = 0
    return FoTranslation(formula, labels, signature, tuple(sorted(constants(phi))))


# -- finite-domain semantics -----------------------------------------------------

@dataclass(frozen=True)
class FoInterpretation:
    """One precisification's view: predicate extensions and constant values."""
    predicates: dict
    constants: dict

    def __post_init__(self):
        object.__setattr__(self, "predicates",
                           {p: frozenset(tuple(t) for t in ts)
                            for p, ts in self.predicates.items()})
        object.__setattr__(self, "constants", dict(self.constants))


@dataclass(frozen=True)
class FoStructure:
    domain: tuple
    precisifications: tuple
    sigma: dict
    gamma: dict            # precisification -> FoInterpretation
    _prop: Structure = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.domain:
            raise StructureError("the domain must be non-empty")
        dom = set(self.domain)
        prop = Structure(tuple(self.precisifications), self.sigma, {})
        object.__setattr__(self, "_prop", prop)
        if set(self.gamma) != set(self.precisifications):
            raise StructureError("γ must give one interpretation per precisification")
        reference = None
        arities: dict = {}
        for pi in self.precisifications:
            interp = self.gamma[pi]
            for a, d in interp.constants.items():
                if d not in dom:
                    raise StructureError(f"constant {a} denotes {d!r}, which is not in Δ")
            if reference is None:
                reference = interp.constants
            elif interp.constants != reference:
                raise StructureError("constants must be rigid: every precisification "
                                     "must interpret them identically")
            for p, tuples in interp.predicates.items():
                for t in tuples:
                    if any(d not in dom for d in t):
                        raise StructureError(f"{p} contains {t!r}, which is outside Δ")
                    if arities.setdefault(p, len(t)) != len(t):
                        raise StructureError(f"predicate {p} has tuples of different arity")

    @property
    def constant_values(self) -> dict:
        return dict(self.gamma[self.precisifications[0]].constants)


def _term_value(interp: FoInterpretation, v: dict, t):
    if isinstance(t, Var):
        if t.name not in v:
            raise ValueError(f"variable {t.name} is unassigned")
        return v[t.name]
    if t.name not in interp.constants:
        raise ValueError(f"constant {t.name} has no interpretation")
    return interp.constants[t.name]


def _check_arity(extension, pred):
    for t in extension:
        if len(t) != pred.arity:
            raise ValueError(f"arity mismatch: {pred.name} used with {pred.arity} "
                             f"argument(s) but interpreted with arity {len(t)}")
        break


def fo_eval(m: FoStructure, pi, v: dict, phi) -> bool:
    if pi not in m.gamma:
        raise ValueError(f"{pi!r} is not a precisification of the structure")
    interp = m.gamma[pi]
    if isinstance(phi, Pred):
        ext = interp.predicates.get(phi.name, frozenset())
        _check_arity(ext, phi)
        return tuple(_term_value(interp, v, t) for t in phi.args) in ext
    if isinstance(phi, Atom):
        return () in interp.predicates.get(phi.name, frozenset())
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Not):
        return not fo_eval(m, pi, v, phi.arg)
    if isinstance(phi, And):
        return fo_eval(m, pi, v, phi.left) and fo_eval(m, pi, v, phi.right)
    if isinstance(phi, Or):
        return fo_eval(m, pi, v, phi.left) or fo_eval(m, pi, v, phi.right)
    if isinstance(phi, Implies):
        return (not fo_eval(m, pi, v, phi.left)) or fo_eval(m, pi, v, phi.right)
    if isinstance(phi, Forall):
        return all(fo_eval(m, pi, {**v, phi.var: d}, phi.body) for d in m.domain)
    if isinstance(phi, Exists):
        return any(fo_eval(m, pi, {**v, phi.var: d}, phi.body) for d in m.domain)
    if isinstance(phi, Box):
        return all(fo_eval(m, q, v, phi.body) for q in sigma_eval(m._prop, phi.expr))
    if isinstance(phi, Diamond):
        return any(fo_eval(m, q, v, phi.body) for q in sigma_eval(m._prop, phi.expr))
    if isinstance(phi, Sharper):
        return sigma_eval(m._prop, phi.left) <= sigma_eval(m._prop, phi.right)
    raise TypeError(f"not a formula: {phi!r}")


def _assignments(domain, names):
    names = sorted(names)
    for values in itertools.product(domain, repeat=len(names)):
        yield dict(zip(names, values))


def fo_eval_global(m: FoStructure, phi) -> bool:
    """True at every precisification under every assignment of the free variables."""
    fv = free_vars(phi)
    return all(fo_eval(m, pi, v, phi)
               for pi in m.precisifications for v in _assignments(m.domain, fv))


@dataclass(frozen=True)
class PlainStructure:
    """An ordinary first-order structure (no precisifications)."""
    domain: tuple
    predicates: dict
    constants: dict


def superpose(m: FoStructure) -> PlainStructure:
    """The plain structure read by the translation: ``P@pi`` is ``P`` at ``pi``,
    ``s@pi`` holds iff ``pi`` is in σ(s), and every ``*@pi`` holds."""
    preds: dict = {}
    for pi in m.precisifications:
        for p, ext in m.gamma[pi].predicates.items():
            preds[_at(p, pi)] = ext
        for s, members in m._prop.sigma.items():
            preds[_at(s, pi)] = frozenset({()}) if pi in members else frozenset()
        preds[_at("*", pi)] = frozenset({()})
    return PlainStructure(tuple(m.domain), preds, m.constant_values)


def plain_eval(i: PlainStructure, v: dict, phi) -> bool:
    if isinstance(phi, Pred):
        ext = i.predicates.get(phi.name, frozenset())
        _check_arity(ext, phi)
        args = []
        for t in phi.args:
            if isinstance(t, Var):
                args.append(v[t.name])
            elif t.name in i.constants:
                args.append(i.constants[t.name])
            else:
                raise ValueError(f"constant {t.name} has no interpretation")
        return tuple(args) in ext
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Not):
        return not plain_eval(i, v, phi.arg)
    if isinstance(phi, And):
        return plain_eval(i, v, phi.left) and plain_eval(i, v, phi.right)
    if isinstance(phi, Or):
        return plain_eval(i, v, phi.left) or plain_eval(i, v, phi.right)
    if isinstance(phi, Implies):
        return (not plain_eval(i, v, phi.left)) or plain_eval(i, v, phi.right)
    if isinstance(phi, Forall):
        return all(plain_eval(i, {**v, phi.var: d}, phi.body) for d in i.domain)
    if isinstance(phi, Exists):
        return any(plain_eval(i, {**v, phi.var: d}, phi.body) for d in i.domain)
    raise TypeError(f"unexpected node in a modality-free formula: {phi!r}")


def plain_eval_closed(i: PlainStructure, phi) -> bool:
    return all(plain_eval(i, v, phi) for v in _assignments(i.domain, free_vars(phi)))


# -- TPTP --------------------------------------------------------------------------

def _mangle_base(name: str) -> str:
    base, _, pi = name.partition("@")
    base = "star" if base == "*" else base
    base = re.sub(r"[^A-Za-z0-9_]", "_", base)
    base = base[:1].lower() + base[1:]
    if not base or not base[0].isalpha():
        base = "x" + base
    return f"{base}__{pi}" if pi else base


class _Mangler:
    def __init__(self):
        self.table: dict = {}
        self.used: set = set()

    def __call__(self, kind: str, name: str) -> str:
        key = (kind, name)
        if key not in self.table:
            if kind == "var":
                base = re.sub(r"[^A-Za-z0-9_]", "_", name)
                base = base[:1].upper() + base[1:]
                if not base[:1].isalpha():
                    base = "X" + base
            else:
                base = _mangle_base(name)
            candidate, k = base, 1
            while candidate in self.used:
                k += 1
                candidate = f"{base}_{k}"
            self.used.add(candidate)
            self.table[key] = candidate
        return self.table[key]


def _modal_free(phi) -> bool:
    return not any(isinstance(f, (Box, Diamond, Sharper, Atom)) for f in subformulas(phi))


def to_tptp(phi, name: str = "f0", with_table: bool = False) -> str:
    """One ``fof(name, axiom, ...).`` unit for a closed, modality-free formula."""
    if not _modal_free(phi):
        raise ValueError("TPTP export needs a modality-free formula; translate it first")
    fv = free_vars(phi)
    if fv:
        raise ValueError(f"TPTP export needs a closed formula; free: {', '.join(sorted(fv))}")
    mangle = _Mangler()

    def term(t):
        return mangle("var", t.name) if isinstance(t, Var) else mangle("const", t.name)

    def go(f) -> str:
        if isinstance(f, Top):
            return "$true"
        if isinstance(f, Bottom):
            return "$false"
        if isinstance(f, Pred):
            head = mangle("pred", f.name)
            return f"{head}({', '.join(term(t) for t in f.args)})" if f.args else head
        if isinstance(f, Not):
            return f"~ {go(f.arg)}"
        if isinstance(f, And):
            return f"({go(f.left)} & {go(f.right)})"
        if isinstance(f, Or):
            return f"({go(f.left)} | {go(f.right)})"
        if isinstance(f, Implies):
            return f"({go(f.left)} => {go(f.right)})"
        if isinstance(f, (Forall, Exists)):
            q = "!" if isinstance(f, Forall) else "?"
            return f"{q} [{mangle('var', f.var)}] : {go(f.body)}"
        raise TypeError(f"unexpected node {f!r}")

    # predicates first, so their mangled names do not depend on constant order
    for f in subformulas(phi):
        if isinstance(f, Pred):
            mangle("pred", f.name)
    unit = f"fof({name}, axiom, {go(phi)})."
    if not with_table:
        return unit
    lines = [f"% {kind} {orig} = {out}" for (kind, orig), out in mangle.table.items()]
    return "\n".join(lines + [unit]) + "\n"


# A small recursive-descent reader for the FOF subset emitted above.

_TPTP_TOKEN = re.compile(r"\s*(?:(?P<word>\$?[A-Za-z][A-Za-z0-9_]*)|(?P<op><=>|=>|[()\[\],.:~&|!?]))")


class TptpError(ValueError):
    pass


def validate_tptp(text: str) -> dict:
    """Check FOF syntax and arity consistency; return the predicate signature."""
    signature: dict = {}
    functors: set = set()
    body = "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("%"))
    tokens = []
    pos = 0
    while pos < len(body):
        if body[pos:].strip() == "":
            break
        m = _TPTP_TOKEN.match(body, pos)
        if m is None:
            raise TptpError(f"unexpected character at offset {pos}: {body[pos]!r}")
        tokens.append(m.group("word") or m.group("op"))
        pos = m.end()
    tokens.append(None)
    i = 0

    def peek():
        return tokens[i]

    def take(expected=None):
        nonlocal i
        tok = tokens[i]
        if expected is not None and tok != expected:
            raise TptpError(f"expected {expected!r}, found {tok!r}")
        if tok is None:
            raise TptpError("unexpected end of input")
        i += 1
        return tok

    def lower(tok):
        return tok is not None and tok[0].islower()

    def upper(tok):
        return tok is not None and tok[0].isupper()

    def formula(bound):
        left = unitary(bound)
        if peek() in ("&", "|"):
            op = peek()
            while peek() == op:
                take()
                unitary(bound)
            if peek() in ("&", "|", "=>", "<=>"):
                raise TptpError("mixed binary connectives need parentheses")
        elif peek() in ("=>", "<=>"):
            take()
            unitary(bound)
        return left

    def unitary(bound):
        tok = peek()
        if tok == "(":
            take()
            formula(bound)
            take(")")
        elif tok == "~":
            take()
            unitary(bound)
        elif tok in ("!", "?"):
            take()
            take("[")
            names = [take()]
            while peek() == ",":
                take()
                names.append(take())
            take("]")
            take(":")
            for v in names:
                if not upper(v):
                    raise TptpError(f"quantified variable {v!r} must start uppercase")
            unitary(bound | set(names))
        elif tok in ("$true", "$false"):
            take()
        elif lower(tok):
            name = take()
            arity = 0
            if peek() == "(":
                take()
                term(bound)
                arity = 1
                while peek() == ",":
                    take()
                    term(bound)
                    arity += 1
                take(")")
            if name in functors:
                raise TptpError(f"{name} is used both as a term and as a predicate")
            if signature.setdefault(name, arity) != arity:
                raise TptpError(f"predicate {name} used with arities {signature[name]} and {arity}")
        else:
            raise TptpError(f"expected a formula, found {tok!r}")

    def term(bound):
        tok = take()
        if upper(tok):
            if tok not in bound:
                raise TptpError(f"variable {tok} is not bound")
        elif lower(tok):
            if tok in signature:
                raise TptpError(f"{tok} is used both as a term and as a predicate")
            functors.add(tok)
        else:
            raise TptpError(f"expected a term, found {tok!r}")

    units = 0
    while peek() is not None:
        take("fof")
        take("(")
        if not lower(peek()) and not (peek() or "")[:1].isdigit():
            raise TptpError(f"bad unit name {peek()!r}")
        take()
        take(",")
        role = take()
        if role not in ("axiom", "conjecture", "hypothesis", "negated_conjecture"):
            raise TptpError(f"unknown role {role!r}")
        take(",")
        formula(frozenset())
        take(")")
        take(".")
        units += 1
    if units == 0:
        raise TptpError("no fof units found")
    return signature
