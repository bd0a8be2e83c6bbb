"""Concrete text syntax, pretty-printing and the structure JSON format.

Grammar (whitespace-insensitive, loosest binding first)::

    formula := impl ("<->" impl)*
    impl    := or ("->" impl)?                       right associative
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "~" unary | "[" sexpr "]" unary | "<" sexpr ">" unary | atom
    atom    := "true" | "false" | ident | "(" formula ")"
             | "(" sexpr "<=" sexpr ")"
    sexpr   := sunion ("\\" sunion)*                 left associative
    sunion  := sinter ("u" sinter)*
    sinter  := sleaf ("n" sleaf)*
    sleaf   := "*" | ident | "(" sexpr ")"

The first-order variant additionally accepts ``P(t1, ..., tk)`` and the
quantifiers ``! x . unary`` and ``? x . unary``; an identifier used as a
term is a variable when an enclosing quantifier binds it and a constant
otherwise.  ``a <-> b`` has no node of its own and is read as
``(a -> b) & (b -> a)``.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .semantics import Structure, StructureError
from .syntax import (
    And, Atom, Bottom, Box, Const, Diamond, Diff, Exists, Forall, Implies,
    Inter, Named, Not, Or, Pred, Sharper, Star, Top, Union, Var,
)

RESERVED = frozenset({"true", "false", "u", "n"})


@dataclass(frozen=True)
class SourceSpan:
    start: int
    end: int


class ParseError(ValueError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} (at {span.start}:{span.end})")
        self.message = message
        self.span = span


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<op><->|->|<=|[<>\[\]()~&|\\*,!?.])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str          # "op", "ident" or "eof"
    text: str
    span: SourceSpan


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}",
                             SourceSpan(pos, pos + 1))
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), SourceSpan(m.start(), m.end())))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(len(text), len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, first_order: bool):
        self.tokens = tokenize(text)
        self.pos = 0
        self.first_order = first_order
        self.bound: list[str] = []

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def at_word(self, word: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == word

    def advance(self) -> Token:
        tok = self.tok
        self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, expected: str):
        found = "end of input" if self.tok.kind == "eof" else repr(self.tok.text)
        raise ParseError(f"{expected}, found {found}", self.tok.span)

    def ident(self, what: str) -> str:
        if self.tok.kind != "ident":
            self.fail(f"expected {what}")
        if self.tok.text in RESERVED:
            raise ParseError(f"{self.tok.text!r} is reserved and cannot be used as {what}",
                             self.tok.span)
        return self.advance().text

    # formulas
    def parse(self):
        f = self.formula()
        if self.tok.kind != "eof":
            self.fail("expected end of input")
        return f

    def formula(self):
        left = self.impl()
        while self.at("<->"):
            self.advance()
            right = self.impl()
            left = And(Implies(left, right), Implies(right, left))
        return left

    def impl(self):
        left = self.disj()
        if self.at("->"):
            self.advance()
            return Implies(left, self.impl())
        return left

    def disj(self):
        left = self.conj()
        while self.at("|"):
            self.advance()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.at("&"):
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self):
        if self.at("~"):
            self.advance()
            return Not(self.unary())
        if self.at("["):
            self.advance()
            e = self.sexpr()
            self.expect("]")
            return Box(e, self.unary())
        if self.at("<"):
            self.advance()
            e = self.sexpr()
            self.expect(">")
            return Diamond(e, self.unary())
        if self.first_order and (self.at("!") or self.at("?")):
            quant = Forall if self.advance().text == "!" else Exists
            var = self.ident("a variable")
            self.expect(".")
            self.bound.append(var)
            try:
                body = self.unary()
            finally:
                self.bound.pop()
            return quant(var, body)
        return self.atom()

    def atom(self):
        if self.at_word("true"):
            self.advance()
            return Top()
        if self.at_word("false"):
            self.advance()
            return Bottom()
        if self.at("("):
            start = self.pos
            try:
                self.advance()
                left = self.sexpr()
                self.expect("<=")
                right = self.sexpr()
                self.expect(")")
                return Sharper(left, right)
            except ParseError:
                self.pos = start
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        if self.tok.kind == "ident":
            name = self.ident("an atom")
            if not self.first_order:
                return Atom(name)
            if self.at("("):
                self.advance()
                args = [self.term()]
                while self.at(","):
                    self.advance()
                    args.append(self.term())
                self.expect(")")
                return Pred(name, tuple(args))
            return Pred(name, ())
        self.fail("expected a formula")

    def term(self):
        name = self.ident("a term")
        return Var(name) if name in self.bound else Const(name)

    # standpoint expressions
    def sexpr(self):
        left = self.sunion()
        while self.at("\\"):
            self.advance()
            left = Diff(left, self.sunion())
        return left

    def sunion(self):
        left = self.sinter()
        while self.at_word("u"):
            self.advance()
            left = Union(left, self.sinter())
        return left

    def sinter(self):
        left = self.sleaf()
        while self.at_word("n"):
            self.advance()
            left = Inter(left, self.sleaf())
        return left

    def sleaf(self):
        if self.at("*"):
            self.advance()
            return Star()
        if self.at("("):
            self.advance()
            e = self.sexpr()
            self.expect(")")
            return e
        return Named(self.ident("a standpoint"))


def parse_formula(text: str):
    """Parse a propositional standpoint formula."""
    return _Parser(text, first_order=False).parse()


def parse_fo_formula(text: str):
    """Parse a first-order standpoint formula."""
    return _Parser(text, first_order=True).parse()


# -- printing -------------------------------------------------------------------

_IMP, _OR, _AND, _UNARY, _ATOM = 1, 2, 3, 4, 5
_DIFF, _UNION, _INTER, _LEAF = 1, 2, 3, 4


def print_expr(e, need: int = _DIFF) -> str:
    if isinstance(e, Star):
        return "*"
    if isinstance(e, Named):
        return e.name
    if isinstance(e, Diff):
        level, text = _DIFF, f"{print_expr(e.left, _DIFF)} \\ {print_expr(e.right, _UNION)}"
    elif isinstance(e, Union):
        level, text = _UNION, f"{print_expr(e.left, _UNION)} u {print_expr(e.right, _INTER)}"
    elif isinstance(e, Inter):
        level, text = _INTER, f"{print_expr(e.left, _INTER)} n {print_expr(e.right, _LEAF)}"
    else:
        raise TypeError(f"not a standpoint expression: {e!r}")
    return f"({text})" if level < need else text


def _term(t) -> str:
    return t.name


def print_formula(phi, need: int = _IMP) -> str:
    """Render ``phi`` with the fewest parentheses the grammar allows."""
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bottom):
        return "false"
    if isinstance(phi, Atom):
        return phi.name
    if isinstance(phi, Pred):
        if not phi.args:
            return phi.name
        return f"{phi.name}({', '.join(_term(t) for t in phi.args)})"
    if isinstance(phi, Sharper):
        return f"({print_expr(phi.left)} <= {print_expr(phi.right)})"
    if isinstance(phi, Not):
        level, text = _UNARY, "~" + print_formula(phi.arg, _UNARY)
    elif isinstance(phi, Box):
        level, text = _UNARY, f"[{print_expr(phi.expr)}] {print_formula(phi.body, _UNARY)}"
    elif isinstance(phi, Diamond):
        level, text = _UNARY, f"<{print_expr(phi.expr)}> {print_formula(phi.body, _UNARY)}"
    elif isinstance(phi, (Forall, Exists)):
        q = "!" if isinstance(phi, Forall) else "?"
        level, text = _UNARY, f"{q} {phi.var} . {print_formula(phi.body, _UNARY)}"
    elif isinstance(phi, And):
        level, text = _AND, f"{print_formula(phi.left, _AND)} & {print_formula(phi.right, _UNARY)}"
    elif isinstance(phi, Or):
        level, text = _OR, f"{print_formula(phi.left, _OR)} | {print_formula(phi.right, _AND)}"
    elif isinstance(phi, Implies):
        level, text = _IMP, f"{print_formula(phi.left, _OR)} -> {print_formula(phi.right, _IMP)}"
    else:
        raise TypeError(f"not a formula: {phi!r}")
    return f"({text})" if level < need else text


# -- structures -----------------------------------------------------------------

def parse_structure(text: str) -> Structure:
    """Read a structure from its JSON form.

    ``{"precisifications": [...], "sigma": {s: [...]}, "delta": {p: [...]}}``
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StructureError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise StructureError("a structure must be a JSON object")
    prec = data.get("precisifications")
    if not isinstance(prec, list) or not all(isinstance(p, str) for p in prec):
        raise StructureError("'precisifications' must be a list of strings")
    if not prec:
        raise StructureError("Π must be non-empty")
    sigma = data.get("sigma", {})
    delta = data.get("delta", {})
    for key, table in (("sigma", sigma), ("delta", delta)):
        if not isinstance(table, dict) or not all(
                isinstance(v, list) and all(isinstance(x, str) for x in v)
                for v in table.values()):
            raise StructureError(f"'{key}' must map names to lists of precisifications")
    return Structure(tuple(prec), sigma, delta)


def structure_to_dict(m: Structure) -> dict:
    order = {p: i for i, p in enumerate(m.precisifications)}

    def listed(members):
        return sorted(members, key=order.__getitem__)

    return {
        "precisifications": list(m.precisifications),
        "sigma": {s: listed(v) for s, v in m.sigma.items()},
        "delta": {p: listed(v) for p, v in m.delta.items()},
    }


def print_structure(m: Structure, indent: int | None = None) -> str:
    return json.dumps(structure_to_dict(m), indent=indent)
