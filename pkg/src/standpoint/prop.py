"""Plain propositional formulas over precisification-indexed atoms."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
import typing


@dataclass(frozen=True)
class AtomAt:
    """``p@pi``: atom ``p`` holds at precisification ``pi``."""
    name: str
    pi: str

    def __str__(self):
        return f"{self.name}@{self.pi}"


@dataclass(frozen=True)
class StandAt:
    """``s@pi``: precisification ``pi`` belongs to standpoint ``s``."""
    name: str
    pi: str

    def __str__(self):
        return f"{self.name}@{self.pi}"


@dataclass(frozen=True)
class StarAt:
    pi: str

    def __str__(self):
        return f"*@{self.pi}"


PropAtom = typing.Union[AtomAt, StandAt, StarAt]


class _Node:
    """Hash is cached: translated formulas are large and share subterms."""
    __slots__ = ()

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))


@dataclass(frozen=True, eq=True)
class PConst(_Node):
    value: bool
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class Lit(_Node):
    atom: object
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class PNot(_Node):
    arg: object
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class PAnd(_Node):
    args: tuple
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class POr(_Node):
    args: tuple
    __hash__ = _Node.__hash__


@dataclass(frozen=True, eq=True)
class PImplies(_Node):
    left: object
    right: object
    __hash__ = _Node.__hash__


PropFormula = typing.Union[PConst, Lit, PNot, PAnd, POr, PImplies]
TRUE = PConst(True)
FALSE = PConst(False)


def _complementary(flat) -> bool:
    return any(isinstance(a, PNot) and a.arg in flat for a in flat)


def conj(*parts):
    """Flattened, duplicate-free conjunction; ``true`` parts are dropped and
    ``false`` or a complementary pair collapses the whole conjunction."""
    flat: dict = {}
    for part in parts:
        if isinstance(part, PAnd):
            for a in part.args:
                flat.setdefault(a, None)
        elif part != TRUE:
            flat.setdefault(part, None)
    if FALSE in flat or _complementary(flat):
        return FALSE
    if not flat:
        return TRUE
    if len(flat) == 1:
        return next(iter(flat))
    return PAnd(tuple(flat))


def disj(*parts):
    flat: dict = {}
    for part in parts:
        if isinstance(part, POr):
            for a in part.args:
                flat.setdefault(a, None)
        elif part != FALSE:
            flat.setdefault(part, None)
    if TRUE in flat or _complementary(flat):
        return TRUE
    if not flat:
        return FALSE
    if len(flat) == 1:
        return next(iter(flat))
    return POr(tuple(flat))


def prop_atoms(f) -> set:
    found: set = set()
    seen: set = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if isinstance(g, Lit):
            found.add(g.atom)
        elif isinstance(g, PNot):
            stack.append(g.arg)
        elif isinstance(g, (PAnd, POr)):
            stack.extend(g.args)
        elif isinstance(g, PImplies):
            stack.extend((g.left, g.right))
    return found


def prop_eval(f, valuation) -> bool:
    """Truth of ``f`` under ``valuation`` (a mapping; missing atoms are false)."""
    memo: dict = {}

    def go(g):
        key = id(g)
        if key in memo:
            return memo[key]
        if isinstance(g, PConst):
            r = g.value
        elif isinstance(g, Lit):
            r = bool(valuation.get(g.atom, False))
        elif isinstance(g, PNot):
            r = not go(g.arg)
        elif isinstance(g, PAnd):
            r = all(go(a) for a in g.args)
        elif isinstance(g, POr):
            r = any(go(a) for a in g.args)
        elif isinstance(g, PImplies):
            r = (not go(g.left)) or go(g.right)
        else:
            raise TypeError(f"not a propositional formula: {g!r}")
        memo[key] = r
        return r

    return go(f)


def node_count(f) -> int:
    """Size of ``f`` as a tree (shared subterms are counted every time)."""
    memo: dict = {}

    def go(g):
        key = id(g)
        if key not in memo:
            if isinstance(g, (PConst, Lit)):
                memo[key] = 1
            elif isinstance(g, PNot):
                memo[key] = 1 + go(g.arg)
            elif isinstance(g, (PAnd, POr)):
                memo[key] = 1 + sum(go(a) for a in g.args)
            else:
                memo[key] = 1 + go(g.left) + go(g.right)
        return memo[key]

    return go(f)


def print_prop(f) -> str:
    """Fully parenthesised text with atoms written ``p@pi``."""
    if isinstance(f, PConst):
        return "true" if f.value else "false"
    if isinstance(f, Lit):
        return str(f.atom)
    if isinstance(f, PNot):
        return "~" + print_prop(f.arg)
    if isinstance(f, PAnd):
        return "(" + " & ".join(print_prop(a) for a in f.args) + ")"
    if isinstance(f, POr):
        return "(" + " | ".join(print_prop(a) for a in f.args) + ")"
    if isinstance(f, PImplies):
        return f"({print_prop(f.left)} -> {print_prop(f.right)})"
    raise TypeError(f"not a propositional formula: {f!r}")
