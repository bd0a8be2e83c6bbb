"""Abstract syntax for propositional standpoint formulas.

Standpoint expressions combine standpoint symbols with union, intersection
and difference, plus the universal standpoint ``*``.  Formulas are built from
atoms with the classical connectives, the modalities ``[e]`` (box) and
``<e>`` (diamond), and sharpening statements ``e1 <= e2``.

All nodes are frozen dataclasses, so structural equality and hashing come for
free and formulas can be shared freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import typing
from typing import Iterator


# -- standpoint expressions -------------------------------------------------

@dataclass(frozen=True)
class Star:
    def __str__(self) -> str:
        return "*"


@dataclass(frozen=True)
class Named:
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("standpoint names must be non-empty")
        if self.name == "*":
            raise ValueError("'*' is the universal standpoint, use Star()")


@dataclass(frozen=True)
class Union:
    left: "StandpointExpr"
    right: "StandpointExpr"


@dataclass(frozen=True)
class Inter:
    left: "StandpointExpr"
    right: "StandpointExpr"


@dataclass(frozen=True)
class Diff:
    left: "StandpointExpr"
    right: "StandpointExpr"


StandpointExpr = typing.Union[Star, Named, Union, Inter, Diff]
STAR = Star()


def expr_symbols(e: StandpointExpr) -> set[str]:
    """Named standpoint symbols occurring in ``e`` (``*`` excluded)."""
    if isinstance(e, Named):
        return {e.name}
    if isinstance(e, Star):
        return set()
    return expr_symbols(e.left) | expr_symbols(e.right)


def expr_size(e: StandpointExpr) -> int:
    if isinstance(e, (Star, Named)):
        return 1
    return 1 + expr_size(e.left) + expr_size(e.right)


# -- formulas ---------------------------------------------------------------

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Box:
    expr: StandpointExpr
    body: "Formula"


@dataclass(frozen=True)
class Diamond:
    expr: StandpointExpr
    body: "Formula"


@dataclass(frozen=True)
class Sharper:
    """``left <= right``: every precisification of ``left`` is one of ``right``."""
    left: StandpointExpr
    right: StandpointExpr


# -- first-order extension ---------------------------------------------------

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


Term = typing.Union[Var, Const]


@dataclass(frozen=True)
class Pred:
    """``name(args...)``; arity is ``len(args)``, nullary when empty."""
    name: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


Formula = typing.Union[Top, Bottom, Atom, Not, And, Or, Implies, Box, Diamond,
                       Sharper, Pred, Forall, Exists]
TOP = Top()
BOTTOM = Bottom()

BINARY = (And, Or, Implies)
MODAL = (Box, Diamond)
QUANTIFIER = (Forall, Exists)
LEAF = (Top, Bottom, Atom, Sharper, Pred)


def children(phi) -> tuple:
    """Immediate formula children (standpoint expressions are not formulas)."""
    if isinstance(phi, BINARY):
        return (phi.left, phi.right)
    if isinstance(phi, Not):
        return (phi.arg,)
    if isinstance(phi, (Box, Diamond, Forall, Exists)):
        return (phi.body,)
    return ()


def neg(phi):
    """Negate ``phi``, cancelling an outer negation instead of stacking one."""
    if isinstance(phi, Not):
        return phi.arg
    return Not(phi)


def conjoin(parts) -> "Formula":
    """Left-nested conjunction of ``parts``; ``true`` when empty."""
    result = None
    for part in parts:
        result = part if result is None else And(result, part)
    return TOP if result is None else result


def disjoin(parts) -> "Formula":
    result = None
    for part in parts:
        result = part if result is None else Or(result, part)
    return BOTTOM if result is None else result


def is_core(phi) -> bool:
    """True when ``phi`` has no Or/Implies/Diamond nodes."""
    if isinstance(phi, (Or, Implies, Diamond)):
        return False
    return all(is_core(c) for c in children(phi))


def desugar(phi, lower_sharpening: bool = False):
    """Rewrite Or, Implies and Diamond into Not/And/Box.

    Quantifiers are left in place (the first-order normal form has rules for
    both of them).

    Negations introduced by the macros cancel against an existing negation,
    so ``<s> ~p`` becomes ``~[s] p`` rather than ``~[s] ~~p``.  Negations
    written by the user are kept, which makes the function the identity on
    core formulas and therefore idempotent.
    """
    def go(f):
        if isinstance(f, (Top, Bottom, Atom, Pred)):
            return f
        if isinstance(f, QUANTIFIER):
            return type(f)(f.var, go(f.body))
        if isinstance(f, Sharper):
            if lower_sharpening:
                return Box(Diff(f.left, f.right), BOTTOM)
            return f
        if isinstance(f, Not):
            return Not(go(f.arg))
        if isinstance(f, And):
            return And(go(f.left), go(f.right))
        if isinstance(f, Or):
            return Not(And(neg(go(f.left)), neg(go(f.right))))
        if isinstance(f, Implies):
            return Not(And(go(f.left), neg(go(f.right))))
        if isinstance(f, Box):
            return Box(f.expr, go(f.body))
        if isinstance(f, Diamond):
            return Not(Box(f.expr, neg(go(f.body))))
        raise TypeError(f"not a formula: {f!r}")

    return go(phi)


def nnf(phi):
    """Negation normal form.

    Negations end up directly on atoms and sharpening statements; ``~true``
    and ``~false`` are folded into constants.  Box and Diamond are dual, so
    the result may contain Diamond even when the input did not.
    """
    def pos(f):
        if isinstance(f, (Top, Bottom, Atom, Sharper, Pred)):
            return f
        if isinstance(f, QUANTIFIER):
            return type(f)(f.var, pos(f.body))
        if isinstance(f, Not):
            return negated(f.arg)
        if isinstance(f, And):
            return And(pos(f.left), pos(f.right))
        if isinstance(f, Or):
            return Or(pos(f.left), pos(f.right))
        if isinstance(f, Implies):
            return Or(negated(f.left), pos(f.right))
        if isinstance(f, Box):
            return Box(f.expr, pos(f.body))
        if isinstance(f, Diamond):
            return Diamond(f.expr, pos(f.body))
        raise TypeError(f"not a formula: {f!r}")

    def negated(f):
        if isinstance(f, Top):
            return BOTTOM
        if isinstance(f, Bottom):
            return TOP
        if isinstance(f, (Atom, Sharper, Pred)):
            return Not(f)
        if isinstance(f, Forall):
            return Exists(f.var, negated(f.body))
        if isinstance(f, Exists):
            return Forall(f.var, negated(f.body))
        if isinstance(f, Not):
            return pos(f.arg)
        if isinstance(f, And):
            return Or(negated(f.left), negated(f.right))
        if isinstance(f, Or):
            return And(negated(f.left), negated(f.right))
        if isinstance(f, Implies):
            return And(pos(f.left), negated(f.right))
        if isinstance(f, Box):
            return Diamond(f.expr, negated(f.body))
        if isinstance(f, Diamond):
            return Box(f.expr, negated(f.body))
        raise TypeError(f"not a formula: {f!r}")

    return pos(phi)


def is_nnf(phi) -> bool:
    if isinstance(phi, Implies):
        return False
    if isinstance(phi, Not):
        return isinstance(phi.arg, (Atom, Top, Bottom, Sharper, Pred))
    return all(is_nnf(c) for c in children(phi))


# -- subformulas ------------------------------------------------------------

@dataclass(frozen=True)
class SubformulaIndex:
    """Distinct subformulas of ``root`` in children-before-parents order."""
    root: object
    entries: tuple
    position: dict = field(compare=False, repr=False)

    @property
    def size(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator:
        return iter(self.entries)

    def index(self, psi) -> int:
        return self.position[psi]

    def labels(self) -> tuple[str, ...]:
        """One precisification label per subformula: ``pi1 .. pim``."""
        return precisification_labels(self.size)


def precisification_labels(n: int) -> tuple[str, ...]:
    return tuple(f"pi{i}" for i in range(1, n + 1))


def subformulas(phi) -> SubformulaIndex:
    position: dict = {}
    order: list = []
    # iterative post-order so deep formulas do not hit the recursion limit
    stack = [(phi, False)]
    while stack:
        node, expanded = stack.pop()
        if node in position:
            continue
        if expanded:
            position[node] = len(order)
            order.append(node)
            continue
        stack.append((node, True))
        for child in reversed(children(node)):
            if child not in position:
                stack.append((child, False))
    return SubformulaIndex(phi, tuple(order), position)


def size(phi) -> int:
    """Number of distinct subformulas."""
    return subformulas(phi).size


def atoms(phi) -> set[str]:
    return {f.name for f in subformulas(phi) if isinstance(f, Atom)}


def standpoints(phi) -> set[str]:
    """Named standpoint symbols occurring anywhere in ``phi``."""
    found: set[str] = set()
    for f in subformulas(phi):
        if isinstance(f, MODAL):
            found |= expr_symbols(f.expr)
        elif isinstance(f, Sharper):
            found |= expr_symbols(f.left) | expr_symbols(f.right)
    return found


def modal_depth(phi) -> int:
    """Nesting depth of Box/Diamond; sharpening statements count as depth 0."""
    if isinstance(phi, MODAL):
        return 1 + modal_depth(phi.body)
    return max((modal_depth(c) for c in children(phi)), default=0)


def tree_depth(phi) -> int:
    """Height of the syntax tree, counting leaves as height 1."""
    return 1 + max((tree_depth(c) for c in children(phi)), default=0)


def free_vars(phi) -> set[str]:
    """Free variables of a first-order formula (empty for propositional ones)."""
    if isinstance(phi, Pred):
        return {t.name for t in phi.args if isinstance(t, Var)}
    if isinstance(phi, QUANTIFIER):
        return free_vars(phi.body) - {phi.var}
    found: set[str] = set()
    for c in children(phi):
        found |= free_vars(c)
    return found
