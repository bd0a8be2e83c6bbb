"""Shared hypothesis strategies: formulas, expressions and small structures."""
import itertools

import hypothesis.strategies as st
from hypothesis import settings

from standpoint.semantics import Structure
from standpoint.syntax import (
    BOTTOM, TOP, And, Atom, Box, Diamond, Diff, Implies, Inter, Named, Not, Or,
    Sharper, Star, Union,
)

settings.register_profile("default", deadline=None, max_examples=150)
settings.load_profile("default")

ATOMS = ("p", "q")
STANDPOINTS = ("s", "t")

expr_leaves = st.sampled_from([Star(), Named("s"), Named("t")])
exprs = st.recursive(
    expr_leaves,
    lambda sub: st.builds(Union, sub, sub) | st.builds(Inter, sub, sub) | st.builds(Diff, sub, sub),
    max_leaves=3,
)


def formulas(core: bool = False, max_leaves: int = 8):
    leaves = (st.sampled_from([Atom(a) for a in ATOMS] + [TOP, BOTTOM])
              | st.builds(Sharper, exprs, exprs))

    def extend(sub):
        nodes = st.builds(Not, sub) | st.builds(And, sub, sub) | st.builds(Box, exprs, sub)
        if not core:
            nodes = nodes | st.builds(Or, sub, sub) | st.builds(Implies, sub, sub) | st.builds(Diamond, exprs, sub)
        return nodes

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def structures(draw, max_precisifications: int = 3):
    n = draw(st.integers(1, max_precisifications))
    labels = tuple(f"w{i}" for i in range(n))
    subsets = st.sets(st.sampled_from(labels))
    sigma = {s: draw(subsets) for s in STANDPOINTS}
    delta = {a: draw(subsets) for a in ATOMS}
    return Structure(labels, sigma, delta)


# -- acceptance report ---------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def _criterion_key(line):
    tag = line.split()[1].rstrip(":")
    digits = "".join(itertools.takewhile(str.isdigit, tag))
    return int(digits), tag


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=_criterion_key):
            terminalreporter.write_line(line)
