import itertools

import pytest
from hypothesis import given
import hypothesis.strategies as st

from standpoint.prop import FALSE, TRUE, Lit, PAnd, PImplies, PNot, POr, conj, disj
from standpoint.sat import (
    AUX_PREFIX, CnfFormula, DimacsError, SolverBudgetError, brute_force_sat, emit_dimacs,
    first_falsified, parse_dimacs, solve, to_cnf, truth_table_sat,
)

ATOMS = ["a", "b", "c", "d"]

prop_formulas = st.recursive(
    st.sampled_from([Lit(a) for a in ATOMS] + [TRUE, FALSE]),
    lambda sub: (st.builds(PNot, sub)
                 | st.lists(sub, min_size=2, max_size=3).map(lambda xs: PAnd(tuple(xs)))
                 | st.lists(sub, min_size=2, max_size=3).map(lambda xs: POr(tuple(xs)))
                 | st.builds(PImplies, sub, sub)),
    max_leaves=10,
)


def test_constant_true_has_no_clauses():
    cnf = to_cnf(TRUE)
    assert cnf.clauses == ()
    assert solve(cnf).satisfiable


def test_contradiction():
    x = Lit("x")
    assert not solve(to_cnf(PAnd((x, PNot(x))))).satisfiable
    assert conj(x, PNot(x)) == FALSE
    assert disj(x, PNot(x)) == TRUE


def test_solver_examples():
    empty = solve(CnfFormula(0, ()))
    assert empty.satisfiable and empty.assignment == {}
    assert not solve(CnfFormula(1, ((1,), (-1,)))).satisfiable
    assert not solve(CnfFormula(1, ((),))).satisfiable


def test_unassigned_variables_default_to_false():
    result = solve(CnfFormula(3, ((1, 2),)))
    assert result.assignment[3] is False


def test_aux_names_are_disjoint():
    cnf = to_cnf(POr((PAnd((Lit("a"), Lit("b"))), Lit("c"))))
    names = set(cnf.names.values())
    aux = {n for n in names if isinstance(n, str) and n.startswith(AUX_PREFIX)}
    assert aux and names - aux == {"a", "b", "c"}


def _all_clauses(num_vars, max_len=3):
    lits = [v for i in range(1, num_vars + 1) for v in (i, -i)]
    for k in range(1, max_len + 1):
        yield from itertools.combinations(lits, k)


def test_all_small_cnfs_match_truth_tables():
    clauses = list(_all_clauses(3, 2))
    checked = 0
    for k in range(0, 5):
        for chosen in itertools.combinations(clauses, k):
            cnf = CnfFormula(3, chosen)
            result = solve(cnf)
            assert result.satisfiable == brute_force_sat(cnf)
            if result.satisfiable:
                assert first_falsified(cnf, result.assignment) is None
            checked += 1
    assert checked > 1000


@given(prop_formulas)
def test_clausification_preserves_satisfiability(f):
    cnf = to_cnf(f)
    result = solve(cnf)
    assert result.satisfiable == truth_table_sat(f)
    if result.satisfiable:
        from standpoint.prop import prop_eval
        v = {name: result.assignment[i] for i, name in cnf.names.items()}
        assert prop_eval(f, v)


@given(st.lists(st.lists(st.integers(1, 6).flatmap(lambda v: st.sampled_from([v, -v])),
                         min_size=1, max_size=3), max_size=20))
def test_solver_is_deterministic_and_correct(clauses):
    cnf = CnfFormula(6, clauses)
    first, second = solve(cnf), solve(cnf)
    assert first == second
    assert first.satisfiable == brute_force_sat(cnf)


def test_budget_is_enforced():
    # pigeonhole 5 into 4: unsatisfiable and hard for plain DPLL
    var = lambda p, h: p * 4 + h + 1
    clauses = [tuple(var(p, h) for h in range(4)) for p in range(5)]
    clauses += [(-var(p, h), -var(q, h)) for h in range(4)
                for p in range(5) for q in range(p + 1, 5)]
    with pytest.raises(SolverBudgetError):
        solve(CnfFormula(20, clauses), budget=5)
    assert not solve(CnfFormula(20, clauses)).satisfiable


def test_dimacs_emit():
    assert emit_dimacs(CnfFormula(2, ((1, -2),))) == "p cnf 2 1\n1 -2 0\n"


def test_dimacs_round_trip():
    cnf = to_cnf(PImplies(Lit("a"), PAnd((Lit("b"), PNot(Lit("c"))))))
    text = emit_dimacs(cnf)
    back = parse_dimacs(text)
    assert back == cnf
    assert emit_dimacs(back) == text


@pytest.mark.parametrize("text, message", [
    ("p cnf 1 1\n2 0\n", "literal 2 exceeds declared 1 variables"),
    ("p cnf 2 1\n1 2\n", "terminating 0"),
    ("p cnf 2 2\n1 2 0\n", "declares 2 clauses"),
    ("p cnf x 1\n1 0\n", "malformed header"),
    ("1 0\n", "before the 'p cnf' header"),
    ("c nothing\n", "missing 'p cnf' header"),
])
def test_dimacs_errors(text, message):
    with pytest.raises(DimacsError, match=message):
        parse_dimacs(text)
