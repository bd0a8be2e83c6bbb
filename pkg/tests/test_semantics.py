import pytest
from hypothesis import given

from conftest import formulas, structures
from standpoint.frontend import parse_formula as P
from standpoint.semantics import (
    OracleBudgetError, Structure, StructureError, _mask_eval, eval_global, eval_local,
    evaluate, iter_models, model_check, prune, sat_oracle, sigma_eval, witness_bound,
)
from standpoint.syntax import (
    Box, Diamond, Diff, Inter, Named, Not, Sharper, Star, atoms, desugar, standpoints,
    subformulas,
)

s, t = Named("s"), Named("t")


def test_sigma_eval():
    m = Structure((1, 2, 3), {"s": {1, 2}, "t": {2, 3}}, {})
    assert sigma_eval(m, Star()) == {1, 2, 3}
    assert sigma_eval(m, Diff(s, s)) == set()
    assert sigma_eval(m, Inter(s, t)) == {2}
    assert sigma_eval(m, Named("unknown")) == set()


def test_structure_validation():
    with pytest.raises(StructureError, match="non-empty"):
        Structure((), {}, {})
    with pytest.raises(StructureError, match="unknown precisification"):
        Structure(("a",), {"s": {"b"}}, {})
    with pytest.raises(StructureError):
        Structure(("a",), {}, {"p": {"b"}})


def test_eval_examples():
    empty = Structure(("w1",), {}, {})
    assert evaluate(empty, "w1", P("[s] false"))
    m = Structure(("w1",), {}, {"p": {"w1"}})
    assert evaluate(m, "w1", P("p"))
    m = Structure(("w1", "w2"), {"s": {"w2"}}, {"p": {"w1"}})
    assert not evaluate(m, "w1", P("[s] p"))
    with pytest.raises(ValueError):
        evaluate(m, "w9", P("p"))


def test_eval_global_examples():
    m = Structure(("w1", "w2"), {}, {"p": {"w1"}})
    assert eval_global(m, P("true"))
    assert not eval_global(m, P("p"))
    assert eval_global(m, P("<*> p"))
    assert eval_local(m, P("p"))


def test_model_check_examples():
    m = Structure(("w1", "w2"), {"s": {"w1", "w2"}, "t": {"w1", "w2"}}, {"p": {"w1"}})
    table = model_check(m, P("p"))
    assert table.local[0] == {"w1": True, "w2": False}
    table = model_check(m, P("(s <= t)"))
    assert table.model[0] is True
    phi = P("[s] p")
    table = model_check(m, phi)
    assert table.model[subformulas(phi).index(phi)] is False
    with pytest.raises(ValueError):
        model_check(m, P("<s> p"))


def test_oracle_examples():
    assert sat_oracle(P("p & ~p")) is None
    assert sat_oracle(P("[s] p & <s> ~p")) is None
    m = sat_oracle(P("<s> p & <s> ~p"))
    assert len(m.precisifications) == 2
    assert m.sigma_of("s") == set(m.precisifications)
    assert len(m.delta_of("p")) == 1


def test_oracle_modes_and_nonempty():
    phi = P("p & <*> ~p")
    assert sat_oracle(phi) is None
    assert sat_oracle(phi, mode="local") is not None
    m = sat_oracle(P("[s] false"), nonempty=True)
    assert m is None
    assert sat_oracle(P("[s] false")) is not None


def test_oracle_budget():
    phi = P("p & q & r & x & (s <= t) & (t <= u1) & (u1 <= u2)")
    with pytest.raises(OracleBudgetError, match="search space too large"):
        sat_oracle(phi, budget=1000)


def test_prune_examples():
    m = Structure(("w1",), {"s": {"w1"}}, {"p": {"w1"}})
    assert prune(m, P("[s] p")) == m
    m = Structure(("w1", "w2", "w3"), {"s": {"w1", "w2", "w3"}}, {"p": {"w1"}})
    pruned = prune(m, P("<s> p"))
    assert pruned.precisifications == ("w1",)
    assert eval_global(pruned, P("<s> p"))
    assert prune(m, desugar(P("<s> p"))).precisifications == ("w1",)
    m = Structure(("w1", "w2"), {"s": {"w2"}}, {})
    assert prune(m, P("~(s <= t)")).precisifications == ("w2",)
    with pytest.raises(ValueError):
        prune(m, P("p"))


@given(formulas(), structures())
def test_modal_values_do_not_depend_on_the_point(phi, m):
    for psi in (Box(s, phi), Diamond(t, phi), Sharper(s, t)):
        values = {evaluate(m, pi, psi) for pi in m.precisifications}
        assert len(values) == 1


@given(formulas(), structures())
def test_duality_and_vacuity(phi, m):
    for pi in m.precisifications:
        assert evaluate(m, pi, Diamond(s, phi)) == evaluate(m, pi, Not(Box(s, Not(phi))))
        assert evaluate(m, pi, Box(Diff(s, s), phi))
        assert not evaluate(m, pi, Diamond(Diff(s, s), phi))


@given(formulas(core=True, max_leaves=10), structures())
def test_model_check_matches_eval(phi, m):
    table = model_check(m, phi)
    for pi in m.precisifications:
        assert table.root_at(pi) == evaluate(m, pi, phi)


@given(formulas(), structures())
def test_prune_keeps_a_small_model(phi, m):
    if not eval_global(m, phi):
        return
    pruned = prune(m, phi)
    assert eval_global(pruned, phi)
    assert len(pruned.precisifications) <= min(subformulas(phi).size, witness_bound(phi))


@given(formulas(), structures())
def test_bitmask_evaluator_matches_eval(phi, m):
    names = sorted(atoms(phi))
    stands = sorted(standpoints(phi))
    bits = {("p", a): i for i, a in enumerate(names)}
    bits.update({("s", x): len(names) + i for i, x in enumerate(stands)})
    types = []
    for pi in m.precisifications:
        t_ = sum(1 << bits[("p", a)] for a in names if pi in m.delta_of(a))
        t_ += sum(1 << bits[("s", x)] for x in stands if pi in m.sigma_of(x))
        types.append(t_)
    full = (1 << len(types)) - 1
    mask = _mask_eval(subformulas(phi), bits, types, full)
    for j, pi in enumerate(m.precisifications):
        assert bool(mask >> j & 1) == evaluate(m, pi, phi)


@given(formulas(max_leaves=5))
def test_oracle_models_are_models(phi):
    for k, m in enumerate(iter_models(phi, cap=3)):
        assert eval_global(m, phi)
        if k == 5:
            break
