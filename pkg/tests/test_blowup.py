import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import sym
from gext.blowup import (BASE_CHART, Tower, blowup_point, build_tower, chain_tower,
                         check_transition_coherence, dual_graph, five_step_tower, fork_tower,
                         open_surface, total_transform_multiplicity)
from gext.errors import PointNotOnRequiredCurve, RuleCViolated


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_chain_self_intersections(n):
    t = chain_tower(n)
    want = {f"E{k}": -2 for k in range(1, n)}
    want[f"E{n}"] = -1
    assert t.self_intersections() == want
    assert sorted(t.edges()) == [(f"E{k}", f"E{k + 1}") for k in range(1, n)]
    assert t.is_tree()


def test_five_step_final_frame():
    t = five_step_tower()
    assert t.self_intersections() == {"E1": -2, "E2": -3, "E3": -2, "E4": -2, "E5": -1}


def test_first_two_steps():
    t = build_tower([(BASE_CHART, (0, 0))])
    assert t.self_intersections() == {"E1": -1}
    t = blowup_point(t, "U1", (0, 0))
    assert t.self_intersections() == {"E1": -2, "E2": -1}


@pytest.mark.parametrize("n", [1, 2])
def test_fork_shape(n):
    t = fork_tower(n)
    last = 2 * n + 3
    si = t.self_intersections()
    assert si["E1"] == -3 and si[f"E{last}"] == -1
    assert all(si[f"E{k}"] == -2 for k in range(2, last))
    nbrs = {c: {a for e in t.edges() for a in e if c in e and a != c} for c in si}
    assert nbrs["E3"] >= {"E1", "E2"}
    assert len(nbrs["E1"]) == len(nbrs["E2"]) == 1


def _order_along(poly, var):
    """Power of var dividing poly, via sympy factorization (independent oracle)."""
    expr = sym(poly)
    v = sympy.Symbol(var)
    k = 0
    while sympy.simplify(expr.subs(v, 0)) == 0:
        expr = sympy.expand(sympy.cancel(expr / v))
        k += 1
    return k


@pytest.mark.parametrize("tower,mult", [(chain_tower(n), 1) for n in (1, 2, 3, 4)]
                         + [(fork_tower(n), 2) for n in (1, 2)])
def test_multiplicity_along_last_curve(tower, mult):
    last = tower.curves[-1]
    assert total_transform_multiplicity(tower)[last.name] == mult
    cid = next(c for c in tower.charts if c in last.locus)
    ch = tower.charts[cid]
    (e,) = last.locus[cid].support()
    oracle = min(_order_along(ch.map_to_base.images[v], e) for v in ("x", "y"))
    assert oracle == mult


@pytest.mark.parametrize("t", [chain_tower(3), fork_tower(1), five_step_tower()])
def test_transition_coherence(t):
    for k in range(1, t.n + 1):
        assert check_transition_coherence(t, k)


@st.composite
def towers(draw):
    steps = [(BASE_CHART, (0, 0))]
    for k in range(1, draw(st.integers(1, 5))):
        chart = draw(st.sampled_from([f"U{k}", f"V{k}"]))
        steps.append((chart, (0, draw(st.integers(-1, 1)))))
    return steps


@settings(max_examples=30)
@given(towers())
def test_self_intersection_ledger(steps):
    t = Tower.empty()
    for chart, pt in steps:
        before = t.self_intersections()
        t = blowup_point(t, chart, pt)
        after = t.self_intersections()
        new = (set(after) - set(before)).pop()
        assert after[new] == -1
        drops = [c for c in before if after[c] == before[c] - 1]
        assert all(after[c] in (before[c], before[c] - 1) for c in before)
        assert 1 <= len(drops) <= 2 or not before
        assert t.is_tree()


def test_point_must_lie_on_newest_curve():
    t = build_tower([(BASE_CHART, (0, 0))])
    with pytest.raises(PointNotOnRequiredCurve):
        blowup_point(t, "U1", (1, 0))


def test_blowing_the_node_last_violates_rule_c():
    t = build_tower([(BASE_CHART, (0, 0)), ("U1", (0, 0)), ("V2", (0, 0))])
    with pytest.raises(RuleCViolated):
        open_surface(t)


def test_open_surface_chain():
    S = open_surface(chain_tower(2))
    assert S.certificate
    assert S.kept_exceptional == "E2"
    assert set(S.removed) == {"E1"}


def test_single_point_needs_chart_origin():
    t = chain_tower(1)
    assert open_surface(t, ("U1", (0, 0))).certificate
    with pytest.raises(ValueError):
        open_surface(t, ("U1", (0, 1)))
    with pytest.raises(ValueError):
        open_surface(t)


def test_dot_is_deterministic():
    a, b = dual_graph(fork_tower(1)), dual_graph(fork_tower(1))
    assert a == b
    assert "E1 -- E3" in a and "E5 (-1)" in a
