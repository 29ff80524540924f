from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from walkbound import solver
from walkbound.bounds import (
    audit,
    bound_coarse,
    bound_cost_simple,
    bound_main,
    bound_simple_distance,
    bound_tree_tail,
    bound_weighted_F,
    directional_asymmetry,
    passes,
    poly_F,
    poly_P,
)
from walkbound.errors import InvalidArgument, NotATree
from walkbound.fixtures import diamond_tail, path, star, triangle
from walkbound.graph import FLOAT, RATIONAL, CostFunction, EdgeWeights, Graph, WalkSpec, asymmetry

from conftest import oracle_hitting, trees, weighted_instances

Q = Fraction

rationals = st.fractions(min_value=0, max_value=4, max_denominator=12)


def closed_P(t, m):
    return 2 * (t ** m - 1) / (t - 1) - 1


def closed_F(t, m):
    return (2 * t ** (m + 1) - m * t ** 2 - 2 * t + m) / (t - 1) ** 2


# ---------------------------------------------------------------- polynomials


def test_poly_examples():
    assert [poly_P(1, m) for m in range(1, 8)] == [2 * m - 1 for m in range(1, 8)]
    assert poly_P(2, 3) == 13 == 2 * (2 + 4) + 1 == closed_P(Q(2), 3)
    assert all(poly_P(t, 1) == 1 for t in (0, Q(1, 2), 1, 3, 7.5))
    assert poly_F(1, 5) == 25
    assert poly_F(2, 3) == 19 == poly_P(2, 1) + poly_P(2, 2) + poly_P(2, 3)
    assert poly_F(Q(3), 0) == 0


def test_poly_domain_errors():
    with pytest.raises(InvalidArgument):
        poly_P(-1, 3)
    with pytest.raises(InvalidArgument):
        poly_P(1, 0)
    with pytest.raises(InvalidArgument):
        poly_F(1, -1)
    with pytest.raises(InvalidArgument):
        poly_F(1, 2.5)


def test_F_at_one_is_square():
    for m in range(0, 101):
        assert poly_F(1, m) == m * m
        assert poly_F(Q(1), m) == m * m


@given(rationals.filter(lambda t: t != 1), st.integers(1, 30))
def test_closed_forms_agree_exactly(t, m):
    assert poly_P(t, m) == closed_P(t, m)
    assert poly_F(t, m) == closed_F(t, m)


@pytest.mark.parametrize("t", [k / 20 for k in range(0, 81) if abs(k / 20 - 1) >= 0.1])
def test_closed_forms_agree_in_floats(t):
    for m in range(1, 25):
        assert poly_P(t, m) == pytest.approx(closed_P(t, m), rel=1e-12)
        assert poly_F(t, m) == pytest.approx(closed_F(t, m), rel=1e-12)


@given(rationals, rationals, st.integers(1, 25))
def test_property_a_positive_and_increasing(t1, t2, m):
    lo, hi = sorted((t1, t2))
    assert poly_P(lo, m) > 0 and poly_F(lo, m) > 0
    assert poly_P(lo, m) <= poly_P(hi, m) and poly_F(lo, m) <= poly_F(hi, m)
    assert poly_P(lo, m) <= poly_P(lo, m + 1)
    assert poly_F(lo, m) <= poly_F(lo, m + 1)


@given(rationals, st.integers(1, 40))
def test_property_b_F_is_sum_of_P(t, m):
    assert poly_F(t, m) == sum(poly_P(t, k) for k in range(1, m + 1))


@pytest.mark.parametrize("t", [Q(1), Q(3, 2), Q(2), Q(3)])
def test_property_c_superadditive(t):
    for a in range(1, 21):
        for b in range(1, 21):
            assert poly_P(t, a + b) >= poly_P(t, a) + poly_P(t, b) + 1


@given(rationals, st.integers(1, 40))
def test_property_d_recurrence(t, m):
    assert poly_P(t, m + 1) == t * poly_P(t, m) + t + 1


# ---------------------------------------------------------------- closed-form bounds


def test_simple_distance_examples():
    assert bound_simple_distance(4, 4) == 16
    assert bound_simple_distance(4, 1) == 7
    assert bound_simple_distance(4, 2) == 12
    h = solver.hitting_times(WalkSpec(diamond_tail().graph, 0))
    assert h[1] == bound_simple_distance(4, 1)
    assert h[2] == h[3] == 9 <= bound_simple_distance(4, 2)
    for m in range(1, 10):
        for d in range(1, m + 1):
            assert bound_simple_distance(m, d) == 2 * m * d - d * d
    with pytest.raises(InvalidArgument):
        bound_simple_distance(3, 0)
    with pytest.raises(InvalidArgument):
        bound_simple_distance(3, 4)


def test_tree_tail_examples():
    assert bound_tree_tail(5, 5) == 0
    assert bound_tree_tail(9, 0) == 81
    with pytest.raises(InvalidArgument):
        bound_tree_tail(2, 3)


def test_cost_simple_examples(path_graph):
    g = path_graph(6)
    fine, coarse = bound_cost_simple(g, 0, CostFunction.constant(g, 1))
    assert fine == 36 == sum(2 * k - 1 for k in range(1, 7))
    assert coarse == 36
    assert bound_cost_simple(g, 0, CostFunction.constant(g, 0)) == (0, 0)
    fx = diamond_tail()
    fine, _ = bound_cost_simple(fx.graph, 0, CostFunction.constant(fx.graph, 1))
    # edge distances 0, 1, 1, 2: the edge 2-3 has both ends two steps from a
    assert fine == 1 + 3 + 3 + 5 == 12 >= fx.hitting[2]


def test_weighted_F_examples():
    assert bound_weighted_F(1, 6) == 36
    assert bound_weighted_F(2, 3) == 19
    with pytest.raises(InvalidArgument):
        bound_weighted_F(Q(1, 2), 3)


def _biased_path(m, rho):
    """Path absorbed at 0 where each interior vertex steps away with odds ``rho``."""
    g = path(m)
    return g, EdgeWeights(g, [rho ** k for k in range(m)])


@pytest.mark.parametrize("rho", [Q(1), Q(3, 2), Q(2), Q(3)])
@pytest.mark.parametrize("m", [1, 2, 3, 5, 8])
def test_biased_path_attains_F(m, rho):
    g, w = _biased_path(m, rho)
    exact = oracle_hitting(g, w.values, 0)
    assert max(exact) == exact[m] == poly_F(rho, m)
    assert solver.hitting_times(WalkSpec(g, 0, w))[m] == poly_F(rho, m)
    if m >= 2:
        assert asymmetry(w) == rho


def test_main_bound_examples():
    fx = diamond_tail()
    g = fx.graph
    f = CostFunction(g, [1, 2, 3, 4])
    assert bound_main(g, 0, None, f) == bound_cost_simple(g, 0, f).fine
    e = path(1)
    for tau in (2, 5):
        assert bound_main(e, 0, EdgeWeights(e, [tau]), CostFunction(e, [Q(7, 2)])) == Q(7, 2)


def test_coarse_examples():
    assert bound_coarse(1, 7) == 49
    assert bound_coarse(2, 3) == 36 >= poly_F(2, 3)
    assert all(bound_coarse(t, 1) == 1 for t in (1, 2, 9))


@given(st.fractions(min_value=1, max_value=4, max_denominator=10), st.integers(0, 30))
def test_coarse_dominates_F(t, m):
    assert bound_coarse(t, m) >= poly_F(t, m)


def test_directional_asymmetry_examples():
    s = star(4)
    assert directional_asymmetry(WalkSpec(s, 2)) == 1
    # weights falling away from a: the walk is pulled towards a
    g = path(4)
    toward = EdgeWeights(g, [Q(1, 2) ** k for k in range(4)])
    assert asymmetry(toward) == 2
    assert directional_asymmetry(WalkSpec(g, 0, toward)) == 1
    assert solver.hitting_times(WalkSpec(g, 0, toward)).max() <= 16
    g, away = _biased_path(4, Q(5, 2))
    assert directional_asymmetry(WalkSpec(g, 0, away)) == Q(5, 2)
    with pytest.raises(NotATree):
        directional_asymmetry(WalkSpec(triangle(), 0))


@settings(max_examples=60, deadline=None)
@given(weighted_instances(graphs=trees(n_min=2, n_max=10), unit=False))
def test_directional_refinement(inst):
    g, w, _, a = inst
    spec = WalkSpec(g, a, w)
    tilde = directional_asymmetry(spec)
    assert 1 <= tilde <= asymmetry(w)
    assert solver.hitting_times(spec).max() <= poly_F(tilde, g.m)


# ---------------------------------------------------------------- audit


def test_passes_tolerance():
    assert passes(Q(5), Q(5), RATIONAL)
    assert not passes(Q(5) + Q(1, 10 ** 30), Q(5), RATIONAL)
    assert passes(5.0 + 4e-9, 5.0, FLOAT)
    assert not passes(5.0 + 6e-9, 5.0, FLOAT)


def test_audit_path_is_sharp(path_graph):
    rep = audit(path_graph(6))
    assert rep.max_hitting == 36 and rep.sharp is True and rep.unit_path
    assert rep.passed


def test_audit_fixture_not_sharp():
    rep = audit(diamond_tail().graph)
    assert rep.max_hitting == 9 and rep.sharp is False
    assert rep.passed
    kinds = {r.kind for r in rep.records}
    assert {"distance", "weighted-F", "coarse", "cost-simple", "cost-coarse", "main"} <= kinds
    assert "tree-tail" not in kinds


def test_audit_tree_increments():
    g = star(3)
    rep = audit(g)
    names = {c.name for c in rep.checks}
    assert {"tree-fast-path", "tail-increments", "cost-chain"} <= names
    assert rep.passed


def test_audit_records_sorted_and_named():
    rep = audit(triangle(), target=0)
    keys = [(r.source, r.target, r.kind) for r in rep.records]
    assert keys == sorted(keys)
    assert all(r.slack == r.bound - r.exact for r in rep.records)


def test_audit_restricts_to_component():
    g = Graph(5, ((0, 1), (1, 2), (3, 4)))
    rep = audit(g, target=4)
    assert {r.source for r in rep.records} == {3, 4}


def test_audit_detects_a_violation(monkeypatch):
    import walkbound.bounds as b
    monkeypatch.setattr(b, "bound_simple_distance", lambda m, d: Fraction(0))
    rep = b.audit(diamond_tail().graph)
    assert rep.violations and not rep.passed
    assert all(r.kind == "distance" for r in rep.violations)


@settings(max_examples=80, deadline=None)
@given(weighted_instances())
def test_audit_never_violates(inst):
    g, w, f, a = inst
    rep = audit(g, w, f, target=a)
    assert rep.passed, (rep.violations, rep.failed_checks)
    assert rep.sharp == rep.unit_path
    for mode in (FLOAT,):
        assert audit(g, w, f, target=a, mode=mode).passed
