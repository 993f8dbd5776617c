from fractions import Fraction

import numpy as np
import pytest

from edgeshapley import (
    CharacteristicContractError,
    CostDecayParams,
    EdgeCharacteristic,
    EdgeGame,
    EngineStats,
    GraphGame,
    NodeCharacteristic,
    ZeroNormalizationError,
    build_graph,
    component_efficiency_check,
    delete_edge,
    edge_shapley,
    edge_shapley_pruned,
    fairness_delta,
    lift,
    load_fixture,
    myerson,
    myerson_bridge,
    power_weight_fn,
    remove_node,
    restricted_sum_report,
    route_closed_form,
    shapley_exact,
    supply_weight_fn,
)

from conftest import (
    H_ALLOCATION,
    random_connected_graph,
    random_graph,
    random_table_edge_game,
    random_zero_normalized_game,
)


# ---------------------------------------------------------------------------
# Lift
# ---------------------------------------------------------------------------

def test_lift_identities(h_game):
    g = h_game.graph
    v = lift(h_game)
    assert v(0) == 0
    for i in range(g.n):
        assert v(1 << i) == 0
    assert v(g.full_node_mask) == h_game.characteristic(g.full_edge_mask) == 9
    assert v(g.node_mask({"A", "B", "D"})) == 4


def test_lift_drops_exactly_incident_edges():
    """Removing a player from the grand coalition removes exactly its incident
    edges from the evaluated edge set."""
    rng = np.random.default_rng(21)
    for _ in range(10):
        g = random_graph(rng, int(rng.integers(2, 8)))
        eg = random_table_edge_game(rng, g)
        v = lift(eg)
        full = g.full_node_mask
        for i in range(g.n):
            assert g.induced_edge_mask(full & ~(1 << i)) == (
                g.full_edge_mask & ~g.incident_edge_mask(i)
            )
            assert v(full & ~(1 << i)) == eg.characteristic(
                g.full_edge_mask & ~g.incident_edge_mask(i)
            )


def test_lift_incident_worth_identity_for_additive_worth():
    """For additive worth (w = |F|), a player's last-in marginal equals the
    worth of its incident edges. (Not true for general w: on the squared
    game the H graph gives marginal 8 vs incident worth 4.)"""
    rng = np.random.default_rng(31)
    for _ in range(8):
        g = random_graph(rng, int(rng.integers(2, 8)))
        if not g.edges:
            continue
        eg = EdgeGame(g, power_weight_fn(g, 1))
        v = lift(eg)
        full = g.full_node_mask
        for i in range(g.n):
            incident_worth = eg.characteristic(g.incident_edge_mask(i))
            assert v(full) - v(full & ~(1 << i)) == incident_worth


def test_lift_incident_worth_identity_fails_for_squared_worth(h_game):
    g = h_game.graph
    v = lift(h_game)
    u = g.index("D")
    marginal = v(g.full_node_mask) - v(g.full_node_mask & ~(1 << u))
    incident_worth = h_game.characteristic(g.incident_edge_mask(u))
    assert marginal == 8
    assert incident_worth == 4


def test_edge_game_validation(h_graph):
    other = build_graph(["A", "B"], [("A", "B")])
    with pytest.raises(ValueError):
        EdgeGame(h_graph, power_weight_fn(other, 2))
    bad = EdgeCharacteristic(h_graph.edges, lambda m: 1)
    with pytest.raises(CharacteristicContractError):
        EdgeGame(h_graph, bad)


# ---------------------------------------------------------------------------
# The allocation and its pruned twin
# ---------------------------------------------------------------------------

def test_h_game_allocation(h_game):
    alloc = edge_shapley(h_game)
    assert alloc.values == H_ALLOCATION
    assert alloc.total() == 9


def test_two_node_single_edge_splits_evenly():
    g = build_graph(["L", "R"], [("L", "R")])
    w = EdgeCharacteristic.from_table(g.edges, {0b1: Fraction(7, 2)})
    alloc = edge_shapley(EdgeGame(g, w))
    assert alloc.values == (Fraction(7, 4), Fraction(7, 4))


def test_pruned_equals_full_on_h(h_game):
    assert edge_shapley_pruned(h_game).values == edge_shapley(h_game).values


def test_pruned_equals_full_random_tables():
    rng = np.random.default_rng(22)
    for _ in range(15):
        g = random_graph(rng, 6)
        eg = random_table_edge_game(rng, g)
        assert edge_shapley_pruned(eg).values == edge_shapley(eg).values


def test_pruned_skips_marginals_and_isolated_nodes():
    g = build_graph(["A", "B", "C"], [("A", "B")])
    eg = EdgeGame(g, EdgeCharacteristic.from_table(g.edges, {0b1: 6}))
    full_stats = EngineStats()
    pruned_stats = EngineStats()
    full = edge_shapley(eg, stats=full_stats)
    pruned = edge_shapley_pruned(eg, stats=pruned_stats)
    assert full.values == pruned.values == (3, 3, 0)
    assert full_stats.marginals == 3 * 4
    # A and B each see only {B}/{A} and {B,C}/{A,C}; C sees nothing at all
    assert pruned_stats.marginals == 4
    assert pruned_stats.marginals < full_stats.marginals


def test_isolated_node_gets_zero():
    rng = np.random.default_rng(23)
    g = build_graph(["A", "B", "C", "X"], [("A", "B"), ("B", "C")])
    eg = random_table_edge_game(rng, g)
    alloc = edge_shapley(eg)
    assert alloc["X"] == 0


def test_efficiency_of_edge_shapley():
    rng = np.random.default_rng(24)
    for _ in range(10):
        g = random_graph(rng, int(rng.integers(2, 8)))
        eg = random_table_edge_game(rng, g)
        assert edge_shapley(eg).total() == eg.total_worth


# ---------------------------------------------------------------------------
# Restricted-sum diagnostic
# ---------------------------------------------------------------------------

def test_restricted_sum_disagrees_on_h(h_game):
    report = restricted_sum_report(h_game)
    by_node = {e.node: e for e in report.entries}
    assert by_node["C"].restricted == Fraction(1, 20)
    assert by_node["C"].full == Fraction(3, 2)
    assert not report.all_agree


# ---------------------------------------------------------------------------
# Myerson bridge
# ---------------------------------------------------------------------------

def test_bridge_single_edge_line():
    g = build_graph(["1", "2", "3"], [("1", "2")])
    v = NodeCharacteristic(3, lambda m: 1 if m.bit_count() >= 2 else 0)
    gg = GraphGame(g, v)
    bridged = edge_shapley(myerson_bridge(gg))
    assert bridged.values == (Fraction(1, 2), Fraction(1, 2), 0)
    assert bridged.values == myerson(gg).values


def test_bridge_complete_graph_reduces_to_plain_shapley():
    rng = np.random.default_rng(25)
    labels = ["x", "y", "z"]
    g = build_graph(labels, [("x", "y"), ("x", "z"), ("y", "z")])
    v = random_zero_normalized_game(rng, 3)
    gg = GraphGame(g, v)
    assert edge_shapley(myerson_bridge(gg)).values == shapley_exact(v).values


def test_bridge_matches_myerson_on_random_graphs():
    rng = np.random.default_rng(26)
    for _ in range(10):
        n = int(rng.integers(3, 6))
        g = random_connected_graph(rng, n)
        gg = GraphGame(g, random_zero_normalized_game(rng, n))
        assert edge_shapley(myerson_bridge(gg)).values == myerson(gg).values


def test_bridge_requires_zero_normalized_game():
    g = build_graph(["a", "b"], [("a", "b")])
    v = NodeCharacteristic(2, lambda m: m.bit_count())
    with pytest.raises(ZeroNormalizationError) as exc:
        myerson_bridge(GraphGame(g, v))
    assert "a" in str(exc.value)


# ---------------------------------------------------------------------------
# Edge deletion and fairness
# ---------------------------------------------------------------------------

def test_delete_edge_h_game(h_game):
    smaller = delete_edge(h_game, ("C", "E"))
    assert len(smaller.graph.edges) == 2
    assert lift(smaller)(smaller.graph.full_node_mask) == 4


def test_delete_only_edge_zeroes_everything():
    g = build_graph(["L", "R"], [("L", "R")])
    eg = EdgeGame(g, EdgeCharacteristic.from_table(g.edges, {0b1: 5}))
    emptied = delete_edge(eg, ("L", "R"))
    assert edge_shapley(emptied).values == (0, 0)


def test_delete_edge_restriction_consistency():
    """Lifting after deletion must equal evaluating the old worth on the
    induced edges minus the deleted one, for every coalition."""
    rng = np.random.default_rng(27)
    for _ in range(10):
        g = random_graph(rng, 6, p=0.5)
        if not g.edges:
            continue
        eg = random_table_edge_game(rng, g)
        j = int(rng.integers(0, len(g.edges)))
        e = g.edges[j]
        smaller = delete_edge(eg, e)
        lifted = lift(smaller)
        for mask in range(1 << g.n):
            expect = eg.characteristic(g.induced_edge_mask(mask) & ~(1 << j))
            assert lifted(mask) == expect


def test_delete_incident_edges_matches_node_removal():
    """Cutting every edge into a node is the same economics as removing the
    node from the scenario: survivors keep identical allocations."""
    scenario = load_fixture("chain-suppliers")
    eg = scenario.edge_game()
    cut = delete_edge(eg, ("A", "C"))  # A's only edge
    cut_alloc = edge_shapley(cut)
    removed = remove_node(scenario, "A")
    removed_alloc = edge_shapley(removed.edge_game())
    assert cut_alloc["A"] == 0
    for label in removed.graph.nodes:
        assert cut_alloc[label] == pytest.approx(removed_alloc[label], abs=1e-12)


def test_fairness_on_h(h_game):
    d_a, d_d = fairness_delta(h_game, ("A", "D"))
    assert d_a == d_d


def test_fairness_single_edge_game():
    g = build_graph(["L", "R"], [("L", "R")])
    eg = EdgeGame(g, EdgeCharacteristic.from_table(g.edges, {0b1: 5}))
    assert fairness_delta(eg, ("L", "R")) == (Fraction(5, 2), Fraction(5, 2))


def test_fairness_random_games():
    rng = np.random.default_rng(28)
    done = 0
    while done < 8:
        g = random_graph(rng, 6)
        if not g.edges:
            continue
        eg = random_table_edge_game(rng, g)
        for e in g.edges:
            d_i, d_j = fairness_delta(eg, e)
            assert d_i == d_j
        done += 1


# ---------------------------------------------------------------------------
# Component efficiency
# ---------------------------------------------------------------------------

def test_component_report_flags_h_mismatch(h_game):
    report = component_efficiency_check(h_game)
    by_nodes = {frozenset(c.nodes): c for c in report.components}
    small = by_nodes[frozenset({"C", "E"})]
    assert small.allocation_sum == 3
    assert small.worth == 1
    assert not small.matches
    assert not report.additive_hypothesis


def test_component_report_additive_worth_matches_everywhere():
    rng = np.random.default_rng(29)
    for _ in range(8):
        g = random_graph(rng, 5, p=0.4)
        if not g.edges:
            continue
        eg = EdgeGame(g, power_weight_fn(g, 1))  # additive: worth = |F|
        report = component_efficiency_check(eg)
        assert report.additive_hypothesis
        assert report.all_match


def test_component_report_connected_graph_single_component():
    rng = np.random.default_rng(30)
    g = random_connected_graph(rng, 6)
    eg = random_table_edge_game(rng, g)
    report = component_efficiency_check(eg)
    assert len(report.components) == 1
    assert report.components[0].matches  # equals plain efficiency


# ---------------------------------------------------------------------------
# Supply model sanity via the engine
# ---------------------------------------------------------------------------

def test_supply_game_engine_matches_closed_form_small():
    scenario = load_fixture("chain-suppliers")
    eg = scenario.edge_game()
    engine = edge_shapley(eg)
    closed = route_closed_form(scenario.graph, scenario.routes, CostDecayParams(0.1))
    for label in scenario.graph.nodes:
        assert engine[label] == pytest.approx(closed[label], abs=1e-12)
