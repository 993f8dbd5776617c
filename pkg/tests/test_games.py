from fractions import Fraction

import numpy as np
import pytest

from edgeshapley import (
    Allocation,
    CapacityError,
    CharacteristicContractError,
    GraphGame,
    NodeCharacteristic,
    axiom_check,
    build_graph,
    myerson,
    shapley_exact,
    shapley_sampled,
    shapley_weights,
)

from conftest import permutation_shapley, random_zero_normalized_game


def unanimity(n, members):
    required = 0
    for i in members:
        required |= 1 << i
    return NodeCharacteristic(n, lambda m: 1 if m & required == required else 0)


def additive(n):
    return NodeCharacteristic(n, lambda m: m.bit_count())


def test_weights_sum_to_one():
    from math import comb

    for n in range(1, 12):
        w = shapley_weights(n)
        assert sum(comb(n - 1, s) * w[s] for s in range(n)) == 1


def test_unanimity_game():
    alloc = shapley_exact(unanimity(3, (0, 1, 2)))
    assert alloc.values == (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))


def test_additive_game():
    alloc = shapley_exact(additive(4))
    assert alloc.values == (1, 1, 1, 1)


def test_matches_permutation_oracle():
    """Frozen-oracle property: subset-weighted accumulation must equal the
    direct average over all n! permutations, exactly."""
    rng = np.random.default_rng(101)
    for _ in range(20):
        n = int(rng.integers(3, 7))
        table = {m: int(rng.integers(-10, 20)) for m in range(1, 1 << n)}
        v = NodeCharacteristic.from_table(n, table)
        assert list(shapley_exact(v).values) == permutation_shapley(v)


def test_efficiency_exact_domain():
    rng = np.random.default_rng(102)
    for _ in range(10):
        n = int(rng.integers(2, 8))
        v = random_zero_normalized_game(rng, n)
        alloc = shapley_exact(v)
        assert alloc.total() == v((1 << n) - 1)


def test_efficiency_approx_domain():
    rng = np.random.default_rng(103)
    n = 9
    table = {m: float(rng.uniform(-3, 9)) for m in range(1, 1 << n)}
    snapshot = dict(table)
    v = NodeCharacteristic(
        n,
        lambda m: snapshot.get(m, 0.0),
        exact=False,
        fn_many=lambda ms: np.array([snapshot.get(int(m), 0.0) for m in ms]),
    )
    alloc = shapley_exact(v)
    grand = v((1 << n) - 1)
    assert abs(alloc.total() - grand) <= 1e-9 * max(1.0, abs(grand))


def test_symmetry_and_null_player():
    # players 0 and 1 interchangeable; player 3 is null
    n = 4
    v = NodeCharacteristic(
        n, lambda m: (m & 0b0011 and 1) + 3 * ((m & 0b0100) >> 2)
    )
    alloc = shapley_exact(v)
    assert alloc[0] == alloc[1]
    assert alloc[3] == 0
    report = axiom_check(v, alloc)
    assert report.all_passed


def test_additivity():
    rng = np.random.default_rng(104)
    n = 5
    a = random_zero_normalized_game(rng, n)
    b = random_zero_normalized_game(rng, n)
    fa = shapley_exact(a)
    fb = shapley_exact(b)
    fab = shapley_exact(a + b)
    assert tuple(x + y for x, y in zip(fa, fb)) == fab.values
    report = axiom_check(a, fa, "additivity", game_pairs=[(a, b)])
    assert report.all_passed


def test_contract_violation():
    v = NodeCharacteristic(3, lambda m: 1)
    with pytest.raises(CharacteristicContractError):
        shapley_exact(v)
    with pytest.raises(CharacteristicContractError):
        shapley_sampled(v, 10, 0)


def test_capacity_guard():
    v = NodeCharacteristic(13, lambda m: 0)
    with pytest.raises(CapacityError):
        shapley_exact(v, limit=12)
    assert shapley_exact(v, limit=13).values == tuple([Fraction(0)] * 13)
    with pytest.raises(CapacityError):
        NodeCharacteristic(64, lambda m: 0)


def test_threads_bit_identical():
    rng = np.random.default_rng(105)
    n = 10
    snapshot = {m: float(rng.uniform(0, 5)) for m in range(1, 1 << n)}
    v = NodeCharacteristic(n, lambda m: snapshot.get(m, 0.0), exact=False)
    one = shapley_exact(v, threads=1)
    four = shapley_exact(v, threads=4)
    assert one.values == four.values


# ---------------------------------------------------------------------------
# Sampled engine
# ---------------------------------------------------------------------------

def test_sampled_additive_is_exact():
    v = additive(4)
    for seed in (0, 7, 12345):
        alloc = shapley_sampled(v, 50, seed)
        assert alloc.values == (1, 1, 1, 1)


def test_sampled_null_player_is_zero():
    n = 4
    v = NodeCharacteristic(n, lambda m: 1 if m & 0b0111 else 0)
    alloc = shapley_sampled(v, 199, 3)
    assert alloc[3] == 0


def test_sampled_deterministic():
    rng = np.random.default_rng(106)
    n = 6
    v = random_zero_normalized_game(rng, n)
    a = shapley_sampled(v, 500, seed=99)
    b = shapley_sampled(v, 500, seed=99)
    assert a.values == b.values
    c = shapley_sampled(v, 500, seed=100)
    assert c.values != a.values  # different seed explores different orders


def test_sampled_rejects_zero_samples():
    with pytest.raises(ValueError):
        shapley_sampled(additive(3), 0, 1)


# ---------------------------------------------------------------------------
# Myerson value
# ---------------------------------------------------------------------------

def test_myerson_single_edge_line():
    """n=3, one edge (1,2), v(S) = 1 iff |S| >= 2. Fresh enumeration of the
    component-decomposed worths over all 8 coalitions pins the oracle."""
    g = build_graph(["1", "2", "3"], [("1", "2")])
    v = NodeCharacteristic(3, lambda m: 1 if m.bit_count() >= 2 else 0)
    # masks: 1={1}, 2={2}, 4={3); only {1,2} stays connected, {3} always apart
    lifted_table = {0b000: 0, 0b001: 0, 0b010: 0, 0b100: 0,
                    0b011: 1, 0b101: 0, 0b110: 0, 0b111: 1}
    lifted = NodeCharacteristic.from_table(3, lifted_table)
    oracle = permutation_shapley(lifted)
    assert oracle == [Fraction(1, 2), Fraction(1, 2), 0]
    assert list(myerson(GraphGame(g, v)).values) == oracle


def test_myerson_complete_graph_equals_shapley():
    rng = np.random.default_rng(107)
    n = 4
    labels = [f"n{i}" for i in range(n)]
    g = build_graph(labels, [(labels[i], labels[j]) for i in range(n) for j in range(i + 1, n)])
    v = random_zero_normalized_game(rng, n)
    assert myerson(GraphGame(g, v)).values == shapley_exact(v).values


def test_myerson_edgeless_graph_pays_singletons():
    n = 3
    g = build_graph(["a", "b", "c"], [])
    worths = {0b001: 5, 0b010: 7, 0b100: 11}
    v = NodeCharacteristic(n, lambda m: sum(w for bit, w in worths.items() if m & bit))
    assert myerson(GraphGame(g, v)).values == (5, 7, 11)


def test_allocation_helpers():
    alloc = Allocation((Fraction(1, 2), Fraction(3, 2)), True, ("a", "b"))
    assert alloc["a"] == Fraction(1, 2)
    assert alloc[1] == Fraction(3, 2)
    assert alloc.total() == 2
    assert alloc.as_dict() == {"a": Fraction(1, 2), "b": Fraction(3, 2)}
    assert alloc.as_floats() == [0.5, 1.5]
    with pytest.raises(ValueError):
        Allocation((1, 2), True, ("only",))
