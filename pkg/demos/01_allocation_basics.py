"""Allocation basics: exact Shapley values, graph restrictions, edge games.

A guided tour of the three allocation rules on a toy consulting network:
three specialists (a, b, c) where any productive pair needs a working
relationship (an edge) to bill together.
"""

from fractions import Fraction

from edgeshapley import (
    EdgeCharacteristic,
    EdgeGame,
    GraphGame,
    NodeCharacteristic,
    build_graph,
    edge_shapley,
    myerson,
    shapley_exact,
    shapley_sampled,
)

# --- a plain coalition game: worth 1 whenever at least two specialists team up

v = NodeCharacteristic(3, lambda mask: 1 if mask.bit_count() >= 2 else 0)

print("Plain Shapley value (no graph): every pair is feasible")
alloc = shapley_exact(v)
for i, value in enumerate(alloc.values):
    print(f"  player {i}: {value}")
print(f"  total = {alloc.total()}  (the grand coalition is worth 1)")

# --- now restrict cooperation: only 0-1 know each other

g = build_graph(["a", "b", "c"], [("a", "b")])
gg = GraphGame(g, v)

print("\nMyerson value on a-b edge only: c cannot reach anyone")
alloc = myerson(gg)
for label in g.nodes:
    print(f"  {label}: {alloc[label]}")
print("  c is a null player once cooperation follows the graph.")

# --- the same economics, stated on edges instead of nodes

w = EdgeCharacteristic.from_table(g.edges, {0b1: 1})  # the a-b edge earns 1
eg = EdgeGame(g, w)
print("\nEdge game: the a-b relationship itself carries the worth")
alloc = edge_shapley(eg)
for label in g.nodes:
    print(f"  {label}: {alloc[label]}")

# --- sampling agrees with enumeration (and is reproducible by seed)

estimate = shapley_sampled(v, samples=20000, seed=7)
print("\nMonte-Carlo estimate of the plain game (20000 permutations, seed 7):")
for i, value in enumerate(estimate.values):
    print(f"  player {i}: {float(value):.4f}   (exact {Fraction(1,3)})")
print("Re-running with the same seed reproduces these numbers bit for bit.")
