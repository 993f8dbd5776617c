"""Why per-component efficiency can fail for edge-based allocations.

The bundled "counterexample-H" scenario: five nodes, edges (A,D), (B,D),
(C,E), and a worth function that rewards scale super-linearly, w(F) = |F|^2.
Players profit from edges OUTSIDE their own component, so a component's
members can collectively receive more than the component is worth.
"""

from edgeshapley import (
    component_efficiency_check,
    edge_shapley,
    load_fixture,
    restricted_sum_report,
)

scenario = load_fixture("counterexample-H")
game = scenario.edge_game()

alloc = edge_shapley(game)
print("Edge-based allocation of the squared-edge-count game:")
for label in scenario.graph.nodes:
    print(f"  {label}: {alloc[label]}")
print(f"  total = {alloc.total()} = worth of all three edges (3^2)")

print("\nPer-component audit:")
report = component_efficiency_check(game)
for entry in report.components:
    flag = "matches" if entry.matches else "MISMATCH"
    print(
        f"  {{{', '.join(entry.nodes)}}}: allocation sum {entry.allocation_sum}"
        f" vs component worth {entry.worth} -> {flag}"
    )
print(
    "  additivity hypothesis held on separated pairs:"
    f" {report.additive_hypothesis} (witness: {report.hypothesis_witness})"
)
print(
    "\nC and E jointly collect 3 although their component is worth 1: the"
    "\nsquared worth lets the small component free-ride on the big one."
)

print("\nNeighborhood-restricted shortcut (diagnostic only):")
diag = restricted_sum_report(game)
for entry in diag.entries:
    print(
        f"  {entry.node}: restricted {entry.restricted} vs full {entry.full}"
        f" -> {'agree' if entry.agrees else 'disagree'}"
    )
print(
    "Summing only over subsets of each node's neighborhood is tempting but"
    "\nwrong; the pruned engine instead skips provably-zero marginals and"
    "\nreturns the exact value."
)
