"""Supply-chain attribution with cost-decayed route values.

Three bundled five-node scenarios share the same supply volumes but differ
in topology and edge costs. Route value = quantity * exp(-alpha * cost),
alpha = 0.1; a route counts toward every edge set containing all its edges,
which makes the lifted game a sum of unanimity games and unlocks a closed
form: each node receives value/|route| from every route it sits on.
"""

from edgeshapley import (
    CostDecayParams,
    edge_shapley,
    load_fixture,
    route_closed_form,
    route_values,
)

for name, story in [
    ("chain-suppliers", "two interchangeable suppliers feed one chain"),
    ("chain-modules", "one source ships through two interchangeable modules"),
    ("chain-suppliers-costly", "supplier A's inbound edge costs 4x the others"),
]:
    scenario = load_fixture(name)
    params = CostDecayParams(scenario.model.alpha)

    print(f"\n=== {name}: {story}")
    for rv in route_values(scenario.graph, scenario.routes, params):
        nodes = ",".join(sorted(rv.route.nodes))
        print(
            f"  route {{{nodes}}} qty {rv.route.quantity:g}"
            f" cost {rv.cost:g} -> value {rv.decayed_value:.3f}"
        )

    closed = route_closed_form(scenario.graph, scenario.routes, params)
    engine = edge_shapley(scenario.edge_game())
    print("  node   closed-form   full-enumeration")
    for label in scenario.graph.nodes:
        print(f"  {label:<5}  {closed[label]:>11.4f}   {engine[label]:>11.4f}")

print(
    "\nTakeaways: redundant suppliers (A, B in chain-suppliers) earn less than"
    "\nthe chokepoints C, D, E; raising one edge cost (last case) shifts value"
    "\naway from the supplier stuck behind it, even though the roles are alike."
)
