"""Coalition games and the allocation engines.

A coalition is an int bit mask over canonical player indices (see
:mod:`edgeshapley.masks`). A characteristic function evaluates coalitions in
exactly one value domain:

* exact -- arbitrary-precision rationals (`fractions.Fraction`, plain ints);
* approx -- binary64 floats.

The two domains never mix inside one computation. Exact games run through
pure-Python enumeration; approx games run through a vectorized numpy path
when the characteristic supports batch evaluation.

Determinism contract: subsets are enumerated in ascending mask order, float
reductions always happen over arrays assembled in that order, and chunked
evaluation uses a fixed chunk size, so results are bit-identical for any
thread count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import CapacityError, CharacteristicContractError
from .graph import Graph
from .masks import all_masks, popcount_array

Coalition = int
Value = Union[Fraction, int, float]

#: Hard bound imposed by the bit-mask coalition encoding.
MAX_PLAYERS = 63

#: Full 2^n enumeration is refused above this many players unless the caller
#: explicitly raises the limit.
DEFAULT_ENUMERATION_LIMIT = 24

# Fixed evaluation chunk; must not depend on the thread count or results
# would not be bit-identical across worker configurations.
_CHUNK = 1 << 14


class NodeCharacteristic:
    """A total function from coalitions (bit masks) to worth.

    ``fn`` must be deterministic and effect-free with ``fn(0) == 0``. Approx
    characteristics may supply ``fn_many`` (int64 mask array -> float64 array)
    to unlock the vectorized engine path.
    """

    __slots__ = ("n", "exact", "_fn", "_fn_many")

    def __init__(
        self,
        n: int,
        fn: Callable[[Coalition], Value],
        *,
        exact: bool = True,
        fn_many: Callable[[np.ndarray], np.ndarray] | None = None,
    ):
        if n < 1:
            raise ValueError("a game needs at least one player")
        if n > MAX_PLAYERS:
            raise CapacityError(f"at most {MAX_PLAYERS} players supported, got {n}")
        self.n = n
        self.exact = exact
        self._fn = fn
        self._fn_many = fn_many if not exact else None

    def __call__(self, coalition: Coalition) -> Value:
        return self._fn(coalition)

    @property
    def has_vector_path(self) -> bool:
        return self._fn_many is not None

    def evaluate_many(self, masks: np.ndarray) -> np.ndarray:
        if self._fn_many is not None:
            return self._fn_many(masks)
        return np.array([self._fn(int(m)) for m in masks], dtype=np.float64)

    @classmethod
    def from_table(
        cls,
        n: int,
        table: dict[Coalition, Value],
        *,
        exact: bool = True,
        default: Value = 0,
    ) -> "NodeCharacteristic":
        """Characteristic backed by an explicit coalition->worth table.

        Coalitions missing from the table are worth ``default``.
        """
        snapshot = dict(table)
        return cls(n, lambda m: snapshot.get(m, default), exact=exact)

    def __add__(self, other: "NodeCharacteristic") -> "NodeCharacteristic":
        if not isinstance(other, NodeCharacteristic):
            return NotImplemented
        if self.n != other.n or self.exact != other.exact:
            raise ValueError("can only add games with equal player count and domain")
        a, b = self._fn, other._fn
        fn_many = None
        if self._fn_many is not None and other._fn_many is not None:
            am, bm = self._fn_many, other._fn_many
            fn_many = lambda masks: am(masks) + bm(masks)
        return NodeCharacteristic(
            self.n, lambda m: a(m) + b(m), exact=self.exact, fn_many=fn_many
        )


@dataclass(frozen=True)
class GraphGame:
    """A node-coalition game played on a graph."""

    graph: Graph
    v: NodeCharacteristic

    def __post_init__(self):
        if self.v.n != self.graph.n:
            raise ValueError(
                f"characteristic has {self.v.n} players but graph has {self.graph.n} nodes"
            )


@dataclass(frozen=True)
class Allocation:
    """Per-player value vector in canonical player order."""

    values: tuple[Value, ...]
    exact: bool
    nodes: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.nodes is not None and len(self.nodes) != len(self.values):
            raise ValueError("label count does not match value count")

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, key: int | str) -> Value:
        if isinstance(key, str):
            if self.nodes is None:
                raise KeyError("allocation carries no node labels")
            return self.values[self.nodes.index(key)]
        return self.values[key]

    def with_labels(self, nodes: Sequence[str]) -> "Allocation":
        return Allocation(self.values, self.exact, tuple(nodes))

    def total(self) -> Value:
        return sum(self.values)

    def as_floats(self) -> list[float]:
        return [float(x) for x in self.values]

    def as_dict(self) -> dict[str, Value]:
        if self.nodes is None:
            raise KeyError("allocation carries no node labels")
        return dict(zip(self.nodes, self.values))


@dataclass
class EngineStats:
    """Work counters an engine fills in when handed to it."""

    marginals: int = 0
    evaluations: int = 0


def shapley_weights(n: int) -> tuple[Fraction, ...]:
    """Coalition-size weights s!(n-s-1)!/n! for s = 0..n-1, as exact rationals."""
    fact = [math.factorial(k) for k in range(n + 1)]
    return tuple(Fraction(fact[s] * fact[n - s - 1], fact[n]) for s in range(n))


def _check_capacity(v: NodeCharacteristic, limit: int | None):
    n = v.n
    bound = MAX_PLAYERS if limit is None else min(limit, MAX_PLAYERS)
    if n > bound:
        raise CapacityError(
            f"{n} players exceeds the enumeration limit {bound}; "
            "pass a larger limit to override"
        )


def _check_grounded(v: NodeCharacteristic):
    worth = v(0)
    if worth != 0:
        raise CharacteristicContractError(
            f"characteristic must satisfy v(empty) = 0, got {worth!r}"
        )


def _chunk_ranges(size: int) -> list[range]:
    return [range(lo, min(lo + _CHUNK, size)) for lo in range(0, size, _CHUNK)]


def _exact_table(v: NodeCharacteristic, threads: int) -> list[Value]:
    size = 1 << v.n
    if threads > 1 and size > _CHUNK:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda r: [v(m) for m in r], _chunk_ranges(size)))
        return [x for part in parts for x in part]
    return [v(m) for m in range(size)]


def _approx_table(v: NodeCharacteristic, threads: int) -> np.ndarray:
    size = 1 << v.n
    masks = all_masks(v.n)
    if threads > 1 and size > _CHUNK:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(
                ex.map(lambda r: v.evaluate_many(masks[r.start : r.stop]), _chunk_ranges(size))
            )
        return np.concatenate(parts)
    return v.evaluate_many(masks)


def _exact_allocation(table: list[Value], n: int) -> list[Fraction]:
    weights = shapley_weights(n)
    out = []
    for i in range(n):
        bit = 1 << i
        by_size = [0] * n
        for m in range(1 << n):
            if m & bit:
                continue
            by_size[m.bit_count()] += table[m | bit] - table[m]
        out.append(sum((w * s for w, s in zip(weights, by_size)), Fraction(0)))
    return out


def _approx_allocation(
    table: np.ndarray, n: int, member_masks: Sequence[int] | None, stats: EngineStats | None
) -> list[float]:
    weights = np.array([float(w) for w in shapley_weights(n)])
    masks = all_masks(n)
    sizes = popcount_array(masks)
    out = []
    for i in range(n):
        bit = np.int64(1 << i)
        sel = (masks & bit) == 0
        if member_masks is not None:
            required = np.int64(member_masks[i])
            sel &= (masks & required) != 0
        m = masks[sel]
        if stats is not None:
            stats.marginals += int(m.size)
        if m.size == 0:
            out.append(0.0)
            continue
        contrib = weights[sizes[sel]] * (table[m | bit] - table[m])
        out.append(float(contrib.sum()))
    return out


def shapley_exact(
    v: NodeCharacteristic,
    *,
    limit: int | None = DEFAULT_ENUMERATION_LIMIT,
    threads: int = 1,
    stats: EngineStats | None = None,
) -> Allocation:
    """Shapley value by full subset enumeration.

    Each player receives the sum over coalitions S avoiding them of
    ``weight(|S|) * (v(S + {i}) - v(S))``, with size weights formed as exact
    rationals. Exact games return `Fraction` values whose total equals v(N)
    exactly; approx games return floats with the weights converted to binary64
    only after the rational is formed.
    """
    _check_capacity(v, limit)
    _check_grounded(v)
    n = v.n
    if stats is not None:
        stats.evaluations += 1 << n
        stats.marginals += n << (n - 1)
    if v.exact:
        table = _exact_table(v, threads)
        return Allocation(tuple(_exact_allocation(table, n)), True)
    table = _approx_table(v, threads)
    return Allocation(tuple(_approx_allocation(table, n, None, None)), False)


def shapley_restricted(
    v: NodeCharacteristic,
    member_masks: Sequence[int],
    *,
    limit: int | None = DEFAULT_ENUMERATION_LIMIT,
    threads: int = 1,
    stats: EngineStats | None = None,
) -> Allocation:
    """Shapley value skipping coalitions known to yield zero marginals.

    ``member_masks[i]`` is a player mask; coalitions disjoint from it are
    skipped for player i (their marginal must provably be zero, which is the
    caller's responsibility -- see the neighborhood pruning in
    :mod:`edgeshapley.edgegame`). A player with an empty mask is allocated 0
    without a single evaluation.
    """
    _check_capacity(v, limit)
    _check_grounded(v)
    n = v.n
    if len(member_masks) != n:
        raise ValueError("need one member mask per player")
    if not v.exact:
        if stats is not None:
            stats.evaluations += 1 << n
        table = _approx_table(v, threads)
        return Allocation(tuple(_approx_allocation(table, n, member_masks, stats)), False)

    # Lazy memoized evaluation: only coalitions taking part in a surviving
    # marginal are ever evaluated.
    memo: dict[int, Value] = {0: 0}
    misses = 0

    def val(m: int) -> Value:
        nonlocal misses
        try:
            return memo[m]
        except KeyError:
            x = v(m)
            memo[m] = x
            misses += 1
            return x

    weights = shapley_weights(n)
    out = []
    for i in range(n):
        bit = 1 << i
        required = member_masks[i]
        if required == 0:
            out.append(Fraction(0))
            continue
        by_size = [0] * n
        count = 0
        for m in range(1 << n):
            if m & bit or not (m & required):
                continue
            by_size[m.bit_count()] += val(m | bit) - val(m)
            count += 1
        if stats is not None:
            stats.marginals += count
        out.append(sum((w * s for w, s in zip(weights, by_size)), Fraction(0)))
    if stats is not None:
        stats.evaluations += misses
    return Allocation(tuple(out), True)


_SAMPLE_BLOCK = 4096


def shapley_sampled(
    v: NodeCharacteristic,
    samples: int,
    seed: int,
) -> Allocation:
    """Monte-Carlo Shapley estimate: average marginal contribution over
    ``samples`` uniformly drawn player permutations.

    The generator is seeded, so identical (seed, samples, game) inputs give
    bit-identical output on every run.
    """
    if samples < 1:
        raise ValueError(f"samples must be >= 1, got {samples}")
    _check_grounded(v)
    n = v.n
    rng = np.random.default_rng(seed)

    if v.has_vector_path:
        acc = np.zeros(n, dtype=np.float64)
        remaining = samples
        base = np.tile(np.arange(n), (_SAMPLE_BLOCK, 1))
        while remaining > 0:
            k = min(remaining, _SAMPLE_BLOCK)
            perms = rng.permuted(base[:k], axis=1)
            bits = (np.int64(1) << perms.astype(np.int64))
            prefixes = np.bitwise_or.accumulate(bits, axis=1)
            vals = v.evaluate_many(prefixes.ravel()).reshape(k, n)
            marginals = np.diff(vals, axis=1, prepend=0.0)
            np.add.at(acc, perms.ravel(), marginals.ravel())
            remaining -= k
        return Allocation(tuple(float(x) for x in acc / samples), False)

    totals: list[Value] = [0] * n
    for _ in range(samples):
        perm = rng.permutation(n)
        mask = 0
        prev: Value = 0
        for idx in perm:
            i = int(idx)
            mask |= 1 << i
            cur = v(mask)
            totals[i] += cur - prev
            prev = cur
    if v.exact:
        values = tuple(Fraction(t) / samples for t in totals)
    else:
        values = tuple(t / samples for t in totals)
    return Allocation(values, v.exact)


def component_value_characteristic(gg: GraphGame) -> NodeCharacteristic:
    """Lift v to the component-decomposed game: a coalition's worth is the sum
    of v over the connected components of the subgraph it induces (isolated
    members count as singletons)."""
    g, v = gg.graph, gg.v

    def fn(mask: Coalition) -> Value:
        return sum((v(c) for c in g.component_masks(within=mask)), 0)

    return NodeCharacteristic(g.n, fn, exact=v.exact)


def myerson(
    gg: GraphGame,
    *,
    limit: int | None = DEFAULT_ENUMERATION_LIMIT,
    threads: int = 1,
) -> Allocation:
    """Myerson value: Shapley value of the component-decomposed game."""
    alloc = shapley_exact(component_value_characteristic(gg), limit=limit, threads=threads)
    return alloc.with_labels(gg.graph.nodes)


# ---------------------------------------------------------------------------
# Axiom checking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[CheckResult, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __iter__(self):
        return iter(self.checks)


#: Pair detection scans every coalition up to this player count, and falls
#: back to a seeded random spot check above it.
EXHAUSTIVE_DETECTION_LIMIT = 12
_SPOT_CHECKS = 4096
_SPOT_SEED = 20210


def _detection_masks(n: int, excluded: int) -> Iterable[int]:
    """Coalitions to test against, avoiding the ``excluded`` players.

    The sampled fallback always includes the empty set, the full complement,
    and every one-short complement: players whose influence only shows in
    near-full coalitions (a route spanning all nodes, say) are invisible to
    uniform random draws.
    """
    full = (1 << n) - 1
    if n <= EXHAUSTIVE_DETECTION_LIMIT:
        return (m for m in range(1 << n) if not (m & excluded))
    rng = np.random.default_rng(_SPOT_SEED)
    complement = full & ~excluded
    structured = [0, complement] + [
        complement & ~(1 << i) for i in range(n) if (complement >> i) & 1
    ]
    draws = rng.integers(0, 1 << n, size=_SPOT_CHECKS, dtype=np.uint64)
    return (m for m in structured + [int(d) & complement for d in draws])


def interchangeable_pairs(v: NodeCharacteristic) -> list[tuple[int, int]]:
    """Player pairs with equal marginals against every tested coalition.

    Exhaustive for small games, seeded spot check for large ones.
    """
    pairs = []
    for i in range(v.n):
        for j in range(i + 1, v.n):
            excluded = (1 << i) | (1 << j)
            if all(v(m | (1 << i)) == v(m | (1 << j)) for m in _detection_masks(v.n, excluded)):
                pairs.append((i, j))
    return pairs


def null_players(v: NodeCharacteristic) -> list[int]:
    """Players whose tested marginal contributions are all zero."""
    out = []
    for i in range(v.n):
        bit = 1 << i
        if all(v(m | bit) == v(m) for m in _detection_masks(v.n, bit)):
            out.append(i)
    return out


def values_close(a: Value, b: Value, exact: bool, tol: float = 1e-9) -> bool:
    """Domain-aware comparison: identity for exact values, relative tolerance
    (floored at absolute ``tol``) for floats."""
    if exact:
        return a == b
    scale = max(abs(float(a)), abs(float(b)), 1.0)
    return abs(float(a) - float(b)) <= tol * scale


def axiom_check(
    v: NodeCharacteristic,
    allocation: Allocation,
    which: str | Iterable[str] = "all",
    *,
    game_pairs: Sequence[tuple[NodeCharacteristic, NodeCharacteristic]] = (),
    limit: int | None = DEFAULT_ENUMERATION_LIMIT,
    tol: float = 1e-9,
) -> AxiomReport:
    """Report-only verification of the classic allocation axioms.

    * efficiency: the allocation sums to v(N);
    * symmetry: every detected interchangeable pair gets equal values;
    * null-player: every detected null player gets 0;
    * additivity: for each supplied game pair (a, b), the rule applied to
      a + b equals the sum of the separate allocations.
    """
    if len(allocation) != v.n:
        raise ValueError("allocation length does not match the player count")
    names = ("efficiency", "symmetry", "null-player", "additivity")
    if which == "all":
        selected = [x for x in names if x != "additivity" or game_pairs]
    elif isinstance(which, str):
        selected = [which]
    else:
        selected = list(which)
    unknown = set(selected) - set(names)
    if unknown:
        raise ValueError(f"unknown axiom check(s): {sorted(unknown)}")

    checks: list[CheckResult] = []
    for name in selected:
        if name == "efficiency":
            total = allocation.total()
            grand = v((1 << v.n) - 1)
            ok = values_close(total, grand, allocation.exact, tol)
            checks.append(
                CheckResult("efficiency", ok, f"sum {total} vs v(N) {grand}")
            )
        elif name == "symmetry":
            pairs = interchangeable_pairs(v)
            bad = [
                (i, j)
                for i, j in pairs
                if not values_close(allocation[i], allocation[j], allocation.exact, tol)
            ]
            detail = f"{len(pairs)} interchangeable pair(s)"
            if bad:
                i, j = bad[0]
                detail += f"; mismatch at ({i}, {j}): {allocation[i]} vs {allocation[j]}"
            checks.append(CheckResult("symmetry", not bad, detail))
        elif name == "null-player":
            nulls = null_players(v)
            bad = [i for i in nulls if allocation[i] != 0]
            detail = f"null players {nulls}"
            if bad:
                detail += f"; nonzero value {allocation[bad[0]]} at player {bad[0]}"
            checks.append(CheckResult("null-player", not bad, detail))
        elif name == "additivity":
            if not game_pairs:
                raise ValueError("additivity check needs game_pairs")
            ok = True
            detail = f"{len(game_pairs)} game pair(s)"
            for a, b in game_pairs:
                fa = shapley_exact(a, limit=limit)
                fb = shapley_exact(b, limit=limit)
                fab = shapley_exact(a + b, limit=limit)
                for i in range(v.n):
                    if not values_close(fa[i] + fb[i], fab[i], fab.exact, tol):
                        ok = False
                        detail += f"; broke at player {i}"
                        break
                if not ok:
                    break
            checks.append(CheckResult("additivity", ok, detail))
    return AxiomReport(tuple(checks))
