"""Multigraph and arc-orientation model shared by the edge-reversal engines.

Nodes are dense integer ids 0..N-1. Every node carries a reversibility rate
(how many arcs it flips toward each neighbor when it operates) and every
unordered pair of nodes carries an edge multiplicity. An orientation assigns
each edge a direction by recording, per ordered pair, how many arcs currently
point at each endpoint.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Iterator, Mapping


class Multigraph:
    """Undirected multigraph with a reversibility rate per node.

    Multiplicities are stored once per unordered pair and exposed
    symmetrically, so e(i, j) and e(j, i) cannot drift apart. Instances are
    treated as immutable values after construction.
    """

    def __init__(
        self,
        reversibility: Iterable[int],
        edges: Iterable[tuple[int, int, int]] = (),
    ):
        self.reversibility = tuple(int(r) for r in reversibility)
        if not self.reversibility:
            raise ValueError("graph needs at least one node")
        for i, r in enumerate(self.reversibility):
            if r < 1:
                raise ValueError(f"reversibility of node {i} must be >= 1, got {r}")
        n = len(self.reversibility)
        self._mult: dict[tuple[int, int], int] = {}
        self._adj: dict[int, list[int]] = {i: [] for i in range(n)}
        for i, j, m in edges:
            self._check_node(i)
            self._check_node(j)
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if m < 0:
                raise ValueError(f"negative multiplicity on pair ({i}, {j})")
            key = (i, j) if i < j else (j, i)
            if key in self._mult:
                raise ValueError(f"duplicate edge entry for pair {key}")
            if m == 0:
                continue
            self._mult[key] = int(m)
            self._adj[i].append(j)
            self._adj[j].append(i)
        for i in self._adj:
            self._adj[i].sort()

    @classmethod
    def pair(cls, r_i: int, r_j: int, e: int | None = None) -> "Multigraph":
        """Two-node multigraph; multiplicity defaults to r_i + r_j - 1."""
        if e is None:
            e = r_i + r_j - 1
        return cls((r_i, r_j), [(0, 1, e)])

    def _check_node(self, i: int) -> None:
        if not 0 <= i < len(self.reversibility):
            raise ValueError(f"node id {i} out of range")

    @property
    def node_count(self) -> int:
        return len(self.reversibility)

    @property
    def nodes(self) -> range:
        return range(len(self.reversibility))

    def multiplicity(self, i: int, j: int) -> int:
        self._check_node(i)
        self._check_node(j)
        if i == j:
            return 0
        key = (i, j) if i < j else (j, i)
        return self._mult.get(key, 0)

    def neighbors(self, i: int) -> tuple[int, ...]:
        self._check_node(i)
        return tuple(self._adj[i])

    def edges(self) -> Iterator[tuple[int, int, int]]:
        """Yield (i, j, multiplicity) with i < j, in sorted order."""
        for (i, j) in sorted(self._mult):
            yield i, j, self._mult[(i, j)]

    @property
    def is_simple(self) -> bool:
        return all(m == 1 for m in self._mult.values())

    def __repr__(self) -> str:
        return (
            f"Multigraph(nodes={self.node_count}, "
            f"edges={list(self.edges())}, r={self.reversibility})"
        )


class Orientation:
    """Arc directions over a multigraph.

    ``toward(i, j)`` is the number of arcs on edge {i, j} currently directed
    at i. For every neighboring pair the two directions add up to the edge
    multiplicity.
    """

    def __init__(self, graph: Multigraph, toward: Mapping[tuple[int, int], int]):
        self.graph = graph
        full: dict[tuple[int, int], int] = {}
        for (i, j), t in toward.items():
            graph._check_node(i)
            graph._check_node(j)
            if graph.multiplicity(i, j) == 0:
                raise ValueError(f"({i}, {j}) is not a neighboring pair")
        for i, j, m in graph.edges():
            a = toward.get((i, j))
            b = toward.get((j, i))
            if a is None and b is None:
                raise ValueError(f"no direction given for edge ({i}, {j})")
            if a is None:
                a = m - b
            elif b is None:
                b = m - a
            if a + b != m or a < 0 or b < 0:
                raise ValueError(
                    f"edge ({i}, {j}): toward counts {a}+{b} != multiplicity {m}"
                )
            full[(i, j)] = a
            full[(j, i)] = b
        self._toward = full

    def toward(self, i: int, j: int) -> int:
        """Arcs on edge {i, j} directed at i."""
        if self.graph.multiplicity(i, j) == 0:
            raise ValueError(f"({i}, {j}) is not a neighboring pair")
        return self._toward[(i, j)]

    def toward_map(self) -> dict[tuple[int, int], int]:
        return dict(self._toward)

    def key(self) -> tuple[int, ...]:
        """Canonical hashable snapshot (toward counts in edge order)."""
        return tuple(self._toward[(i, j)] for i, j, _ in self.graph.edges())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Orientation):
            return NotImplemented
        return self.graph is other.graph and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((id(self.graph), self.key()))

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{i}<-{j}:{self._toward[(i, j)]}" for i, j, _ in self.graph.edges()
        )
        return f"Orientation({parts})"


def edge_bound_violations(g: Multigraph) -> list[tuple[int, int]]:
    """Neighboring pairs whose multiplicity leaves the live band.

    A pair supports deadlock-free pairwise reversal exactly when
    max(r_i, r_j) <= e_ij <= r_i + r_j - 1. Pairs outside that band are
    returned as data, not raised: callers decide whether they are fatal.
    """
    bad = []
    for i, j, m in g.edges():
        ri = g.reversibility[i]
        rj = g.reversibility[j]
        if not max(ri, rj) <= m <= ri + rj - 1:
            bad.append((i, j))
    return bad


def conserved_pair_sum(o: Orientation, g: Multigraph, i: int, j: int) -> int:
    """Sum over both directions of the largest gcd(r_i, r_j) multiple that
    does not exceed the arc count in that direction.

    This quantity is invariant under the pairwise reversal dynamics: every
    flip moves a multiple of gcd(r_i, r_j) from one side to the other. Inside
    the live band it equals r_i + r_j - gcd(r_i, r_j).
    """
    if g.multiplicity(i, j) == 0:
        raise ValueError(f"({i}, {j}) is not a neighboring pair")
    step = gcd(g.reversibility[i], g.reversibility[j])
    return (o.toward(i, j) // step) * step + (o.toward(j, i) // step) * step


def find_sinks(o: Orientation, g: Multigraph) -> set[int]:
    """Nodes with every incident arc inbound (vacuously true if isolated)."""
    return {
        i
        for i in g.nodes
        if all(o.toward(i, j) == g.multiplicity(i, j) for j in g.neighbors(i))
    }


def find_r_sinks(o: Orientation, g: Multigraph) -> set[int]:
    """Nodes with at least r_i arcs inbound from each neighbor."""
    return {
        i
        for i in g.nodes
        if all(o.toward(i, j) >= g.reversibility[i] for j in g.neighbors(i))
    }


def is_acyclic(o: Orientation, g: Multigraph) -> bool:
    """True iff the directed graph induced by the orientation has no cycle.

    Defined for simple graphs only; the cyclic-vs-acyclic distinction drives
    the plain edge-reversal engine and has no meaning once a pair carries
    parallel arcs in both directions.
    """
    if not g.is_simple:
        raise ValueError("acyclicity is only defined for simple graphs")
    indeg = dict.fromkeys(g.nodes, 0)
    out: dict[int, list[int]] = {i: [] for i in g.nodes}
    for i, j, _ in g.edges():
        if o.toward(i, j) == 1:  # arc j -> i
            out[j].append(i)
            indeg[i] += 1
        else:
            out[i].append(j)
            indeg[j] += 1
    queue = [v for v in g.nodes if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return seen == g.node_count


def parse_graph(text: str) -> Multigraph:
    """Parse the plain-text graph format.

    First token is the node count N; the rest are triples ``i j m`` meaning
    m undirected edges between i and j. Reversibilities default to 1 (the
    format serves the plain edge-reversal CLI).
    """
    tokens = text.split()
    if not tokens:
        raise ValueError("empty graph file")
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"graph file is not whitespace-separated integers: {exc}")
    n, rest = values[0], values[1:]
    if n < 1:
        raise ValueError("node count must be positive")
    if len(rest) % 3 != 0:
        raise ValueError("expected 'i j m' triples after the node count")
    edges = [(rest[k], rest[k + 1], rest[k + 2]) for k in range(0, len(rest), 3)]
    return Multigraph([1] * n, edges)


def parse_orientation(text: str, g: Multigraph) -> Orientation:
    """Parse orientation lines ``i j t``: t arcs directed toward i."""
    tokens = text.split()
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise ValueError(f"orientation file is not whitespace-separated integers: {exc}")
    if len(values) % 3 != 0:
        raise ValueError("expected 'i j t' triples")
    toward = {}
    for k in range(0, len(values), 3):
        i, j, t = values[k], values[k + 1], values[k + 2]
        if (i, j) in toward:
            raise ValueError(f"duplicate orientation entry for ({i}, {j})")
        toward[(i, j)] = t
    return Orientation(g, toward)
