"""Synchronous edge reversal on simple graphs.

Starting from an acyclic orientation, every sink (all arcs inbound) operates
and then flips all of its arcs outward. The orientation space is finite, so
iterating the step function always re-enters a cycle; the run report carries
the transient length, the period, and how often each node operated inside
one period.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .harness import SimulationTimeout
from .multigraph import Multigraph, Orientation, find_sinks, is_acyclic


@dataclass(frozen=True)
class SerRun:
    """Result of iterating the sink-reversal step to its first repeat.

    orientations[prefix_len + period] equals orientations[prefix_len];
    ops_per_node counts fires inside the window [prefix_len, prefix_len+period).
    """

    orientations: tuple[Orientation, ...]
    prefix_len: int
    period: int
    ops_per_node: dict[int, int]


def ser_step(o: Orientation, g: Multigraph) -> Orientation:
    """Fire every sink simultaneously, reversing all of their arcs."""
    if not g.is_simple:
        raise ValueError("plain edge reversal runs on simple graphs only")
    if not is_acyclic(o, g):
        raise ValueError("edge reversal is undefined on a cyclic orientation")
    sinks = find_sinks(o, g)
    toward = o.toward_map()
    for s in sinks:
        for j in g.neighbors(s):
            toward[(s, j)] = 0
            toward[(j, s)] = 1
    return Orientation(g, toward)


def ser_run(o0: Orientation, g: Multigraph, max_steps: int | None = None) -> SerRun:
    """Iterate ser_step until an orientation repeats.

    Returns the visited orientations (including the repeat), the transient
    length, the period, and per-node operation counts measured over exactly
    one period.
    """
    seen = {o0.key(): 0}
    orientations = [o0]
    o = o0
    step = 0
    while True:
        step += 1
        if max_steps is not None and step > max_steps:
            raise SimulationTimeout(f"no repeat within {max_steps} steps")
        o = ser_step(o, g)
        orientations.append(o)
        k = o.key()
        if k in seen:
            prefix = seen[k]
            period = step - prefix
            break
        seen[k] = step
    fires: Counter[int] = Counter()
    for t in range(prefix, prefix + period):
        for s in find_sinks(orientations[t], g):
            fires[s] += 1
    ops = {i: fires.get(i, 0) for i in g.nodes}
    return SerRun(tuple(orientations), prefix, period, ops)
