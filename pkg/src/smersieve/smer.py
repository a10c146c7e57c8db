"""Multiple edge reversal: rate-based token dynamics on multigraphs.

Two engines live here. The general engine fires every r-sink of a multigraph
orientation at once (a node is an r-sink when each neighbor points at least
r_i arcs at it, and firing returns r_i arcs to every neighbor). The pairwise
walk is the special case the sieve protocol is built from: a single pair of
nodes whose multiplicity sits at the top of the live band, e = r1 + r2 - 1,
where exactly one endpoint can fire at any moment.

The pairwise walk is pure modular arithmetic. Writing m = r_self + r_peer,
every step moves the inbound count by -r_self mod m (a fire subtracts
r_self, an absorbed fire adds r_peer = m - r_self). The count therefore
walks the coset a0 + <g> of the subgroup generated by g = gcd(r_self,
r_peer) in Z_m, returning to a0 after exactly m/g steps and touching zero on
the way iff g divides a0. Starting one endpoint at a0 = r_self - 1, which is
-1 mod g, turns "zero was visited" into "the two rates are coprime". That
equivalence is what lets a sieve run on nothing but counters and compares.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Literal

from .harness import SimulationTimeout
from .multigraph import (
    Multigraph,
    Orientation,
    edge_bound_violations,
    find_r_sinks,
)

Branch = Literal["sender", "detector"]


def period_formula(r_i: int, r_j: int) -> int:
    """Closed form for the pairwise orientation period: (r_i+r_j)/gcd."""
    if r_i < 1 or r_j < 1:
        raise ValueError("reversibilities must be positive")
    return (r_i + r_j) // gcd(r_i, r_j)


@dataclass
class PairWalk:
    """One endpoint's view of the two-node reversal walk.

    ``incoming`` counts arcs currently pointing at this endpoint. A step
    either fires (incoming >= r_self; r_self arcs flip away) or absorbs the
    peer's fire (incoming += r_peer). ``zero_visited`` latches when the count
    touches zero, the coprimality signal on the detector side. ``done``
    latches when the count returns to its start value after at least one
    step, which happens at exactly period_formula(r_self, r_peer) steps.
    """

    r_self: int
    r_peer: int
    a0: int
    incoming: int
    steps: int = 0
    zero_visited: bool = False
    done: bool = False

    @classmethod
    def start(cls, r_self: int, r_peer: int, branch: Branch = "detector") -> "PairWalk":
        """Initial walk state.

        The sender branch starts ready to fire (a0 = r_self); the detector
        branch starts one arc short (a0 = r_self - 1), which is what makes
        its zero flag equivalent to coprimality of the two rates.
        """
        if r_self < 1 or r_peer < 1:
            raise ValueError("reversibilities must be positive")
        if branch == "sender":
            a0 = r_self
        elif branch == "detector":
            a0 = r_self - 1
        else:
            raise ValueError(f"unknown branch {branch!r}")
        walk = cls(r_self=r_self, r_peer=r_peer, a0=a0, incoming=a0)
        walk.zero_visited = a0 == 0
        return walk

    @property
    def e(self) -> int:
        """Total arcs of the pair, the top of the live band."""
        return self.r_self + self.r_peer - 1

    @property
    def wants_send(self) -> bool:
        return not self.done and self.incoming >= self.r_self

    def fire(self) -> int:
        """Flip r_self arcs toward the peer; returns the message payload."""
        if self.done or self.incoming < self.r_self:
            raise ValueError("endpoint cannot fire in this state")
        self.incoming -= self.r_self
        self._tick()
        return self.r_self

    def absorb(self, value: int | None = None) -> None:
        """Account the peer's fire: its r_peer arcs now point here."""
        if value is None:
            value = self.r_peer
        if value != self.r_peer:
            raise ValueError(
                f"got {value} arcs but the peer's declared rate is {self.r_peer}"
            )
        if self.done or self.incoming >= self.r_self:
            raise ValueError("endpoint is not in a receiving state")
        self.incoming += value
        self._tick()

    def _tick(self) -> None:
        self.steps += 1
        if self.incoming == 0:
            self.zero_visited = True
        if self.incoming == self.a0:
            self.done = True


def pair_walk_run(r_self: int, r_peer: int, branch: Branch = "detector") -> PairWalk:
    """Drive a pairwise walk to completion and return its final state."""
    walk = PairWalk.start(r_self, r_peer, branch)
    while not walk.done:
        if walk.wants_send:
            walk.fire()
        else:
            walk.absorb()
    return walk


def pair_walk_states(
    r_self: int, r_peer: int, branch: Branch = "detector"
) -> list[int]:
    """The inbound-count trajectory over one full period, endpoints included."""
    walk = PairWalk.start(r_self, r_peer, branch)
    states = [walk.incoming]
    while not walk.done:
        if walk.wants_send:
            walk.fire()
        else:
            walk.absorb()
        states.append(walk.incoming)
    return states


def coprime_by_walk(r_a: int, r_b: int) -> bool:
    """Decide coprimality purely by running the detector-side walk.

    No gcd is computed on this path: the walk visits zero within one period
    exactly when the rates are coprime.
    """
    hi, lo = (r_a, r_b) if r_a >= r_b else (r_b, r_a)
    return pair_walk_run(hi, lo, "detector").zero_visited


@dataclass(frozen=True)
class SmerRun:
    """First-repeat report for the general multigraph engine."""

    orientations: tuple[Orientation, ...]
    prefix_len: int
    period: int
    fires_per_node: dict[int, int]


def smer_step(o: Orientation, g: Multigraph) -> Orientation:
    """Fire every current r-sink: each returns r_i arcs to all neighbors."""
    bad = edge_bound_violations(g)
    if bad:
        raise ValueError(f"multiplicities outside the live band: {bad}")
    fired = find_r_sinks(o, g)
    toward = o.toward_map()
    for i in fired:
        ri = g.reversibility[i]
        for j in g.neighbors(i):
            # neighbors cannot both be r-sinks inside the live band
            assert j not in fired or j == i, f"adjacent r-sinks {i}, {j}"
            assert toward[(i, j)] >= ri, "fire would drive an arc count negative"
            toward[(i, j)] -= ri
            toward[(j, i)] += ri
    return Orientation(g, toward)


def smer_run(
    o0: Orientation, g: Multigraph, max_steps: int | None = 1_000_000
) -> SmerRun:
    """Iterate smer_step to the first repeated orientation."""
    bad = edge_bound_violations(g)
    if bad:
        raise ValueError(f"multiplicities outside the live band: {bad}")
    seen = {o0.key(): 0}
    orientations = [o0]
    o = o0
    step = 0
    while True:
        step += 1
        if max_steps is not None and step > max_steps:
            raise SimulationTimeout(f"no repeat within {max_steps} steps")
        o = smer_step(o, g)
        orientations.append(o)
        k = o.key()
        if k in seen:
            prefix = seen[k]
            period = step - prefix
            break
        seen[k] = step
    fires: Counter[int] = Counter()
    for t in range(prefix, prefix + period):
        for s in find_r_sinks(orientations[t], g):
            fires[s] += 1
    per_node = {i: fires.get(i, 0) for i in g.nodes}
    return SmerRun(tuple(orientations), prefix, period, per_node)
