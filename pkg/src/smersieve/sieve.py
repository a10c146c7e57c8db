"""Distributed wheel sieve driven by pairwise reversal walks.

The run alternates two kinds of phases until the next sieving prime squared
exceeds the target n:

* extend phases pair every current candidate y with multiples x*P of the
  wheel span P (one fresh two-node pair per combination, values capped at
  n). The measured walk period is x*P + y, so each pair literally counts
  out the next wheel element.
* sieve phases build a star around the next prime p: each spoke runs an
  independent pairwise walk between its candidate value and p, and the
  detector side's zero flag says whether the pair is coprime. Candidates
  whose flag stays false (multiples of p, and p itself) drop out; p is
  promoted to the prime list.

Once sieving stops, any remaining coverage gap up to n is closed by one
last extend phase; at that point every surviving candidate above 1 is prime.

Two interchangeable engines execute a phase. The ``harness`` engine builds
real nodes and exchanges envelopes round by round. The ``formula`` engine
evaluates each walk in closed form (period, zero flag, per-endpoint send
counts). They are required to produce identical results and statistics; the
formula engine exists because a full message-level run of n = 100000 costs
billions of rounds-times-pairs steps while the closed form is instant.

Statistics track the longest single walk T(n), which by construction never
exceeds n + isqrt(n): extend pairs measure values capped at n, and sieve
pairs pair a candidate <= n with a prime <= isqrt(n). The message ceiling
(n + isqrt(n)) * delta is tracked against the busiest single process, whose
send count per phase is bounded by its neighbor count times the longest
walk.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Literal, Sequence

import numpy as np

from .harness import (
    Envelope,
    ProtocolError,
    RoundCounters,
    SimulationTimeout,
    TraceEvent,
    run_rounds,
)
from .smer import PairWalk
from .wheel import residues

Engine = Literal["formula", "harness"]

ROLE_RESIDUE = "residue"
ROLE_MULTIPLE = "multiple"
ROLE_PRIME = "sieving-prime"
ROLE_CANDIDATE = "candidate"

MAX_ROUNDS_FACTOR = 4


@dataclass(frozen=True)
class PhasePlan:
    """One phase of the protocol as plain data.

    Extend plans pair (y, x*primorial); sieve plans pair (candidate, p_next).
    """

    kind: Literal["extend", "sieve"]
    pairs: tuple[tuple[int, int], ...]
    p_next: int | None
    primorial: int
    limit: int


@dataclass
class SieveStats:
    """Counters accumulated over a whole run.

    max_pair_steps is T(n), the longest single pairwise walk. messages
    tracks both the total number of sends and the peak charged to any one
    process; the (n + isqrt(n)) * delta ceiling governs the peak (each
    process sends at most its neighbor count times the longest walk), while
    totals grow with the number of phases.
    """

    n: int
    max_pair_steps: int = 0
    total_rounds: int = 0
    total_messages: int = 0
    peak_node_messages: int = 0
    delta: int = 0

    @property
    def step_bound(self) -> int:
        return self.n + isqrt(self.n)

    @property
    def phi(self) -> int:
        """Gap between the worst-case step bound and the measured T(n)."""
        return self.step_bound - self.max_pair_steps

    @property
    def msg_bound(self) -> int:
        return self.step_bound * self.delta


@dataclass
class PhaseTally:
    rounds: int = 0
    messages: int = 0
    peak_node: int = 0
    max_steps: int = 0
    delta: int = 0

    def fold_into(self, stats: SieveStats) -> None:
        stats.total_rounds += self.rounds
        stats.total_messages += self.messages
        stats.peak_node_messages = max(stats.peak_node_messages, self.peak_node)
        stats.max_pair_steps = max(stats.max_pair_steps, self.max_steps)
        stats.delta = max(stats.delta, self.delta)


class SieveNode:
    """One protocol participant: an integer value acting as its rate.

    The node keeps an independent pairwise walk per peer. Its value never
    changes during a phase, and every message it emits carries that value.
    """

    __slots__ = ("node_id", "value", "role", "walks", "_receiving")

    def __init__(self, node_id: int, value: int, role: str):
        self.node_id = node_id
        self.value = value
        self.role = role
        self.walks: dict[int, PairWalk] = {}
        self._receiving: list[int] = []

    def add_peer(self, peer_id: int, peer_value: int) -> None:
        branch = (
            "sender"
            if (self.value, self.node_id) < (peer_value, peer_id)
            else "detector"
        )
        self.walks[peer_id] = PairWalk.start(self.value, peer_value, branch)

    @property
    def done(self) -> bool:
        return all(w.done for w in self.walks.values())

    def emit_wave(self, round_no: int) -> list[Envelope]:
        out = []
        self._receiving = []
        for peer in sorted(self.walks):
            walk = self.walks[peer]
            if walk.done:
                continue
            if walk.wants_send:
                out.append(Envelope(round_no, self.node_id, peer, walk.fire()))
            else:
                self._receiving.append(peer)
        return out

    def absorb_wave(self, round_no: int, inbox: Sequence[Envelope]) -> None:
        queue: dict[int, list[Envelope]] = {}
        for env in inbox:
            if env.src not in self.walks:
                raise ProtocolError(
                    f"node {self.node_id} got a message from unknown peer {env.src}"
                )
            queue.setdefault(env.src, []).append(env)
        for peer in self._receiving:
            pending = queue.get(peer)
            if not pending:
                raise ProtocolError(
                    f"node {self.node_id} is starved waiting on peer {peer}"
                )
            env = pending.pop(0)
            walk = self.walks[peer]
            if env.payload != walk.r_peer:
                raise ProtocolError(
                    f"peer {peer} declared rate {walk.r_peer} but sent {env.payload}"
                )
            walk.absorb(env.payload)
        self._receiving = []
        for peer, pending in queue.items():
            if pending:
                raise ProtocolError(
                    f"node {self.node_id} got an unexpected message from {peer}"
                )


def node_round(
    node: SieveNode, inbox: Sequence[Envelope], round_no: int = 1
) -> list[Envelope]:
    """One full round for a single node given its round inbox.

    Walks ready to fire emit and decrement; the others consume one pending
    message each and grow by the peer's rate.
    """
    out = node.emit_wave(round_no)
    node.absorb_wave(round_no, inbox)
    return out


def build_phase_nodes(plan: PhasePlan) -> list[SieveNode]:
    """Materialize a phase as nodes wired per the plan topology.

    Extend phases are disjoint two-node components; sieve phases are a star
    whose hub (the sieving prime) takes the highest node id, so the hub is
    the detector on a value tie.
    """
    nodes: list[SieveNode] = []
    if plan.kind == "extend":
        for t, (y, mult) in enumerate(plan.pairs):
            a = SieveNode(2 * t, y, ROLE_RESIDUE)
            b = SieveNode(2 * t + 1, mult, ROLE_MULTIPLE)
            a.add_peer(b.node_id, mult)
            b.add_peer(a.node_id, y)
            nodes.extend((a, b))
    else:
        hub_id = len(plan.pairs)
        hub = SieveNode(hub_id, plan.p_next, ROLE_PRIME)
        for t, (w, p) in enumerate(plan.pairs):
            spoke = SieveNode(t, w, ROLE_CANDIDATE)
            spoke.add_peer(hub_id, p)
            hub.add_peer(t, w)
            nodes.append(spoke)
        nodes.append(hub)
    return nodes


def run_phase(
    plan: PhasePlan,
    *,
    engine: Engine = "formula",
    trace: list[TraceEvent] | None = None,
    max_rounds: int | None = None,
    start_round: int = 0,
    reverse_order: bool = False,
) -> tuple[dict, PhaseTally]:
    """Execute one phase.

    Extend plans return {(y, multiple): measured period}; sieve plans return
    {candidate: survives}. The tally carries rounds, send counts, the peak
    per-process send count, the longest walk, and the phase graph's largest
    neighbor count.
    """
    if engine == "formula":
        return _run_phase_formula(plan)
    if engine == "harness":
        return _run_phase_harness(
            plan,
            trace=trace,
            max_rounds=max_rounds,
            start_round=start_round,
            reverse_order=reverse_order,
        )
    raise ValueError(f"unknown engine {engine!r}")


def _run_phase_formula(plan: PhasePlan) -> tuple[dict, PhaseTally]:
    tally = PhaseTally()
    result: dict = {}
    if not plan.pairs:
        return result, tally
    hub_sends = 0
    for a, b in plan.pairs:
        g = gcd(a, b)
        period = (a + b) // g
        tally.max_steps = max(tally.max_steps, period)
        tally.rounds = max(tally.rounds, period)
        tally.messages += period
        sends_a = b // g  # each endpoint fires as often as the peer absorbs
        sends_b = a // g
        if plan.kind == "extend":
            result[(a, b)] = period
            tally.peak_node = max(tally.peak_node, sends_a, sends_b)
        else:
            result[a] = g == 1
            hub_sends += sends_b
            tally.peak_node = max(tally.peak_node, sends_a)
    if plan.kind == "extend":
        tally.delta = 1
    else:
        tally.delta = len(plan.pairs)
        tally.peak_node = max(tally.peak_node, hub_sends)
    return result, tally


def _run_phase_harness(
    plan: PhasePlan,
    *,
    trace: list[TraceEvent] | None,
    max_rounds: int | None,
    start_round: int,
    reverse_order: bool,
) -> tuple[dict, PhaseTally]:
    tally = PhaseTally()
    result: dict = {}
    if not plan.pairs:
        return result, tally
    if max_rounds is None:
        max_rounds = MAX_ROUNDS_FACTOR * (plan.limit + isqrt(plan.limit))
    if trace is not None:
        trace.append(
            TraceEvent(start_round, -1, "phase-start", None, (len(plan.pairs),))
        )
    nodes = build_phase_nodes(plan)
    _, _, counters = run_rounds(
        nodes,
        max_rounds=max_rounds,
        trace=trace,
        start_round=start_round,
        reverse_order=reverse_order,
    )
    if plan.kind == "extend":
        for t, (y, mult) in enumerate(plan.pairs):
            left, right = nodes[2 * t], nodes[2 * t + 1]
            steps = left.walks[right.node_id].steps
            assert steps == right.walks[left.node_id].steps
            result[(y, mult)] = steps
            tally.max_steps = max(tally.max_steps, steps)
        tally.delta = 1
    else:
        hub = nodes[-1]
        for t, (w, p) in enumerate(plan.pairs):
            spoke = nodes[t]
            # the detector side owns the coprimality flag
            if (p, hub.node_id) > (w, spoke.node_id):
                flag = hub.walks[spoke.node_id].zero_visited
            else:
                flag = spoke.walks[hub.node_id].zero_visited
            steps = spoke.walks[hub.node_id].steps
            assert steps == hub.walks[spoke.node_id].steps
            result[w] = flag
            tally.max_steps = max(tally.max_steps, steps)
        tally.delta = len(plan.pairs)
    tally.rounds = counters.rounds
    tally.messages = counters.total_sends
    assert counters.total_sends == counters.total_receives
    tally.peak_node = max(counters.sends_by_node.values(), default=0)
    if trace is not None:
        trace.append(
            TraceEvent(
                start_round + counters.rounds,
                -1,
                "phase-end",
                None,
                (len(plan.pairs),),
            )
        )
    return result, tally


def _initial_state(
    n: int, start_wheel: int
) -> tuple[list[int], int, list[int], int | None]:
    """(candidates, primorial, seeded primes, next prime) for the start wheel."""
    if start_wheel == 1:
        # the order-1 wheel is {1}; its successor prime is seeded explicitly
        return [1], 2, [2], 3
    if start_wheel == 3:
        cands = [c for c in residues(30) if c <= n]
        p = cands[1] if len(cands) > 1 else None
        return cands, 30, [2, 3, 5], p
    raise ValueError("start_wheel must be 1 or 3")


def plan_extend(
    candidates: Sequence[int], primorial: int, x_max: int, limit: int
) -> PhasePlan:
    pairs = []
    for x in range(1, x_max + 1):
        base = x * primorial
        if base + candidates[0] > limit:
            break
        for y in candidates:
            if base + y > limit:
                break
            pairs.append((y, base))
    return PhasePlan("extend", tuple(pairs), None, primorial, limit)


def plan_sieve(
    candidates: Sequence[int], p_next: int, primorial: int, limit: int
) -> PhasePlan:
    pairs = tuple((w, p_next) for w in candidates)
    return PhasePlan("sieve", pairs, p_next, primorial, limit)


def run_sieve(
    n: int,
    *,
    start_wheel: int = 1,
    engine: Engine = "formula",
    trace: list[TraceEvent] | None = None,
    max_rounds: int | None = None,
) -> tuple[list[int], SieveStats]:
    """All primes in [2, n] by walk-measured wheel phases, plus run statistics.

    The output contract is exact agreement with eratosthenes(n). The formula
    engine is the default; the harness engine exchanges real messages and is
    the one to use when a trace is wanted.
    """
    stats = SieveStats(n)
    if n < 2:
        return [], stats
    if engine == "formula":
        return _run_fast(n, start_wheel, stats)
    if engine == "harness":
        return _run_harness(n, start_wheel, stats, trace, max_rounds)
    raise ValueError(f"unknown engine {engine!r}")


def _finish(primes: Iterable[int], candidates: Iterable[int], n: int) -> list[int]:
    return sorted(
        [q for q in primes if q <= n] + [int(c) for c in candidates if c > 1]
    )


def _run_fast(
    n: int, start_wheel: int, stats: SieveStats
) -> tuple[list[int], SieveStats]:
    cands_list, pi, primes, p = _initial_state(n, start_wheel)
    c = np.asarray(cands_list, dtype=np.int64)
    while p is not None and p * p <= n:
        if pi < n:
            c = _fast_extend(c, pi, p - 1, n, stats)
        c = _fast_sieve(c, p, stats)
        primes.append(p)
        pi *= p
        p = int(c[1]) if c.size > 1 else None
    if pi < n:
        c = _fast_extend(c, pi, (n - 1) // pi, n, stats)
    return _finish(primes, c.tolist(), n), stats


def _fast_extend(
    c: np.ndarray, pi: int, x_max: int, n: int, stats: SieveStats
) -> np.ndarray:
    chunks = [c]
    tally = PhaseTally()
    for x in range(1, x_max + 1):
        base = x * pi
        if base + int(c[0]) > n:
            break
        block_y = c[c <= n - base]
        # every candidate is coprime to the wheel span, so the measured
        # period of pair (y, x*pi) is exactly the new value x*pi + y
        assert (np.gcd(block_y, base) == 1).all()
        block = base + block_y
        tally.messages += int(block.sum())
        tally.max_steps = max(tally.max_steps, int(block[-1]))
        tally.peak_node = max(tally.peak_node, base)
        chunks.append(block)
    if len(chunks) > 1:
        tally.rounds = tally.max_steps
        tally.delta = 1
        tally.fold_into(stats)
    return np.concatenate(chunks)


def _fast_sieve(c: np.ndarray, p: int, stats: SieveStats) -> np.ndarray:
    g = np.gcd(c, p)
    periods = (c + p) // g
    tally = PhaseTally(
        rounds=int(periods.max()),
        messages=int(periods.sum()),
        peak_node=max(int((c // g).sum()), p),
        max_steps=int(periods.max()),
        delta=int(c.size),
    )
    tally.fold_into(stats)
    return c[g == 1]


def _run_harness(
    n: int,
    start_wheel: int,
    stats: SieveStats,
    trace: list[TraceEvent] | None,
    max_rounds: int | None,
) -> tuple[list[int], SieveStats]:
    if max_rounds is None:
        max_rounds = MAX_ROUNDS_FACTOR * (n + isqrt(n))
    cands, pi, primes, p = _initial_state(n, start_wheel)
    round_no = 0

    def execute(plan: PhasePlan) -> dict:
        nonlocal round_no
        result, tally = run_phase(
            plan,
            engine="harness",
            trace=trace,
            max_rounds=max_rounds,
            start_round=round_no,
        )
        round_no += tally.rounds
        tally.fold_into(stats)
        return result

    while p is not None and p * p <= n:
        if pi < n:
            plan = plan_extend(cands, pi, p - 1, n)
            if plan.pairs:
                periods = execute(plan)
                cands = cands + sorted(periods.values())
        flags = execute(plan_sieve(cands, p, pi, n))
        cands = [w for w in cands if flags[w]]
        primes.append(p)
        pi *= p
        p = cands[1] if len(cands) > 1 else None
    if pi < n:
        plan = plan_extend(cands, pi, (n - 1) // pi, n)
        if plan.pairs:
            periods = execute(plan)
            cands = cands + sorted(periods.values())
    return _finish(primes, cands, n), stats


def scan_phi(
    n_from: int, n_to: int, *, start_wheel: int = 1
) -> list[SieveStats]:
    """Run the sieve for every n in [n_from, n_to] and collect statistics.

    The step-gap phi is reported, never asserted: rows with phi >= 5 are
    expected data, not failures.
    """
    if n_from < 4:
        raise ValueError("scan starts at 4")
    if n_from > n_to:
        raise ValueError("empty scan range")
    return [
        run_sieve(n, start_wheel=start_wheel)[1] for n in range(n_from, n_to + 1)
    ]
