"""Deterministic synchronous round simulator for message-passing node sets.

A round has two waves. First every node, in id order, decides from its
round-start state which of its walks fire and emits the corresponding
envelopes. Then the envelopes are routed and every node consumes the ones
addressed to it. Decisions never see messages emitted in the same round, so
the outcome is independent of the order nodes are visited inside a round;
the paired walks this harness carries are built so that whenever an endpoint
is in a receiving state, its peer fires in that same round.

Everything is counted: sends per node and per round, receives per node, and
the number of rounds to quiescence. Identical inputs give byte-identical
traces.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, IO, Iterable, Protocol, Sequence


class ProtocolError(RuntimeError):
    """A node received a message it cannot account for."""


class SimulationTimeout(RuntimeError):
    """The round budget ran out before quiescence."""


@dataclass(frozen=True)
class Envelope:
    """One arc-reversal message. Delivered exactly once, in the round sent."""

    round: int
    src: int
    dst: int
    payload: int


EVENT_KINDS = ("send", "receive", "fire", "phase-start", "phase-end")


@dataclass(frozen=True)
class TraceEvent:
    round: int
    node: int
    kind: str
    peer: int | None
    detail: tuple[int, ...] = ()


class Node(Protocol):
    node_id: int

    @property
    def done(self) -> bool: ...

    def emit_wave(self, round_no: int) -> list[Envelope]: ...

    def absorb_wave(self, round_no: int, inbox: Sequence[Envelope]) -> None: ...


@dataclass
class RoundCounters:
    sends_by_node: Counter = field(default_factory=Counter)
    receives_by_node: Counter = field(default_factory=Counter)
    sends_by_round: Counter = field(default_factory=Counter)
    rounds: int = 0

    @property
    def total_sends(self) -> int:
        return sum(self.sends_by_node.values())

    @property
    def total_receives(self) -> int:
        return sum(self.receives_by_node.values())


def run_rounds(
    nodes: Sequence[Node],
    until: Callable[[Sequence[Node]], bool] | None = None,
    *,
    max_rounds: int,
    trace: list[TraceEvent] | None = None,
    start_round: int = 0,
    reverse_order: bool = False,
) -> tuple[Sequence[Node], list[TraceEvent], RoundCounters]:
    """Run rounds until quiescence (or ``until`` says stop).

    Nodes are stepped in ascending id order (descending with reverse_order,
    which must not change any outcome; tests rely on that). Raises
    SimulationTimeout after max_rounds rounds without quiescence. Returns the
    nodes, the trace list (the one passed in, if any), and the counters.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be positive")
    if trace is None:
        trace = []
    counters = RoundCounters()
    quiescent = until if until is not None else lambda ns: all(n.done for n in ns)
    order = sorted(nodes, key=lambda n: n.node_id, reverse=reverse_order)
    round_no = start_round
    while not quiescent(nodes):
        round_no += 1
        if round_no - start_round > max_rounds:
            raise SimulationTimeout(
                f"not quiescent after {max_rounds} rounds"
            )
        counters.rounds += 1
        outbox: list[Envelope] = []
        for node in order:
            outbox.extend(node.emit_wave(round_no))
        outbox.sort(key=lambda e: (e.src, e.dst))
        inboxes: dict[int, list[Envelope]] = {}
        for env in outbox:
            inboxes.setdefault(env.dst, []).append(env)
            counters.sends_by_node[env.src] += 1
            counters.sends_by_round[round_no] += 1
            trace.append(TraceEvent(round_no, env.src, "send", env.dst, (env.payload,)))
        for node in order:
            inbox = inboxes.pop(node.node_id, [])
            node.absorb_wave(round_no, inbox)
            for env in inbox:
                counters.receives_by_node[env.dst] += 1
                trace.append(
                    TraceEvent(round_no, env.dst, "receive", env.src, (env.payload,))
                )
        if inboxes:
            stray = next(iter(inboxes))
            raise ProtocolError(f"message addressed to unknown node {stray}")
    return nodes, trace, counters


def emit_trace(events: Iterable[TraceEvent], sink: IO[str]) -> None:
    """Serialize events as JSON lines with a fixed key order.

    Byte-identical output for identical event sequences.
    """
    for ev in events:
        obj = {
            "round": ev.round,
            "node": ev.node,
            "kind": ev.kind,
            "peer": ev.peer,
            "detail": list(ev.detail),
        }
        sink.write(json.dumps(obj, separators=(",", ":")) + "\n")
