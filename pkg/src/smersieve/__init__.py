"""Edge-reversal scheduling engines and a walk-driven distributed wheel sieve.

The package has three layers: a multigraph/orientation model with the two
reversal engines (plain sinks on simple graphs, rate-based r-sinks on
multigraphs), a sequential wheel sieve that doubles as the correctness
oracle, and a synchronous message-passing simulation of the distributed
sieve whose pairwise walks measure out wheel elements as periods and decide
coprimality by watching for a zero arc count.
"""

from .harness import (
    Envelope,
    ProtocolError,
    RoundCounters,
    SimulationTimeout,
    TraceEvent,
    emit_trace,
    run_rounds,
)
from .multigraph import (
    Multigraph,
    Orientation,
    conserved_pair_sum,
    edge_bound_violations,
    find_r_sinks,
    find_sinks,
    is_acyclic,
    parse_graph,
    parse_orientation,
)
from .ser import SerRun, ser_run, ser_step
from .sieve import (
    PhasePlan,
    SieveNode,
    SieveStats,
    build_phase_nodes,
    node_round,
    plan_extend,
    plan_sieve,
    run_phase,
    run_sieve,
    scan_phi,
)
from .smer import (
    PairWalk,
    SmerRun,
    coprime_by_walk,
    pair_walk_run,
    pair_walk_states,
    period_formula,
    smer_run,
    smer_step,
)
from .wheel import (
    WheelState,
    eratosthenes,
    extend_wheel,
    first_primes,
    primorial,
    pritchard_sieve,
    residues,
    sieve_wheel,
    wheel_rounds,
)

__version__ = "0.1.0"

__all__ = [
    "Envelope",
    "Multigraph",
    "Orientation",
    "PairWalk",
    "PhasePlan",
    "ProtocolError",
    "RoundCounters",
    "SerRun",
    "SieveNode",
    "SieveStats",
    "SimulationTimeout",
    "SmerRun",
    "TraceEvent",
    "WheelState",
    "build_phase_nodes",
    "conserved_pair_sum",
    "coprime_by_walk",
    "edge_bound_violations",
    "emit_trace",
    "eratosthenes",
    "extend_wheel",
    "find_r_sinks",
    "find_sinks",
    "first_primes",
    "is_acyclic",
    "node_round",
    "pair_walk_run",
    "pair_walk_states",
    "parse_graph",
    "parse_orientation",
    "period_formula",
    "plan_extend",
    "plan_sieve",
    "primorial",
    "pritchard_sieve",
    "residues",
    "run_phase",
    "run_rounds",
    "run_sieve",
    "scan_phi",
    "ser_run",
    "ser_step",
    "sieve_wheel",
    "smer_run",
    "smer_step",
    "wheel_rounds",
]
