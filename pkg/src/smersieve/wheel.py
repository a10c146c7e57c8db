"""Sequential wheel sieve and the plain bitmap sieve used as ground truth.

The wheel of order k is the set of integers in [1, P_k] coprime to P_k,
where P_k is the product of the first k primes. Extending a wheel unrolls
that pattern over the next span of integers; sieving it by the next prime
deletes that prime's multiples. Iterating extend+sieve, truncated at the
target bound n, enumerates exactly the primes up to n.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Iterator


def eratosthenes(n: int) -> list[int]:
    """All primes <= n by the classic bitmap sieve. Oracle for everything."""
    if n < 2:
        return []
    flags = bytearray([1]) * (n + 1)
    flags[0] = flags[1] = 0
    for p in range(2, isqrt(n) + 1):
        if flags[p]:
            start = p * p
            flags[start :: p] = bytes(len(range(start, n + 1, p)))
    return [i for i, f in enumerate(flags) if f]


def first_primes(k: int) -> list[int]:
    if k < 0:
        raise ValueError("k must be non-negative")
    bound = 32
    while True:
        ps = eratosthenes(bound)
        if len(ps) >= k:
            return ps[:k]
        bound *= 2


def primorial(k: int) -> int:
    """Product of the first k primes."""
    out = 1
    for p in first_primes(k):
        out *= p
    return out


def residues(x: int) -> list[int]:
    """Integers y in [1, x] with gcd(y, x) = 1, ascending."""
    if x < 1:
        raise ValueError("x must be positive")
    return [y for y in range(1, x + 1) if gcd(y, x) == 1]


def _extend_block(
    candidates: Iterable[int], primorial: int, x_max: int, limit: int
) -> list[int]:
    """Unroll the wheel pattern: values x*primorial + y for 1 <= x <= x_max,
    keeping only values <= limit."""
    cands = sorted(candidates)
    out = []
    for x in range(1, x_max + 1):
        base = x * primorial
        if base + cands[0] > limit:
            break
        for y in cands:
            v = base + y
            if v > limit:
                break
            out.append(v)
    return out


def extend_wheel(
    candidates: Iterable[int], primorial: int, p_next: int, limit: int
) -> list[int]:
    """Extend a wheel by the factor p_next, truncated at limit.

    Returns the union of the current candidates and the unrolled copies
    x*primorial + y for x in [1, p_next - 1], ascending.
    """
    if p_next <= 1:
        raise ValueError("extension factor must be at least 2")
    cands = sorted(candidates)
    return cands + _extend_block(cands, primorial, p_next - 1, limit)


def sieve_wheel(wheel: Iterable[int], p: int) -> list[int]:
    """Remove every multiple of p present in the wheel (p itself included)."""
    return [w for w in sorted(wheel) if w % p != 0]


@dataclass
class WheelState:
    """Snapshot of the sieve after k rounds.

    candidates is the sieved wheel truncated at the limit; primes holds the
    first k primes found so far.
    """

    k: int
    primorial: int
    candidates: list[int]
    primes: list[int]
    limit: int


def wheel_rounds(n: int, start_k: int = 1) -> Iterator[WheelState]:
    """Yield the sieve state after each extend+sieve round, initial state first.

    Rounds run while the next prime squared stays within the limit; the
    final coverage extension (when the wheel span is still short of n) is
    not a sieving round and is handled by pritchard_sieve.
    """
    if start_k == 1:
        state = WheelState(1, 2, [1] if n >= 1 else [], [2], n)
        p_next = 3  # the order-1 wheel {1} has no element above 1 to promote
    elif start_k == 3:
        cands = [c for c in residues(30) if c <= n]
        state = WheelState(3, 30, cands, [2, 3, 5], n)
        p_next = cands[1] if len(cands) > 1 else None
    else:
        raise ValueError("start_k must be 1 or 3")
    yield state
    while p_next is not None and p_next * p_next <= n:
        wheel = state.candidates
        if state.primorial < n:
            wheel = extend_wheel(wheel, state.primorial, p_next, n)
        cands = sieve_wheel(wheel, p_next)
        state = WheelState(
            state.k + 1,
            state.primorial * p_next,
            cands,
            state.primes + [p_next],
            n,
        )
        yield state
        p_next = cands[1] if len(cands) > 1 else None


def pritchard_sieve(n: int) -> list[int]:
    """All primes <= n via iterated wheel extension and sieving.

    After the sieving rounds stop (next prime squared exceeds n), the wheel
    is unrolled the rest of the way to n without further sieving: any
    composite <= n has a factor <= sqrt(n), so the remaining candidates are
    all prime. Must agree with eratosthenes(n) exactly.
    """
    if n < 2:
        return []
    state = None
    for state in wheel_rounds(n):
        pass
    cands = state.candidates
    if state.primorial < n:
        cands = cands + _extend_block(cands, state.primorial, (n - 1) // state.primorial, n)
    return sorted([q for q in state.primes if q <= n] + [c for c in cands if c > 1])
