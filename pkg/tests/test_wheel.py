"""Wheel recurrences and the sequential sieve against the bitmap oracle."""

from math import gcd

import pytest

from smersieve import (
    eratosthenes,
    extend_wheel,
    first_primes,
    primorial,
    pritchard_sieve,
    residues,
    sieve_wheel,
    wheel_rounds,
)


class TestResidues:
    def test_order_three_wheel(self):
        assert residues(30) == [1, 7, 11, 13, 17, 19, 23, 29]

    def test_smallest_wheel(self):
        assert residues(2) == [1]

    def test_order_two_wheel(self):
        assert residues(6) == [1, 5]

    def test_one(self):
        assert residues(1) == [1]

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            residues(0)

    def test_totient_recurrence(self):
        # |R(P_{k+1})| = |R(P_k)| * (p_{k+1} - 1)
        primes = first_primes(6)
        for k in range(1, 6):
            lhs = len(residues(primorial(k + 1)))
            rhs = len(residues(primorial(k))) * (primes[k] - 1)
            assert lhs == rhs


class TestExtendWheel:
    def test_second_to_third_wheel(self):
        out = extend_wheel([1, 5], 6, 5, limit=30)
        assert out == [1, 5, 7, 11, 13, 17, 19, 23, 25, 29]

    def test_first_wheel_extension(self):
        assert extend_wheel([1], 2, 3, limit=100) == [1, 3, 5]

    def test_truncation(self):
        assert extend_wheel([1, 5], 6, 5, limit=20) == [1, 5, 7, 11, 13, 17, 19]

    def test_extension_factor_must_exceed_one(self):
        with pytest.raises(ValueError):
            extend_wheel([1], 2, 1, limit=10)


class TestSieveWheel:
    def test_removes_multiples_of_five(self):
        wheel = [1, 5, 7, 11, 13, 17, 19, 23, 25, 29]
        assert sieve_wheel(wheel, 5) == [1, 7, 11, 13, 17, 19, 23, 29]

    def test_large_prime_changes_nothing(self):
        assert sieve_wheel([1, 5, 7], 11) == [1, 5, 7]

    def test_prime_itself_is_removed(self):
        assert sieve_wheel([1, 3, 5, 7], 3) == [1, 5, 7]


class TestEratosthenes:
    def test_thirty(self):
        assert eratosthenes(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_three(self):
        assert eratosthenes(3) == [2, 3]

    def test_below_two(self):
        assert eratosthenes(1) == []
        assert eratosthenes(0) == []

    def test_prime_count_at_ten_thousand(self):
        assert len(eratosthenes(10_000)) == 1229


class TestPritchardSieve:
    def test_thirty(self):
        assert pritchard_sieve(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]

    def test_ten(self):
        assert pritchard_sieve(10) == [2, 3, 5, 7]

    def test_two(self):
        assert pritchard_sieve(2) == [2]

    def test_below_two(self):
        assert pritchard_sieve(1) == []

    def test_matches_oracle_exhaustively(self):
        for n in range(2, 5001):
            assert pritchard_sieve(n) == eratosthenes(n), n


class TestWheelRounds:
    def test_candidates_are_the_sieved_residue_set(self):
        n = 250
        for state in wheel_rounds(n):
            expected = [
                y for y in range(1, min(state.primorial, n) + 1)
                if gcd(y, state.primorial) == 1
            ]
            assert state.candidates == expected
            assert 1 in state.candidates

    def test_primes_accumulate_in_order(self):
        states = list(wheel_rounds(2000))
        for k, state in enumerate(states, start=1):
            assert state.primes == first_primes(state.k)
            assert state.k == k

    def test_start_at_third_wheel(self):
        states = list(wheel_rounds(230, start_k=3))
        assert states[0].primes == [2, 3, 5]
        assert states[0].candidates == residues(30)
