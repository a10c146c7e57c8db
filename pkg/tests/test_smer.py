"""Pairwise walks, the period formula, coprimality detection, r-sink engine."""

from math import gcd

import pytest

from smersieve import (
    Multigraph,
    Orientation,
    conserved_pair_sum,
    coprime_by_walk,
    pair_walk_run,
    pair_walk_states,
    period_formula,
    smer_run,
    smer_step,
)
from smersieve.smer import PairWalk


class TestPeriodFormula:
    def test_coprime_pair(self):
        assert period_formula(3, 5) == 8

    def test_equal_rates(self):
        for r in (1, 2, 7, 100):
            assert period_formula(r, r) == 2

    def test_shared_factor(self):
        assert period_formula(2, 4) == 3

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            period_formula(0, 3)
        with pytest.raises(ValueError):
            period_formula(3, -1)


class TestPairWalk:
    def test_detector_trace_5_3(self):
        assert pair_walk_states(5, 3) == [4, 7, 2, 5, 0, 3, 6, 1, 4]
        walk = pair_walk_run(5, 3)
        assert walk.steps == 8
        assert walk.zero_visited

    def test_detector_trace_4_2(self):
        assert pair_walk_states(4, 2) == [3, 5, 1, 3]
        walk = pair_walk_run(4, 2)
        assert walk.steps == 3
        assert not walk.zero_visited

    def test_detector_trace_1_1(self):
        assert pair_walk_states(1, 1) == [0, 1, 0]
        walk = pair_walk_run(1, 1)
        assert walk.steps == 2
        assert walk.zero_visited  # the initial state counts

    def test_sender_branch_starts_by_firing(self):
        states = pair_walk_states(3, 5, "sender")
        assert states[0] == 3
        assert states[1] == 0
        assert len(states) - 1 == period_formula(3, 5)

    def test_completed_walk_matches_formula(self):
        for ri in range(1, 33):
            for rj in range(1, 33):
                walk = pair_walk_run(ri, rj)
                assert walk.steps == period_formula(ri, rj), (ri, rj)
                assert walk.incoming == walk.a0
                assert walk.done

    def test_zero_flag_is_coprimality_on_detector_side(self):
        for ri in range(1, 33):
            for rj in range(1, 33):
                walk = pair_walk_run(ri, rj)
                assert walk.zero_visited == (gcd(ri, rj) == 1), (ri, rj)

    def test_states_stay_in_range_and_modular_form(self):
        for ri, rj in [(5, 3), (9, 6), (12, 8), (7, 7), (1, 10)]:
            m = ri + rj
            states = pair_walk_states(ri, rj)
            a0 = ri - 1
            for t, v in enumerate(states):
                assert 0 <= v <= ri + rj - 1
                assert v % m == (a0 - t * ri) % m

    def test_states_within_period_are_distinct(self):
        for ri, rj in [(5, 3), (9, 6), (12, 8), (7, 7), (4, 2)]:
            states = pair_walk_states(ri, rj)
            assert len(set(states[:-1])) == len(states) - 1

    def test_fire_and_absorb_guards(self):
        walk = PairWalk.start(5, 3)  # incoming 4 < 5
        with pytest.raises(ValueError):
            walk.fire()
        walk.absorb()  # 4 -> 7
        with pytest.raises(ValueError):
            walk.absorb()
        with pytest.raises(ValueError):
            walk.absorb(99)

    def test_rejects_bad_rates_and_branch(self):
        with pytest.raises(ValueError):
            PairWalk.start(0, 3)
        with pytest.raises(ValueError):
            PairWalk.start(3, 3, "both")


class TestCoprimeByWalk:
    def test_known_pairs(self):
        assert coprime_by_walk(37, 5)
        assert not coprime_by_walk(35, 5)

    def test_one_is_coprime_to_everything(self):
        for k in (1, 2, 9, 30, 97):
            assert coprime_by_walk(1, k)
            assert coprime_by_walk(k, 1)

    def test_against_gcd_oracle(self):
        for a in range(1, 41):
            for b in range(1, 41):
                assert coprime_by_walk(a, b) == (gcd(a, b) == 1), (a, b)


class TestSmerEngine:
    def test_two_node_coprime_period(self):
        g = Multigraph.pair(3, 5, 7)
        o = Orientation(g, {(1, 0): 4})  # 4 arcs at the larger-rate node
        run = smer_run(o, g)
        assert run.period == 8
        assert run.prefix_len == 0

    def test_unit_pair_is_plain_alternation(self):
        g = Multigraph.pair(1, 1, 1)
        run = smer_run(Orientation(g, {(0, 1): 1}), g)
        assert run.period == 2
        assert run.fires_per_node == {0: 1, 1: 1}

    def test_unit_star_behaves_like_plain_reversal(self):
        g = Multigraph([1, 1, 1, 1], [(0, 1, 1), (0, 2, 1), (0, 3, 1)])
        o = Orientation(g, {(0, 1): 1, (0, 2): 1, (0, 3): 1})
        run = smer_run(o, g)
        assert run.period == 2

    def test_engine_period_matches_walk_on_pair_graphs(self):
        for ri in range(1, 65):
            for rj in range(1, 65):
                g = Multigraph.pair(ri, rj)
                o = Orientation(g, {(0, 1): ri if ri <= rj else ri - 1})
                run = smer_run(o, g)
                assert run.period == period_formula(ri, rj), (ri, rj)

    def test_rejects_out_of_band_multiplicities(self):
        g = Multigraph.pair(3, 5, 9)
        o = Orientation(g, {(0, 1): 4})
        with pytest.raises(ValueError):
            smer_run(o, g)

    def test_arc_conservation_and_invariant_along_run(self):
        for ri, rj in [(3, 5), (2, 4), (6, 4), (7, 7), (9, 12)]:
            g = Multigraph.pair(ri, rj)
            e = ri + rj - 1
            o0 = Orientation(g, {(0, 1): ri if ri <= rj else ri - 1})
            run = smer_run(o0, g)
            values = {conserved_pair_sum(o, g, 0, 1) for o in run.orientations}
            assert values == {ri + rj - gcd(ri, rj)}
            for o in run.orientations:
                assert o.toward(0, 1) + o.toward(1, 0) == e

    def test_step_handles_parallel_components(self):
        # two independent pairs in one multigraph fire without interference
        g = Multigraph([1, 1, 3, 5], [(0, 1, 1), (2, 3, 7)])
        o = Orientation(g, {(0, 1): 1, (2, 3): 3})
        nxt = smer_step(o, g)
        assert nxt.toward(1, 0) == 1  # node 0 fired its single arc
        assert nxt.toward(3, 2) == 7  # node 2 fired 3 of its 7 arcs
        run = smer_run(o, g)
        # joint period is the lcm of the pair periods 2 and 8
        assert run.period == 8
