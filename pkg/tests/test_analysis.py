"""State polynomial, side values, and the weighted firing count."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from chipfire import (
    ChipState,
    FiringStrategy,
    GameParams,
    combine,
    fire,
    firings_from_M,
    new_state,
    oracle_states,
    side_values,
    split,
    stabilize,
    state_poly_eval,
    state_word,
    weighted_sum,
    word_to_string,
)
from chipfire.errors import DivisionByZero, EqualRates, InconsistentLog, NotDivisible


def test_state_poly_invariant_values():
    p = GameParams(1, 2)
    final, _ = stabilize(new_state(7, p))
    assert state_poly_eval(final, 1) == 7
    assert state_poly_eval(final, Fraction(2, 1)) == 7
    init = new_state(5, p)
    for t in (1, 2, Fraction(3, 2), Fraction(5)):
        assert state_poly_eval(init, t) == 5


def test_state_poly_division_by_zero():
    p = GameParams(1, 2)
    with pytest.raises(DivisionByZero):
        state_poly_eval(ChipState(p, {1: 2}), 0)
    assert state_poly_eval(ChipState(p, {-2: 1, 0: 2}), 0) == 2


def test_split_examples():
    p = GameParams(2, 3)
    final, _ = stabilize(new_state(21, p))
    left, right = split(final)
    assert left.digits == (4, 4, 2) and left.radix == 0
    assert right.digits == (2, 2, 4, 3) and right.radix == -4
    assert combine(left, right, p) == final

    s = new_state(9, p)
    left, right = split(s)
    assert left.digits == (9,) and right.is_empty()

    final7, _ = stabilize(new_state(7, GameParams(1, 2)))
    left, right = split(final7)
    assert word_to_string(left) == "22"
    assert word_to_string(right) == ".12"


def test_split_combine_round_trip():
    p = GameParams(2, 3)
    for n, state, _ in oracle_states(p, 50):
        left, right = split(state)
        assert combine(left, right, p) == state


def test_side_values_seven_one_two():
    p = GameParams(1, 2)
    final, log = stabilize(new_state(7, p))
    rep = side_values(final, log)
    assert rep.right_at_1 == 3 and rep.right_at_boa == 1
    assert rep.f0 == 2 and rep.f1 == 1
    assert rep.left_at_1 + rep.right_at_1 == rep.s_at_1 == 7
    assert rep.s_at_boa == 7


def test_side_values_seventeen_two_three():
    p = GameParams(2, 3)
    final, log = stabilize(new_state(17, p))
    rep = side_values(final, log)
    assert rep.right_at_1 == 8 and rep.right_at_boa == 4
    assert rep.f0 == 4 and rep.f1 == 2


def test_side_values_below_threshold():
    p = GameParams(2, 3)
    final, log = stabilize(new_state(4, p))
    rep = side_values(final, log)
    assert rep.f0 == rep.f1 == 0
    assert rep.right_at_1 == 0 and rep.left_at_1 == 4


def test_side_values_rejects_wrong_log():
    p = GameParams(1, 2)
    final, log = stabilize(new_state(7, p))
    bad = type(log)({**log.fires, 0: 5}, log.total + 3)
    with pytest.raises(InconsistentLog):
        side_values(final, bad)


def test_weighted_sum_and_firing_count():
    p = GameParams(1, 2)
    final, log = stabilize(new_state(7, p))
    assert weighted_sum(final) == 3
    assert firings_from_M(final) == 3 == log.total

    assert weighted_sum(new_state(40, p)) == 0

    p23 = GameParams(2, 3)
    final17, log17 = stabilize(new_state(17, p23))
    assert firings_from_M(final17) == log17.total


def test_firings_from_M_errors():
    with pytest.raises(EqualRates):
        firings_from_M(new_state(5, GameParams(2, 2)))
    p = GameParams(1, 3)
    with pytest.raises(NotDivisible):
        firings_from_M(ChipState(p, {1: 1}))


def test_firings_from_M_mirrored_params():
    p = GameParams(3, 2)
    final, log = stabilize(new_state(40, p))
    assert firings_from_M(final) == log.total


def test_single_fire_changes_weighted_sum_by_b_minus_a():
    for a, b in [(1, 2), (2, 3), (3, 5), (4, 3)]:
        p = GameParams(a, b)
        s = ChipState(p, {-1: a + b + 1, 2: a + b})
        for v in (-1, 2):
            assert weighted_sum(fire(s, v)) - weighted_sum(s) == b - a


@given(
    n=st.integers(min_value=0, max_value=150),
    pair=st.sampled_from([(1, 2), (2, 3), (3, 4), (2, 5), (3, 5), (4, 5)]),
    seed=st.integers(min_value=0, max_value=2**32),
)
@settings(max_examples=40, deadline=None)
def test_side_values_hold_for_random_runs(n, pair, seed):
    p = GameParams(*pair)
    final, log = stabilize(new_state(n, p), FiringStrategy.random(seed))
    rep = side_values(final, log)  # raises InconsistentLog on any violation
    assert rep.left_at_boa.denominator == 1
    assert rep.right_at_boa.denominator == 1
    assert firings_from_M(final) == log.total


def test_recover_counts_from_state_alone():
    """The two right-side identities pin down f0 and f1 without the log,
    for every schedule (the counts are schedule-independent)."""
    from chipfire import LEFTMOST, PARALLEL_ROUNDS, RIGHTMOST, recover_counts

    for a, b in [(1, 2), (2, 3), (3, 4), (3, 5), (3, 2)]:
        p = GameParams(a, b)
        for n in range(0, 90):
            for strat in (LEFTMOST, RIGHTMOST, PARALLEL_ROUNDS, FiringStrategy.random(11)):
                final, log = stabilize(new_state(n, p), strat)
                assert recover_counts(final) == (
                    log.fires.get(0, 0),
                    log.fires.get(1, 0),
                ), (a, b, n, strat.kind)


def test_recover_counts_equal_rates():
    from chipfire import recover_counts

    with pytest.raises(EqualRates):
        recover_counts(new_state(5, GameParams(3, 3)))


def test_monotone_firing_counts_in_n():
    p = GameParams(2, 3)
    prev_f0 = prev_f1 = 0
    for n, _, log in oracle_states(p, 200):
        f0, f1 = log.fires.get(0, 0), log.fires.get(1, 0)
        assert f0 >= prev_f0 and f1 >= prev_f1
        prev_f0, prev_f1 = f0, f1


def test_state_word_padding():
    p = GameParams(1, 2)
    assert word_to_string(state_word(new_state(0, p)), radix_mark="always") == "0."
    s = ChipState(p, {2: 2})
    assert word_to_string(state_word(s), radix_mark="always") == "0.02"
    s = ChipState(p, {-2: 1})
    assert word_to_string(state_word(s), radix_mark="always") == "100."
