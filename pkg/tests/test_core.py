import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcttb.core import (BetaCount, Choice, CuePosterior, LexTree, PairedComparison, PairSet,
                         Prediction, evaluate_tree, importance_shares, score_subsample)
from abcttb.errors import ContractViolation

from conftest import pair, tree


def test_second_cue_decides_when_first_draws():
    p = evaluate_tree(tree([0, 1], [1, 1]), pair([0, 1], 1))
    assert p == Prediction(Choice.A, 1)


def test_negative_direction_flips_choice():
    p = evaluate_tree(tree([0, 1], [-1, 1]), pair([1, -1], 1))
    assert p == Prediction(Choice.B, 0)


def test_all_draws_is_a_guess():
    p = evaluate_tree(tree([2, 0, 1], [1, -1, 1]), pair([0, 0, 0], 0))
    assert p.choice is Choice.GUESS and p.deciding_cue is None


def test_dimension_mismatch():
    with pytest.raises(ContractViolation):
        evaluate_tree(tree([0, 1], [1, 1]), pair([0, 1, 1], 1))


@pytest.mark.parametrize("order", [(0, 0), (0, 2), (1,)])
def test_lextree_rejects_non_permutations(order):
    with pytest.raises(ContractViolation):
        LexTree(order, (1, 1))


def test_pair_validation():
    with pytest.raises(ContractViolation):
        PairedComparison((2, 0), 1)
    with pytest.raises(ContractViolation):
        PairedComparison((1, 0), 2)


def test_prediction_invariant():
    with pytest.raises(ContractViolation):
        Prediction(Choice.A)
    with pytest.raises(ContractViolation):
        Prediction(Choice.GUESS, 0)


def test_score_single_correct():
    r = score_subsample(tree([0], [1]), [pair([1], 1)])
    assert r.score == 1.0
    assert r.correct_decisions.tolist() == [1]


def test_score_guess_is_half():
    r = score_subsample(tree([0], [1]), [pair([0], 1)])
    assert r.score == 0.5
    assert r.correct_decisions.tolist() == [0]


def test_score_two_pairs_hand_walk():
    # (+1, 0) -> A but y = 0: wrong via c1; (0, +1) -> A and y = 1: right via c2.
    r = score_subsample(tree([0, 1], [1, 1]), [pair([1, 0], 0), pair([0, 1], 1)])
    assert r.score == 0.5
    assert r.correct_decisions.tolist() == [0, 1]


def test_count_all_decisions_switch():
    pairs = [pair([1, 0], 0), pair([0, 1], 1)]
    r = score_subsample(tree([0, 1], [1, 1]), pairs, count_all_decisions=True)
    assert r.correct_decisions.tolist() == [1, 1]


def test_score_empty_raises():
    with pytest.raises(ContractViolation):
        score_subsample(tree([0], [1]), [])


def test_shares_uniform():
    shares = importance_shares([CuePosterior()] * 4)
    assert shares.tolist() == [0.25] * 4


def test_shares_from_means_example():
    # Means .8, .6, .2 from B(4,1), B(3,2), B(1,4).
    posts = [CuePosterior(BetaCount(4, 1)), CuePosterior(BetaCount(3, 2)), CuePosterior(BetaCount(1, 4))]
    np.testing.assert_allclose(importance_shares(posts), [0.5, 0.375, 0.125], atol=1e-12)


def test_shares_two_cues():
    posts = [CuePosterior(BetaCount(4, 1)), CuePosterior(BetaCount(1, 4))]
    np.testing.assert_allclose(importance_shares(posts), [0.8, 0.2], atol=1e-12)


def test_beta_count_positive():
    with pytest.raises(ContractViolation):
        BetaCount(0, 1)


# -- properties -------------------------------------------------------------

@st.composite
def tree_and_pair(draw, min_k=1, max_k=7):
    k = draw(st.integers(min_k, max_k))
    order = draw(st.permutations(list(range(k))))
    signs = draw(st.lists(st.sampled_from([-1, 1]), min_size=k, max_size=k))
    diffs = draw(st.lists(st.sampled_from([-1, 0, 1]), min_size=k, max_size=k))
    outcome = draw(st.integers(0, 1))
    return LexTree(tuple(order), tuple(signs)), PairedComparison(tuple(diffs), outcome)


@given(tree_and_pair())
def test_antisymmetry(tp):
    t, p = tp
    a = evaluate_tree(t, p)
    b = evaluate_tree(t, p.mirrored())
    flip = {Choice.A: Choice.B, Choice.B: Choice.A, Choice.GUESS: Choice.GUESS}
    assert b.choice is flip[a.choice]
    assert b.deciding_cue == a.deciding_cue


@given(tree_and_pair(min_k=2), st.data())
def test_cues_after_deciding_cue_are_irrelevant(tp, data):
    t, p = tp
    pred = evaluate_tree(t, p)
    if pred.deciding_cue is None:
        return
    cut = t.order.index(pred.deciding_cue) + 1
    tail = list(t.order[cut:])
    shuffled = data.draw(st.permutations(tail))
    new_diffs = list(p.diffs)
    for c in tail:
        new_diffs[c] = data.draw(st.sampled_from([-1, 0, 1]))
    t2 = LexTree(t.order[:cut] + tuple(shuffled), t.directions)
    assert evaluate_tree(t2, PairedComparison(tuple(new_diffs), p.outcome)) == pred


def brute_force_score(t, pairs):
    correct = guesses = 0
    per_cue = [0] * t.k
    for p in pairs:
        pred = evaluate_tree(t, p)
        if pred.choice is Choice.GUESS:
            guesses += 1
        elif (pred.choice is Choice.A) == (p.outcome == 1):
            correct += 1
            per_cue[pred.deciding_cue] += 1
    return (correct + 0.5 * guesses) / len(pairs), per_cue


@settings(max_examples=200)
@given(st.integers(1, 6), st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_score_matches_brute_force(k, n, seed):
    rng = np.random.default_rng(seed)
    t = LexTree(tuple(rng.permutation(k).tolist()), tuple(rng.choice([-1, 1], k).tolist()))
    ps = PairSet(rng.integers(-1, 2, (n, k)), rng.integers(0, 2, n))
    pairs = ps.to_pairs()
    expected_score, expected_counts = brute_force_score(t, pairs)
    r = score_subsample(t, pairs)
    assert r.score == expected_score
    assert r.correct_decisions.tolist() == expected_counts
    assert r.correct_decisions.sum() <= r.n_pairs
    assert score_subsample(t, ps).score == expected_score


@given(st.lists(st.floats(0.01, 0.99), min_size=1, max_size=8), st.floats(0.05, 0.99))
def test_shares_scale_invariant(means, scale):
    def posts(ms):
        return [CuePosterior(BetaCount(m, 1 - m)) for m in ms]
    a = importance_shares(posts(means))
    b = importance_shares(posts([m * scale for m in means]))
    np.testing.assert_allclose(a, b, rtol=1e-9)
    assert abs(a.sum() - 1) < 1e-12
