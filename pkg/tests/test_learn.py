import numpy as np
import pytest

from abcttb.core import EvalReport
from abcttb.errors import AcceptanceStall, ContractViolation, EmptyTraining
from abcttb.learn import LearnerConfig, LearnerState, accept_test, fit, reinforce, step
from abcttb.proposal import make_rng
from abcttb.synth import SynthConfig, generate

from conftest import pair, tree

LITERAL = LearnerConfig(normalize_increment=False, importance_failures=False)


def report(score, counts, n=10):
    return EvalReport(n, score, np.array(counts))


@pytest.mark.parametrize("score,expected", [(1.0, True), (0.9, True), (0.85, False)])
def test_accept_test(score, expected):
    assert accept_test(report(score, [0]), 0.1) is expected


def test_reinforce_positive_direction():
    s = reinforce(LearnerState.prior(2), tree([0, 1], [1, 1]), report(1.0, [3, 0]), LITERAL)
    np.testing.assert_array_equal(s.imp_alpha, [4, 1])
    np.testing.assert_array_equal(s.imp_beta, [1, 1])
    np.testing.assert_array_equal(s.dir_alpha, [4, 1])
    np.testing.assert_array_equal(s.dir_beta, [1, 1])
    assert s.accepted == 1 and len(s.share_trace) == 1


def test_reinforce_negative_direction_adds_to_beta():
    s = reinforce(LearnerState.prior(2), tree([0, 1], [-1, 1]), report(1.0, [2, 0]), LITERAL)
    assert (s.dir_alpha[0], s.dir_beta[0]) == (1, 3)


def test_reinforce_zero_counts_leave_posteriors():
    prior = LearnerState.prior(3)
    s = reinforce(prior, tree([0, 1, 2], [1, 1, 1]), report(0.5, [0, 0, 0]), LITERAL)
    for name in ("imp_alpha", "imp_beta", "dir_alpha", "dir_beta"):
        np.testing.assert_array_equal(getattr(s, name), getattr(prior, name))


def test_reinforce_is_pure():
    prior = LearnerState.prior(2)
    reinforce(prior, tree([0, 1], [1, 1]), report(1.0, [3, 0]))
    np.testing.assert_array_equal(prior.imp_alpha, [1, 1])
    assert prior.accepted == 0


def test_reinforce_with_failures_raw():
    cfg = LearnerConfig(normalize_increment=False)
    s = reinforce(LearnerState.prior(2), tree([0, 1], [1, 1]), report(1.0, [3, 0], n=10), cfg)
    np.testing.assert_array_equal(s.imp_alpha, [4, 1])
    np.testing.assert_array_equal(s.imp_beta, [8, 11])


def test_reinforce_default_is_one_trial_per_acceptance():
    s = reinforce(LearnerState.prior(2), tree([0, 1], [-1, 1]), report(1.0, [3, 0], n=10))
    np.testing.assert_allclose(s.imp_alpha, [1.3, 1.0])
    np.testing.assert_allclose(s.imp_beta, [1.7, 2.0])
    np.testing.assert_allclose(s.dir_beta, [1.3, 1.0])
    np.testing.assert_allclose(s.dir_alpha, [1.0, 1.0])


@pytest.mark.parametrize("kw", [dict(epsilon=1.0), dict(epsilon=-0.1), dict(phi=0.0), dict(phi=1.5),
                                dict(eta=0), dict(eta=10, max_proposals=5)])
def test_config_invariants(kw):
    with pytest.raises(ContractViolation):
        LearnerConfig(**kw)


def test_subsample_size():
    cfg = LearnerConfig(phi=0.1)
    assert cfg.subsample_size(1000) == 100
    assert cfg.subsample_size(5) == 1
    assert LearnerConfig(phi=0.15).subsample_size(7) == 2


def synthetic(n=1000, seed=0):
    return generate(SynthConfig(n=n), make_rng(seed))


def test_accept_everything():
    cfg = LearnerConfig(epsilon=1 - 1e-9, eta=10)
    s = fit(cfg, synthetic(200), make_rng(0))
    assert s.proposed == 10 and s.accepted == 10
    assert s.acceptance_trace.all()


@pytest.mark.parametrize("cfg", [LearnerConfig(epsilon=0.0, eta=5), LearnerConfig(
    epsilon=0.0, eta=5, normalize_increment=False, importance_failures=False)])
def test_single_pair_learning(cfg):
    s = fit(cfg, [pair([1], 1)], make_rng(1))
    assert s.accepted == 5
    assert (s.imp_alpha[0], s.imp_beta[0]) == (6, 1)
    assert (s.dir_alpha[0], s.dir_beta[0]) == (6, 1)
    # Only the positive direction can ever be accepted.
    assert s.acceptance_trace.sum() == 5


def test_empty_training():
    with pytest.raises(EmptyTraining):
        fit(LearnerConfig(), [])


def test_stall_carries_partial_state():
    data = synthetic(200)
    with pytest.raises(AcceptanceStall) as err:
        fit(LearnerConfig(epsilon=0.0, phi=1.0, eta=5, max_proposals=300), data, make_rng(0))
    assert err.value.state.proposed == 300
    assert err.value.state.accepted < 5


def test_rejected_proposals_leave_state_untouched():
    data = synthetic(500)
    cfg = LearnerConfig(epsilon=0.1, phi=0.1)
    state = LearnerState.prior(4)
    rng = make_rng(3)
    m = cfg.subsample_size(len(data))
    rejected = accepted = 0
    for _ in range(400):
        before = state.copy()
        ok = step(state, data, m, cfg, rng)
        assert state.proposed == before.proposed + 1
        if ok:
            accepted += 1
            assert state.accepted == before.accepted + 1
        else:
            rejected += 1
            for name in ("imp_alpha", "imp_beta", "dir_alpha", "dir_beta"):
                assert getattr(state, name).tobytes() == getattr(before, name).tobytes()
            assert state.accepted == before.accepted
            assert len(state.share_trace) == len(before.share_trace)
    assert rejected > 0 and accepted > 0


@pytest.mark.parametrize("cfg", [LearnerConfig(eta=40), LearnerConfig(
    eta=40, normalize_increment=False, importance_failures=False)])
def test_pseudo_counts_monotone(cfg):
    data = synthetic(500)
    state = LearnerState.prior(4)
    rng = make_rng(4)
    m = cfg.subsample_size(len(data))
    while state.accepted < cfg.eta:
        before = state.copy()
        step(state, data, m, cfg, rng)
        for name in ("imp_alpha", "imp_beta", "dir_alpha", "dir_beta"):
            assert (getattr(state, name) >= getattr(before, name)).all()
        if not cfg.importance_failures:
            assert (state.imp_beta == 1.0).all()


def test_trace_invariants():
    s = fit(LearnerConfig(eta=50), synthetic(), make_rng(5))
    assert s.accepted == 50 and len(s.share_trace) == 50
    assert s.accepted <= s.proposed == len(s.acceptance_trace)
    assert s.acceptance_trace.sum() == 50
    for row in s.share_trace:
        assert abs(row.sum() - 1) < 1e-12
    for p in s.posteriors:
        assert p.importance.alpha > 0 and p.importance.beta > 0


def test_fit_deterministic():
    data = synthetic()
    a = fit(LearnerConfig(eta=30, seed=9), data)
    b = fit(LearnerConfig(eta=30, seed=9), data)
    assert a.to_dict() == b.to_dict()
    assert np.array_equal(np.array(a.share_trace), np.array(b.share_trace))


def test_fit_accepts_pairset_and_list_equally():
    data = synthetic(300)
    a = fit(LearnerConfig(eta=10), data, make_rng(2))
    b = fit(LearnerConfig(eta=10), data.to_pairs(), make_rng(2))
    assert a.to_dict() == b.to_dict()


def test_recovers_cue_order_single_run():
    s = fit(LearnerConfig(epsilon=0.1, phi=0.1, eta=100), synthetic(1000, seed=21), make_rng(21))
    shares = s.importance_shares()
    assert list(np.argsort(-shares)) == [0, 1, 2, 3]


def test_state_round_trip():
    s = fit(LearnerConfig(eta=5), synthetic(100), make_rng(0))
    t = LearnerState.from_dict(s.to_dict())
    assert t.to_dict() == s.to_dict()
