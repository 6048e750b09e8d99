"""Ensemble predictions from a fitted learner state."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Choice, PairedComparison, Pairs, as_pairset
from .errors import ContractViolation
from .learn import LearnerState
from .proposal import make_rng

DEFAULT_OMEGA = 101
_CHUNK_CELLS = 1 << 20


@dataclass(frozen=True)
class EnsemblePrediction:
    choice: Choice
    vote_share: float
    n_trees: int


def sample_tree_batch(state: LearnerState, size, rng):
    """Draw ``size`` proposal trees at once; returns ``(orders, signs)`` arrays.

    Orders use the exponential race: sorting ``E_i / w_i`` with ``E_i``
    standard exponential yields exactly the sequential renormalised draw.
    """
    shape = (size, state.k) if np.isscalar(size) else (*size, state.k)
    w = rng.beta(state.imp_alpha, state.imp_beta, size=shape)
    w = np.maximum(w, np.finfo(float).tiny)
    orders = np.argsort(rng.standard_exponential(shape) / w, axis=-1)
    p = rng.beta(state.dir_alpha, state.dir_beta, size=shape)
    signs = np.where(rng.random(shape) < p, 1, -1).astype(np.int8)
    return orders, signs


def ensemble_votes(state: LearnerState, pairs: Pairs, omega: int, rng) -> np.ndarray:
    """Votes for A per pair out of ``omega`` trees drawn independently for each pair.

    A guess counts as half a vote for each side.
    """
    if omega < 1:
        raise ContractViolation(f"omega must be at least 1, got {omega}")
    ps = as_pairset(pairs)
    if ps.k != state.k:
        raise ContractViolation(f"state has {state.k} cues but pairs have {ps.k}")
    n, k = len(ps), ps.k
    votes = np.empty(n)
    chunk = max(1, _CHUNK_CELLS // (omega * k))
    for start in range(0, n, chunk):
        d = ps.diffs[start:start + chunk]
        orders, signs = sample_tree_batch(state, (d.shape[0], omega), rng)
        oriented = d[:, None, :] * signs
        walked = np.take_along_axis(oriented, orders, axis=-1)
        first = (walked != 0).argmax(axis=-1)
        vote = np.take_along_axis(walked, first[..., None], axis=-1)[..., 0]
        votes[start:start + chunk] = ((vote + 1) / 2).sum(axis=1)
    return votes


def _resolve(votes_a: np.ndarray, omega: int, rng):
    votes_b = omega - votes_a
    tie = votes_a == votes_b
    coin = rng.random(votes_a.shape[0]) < 0.5
    choose_a = np.where(tie, coin, votes_a > votes_b)
    share = np.maximum(votes_a, votes_b) / omega
    return choose_a, share


def predict_pair(state: LearnerState, pair: PairedComparison, omega: int = DEFAULT_OMEGA,
                 rng=None) -> EnsemblePrediction:
    """Modal choice of ``omega`` trees drawn from the posteriors.

    ``vote_share`` is the winner's fraction of the votes; exact ties are
    settled by a fair coin from ``rng``.
    """
    rng = make_rng(rng)
    votes = ensemble_votes(state, [pair], omega, rng)
    choose_a, share = _resolve(votes, omega, rng)
    return EnsemblePrediction(Choice.A if choose_a[0] else Choice.B, float(share[0]), omega)


def predict_many(state: LearnerState, pairs: Pairs, omega: int = DEFAULT_OMEGA, rng=None):
    """Ensemble predictions for many pairs; returns ``(choose_a, vote_share)`` arrays."""
    rng = make_rng(rng)
    votes = ensemble_votes(state, pairs, omega, rng)
    return _resolve(votes, omega, rng)


def mean_correct_predictions(state: LearnerState, pairs: Pairs, omega: int = DEFAULT_OMEGA,
                             rng=None) -> float:
    """Fraction of pairs whose ensemble choice matches the outcome (MCP)."""
    ps = as_pairset(pairs)
    if len(ps) == 0:
        raise ContractViolation("cannot score an empty set of pairs")
    choose_a, _ = predict_many(state, ps, omega, rng)
    return float(np.mean(choose_a == (ps.outcome == 1)))
