"""Sampling proposal trees from Beta posteriors over cue importance and direction."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .core import CuePosterior, Direction, LexTree
from .errors import ContractViolation


def make_rng(seed) -> np.random.Generator:
    """Deterministic generator from a 64-bit integer seed (or a SeedSequence)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def derive_seed(master_seed: int, *index: int) -> np.random.SeedSequence:
    """Independent child seed for a replicate/cell, fixed by the master seed and index."""
    return np.random.SeedSequence(int(master_seed), spawn_key=tuple(int(i) for i in index))


def _counts(posteriors: Sequence[CuePosterior], which: str):
    if len(posteriors) == 0:
        raise ContractViolation("need at least one cue posterior")
    counts = [getattr(p, which) for p in posteriors]
    return (np.array([c.alpha for c in counts], dtype=float),
            np.array([c.beta for c in counts], dtype=float))


def sample_importance_weights(posteriors: Sequence[CuePosterior], rng) -> np.ndarray:
    alpha, beta = _counts(posteriors, "importance")
    return rng.beta(alpha, beta)


def order_from_weights(weights: np.ndarray, rng) -> np.ndarray:
    # Draw without replacement, renormalising over the cues still unchosen.
    k = len(weights)
    remaining = list(range(k))
    w = [float(x) for x in weights]
    order = np.empty(k, dtype=np.intp)
    for pos in range(k - 1):
        total = sum(w[i] for i in remaining)
        u = rng.random() * total
        acc = 0.0
        pick = len(remaining) - 1
        for j, i in enumerate(remaining):
            acc += w[i]
            if u < acc:
                pick = j
                break
        order[pos] = remaining.pop(pick)
    order[k - 1] = remaining[0]
    return order


def sample_order(weights, rng) -> tuple:
    """Plackett-Luce permutation: cue ``i`` goes first with probability ``w_i / sum(w)``."""
    weights = np.asarray(weights, dtype=float)
    if weights.ndim != 1 or weights.size == 0:
        raise ContractViolation("weights must be a non-empty vector")
    if not np.all(weights > 0) or not np.all(np.isfinite(weights)):
        raise ContractViolation(f"weights must be positive and finite, got {weights}")
    return tuple(int(i) for i in order_from_weights(weights, rng))


def signs_from_counts(alpha: np.ndarray, beta: np.ndarray, rng) -> np.ndarray:
    # Two stages: p ~ Beta, then sign ~ Bernoulli(p).
    p = rng.beta(alpha, beta)
    return np.where(rng.random(p.shape[0]) < p, 1, -1).astype(np.int8)


def sample_directions(posteriors: Sequence[CuePosterior], rng) -> tuple:
    alpha, beta = _counts(posteriors, "direction")
    return tuple(Direction(int(s)) for s in signs_from_counts(alpha, beta, rng))


def propose_arrays(imp_alpha, imp_beta, dir_alpha, dir_beta, rng):
    """Array-level proposal used by the learner; returns ``(order, signs)``."""
    weights = rng.beta(imp_alpha, imp_beta)
    # Beta draws can underflow to exactly 0 for extreme counts.
    weights = np.maximum(weights, np.finfo(float).tiny)
    order = order_from_weights(weights, rng)
    signs = signs_from_counts(dir_alpha, dir_beta, rng)
    return order, signs


def propose_tree(posteriors: Sequence[CuePosterior], rng) -> LexTree:
    imp_a, imp_b = _counts(posteriors, "importance")
    dir_a, dir_b = _counts(posteriors, "direction")
    order, signs = propose_arrays(imp_a, imp_b, dir_a, dir_b, rng)
    return LexTree(tuple(order.tolist()), tuple(signs.tolist()))
