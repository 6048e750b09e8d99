"""The ABC-TTB learner.

Each iteration draws a fresh subsample of the training pairs, proposes a
tree from the current posteriors and scores it on the subsample. A tree
whose error ``1 - score`` is within the tolerance ``epsilon`` is accepted
and reinforces the cues that decided correctly. Rejected trees change
nothing. The loop stops after ``eta`` acceptances.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import List, Optional

import numpy as np

from .core import (BetaCount, CuePosterior, EvalReport, LexTree, Pairs, PairSet,
                   as_pairset, score_arrays, shares_from_counts)
from .errors import AcceptanceStall, ContractViolation, EmptyTraining
from .proposal import make_rng, propose_arrays

DEFAULT_MAX_PROPOSALS = 10_000_000


@dataclass(frozen=True)
class LearnerConfig:
    epsilon: float = 0.1
    phi: float = 0.1
    eta: int = 100
    max_proposals: int = DEFAULT_MAX_PROPOSALS
    count_all_decisions: bool = False
    # Each accepted tree adds one trial per cue, split into count / m
    # successes and 1 - count / m failures. Off adds the raw count.
    normalize_increment: bool = True
    # Subsample pairs a cue did not decide correctly count as importance
    # failures. Off gives importance Betas of the form B(1 + successes, 1).
    importance_failures: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise ContractViolation(f"epsilon must satisfy 0 <= epsilon < 1, got {self.epsilon}")
        if not 0.0 < self.phi <= 1.0:
            raise ContractViolation(f"phi must satisfy 0 < phi <= 1, got {self.phi}")
        if int(self.eta) != self.eta or self.eta < 1:
            raise ContractViolation(f"eta must be a positive integer, got {self.eta}")
        if int(self.max_proposals) != self.max_proposals or self.max_proposals < self.eta:
            raise ContractViolation(
                f"max_proposals must be an integer >= eta, got {self.max_proposals}")

    def subsample_size(self, n_pairs: int) -> int:
        # The small slack stops float noise such as 0.1 * 1000 = 100.00000000000001
        # from rounding up to an extra pair.
        return max(1, math.ceil(self.phi * n_pairs - 1e-9))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class LearnerState:
    """Beta pseudo-counts per cue plus bookkeeping for one learning chain."""

    imp_alpha: np.ndarray
    imp_beta: np.ndarray
    dir_alpha: np.ndarray
    dir_beta: np.ndarray
    accepted: int = 0
    proposed: int = 0
    share_trace: List[np.ndarray] = field(default_factory=list)
    _accept_flags: bytearray = field(default_factory=bytearray, repr=False)

    @classmethod
    def prior(cls, k: int) -> "LearnerState":
        return cls(np.ones(k), np.ones(k), np.ones(k), np.ones(k))

    @classmethod
    def from_posteriors(cls, posteriors) -> "LearnerState":
        return cls(np.array([p.importance.alpha for p in posteriors], dtype=float),
                   np.array([p.importance.beta for p in posteriors], dtype=float),
                   np.array([p.direction.alpha for p in posteriors], dtype=float),
                   np.array([p.direction.beta for p in posteriors], dtype=float))

    @property
    def k(self) -> int:
        return self.imp_alpha.shape[0]

    @property
    def posteriors(self) -> List[CuePosterior]:
        return [CuePosterior(BetaCount(float(ia), float(ib)), BetaCount(float(da), float(db)))
                for ia, ib, da, db in zip(self.imp_alpha, self.imp_beta,
                                          self.dir_alpha, self.dir_beta)]

    @property
    def acceptance_trace(self) -> np.ndarray:
        return np.frombuffer(bytes(self._accept_flags), dtype=np.uint8).astype(bool)

    def importance_shares(self) -> np.ndarray:
        return shares_from_counts(self.imp_alpha, self.imp_beta)

    def direction_means(self) -> np.ndarray:
        return self.dir_alpha / (self.dir_alpha + self.dir_beta)

    def copy(self) -> "LearnerState":
        return LearnerState(self.imp_alpha.copy(), self.imp_beta.copy(),
                            self.dir_alpha.copy(), self.dir_beta.copy(),
                            self.accepted, self.proposed, list(self.share_trace),
                            bytearray(self._accept_flags))

    def to_dict(self) -> dict:
        return {
            "importance_alpha": self.imp_alpha.tolist(),
            "importance_beta": self.imp_beta.tolist(),
            "direction_alpha": self.dir_alpha.tolist(),
            "direction_beta": self.dir_beta.tolist(),
            "accepted": self.accepted,
            "proposed": self.proposed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LearnerState":
        return cls(np.asarray(d["importance_alpha"], dtype=float),
                   np.asarray(d["importance_beta"], dtype=float),
                   np.asarray(d["direction_alpha"], dtype=float),
                   np.asarray(d["direction_beta"], dtype=float),
                   int(d.get("accepted", 0)), int(d.get("proposed", 0)))


def accept_test(report: EvalReport, epsilon: float) -> bool:
    """Accept when the distance ``1 - score`` is at most ``epsilon`` (inclusive)."""
    return (1.0 - report.score) <= epsilon


def _apply(state: LearnerState, signs, correct, n_pairs, config: LearnerConfig):
    correct = np.asarray(correct, dtype=float)
    if config.normalize_increment:
        inc = correct / n_pairs
        trials = 1.0
    else:
        inc = correct
        trials = float(n_pairs)
    state.imp_alpha += inc
    if config.importance_failures:
        state.imp_beta += trials - inc
    positive = np.asarray(signs) > 0
    state.dir_alpha += np.where(positive, inc, 0.0)
    state.dir_beta += np.where(positive, 0.0, inc)
    state.accepted += 1
    state.share_trace.append(state.importance_shares())


def reinforce(state: LearnerState, tree: LexTree, report: EvalReport,
              config: Optional[LearnerConfig] = None) -> LearnerState:
    """Return a new state with the accepted tree's successes added.

    With raw increments cue ``i`` gains ``c_i = report.correct_decisions[i]``
    importance successes and ``c_i`` pseudo-counts on the side of its
    direction Beta matching its sign in ``tree``; with
    ``importance_failures`` the other ``n_pairs - c_i`` subsample pairs are
    added as importance failures. ``normalize_increment`` divides every
    increment by ``n_pairs``, so one accepted tree is worth one trial.
    """
    config = config or LearnerConfig()
    if tree.k != state.k:
        raise ContractViolation(f"tree has {tree.k} cues but state has {state.k}")
    new = state.copy()
    _apply(new, tree.signs, report.correct_decisions, report.n_pairs, config)
    return new


def step(state: LearnerState, pairs: PairSet, m: int, config: LearnerConfig, rng) -> bool:
    """One proposal: subsample, propose, score, and reinforce if accepted.

    Updates ``state`` in place and returns whether the proposal was accepted.
    """
    n = len(pairs)
    if m >= n:
        sub = pairs
    else:
        idx = rng.choice(n, size=m, replace=False)
        sub = PairSet(pairs.diffs[idx], pairs.outcome[idx], validate=False)
    order, signs = propose_arrays(state.imp_alpha, state.imp_beta,
                                  state.dir_alpha, state.dir_beta, rng)
    score, correct = score_arrays(order, signs, sub, config.count_all_decisions)
    state.proposed += 1
    ok = (1.0 - score) <= config.epsilon
    state._accept_flags.append(ok)
    if ok:
        _apply(state, signs, correct, len(sub), config)
    return ok


def fit(config: LearnerConfig, training_pairs: Pairs, rng=None,
        state: Optional[LearnerState] = None) -> LearnerState:
    """Run the accept/reject loop until ``config.eta`` trees are accepted.

    ``rng`` defaults to a generator seeded from ``config.seed``. Raises
    :class:`AcceptanceStall` (carrying the partial state) when
    ``config.max_proposals`` proposals pass without enough acceptances.
    """
    pairs = as_pairset(training_pairs)
    n = len(pairs)
    if n == 0:
        raise EmptyTraining("no training pairs")
    rng = make_rng(config.seed if rng is None else rng)
    state = LearnerState.prior(pairs.k) if state is None else state.copy()
    if state.k != pairs.k:
        raise ContractViolation(f"state has {state.k} cues but pairs have {pairs.k}")
    m = config.subsample_size(n)
    target = state.accepted + config.eta
    proposed = 0
    while state.accepted < target:
        if proposed >= config.max_proposals:
            raise AcceptanceStall(
                f"only {state.accepted} of {target} trees accepted after "
                f"{proposed} proposals (epsilon={config.epsilon}, phi={config.phi})",
                state=state)
        step(state, pairs, m, config, rng)
        proposed += 1
    return state
