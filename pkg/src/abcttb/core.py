"""Domain types and lexicographic evaluation shared by the rest of the package.

A paired comparison is stored as a vector of per-cue differences in
{-1, 0, +1} (cue value of object A minus object B) and a binary outcome,
1 when A scores higher on the criterion. A lexicographic tree is a total
cue order plus a direction sign per cue; the first cue in the order with a
nonzero difference decides the comparison.

Hot loops never touch the per-pair dataclasses. They work on a
:class:`PairSet`, which holds the same data as two numpy arrays.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import ContractViolation


class Choice(str, enum.Enum):
    A = "A"
    B = "B"
    GUESS = "Guess"


class Direction(enum.IntEnum):
    POSITIVE = 1
    NEGATIVE = -1


@dataclass(frozen=True)
class PairedComparison:
    diffs: tuple
    outcome: int

    def __post_init__(self):
        diffs = tuple(int(d) for d in self.diffs)
        if any(d not in (-1, 0, 1) for d in diffs):
            raise ContractViolation(f"diffs must lie in {{-1, 0, 1}}, got {diffs}")
        if int(self.outcome) not in (0, 1):
            raise ContractViolation(f"outcome must be 0 or 1, got {self.outcome}")
        object.__setattr__(self, "diffs", diffs)
        object.__setattr__(self, "outcome", int(self.outcome))

    @property
    def k(self) -> int:
        return len(self.diffs)

    def mirrored(self) -> "PairedComparison":
        """The same comparison with A and B swapped."""
        return PairedComparison(tuple(-d for d in self.diffs), 1 - self.outcome)


@dataclass(frozen=True)
class LexTree:
    order: tuple
    directions: tuple

    def __post_init__(self):
        order = tuple(int(i) for i in self.order)
        directions = tuple(Direction(int(s)) for s in self.directions)
        k = len(directions)
        if len(order) != k or sorted(order) != list(range(k)):
            raise ContractViolation(
                f"order {order} is not a permutation of 0..{k - 1}")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "directions", directions)

    @property
    def k(self) -> int:
        return len(self.order)

    @property
    def signs(self) -> np.ndarray:
        return np.asarray(self.directions, dtype=np.int8)


@dataclass(frozen=True)
class BetaCount:
    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ContractViolation(
                f"Beta counts must be positive, got ({self.alpha}, {self.beta})")

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)


@dataclass(frozen=True)
class CuePosterior:
    importance: BetaCount = BetaCount()
    direction: BetaCount = BetaCount()


@dataclass(frozen=True)
class Prediction:
    choice: Choice
    deciding_cue: Optional[int] = None

    def __post_init__(self):
        if (self.deciding_cue is None) != (self.choice is Choice.GUESS):
            raise ContractViolation(
                "deciding_cue must be given exactly when the choice is not a guess")


@dataclass(frozen=True)
class EvalReport:
    n_pairs: int
    score: float
    correct_decisions: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ContractViolation(f"score {self.score} outside [0, 1]")


class PairSet:
    """Array view of a list of paired comparisons.

    ``diffs`` is an ``(n, K)`` int8 array and ``outcome`` an ``(n,)`` int8
    array of zeros and ones.
    """

    __slots__ = ("diffs", "outcome")

    def __init__(self, diffs, outcome, validate=True):
        diffs = np.asarray(diffs, dtype=np.int8)
        outcome = np.asarray(outcome, dtype=np.int8)
        if diffs.ndim != 2 or outcome.ndim != 1 or diffs.shape[0] != outcome.shape[0]:
            raise ContractViolation(
                f"expected (n, K) diffs and (n,) outcomes, got {diffs.shape} and {outcome.shape}")
        if validate:
            if diffs.size and (diffs.min() < -1 or diffs.max() > 1):
                raise ContractViolation("diffs must lie in {-1, 0, 1}")
            if outcome.size and not np.isin(outcome, (0, 1)).all():
                raise ContractViolation("outcomes must be 0 or 1")
        self.diffs = diffs
        self.outcome = outcome

    @classmethod
    def from_pairs(cls, pairs: Iterable[PairedComparison], k: Optional[int] = None) -> "PairSet":
        pairs = list(pairs)
        if not pairs:
            return cls(np.zeros((0, k or 0), dtype=np.int8), np.zeros(0, dtype=np.int8))
        width = pairs[0].k
        if any(p.k != width for p in pairs):
            raise ContractViolation("all pairs must have the same number of cues")
        return cls([p.diffs for p in pairs], [p.outcome for p in pairs], validate=False)

    def __len__(self) -> int:
        return self.diffs.shape[0]

    @property
    def k(self) -> int:
        return self.diffs.shape[1]

    def __getitem__(self, idx) -> "PairSet":
        if isinstance(idx, (int, np.integer)):
            idx = [idx]
        return PairSet(self.diffs[idx], self.outcome[idx], validate=False)

    def to_pairs(self) -> list:
        return [PairedComparison(tuple(d), int(y))
                for d, y in zip(self.diffs.tolist(), self.outcome.tolist())]

    def mirrored(self) -> "PairSet":
        return PairSet(-self.diffs, 1 - self.outcome, validate=False)


Pairs = Union[PairSet, Sequence[PairedComparison]]


def as_pairset(pairs: Pairs) -> PairSet:
    if isinstance(pairs, PairSet):
        return pairs
    return PairSet.from_pairs(pairs)


def evaluate_tree(tree: LexTree, pair: PairedComparison) -> Prediction:
    """Walk the cue order; the first discriminating cue decides."""
    if tree.k != pair.k:
        raise ContractViolation(f"tree has {tree.k} cues but pair has {pair.k}")
    for cue in tree.order:
        d = pair.diffs[cue]
        if d != 0:
            choice = Choice.A if d * tree.directions[cue] > 0 else Choice.B
            return Prediction(choice, cue)
    return Prediction(Choice.GUESS)


def first_decisions(order, signs, diffs: np.ndarray):
    """Vectorised lexicographic walk over many pairs.

    Returns ``(deciding_cue, vote)``: the index of the first discriminating
    cue per pair (-1 when none does) and the signed vote, +1 for A, -1 for
    B and 0 for a guess.
    """
    order = np.asarray(order)
    oriented = diffs[:, order] * np.asarray(signs, dtype=np.int8)[order]
    nonzero = oriented != 0
    pos = nonzero.argmax(axis=1)
    rows = np.arange(diffs.shape[0])
    vote = oriented[rows, pos]
    cue = np.where(vote != 0, order[pos], -1)
    return cue, vote


def score_arrays(order, signs, pairs: PairSet, count_all_decisions=False):
    """Score a tree on a pair set; returns ``(score, correct_decisions)``."""
    n = len(pairs)
    cue, vote = first_decisions(order, signs, pairs.diffs)
    decided = vote != 0
    correct = decided & ((vote > 0) == (pairs.outcome == 1))
    score = (np.count_nonzero(correct) + 0.5 * (n - np.count_nonzero(decided))) / n
    counted = decided if count_all_decisions else correct
    per_cue = np.bincount(cue[counted], minlength=pairs.k)
    return score, per_cue


def score_subsample(tree: LexTree, pairs: Pairs, count_all_decisions: bool = False) -> EvalReport:
    """Accuracy of ``tree`` on ``pairs`` with guesses worth half a point.

    ``correct_decisions[i]`` counts pairs that cue ``i`` decided correctly, or
    every pair it decided when ``count_all_decisions`` is set.
    """
    ps = as_pairset(pairs)
    if len(ps) == 0:
        raise ContractViolation("cannot score an empty set of pairs")
    if ps.k != tree.k:
        raise ContractViolation(f"tree has {tree.k} cues but pairs have {ps.k}")
    score, per_cue = score_arrays(tree.order, tree.signs, ps, count_all_decisions)
    return EvalReport(len(ps), float(score), per_cue)


def importance_means(posteriors: Sequence[CuePosterior]) -> np.ndarray:
    return np.array([p.importance.mean for p in posteriors])


def shares_from_counts(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    means = alpha / (alpha + beta)
    return means / means.sum()


def importance_shares(posteriors: Sequence[CuePosterior]) -> np.ndarray:
    """Posterior-mean importance of each cue divided by the sum over cues.

    This is the probability that the cue is drawn as the top node when the
    sampled weights sit at their means.
    """
    if len(posteriors) == 0:
        raise ContractViolation("need at least one cue")
    means = importance_means(posteriors)
    return means / means.sum()
