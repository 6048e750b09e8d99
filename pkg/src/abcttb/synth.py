"""Paired comparisons generated by a known Take The Best environment.

Every cue independently draws (diff 0) with probability ``p_draw``, or wins
(+1) or loses (-1). The first informative cue that discriminates sets the
outcome; if all informative cues draw, the outcome is a fair coin. Cues past
``k_informative`` carry no information.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .core import LexTree, PairSet, first_decisions
from .errors import ContractViolation
from .proposal import make_rng


@dataclass(frozen=True)
class SynthConfig:
    n: int = 1000
    k_cues: int = 4
    k_informative: int = 3
    p_draw: float = 0.5
    p_win: float = 0.25
    p_loss: float = 0.25
    seed: int = 0
    # Per-cue True flips the true direction of that informative cue.
    flip_mask: Optional[Tuple[bool, ...]] = field(default=None)

    def __post_init__(self):
        if self.n < 1:
            raise ContractViolation(f"n must be positive, got {self.n}")
        if not 1 <= self.k_informative <= self.k_cues:
            raise ContractViolation("need 1 <= k_informative <= k_cues")
        probs = (self.p_draw, self.p_win, self.p_loss)
        if min(probs) < 0 or abs(sum(probs) - 1.0) > 1e-9:
            raise ContractViolation(f"p_draw + p_win + p_loss must be 1, got {probs}")
        if self.flip_mask is not None and len(self.flip_mask) != self.k_cues:
            raise ContractViolation("flip_mask needs one entry per cue")

    @property
    def signs(self) -> np.ndarray:
        if self.flip_mask is None:
            return np.ones(self.k_cues, dtype=np.int8)
        return np.where(np.asarray(self.flip_mask, dtype=bool), -1, 1).astype(np.int8)

    def generating_tree(self) -> LexTree:
        """The true tree, with uninformative cues appended after the informative ones."""
        return LexTree(tuple(range(self.k_cues)), tuple(self.signs.tolist()))

    def bayes_accuracy(self) -> float:
        return 1.0 - 0.5 * self.p_draw ** self.k_informative


def generate(config: SynthConfig = SynthConfig(), rng=None) -> PairSet:
    rng = make_rng(config.seed if rng is None else rng)
    n, k = config.n, config.k_cues
    diffs = rng.choice(np.array([0, 1, -1], dtype=np.int8), size=(n, k),
                       p=[config.p_draw, config.p_win, config.p_loss])
    informative = np.arange(config.k_informative)
    _, vote = first_decisions(informative, config.signs[:config.k_informative],
                              diffs[:, :config.k_informative])
    coin = rng.integers(0, 2, size=n)
    outcome = np.where(vote > 0, 1, np.where(vote < 0, 0, coin)).astype(np.int8)
    return PairSet(diffs, outcome, validate=False)
