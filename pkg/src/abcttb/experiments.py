"""Recovery, real-data comparison and effort/accuracy trade-off experiments.

Each procedure is a deterministic function of its inputs and a master seed.
Replicate ``r`` (and grid cell ``c``) gets its own generator derived from
``(master_seed, experiment tag, c, r)``, so results never depend on the
order in which replicates run.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence

import numpy as np

from .baselines import cart_accuracy, fit_cart, fit_ttb, ttb_accuracy
from .data import ObjectTable, build_pairs, split_objects
from .errors import AcceptanceStall, DegenerateSplit
from .learn import LearnerConfig, fit
from .predict import DEFAULT_OMEGA, mean_correct_predictions
from .proposal import derive_seed, make_rng
from .synth import SynthConfig, generate

_RECOVERY, _COMPARISON, _TRADEOFF = 1, 2, 3
MODELS = ("ABC-TTB", "TTB", "CART")


def replicate_rng(master_seed: int, *index: int) -> np.random.Generator:
    return make_rng(derive_seed(master_seed, *index))


@dataclass
class RecoveryResult:
    rows: List[tuple] = field(default_factory=list)  # (replicate, acceptance, cue, share)
    final_direction_means: List[np.ndarray] = field(default_factory=list)
    n_proposals: List[int] = field(default_factory=list)

    def shares(self) -> np.ndarray:
        """Array ``[replicate, acceptance - 1, cue]`` of importance shares."""
        reps = 1 + max(r[0] for r in self.rows)
        acc = max(r[1] for r in self.rows)
        k = 1 + max(r[2] for r in self.rows)
        out = np.empty((reps, acc, k))
        for r, a, c, s in self.rows:
            out[r, a - 1, c] = s
        return out

    def final_shares(self) -> np.ndarray:
        return self.shares()[:, -1, :]


def run_recovery(n: int = 1000, learner: LearnerConfig = LearnerConfig(), replicates: int = 100,
                 master_seed: int = 0, synth: Optional[SynthConfig] = None) -> RecoveryResult:
    """Fit the learner on fresh synthetic TTB data once per replicate and keep its traces."""
    synth = replace(synth or SynthConfig(), n=n)
    result = RecoveryResult()
    for rep in range(replicates):
        rng = replicate_rng(master_seed, _RECOVERY, rep)
        pairs = generate(synth, rng)
        try:
            state = fit(learner, pairs, rng)
        except AcceptanceStall as exc:
            exc.replicate = rep
            exc.args = (f"replicate {rep}: {exc.args[0]}",)
            raise
        for a, shares in enumerate(state.share_trace, start=1):
            for cue, s in enumerate(shares):
                result.rows.append((rep, a, cue, float(s)))
        result.final_direction_means.append(state.direction_means())
        result.n_proposals.append(state.proposed)
    return result


@dataclass
class ComparisonResult:
    rows: List[tuple] = field(default_factory=list)      # (fraction, replicate, model, accuracy)
    warnings: List[tuple] = field(default_factory=list)  # (fraction, replicate, reason)

    def mean_by(self, model: str) -> dict:
        out = {}
        for frac in sorted({r[0] for r in self.rows}):
            vals = [r[3] for r in self.rows if r[0] == frac and r[2] == model]
            if vals:
                out[frac] = float(np.mean(vals))
        return out


@dataclass(frozen=True)
class CartParams:
    max_depth: int = 10
    min_leaf: int = 5


def run_comparison(table: ObjectTable, fractions: Sequence[float], replicates: int = 20,
                   learner: LearnerConfig = LearnerConfig(epsilon=0.5, phi=0.1),
                   omega: int = DEFAULT_OMEGA, cart: CartParams = CartParams(),
                   master_seed: int = 0) -> ComparisonResult:
    """Out-of-sample accuracy of ABC-TTB, classic TTB and CART over object-wise splits."""
    result = ComparisonResult()
    for fi, frac in enumerate(fractions):
        for rep in range(replicates):
            rng = replicate_rng(master_seed, _COMPARISON, fi, rep)
            try:
                train, test = split_objects(table, frac, rng)
            except DegenerateSplit as exc:
                result.warnings.append((float(frac), rep, f"DegenerateSplit: {exc}"))
                continue
            train_pairs = build_pairs(train, return_ties=True)[0]
            test_pairs = build_pairs(test, return_ties=True)[0]
            if len(train_pairs) == 0 or len(test_pairs) == 0:
                result.warnings.append((float(frac), rep, "no untied pairs on one side"))
                continue
            state = fit(learner, train_pairs, rng)
            abc = mean_correct_predictions(state, test_pairs, omega, rng)
            ttb = ttb_accuracy(fit_ttb(train_pairs), test_pairs)
            tree = cart_accuracy(fit_cart(train_pairs, cart.max_depth, cart.min_leaf), test_pairs)
            for model, acc in zip(MODELS, (abc, ttb, tree)):
                result.rows.append((float(frac), rep, model, float(acc)))
    return result


@dataclass
class TradeoffResult:
    # (epsilon, phi, replicate, n_proposals, mcp, mcp_per_proposal, censored)
    rows: List[tuple] = field(default_factory=list)

    def cell_median(self, column: int, epsilon: float, phi: float,
                    include_censored: bool = False) -> float:
        vals = [r[column] for r in self.rows
                if r[0] == epsilon and r[1] == phi and (include_censored or not r[6])]
        return float(np.median(vals)) if vals else float("nan")

    def cell_mean(self, column: int, epsilon: float, phi: float,
                  include_censored: bool = False) -> float:
        vals = [r[column] for r in self.rows
                if r[0] == epsilon and r[1] == phi and (include_censored or not r[6])]
        return float(np.mean(vals)) if vals else float("nan")


def run_tradeoff(epsilons: Sequence[float], phis: Sequence[float],
                 learner: LearnerConfig = LearnerConfig(max_proposals=200_000),
                 replicates: int = 20, master_seed: int = 0, n: int = 1000,
                 omega: int = DEFAULT_OMEGA) -> TradeoffResult:
    """Proposal counts and in-sample MCP over an epsilon x phi grid.

    ``learner.max_proposals`` is the per-cell cap; a stalled fit is kept as a
    censored row with ``n_proposals`` equal to the cap and MCP measured on
    the partially learned state.
    """
    result = TradeoffResult()
    synth = SynthConfig(n=n)
    for ei, eps in enumerate(epsilons):
        for pi, phi in enumerate(phis):
            cfg = replace(learner, epsilon=float(eps), phi=float(phi))
            for rep in range(replicates):
                rng = replicate_rng(master_seed, _TRADEOFF, ei, pi, rep)
                pairs = generate(synth, rng)
                censored = False
                try:
                    state = fit(cfg, pairs, rng)
                except AcceptanceStall as exc:
                    state, censored = exc.state, True
                n_prop = cfg.max_proposals if censored else state.proposed
                mcp = mean_correct_predictions(state, pairs, omega, rng)
                result.rows.append((float(eps), float(phi), rep, int(n_prop), mcp,
                                    mcp / n_prop, censored))
    return result
