"""Comparison models: validity-ordered Take The Best and a small Gini CART."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .core import (Direction, LexTree, PairedComparison, Pairs, Prediction,
                   as_pairset, evaluate_tree, first_decisions)
from .errors import ContractViolation


@dataclass(frozen=True)
class ClassicTTB:
    order: tuple
    directions: tuple
    validities: tuple

    @property
    def tree(self) -> LexTree:
        return LexTree(self.order, self.directions)


def fit_ttb(pairs: Pairs) -> ClassicTTB:
    """Order cues by classic validity, flipping cues whose raw validity is below one half."""
    ps = as_pairset(pairs)
    if len(ps) == 0:
        raise ContractViolation("cannot fit TTB on an empty set of pairs")
    k = ps.k
    validities = np.full(k, 0.5)
    directions = np.ones(k, dtype=int)
    agree = ps.diffs == (2 * ps.outcome[:, None] - 1)
    for i in range(k):
        disc = ps.diffs[:, i] != 0
        n_disc = np.count_nonzero(disc)
        if n_disc == 0:
            continue
        raw = np.count_nonzero(agree[disc, i]) / n_disc
        if raw >= 0.5:
            validities[i] = raw
        else:
            validities[i] = 1.0 - raw
            directions[i] = -1
    # Stable sort keeps ascending cue index among equal validities.
    order = np.argsort(-validities, kind="stable")
    return ClassicTTB(tuple(int(i) for i in order),
                      tuple(Direction(int(d)) for d in directions),
                      tuple(float(v) for v in validities))


def predict_ttb(model: ClassicTTB, pair: PairedComparison) -> Prediction:
    return evaluate_tree(model.tree, pair)


def ttb_accuracy(model: ClassicTTB, pairs: Pairs) -> float:
    """Accuracy on ``pairs`` with guesses scored 0.5."""
    ps = as_pairset(pairs)
    if len(ps) == 0:
        raise ContractViolation("cannot score an empty set of pairs")
    _, vote = first_decisions(model.order, np.asarray(model.directions, dtype=np.int8), ps.diffs)
    credit = np.where(vote == 0, 0.5, (vote > 0) == (ps.outcome == 1))
    return float(credit.mean())


@dataclass(frozen=True)
class CartLeaf:
    label: int
    proportion: float  # fraction of outcome-1 training pairs in the leaf
    n: int


@dataclass(frozen=True)
class CartSplit:
    cue: int
    threshold: float
    left: "CartNode"   # diffs[cue] <= threshold
    right: "CartNode"


CartNode = Union[CartLeaf, CartSplit]


@dataclass(frozen=True)
class CartTree:
    root: CartNode
    k: int
    max_depth: int

    def depth(self) -> int:
        def walk(node):
            if isinstance(node, CartLeaf):
                return 0
            return 1 + max(walk(node.left), walk(node.right))
        return walk(self.root)


THRESHOLDS = (-0.5, 0.5)


def _gini(n1, n):
    if n == 0:
        return 0.0
    p = n1 / n
    return 2.0 * p * (1.0 - p)


def _leaf(y):
    n = len(y)
    p = float(y.mean()) if n else 0.5
    return CartLeaf(1 if p >= 0.5 else 0, p, n)


def _grow(x, y, depth, max_depth, min_leaf):
    n = len(y)
    n1 = int(y.sum())
    if depth >= max_depth or n1 == 0 or n1 == n or n < 2 * min_leaf:
        return _leaf(y)
    parent = _gini(n1, n)
    best = None
    for cue in range(x.shape[1]):
        col = x[:, cue]
        for t in THRESHOLDS:
            mask = col <= t
            nl = int(mask.sum())
            nr = n - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            l1 = int(y[mask].sum())
            impurity = (nl * _gini(l1, nl) + nr * _gini(n1 - l1, nr)) / n
            if impurity < parent - 1e-12 and (best is None or impurity < best[0] - 1e-12):
                best = (impurity, cue, t, mask)
    if best is None:
        return _leaf(y)
    _, cue, t, mask = best
    return CartSplit(cue, t,
                     _grow(x[mask], y[mask], depth + 1, max_depth, min_leaf),
                     _grow(x[~mask], y[~mask], depth + 1, max_depth, min_leaf))


def fit_cart(pairs: Pairs, max_depth: int = 10, min_leaf: int = 5) -> CartTree:
    """Greedy Gini tree on the pairs plus every mirrored pair."""
    ps = as_pairset(pairs)
    if len(ps) == 0:
        raise ContractViolation("cannot fit CART on an empty set of pairs")
    if max_depth < 0 or min_leaf < 1:
        raise ContractViolation("max_depth must be >= 0 and min_leaf >= 1")
    x = np.concatenate([ps.diffs, -ps.diffs])
    y = np.concatenate([ps.outcome, 1 - ps.outcome])
    return CartTree(_grow(x, y, 0, max_depth, min_leaf), ps.k, max_depth)


def _route(node: CartNode, diffs) -> CartLeaf:
    while isinstance(node, CartSplit):
        node = node.left if diffs[node.cue] <= node.threshold else node.right
    return node


def cart_probability(model: CartTree, diffs) -> float:
    """Probability that A wins, symmetrised over the pair and its mirror.

    Averaging ``p(x)`` with ``1 - p(-x)`` makes the prediction for a mirrored
    pair exactly the complement, which a depth-limited greedy tree alone
    does not guarantee.
    """
    diffs = tuple(diffs)
    if len(diffs) != model.k:
        raise ContractViolation(f"model has {model.k} cues but pair has {len(diffs)}")
    forward = _route(model.root, diffs).proportion
    backward = _route(model.root, tuple(-d for d in diffs)).proportion
    return 0.5 * (forward + 1.0 - backward)


def predict_cart(model: CartTree, pair: Union[PairedComparison, tuple]) -> int:
    """Predicted outcome; an even split (probability exactly 0.5) returns 1."""
    diffs = pair.diffs if isinstance(pair, PairedComparison) else pair
    return 1 if cart_probability(model, diffs) >= 0.5 else 0


def cart_accuracy(model: CartTree, pairs: Pairs) -> float:
    """Accuracy with an even split scored as a guess (0.5)."""
    ps = as_pairset(pairs)
    if len(ps) == 0:
        raise ContractViolation("cannot score an empty set of pairs")
    cache = {}
    credit = np.empty(len(ps))
    for j, (d, y) in enumerate(zip(map(tuple, ps.diffs.tolist()), ps.outcome.tolist())):
        p = cache.get(d)
        if p is None:
            p = cache[d] = cart_probability(model, d)
        if abs(p - 0.5) < 1e-12:
            credit[j] = 0.5
        else:
            credit[j] = float((p > 0.5) == (y == 1))
    return float(credit.mean())
