"""
Drawing trees from cue posteriors
=================================

A proposal is a cue order plus a sign per cue. Orders come from a
Plackett-Luce draw: pick a cue with probability proportional to its
weight, remove it, repeat.
"""

import numpy as np

from abcttb import make_rng, sample_order

rng = make_rng(1)

# %%
# With weights .8, .6 and .2 the first cue is picked half of the time.
weights = (0.8, 0.6, 0.2)
first = [sample_order(weights, rng)[0] for _ in range(20_000)]
print("top-node frequencies:", np.bincount(first, minlength=3) / len(first))
print("expected:            ", np.array(weights) / sum(weights))

# %%
# Whole orders are less concentrated than the top node suggests.
orders = [sample_order(weights, rng) for _ in range(20_000)]
values, counts = np.unique(orders, axis=0, return_counts=True)
for o, c in sorted(zip(map(tuple, values), counts), key=lambda t: -t[1]):
    print(tuple(int(i) for i in o), round(c / len(orders), 3))
