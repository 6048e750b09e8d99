"""
How much search does a tolerance cost?
======================================

Tight tolerances reject most proposals. This sweeps epsilon at a fixed
subsample fraction and reports proposals spent and in-sample accuracy.
"""

import numpy as np

from abcttb.experiments import run_tradeoff
from abcttb.learn import LearnerConfig

eps = [0.1, 0.3, 0.5, 0.7, 0.9]
res = run_tradeoff(eps, [0.1], LearnerConfig(eta=50, max_proposals=50_000), replicates=5)

print("epsilon  proposals    mcp   mcp/proposal")
for e in eps:
    n = res.cell_median(3, e, 0.1)
    mcp = res.cell_median(4, e, 0.1)
    print(f"{e:7.1f}  {n:9.0f}  {mcp:.3f}   {mcp / n:.2e}")

# %%
# Past a point, loosening epsilon saves little effort but costs accuracy.
censored = int(np.sum([r[6] for r in res.rows]))
print("censored runs:", censored)
