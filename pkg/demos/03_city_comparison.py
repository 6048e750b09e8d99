"""
ABC-TTB against classic TTB and CART
====================================

Objects from the bundled (synthetic) city table are split into training
and test sets; each model learns from training pairs only.
"""

import argparse

from abcttb.data import load_city_fixture
from abcttb.experiments import MODELS, run_comparison
from abcttb.learn import LearnerConfig

parser = argparse.ArgumentParser()
parser.add_argument("--replicates", type=int, default=5)
args = parser.parse_args()

table = load_city_fixture()
print(f"{len(table)} objects, cues: {', '.join(table.cue_names)}")

fractions = [0.1, 0.3, 0.5, 0.7, 0.9]
res = run_comparison(table, fractions, replicates=args.replicates,
                     learner=LearnerConfig(epsilon=0.5, phi=0.1))

# %%
# Mean test accuracy per training fraction.
print("fraction  " + "  ".join(f"{m:>8}" for m in MODELS))
curves = {m: res.mean_by(m) for m in MODELS}
for f in fractions:
    print(f"{f:8.1f}  " + "  ".join(f"{curves[m][f]:8.3f}" for m in MODELS))
