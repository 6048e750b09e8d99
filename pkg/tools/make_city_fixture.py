"""Regenerate the bundled synthetic city-size-schema fixture.

The values are SYNTHETIC: populations follow a rank-size law with noise and
each binary cue is present with a logistic probability in log population.
They only mimic the layout (81 objects, 9 binary cues) of the classic
German city data set; they are not census figures.

    python tools/make_city_fixture.py > src/abcttb/data/cities_synthetic.csv
"""

import sys

import numpy as np

# name, intercept, slope on standardised log population
CUES = [
    ("intercity_train", 0.6, 2.2),
    ("exposition_site", -1.0, 1.8),
    ("soccer_team", -1.2, 1.6),
    ("university", 0.2, 1.5),
    ("national_capital", None, None),
    ("license_plate", 2.0, 0.6),
    ("east_germany", -1.4, -0.3),
    ("state_capital", -1.8, 1.0),
    ("industrial_belt", -2.2, 0.2),
]


def main(seed=20160801, n=81):
    rng = np.random.default_rng(seed)
    rank = np.arange(1, n + 1)
    log_pop = np.log(3.4e6) - 0.75 * np.log(rank) + rng.normal(0, 0.05, n)
    pop = np.round(np.exp(log_pop)).astype(int)
    z = (log_pop - log_pop.mean()) / log_pop.std()
    cols = []
    for name, a, b in CUES:
        if a is None:
            col = (rank == 1).astype(int)
        else:
            p = 1 / (1 + np.exp(-(a + b * z)))
            col = (rng.random(n) < p).astype(int)
        cols.append(col)
    out = sys.stdout
    out.write("# SYNTHETIC city-size-schema fixture: values are generated, not real data.\n")
    out.write(f"# Produced by tools/make_city_fixture.py (seed {seed}).\n")
    out.write("name,criterion," + ",".join(c[0] for c in CUES) + "\n")
    for i in range(n):
        out.write(f"city_{i + 1:02d},{pop[i]}," + ",".join(str(c[i]) for c in cols) + "\n")


if __name__ == "__main__":
    main()
