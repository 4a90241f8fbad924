"""Build a single LWO region by hand and look at its parts.

The region is a ball around the full-data prediction of the test response.
Its radius is an empirical quantile of the window-out scores.
"""

import numpy as np

from lwocp import KNN, jackknife, lift, lwo, split_cp
from lwocp.processes import gen_ma1

seq = lift(gen_ma1(d=50, length=201, rng_seed=4), L=0)  # 200 training points + 1 test
truth = seq.responses[-1]

for name, res in [("lwo tau=5", lwo(seq, 0.1, 5, KNN(2))),
                  ("jackknife", jackknife(seq, 0.1, KNN(2)))]:
    print(f"{name:<10} radius {res.radius:.3f}  covers truth: "
          f"{np.linalg.norm(truth - res.center) <= res.radius}")
    print(f"{'':<10} five largest scores {np.sort(res.scores)[-5:].round(3)}")

region = split_cp(seq, 0.1, KNN(2))
print(f"{'split':<10} radius {region.radius:.3f}")
