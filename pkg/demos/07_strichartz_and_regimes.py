"""Strichartz-type ratio of the Duhamel term and the regime classifier.

The ratio ||D f||_{X^{s,b}} / ||f||_{L^p_x L^2_t} is computed for random forcings;
a bounded max/median supports a uniform constant.  The classifier reports
whether the fixed-point argument closes at (alpha, s).
"""
import math

from radial_nlw.experiments import StrichartzConfig, strichartz_ratio
from radial_nlw.flow import contraction_window, regime_check

rep = strichartz_ratio(StrichartzConfig(N=32, count=30, master_seed=11))
print(f"Strichartz proxy ratio: median {rep.median:.3f}, max/median {rep.max_over_median:.3f}")

for alpha in (2.0, 3.0, 1 + math.sqrt(5), 4.0):
    print(f"alpha={alpha:.4f}: window {contraction_window(alpha)}, "
          f"s=0.9 -> {regime_check(alpha, 0.9).value}")
