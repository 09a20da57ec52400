"""Empirical tails of random space-time norms.

log P(X > lambda) is fitted against lambda^2 on the [0.5, 0.99] quantile range;
R^2 near 1 indicates Gaussian-type decay.  The high-pass functional is also
checked for collapse of its survival curves after rescaling by theta(K).
"""
from radial_nlw.experiments import EnsembleConfig, tail_estimate
from radial_nlw.random_data import ModelParams

cfg = EnsembleConfig(ModelParams(3.0, 32), T=1.0, dt=1e-2, count=2000, master_seed=10,
                     data="free", stride=1)
for name, kw in [("linear_mixed", dict(p=4.0, q=8.0)), ("data_sobolev_lp", dict(p=4.0, s=0.2))]:
    rep = tail_estimate(cfg, name, **kw)
    print(f"{name:16s} rate={rep.fit_rate:.3f} R^2={rep.r_squared:.4f} median={rep.quantiles['0.5']:.3f}")

hp = tail_estimate(EnsembleConfig(ModelParams(3.0, 32), T=1.0, dt=1e-3, count=300,
                                  master_seed=10, data="free", stride=10),
                   "highpass_mixed", p=4.0, q=8.0, cutoffs=(4, 8, 16))
print("high-pass collapse: max z =", round(hp.collapse["max_z"], 1),
      "overlay =", hp.collapse["overlay"])
