"""Free and Gibbs random data.

Free data are c_n = g_n / (n pi) with standard complex Gaussians g_n.  The
Gibbs measure reweights them by exp(-V), V = (1/(alpha+2)) int |u|^(alpha+2);
samples are drawn by rejection, which is exact for alpha < 4.
"""
from radial_nlw.errors import MeasureUndefinedError
from radial_nlw.experiments import acceptance_rate, gibbs_chisquare
from radial_nlw.random_data import ModelParams, hamiltonian, sample_gibbs
from radial_nlw.rng import member_rng

params = ModelParams(alpha=2.0, N=32)
draw = sample_gibbs(params, member_rng(master_seed=1, index=0))
print(f"one Gibbs draw: V={draw.potential:.4g}, H={hamiltonian(draw.field, 2.0):.4g}, "
      f"accepted after {draw.attempts} attempt(s)")

for alpha in (1.0, 2.0, 3.0):
    acc = acceptance_rate(ModelParams(alpha, 32), 2000, master_seed=2)
    print(f"alpha={alpha}: acceptance rate {acc['rate']:.4f} +- {acc['stderr']:.4f}")

chi = gibbs_chisquare(ModelParams(2.0, 16), 2000, 5000, master_seed=3)
print(f"potential distribution vs reweighted free draws: chi2={chi['statistic']:.1f}, "
      f"dof={chi['dof']}, p={chi['pvalue']:.3f}")

try:
    sample_gibbs(ModelParams(4.0, 8), member_rng(0, 0))
except MeasureUndefinedError as exc:
    print("alpha=4:", exc)
