"""Truncation studies on coupled free data (alpha = 3).

Every cutoff sees a prefix of the same Gaussian draw.  Differences between
adjacent cutoffs shrink in H^0.4, and the nonlinear part u_N - S(t) P_N phi
stays of comparable size in H^0.8 as N grows.
"""
from radial_nlw.experiments import StudyConfig, convergence_study, data_difference_study, smoothing_check

study = StudyConfig(alpha=3.0, N_list=(8, 16, 32), T=0.5, count=40, master_seed=8)
conv = convergence_study(study)
for (N0, N1), med in zip(conv.pairs, conv.medians):
    print(f"median sup_t ||u_{N1} - u_{N0}||_H^0.4 = {med:.4f}")
print(f"fitted decay exponent {conv.decay_exponent:.3f}")

data = data_difference_study(0.4, [16, 32, 64, 128], 500, master_seed=8)
print(f"data-only exponent {data.exponent:.3f} (predicted {data.predicted:.2f})")

smooth = smoothing_check(StudyConfig(3.0, (16, 32, 64), T=0.5, count=40, master_seed=9,
                                     sigma=(0.4, 0.8)))
for key, meds in smooth.medians.items():
    print(f"sigma={key}: medians {[round(m, 4) for m in meds]}, max/min {smooth.ratio[key]:.2f}")
