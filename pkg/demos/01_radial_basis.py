"""Radial eigenbasis of the Dirichlet Laplacian on the unit ball.

The modes e_n(r) = sin(n pi r) / (sqrt(2 pi) r) are orthonormal in L^2(B) and
transform to and from the grid r_j = j/M with a type-I sine transform.  Their
L^4 norms grow like n^(1/4) and their L^6 norms like n^(1/2).
"""
import numpy as np

from radial_nlw.basis import SpectralField, analyze, apply_nonlinearity, l2_norm_grid, lp_norm, synthesize
from radial_nlw.experiments import loglog_slope

rng = np.random.default_rng(0)
c = rng.standard_normal(64) + 1j * rng.standard_normal(64)
grid = synthesize(SpectralField(c), 512)
print("round trip error      :", np.max(np.abs(analyze(grid, 64).coeffs - c)))
print("Parseval |grid - coef|:", abs(l2_norm_grid(grid) ** 2 - np.sum(np.abs(c) ** 2)))

n = np.arange(16, 257)
for p, expected in [(4, 0.25), (6, 0.5)]:
    norms = [lp_norm(int(k), p) for k in n]
    print(f"L^{p} growth exponent  : {loglog_slope(n, norms):.4f} (expected {expected})")

# cubic nonlinearity of a two-mode field, projected back to six modes
u = SpectralField([1.0, 0.5])
print("P_6 (|u|^2 u)         :", np.round(apply_nonlinearity(u, 2, 6, 128).coeffs.real, 4))
