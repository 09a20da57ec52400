"""Free Gaussian and Gibbs random data, potential energy and Hamiltonian.

The free measure draws ``c_n = g_n / (n pi)`` with ``g_n`` standard complex
Gaussians (``E|g_n|^2 = 1``).  The Gibbs measure has density ``exp(-V)`` with
respect to it, where ``V = (1/(alpha+2)) int_B |Re phi|^(alpha+2) dx``; since
``V >= 0`` this density is at most one and rejection sampling is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .basis import (SpectralField, ball_integral, check_dealiasing, default_grid_size,
                    frequencies, radial_grid, synthesize_array)
from .errors import DomainError, MeasureUndefinedError

GIBBS_ALPHA_LIMIT = 4.0


@dataclass(frozen=True)
class ModelParams:
    """Nonlinearity power, spectral cutoff and radial panel count.

    ``coupling`` multiplies the nonlinear term of the flow.  The default 1/2
    makes the truncated flow the Hamiltonian flow of
    ``H = sum omega_n^2 |c_n|^2 + V`` with respect to ``sum omega_n da_n ^ db_n``,
    which is what keeps ``exp(-H)`` invariant.  Zero switches the nonlinearity off.
    """

    alpha: float
    N: int
    M: Optional[int] = None
    coupling: float = 0.5

    def __post_init__(self):
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError("cutoff N must be a positive integer")
        M = self.M if self.M is not None else default_grid_size(self.N, self.alpha)
        check_dealiasing(self.N, M, self.alpha)
        object.__setattr__(self, "M", int(M))
        object.__setattr__(self, "N", int(self.N))

    def with_cutoff(self, N: int) -> "ModelParams":
        """Same model at a different cutoff (panel count re-derived)."""
        return ModelParams(self.alpha, N, None, self.coupling)

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "N": self.N, "M": self.M, "coupling": self.coupling}


@dataclass(frozen=True)
class GibbsSample:
    field: SpectralField
    potential: float
    attempts: int


def sample_free_array(N: int, rng: np.random.Generator, size=None) -> np.ndarray:
    """Draw free-measure coefficients; ``size`` prepends batch axes."""
    if N < 1:
        raise DomainError("cutoff N must be >= 1")
    shape = (N,) if size is None else tuple(np.atleast_1d(size)) + (N,)
    g = rng.standard_normal(shape + (2,))
    g = (g[..., 0] + 1j * g[..., 1]) * math.sqrt(0.5)
    return g / frequencies(N)


def sample_free(N: int, rng: np.random.Generator) -> SpectralField:
    """One draw of ``P_N phi = sum_{n<=N} g_n / (n pi) e_n``."""
    return SpectralField(sample_free_array(N, rng))


def potential_array(a: np.ndarray, alpha: float, M: int) -> np.ndarray:
    """``(1/(alpha+2)) int_B |f|^(alpha+2)`` for real coefficient arrays (batched)."""
    f = synthesize_array(np.asarray(a, dtype=float), M) / radial_grid(M)
    return ball_integral(np.abs(f) ** (alpha + 2), M) / (alpha + 2)


def kinetic_array(c: np.ndarray) -> np.ndarray:
    """``sum_n omega_n^2 |c_n|^2`` along the last axis."""
    c = np.asarray(c)
    return np.sum((frequencies(c.shape[-1]) * np.abs(c)) ** 2, axis=-1)


def _grid_for(field: SpectralField, alpha: float, M: Optional[int]) -> int:
    M = default_grid_size(field.N, alpha) if M is None else M
    check_dealiasing(field.N, M, alpha)
    return M


def potential_energy(field: SpectralField, alpha: float, M: Optional[int] = None) -> float:
    """Potential energy ``V`` of ``Re phi``; nonnegative."""
    M = _grid_for(field, alpha, M)
    return float(potential_array(field.coeffs.real, alpha, M))


def hamiltonian(field: SpectralField, alpha: float, M: Optional[int] = None) -> float:
    """``H = int |grad phi|^2 + V`` with the gradient term taken spectrally."""
    M = _grid_for(field, alpha, M)
    return float(kinetic_array(field.coeffs)) + float(potential_array(field.coeffs.real, alpha, M))


def sample_gibbs(params: ModelParams, rng: np.random.Generator,
                 max_attempts: int = 1_000_000) -> GibbsSample:
    """Draw from the truncated Gibbs measure by rejection from the free measure.

    Each attempt consumes one free draw and one uniform from ``rng``, so the
    result (including the attempt count) is a function of the stream state.
    """
    if params.alpha >= GIBBS_ALPHA_LIMIT:
        raise MeasureUndefinedError(
            f"Gibbs measure is undefined for alpha={params.alpha} >= 4")
    for attempt in range(1, max_attempts + 1):
        c = sample_free_array(params.N, rng)
        V = float(potential_array(c.real, params.alpha, params.M))
        if rng.random() < math.exp(-V):
            return GibbsSample(SpectralField(c), V, attempt)
    raise RuntimeError(f"no acceptance within {max_attempts} attempts")
