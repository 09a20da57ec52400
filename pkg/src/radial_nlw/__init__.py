"""Spectral simulation and Monte Carlo checks for the radial defocusing NLW on
the unit ball of R^3 with Gaussian and Gibbs random data."""

__version__ = "0.1.0"

from .basis import (GridField, SpectralField, analyze, apply_nonlinearity, eigenfunction_value,
                    lp_norm, synthesize)
from .flow import (Regime, Trajectory, duhamel_integral, evolve, linear_propagate, picard_solve,
                   regime_check)
from .norms import mixed_norm, sobolev_norm, xsb_norm
from .random_data import (GibbsSample, ModelParams, hamiltonian, potential_energy, sample_free,
                          sample_gibbs)
from .rng import derive_stream, member_rng

__all__ = [
    "GridField", "SpectralField", "analyze", "apply_nonlinearity", "eigenfunction_value",
    "lp_norm", "synthesize", "Regime", "Trajectory", "duhamel_integral", "evolve",
    "linear_propagate", "picard_solve", "regime_check", "mixed_norm", "sobolev_norm",
    "xsb_norm", "GibbsSample", "ModelParams", "hamiltonian", "potential_energy",
    "sample_free", "sample_gibbs", "derive_stream", "member_rng",
]
