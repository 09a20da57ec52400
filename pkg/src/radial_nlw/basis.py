"""Radial Dirichlet eigenbasis of -Laplacian on the unit ball in R^3.

Modes are ``e_n(r) = sin(n pi r) / (sqrt(2 pi) r)``, normalized in L^2(B), with
frequency ``omega_n = n pi``.  A radial function ``f`` is stored on the grid
``r_j = j / M`` (``j = 1 .. M-1``) through ``w(r) = r f(r)``; the Dirichlet
values ``w(0) = w(1) = 0`` are implicit.  In the variable ``w`` the basis is a
plain sine series, so the transforms below are DST-I evaluations and the
composite trapezoid rule integrates band-limited products exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.fft

from .errors import DomainError, ResolutionError

NORMALIZATION = 1.0 / math.sqrt(2.0 * math.pi)
BALL_MEASURE = 4.0 * math.pi  # dx = 4 pi r^2 dr for radial integrands


def frequencies(N: int) -> np.ndarray:
    """Return ``omega_n = n pi`` for ``n = 1 .. N``."""
    return math.pi * np.arange(1, N + 1, dtype=float)


def radial_grid(M: int) -> np.ndarray:
    """Interior nodes ``r_j = j / M``, ``j = 1 .. M-1``."""
    return np.arange(1, M, dtype=float) / M


@dataclass(frozen=True)
class BasisConvention:
    """Normalization, frequency rule and radial panel count."""

    M: int
    normalization: float = NORMALIZATION

    def omega(self, n):
        return math.pi * np.asarray(n, dtype=float)


@dataclass(frozen=True)
class SpectralField:
    """Coefficients ``c_n`` (``n = 1 .. N``) of ``sum c_n e_n``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(c)):
            raise DomainError("spectral coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def N(self) -> int:
        return self.coeffs.size

    @classmethod
    def zeros(cls, N: int) -> "SpectralField":
        return cls(np.zeros(N, dtype=complex))

    @classmethod
    def mode(cls, n: int, N: int, value: complex = 1.0) -> "SpectralField":
        c = np.zeros(N, dtype=complex)
        c[n - 1] = value
        return cls(c)

    def project(self, N: int) -> "SpectralField":
        """Apply ``P_N``; for ``N >= self.N`` the result is zero-padded."""
        if N <= self.N:
            return SpectralField(self.coeffs[:N])
        return SpectralField(np.concatenate([self.coeffs, np.zeros(N - self.N, complex)]))

    @property
    def real(self) -> "SpectralField":
        return SpectralField(self.coeffs.real)

    def __add__(self, other: "SpectralField") -> "SpectralField":
        n = max(self.N, other.N)
        return SpectralField(self.project(n).coeffs + other.project(n).coeffs)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        n = max(self.N, other.N)
        return SpectralField(self.project(n).coeffs - other.project(n).coeffs)

    def __mul__(self, scalar) -> "SpectralField":
        return SpectralField(self.coeffs * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralField":
        return SpectralField(-self.coeffs)


@dataclass(frozen=True)
class GridField:
    """Samples of ``w(r) = r f(r)`` at ``r_j = j/M``, ``j = 1 .. M-1``."""

    values: np.ndarray
    M: int = field(default=0)

    def __post_init__(self):
        v = np.asarray(self.values)
        v = v.astype(complex if np.iscomplexobj(v) else float).reshape(-1)
        M = self.M or v.size + 1
        if v.size != M - 1:
            raise DomainError(f"GridField with M={M} needs {M - 1} samples, got {v.size}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "M", M)

    @property
    def r(self) -> np.ndarray:
        return radial_grid(self.M)

    def function_values(self) -> np.ndarray:
        """Return ``f(r_j) = w(r_j) / r_j``."""
        return self.values / self.r


def eigenfunction_value(n: int, r):
    """Evaluate ``e_n`` at radius ``r`` (scalar or array), using the limit at 0."""
    if n < 1:
        raise DomainError("mode index must be >= 1")
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(r_arr > 1):
        raise DomainError("radius must lie in [0, 1]")
    k = n * math.pi
    safe = np.where(r_arr == 0.0, 1.0, r_arr)
    out = np.where(r_arr == 0.0, k, np.sin(k * safe) / safe) * NORMALIZATION
    return float(out) if out.ndim == 0 else out


def check_resolution(N: int, M: int) -> None:
    if N > M - 1:
        raise ResolutionError(f"cutoff N={N} exceeds grid capacity M-1={M - 1}")


def default_grid_size(N: int, alpha: float) -> int:
    """Panel count for the pseudospectral nonlinearity at cutoff ``N``.

    Integer powers get at least ``(alpha+1) N + 1`` panels, everything gets at
    least ``8 N``; the result is rounded up to a power of two with a floor of 64.
    """
    need = 8 * N
    if float(alpha).is_integer():
        need = max(need, (int(alpha) + 1) * N + 1)
    need = max(need, 64)
    return 1 << (need - 1).bit_length()


def check_dealiasing(N: int, M: int, alpha: float) -> None:
    check_resolution(N, M)
    if float(alpha).is_integer():
        need = (int(alpha) + 1) * N + 1
        if M < need:
            raise ResolutionError(
                f"integer power alpha={alpha} with N={N} needs M >= {need}, got M={M}")


# -- array-level transforms (leading axes are batch axes) ---------------------

def synthesize_array(coeffs: np.ndarray, M: int) -> np.ndarray:
    """``w(r_j) = sum_n c_n sin(n pi r_j) / sqrt(2 pi)`` along the last axis."""
    coeffs = np.asarray(coeffs)
    N = coeffs.shape[-1]
    check_resolution(N, M)
    padded = np.zeros(coeffs.shape[:-1] + (M - 1,), dtype=coeffs.dtype)
    padded[..., :N] = coeffs
    # DST-I: y_k = 2 sum_j x_j sin(pi (j+1)(k+1) / M)
    return scipy.fft.dst(padded, type=1, axis=-1) * (0.5 * NORMALIZATION)


def analyze_array(w: np.ndarray, N: int) -> np.ndarray:
    """Inverse of :func:`synthesize_array`; trapezoid inner products with ``e_n``."""
    w = np.asarray(w)
    M = w.shape[-1] + 1
    check_resolution(N, M)
    y = scipy.fft.dst(w, type=1, axis=-1)
    # c_n = (4 pi / M) sum_j w_j sin(n pi r_j) / sqrt(2 pi) = sqrt(2 pi) y_n / M
    return y[..., :N] * (math.sqrt(2.0 * math.pi) / M)


def ball_integral(values: np.ndarray, M: int) -> np.ndarray:
    """Trapezoid rule for ``int_B g dx`` from samples ``g(r_j)``, ``j = 1..M-1``.

    The integrand is assumed to vanish at ``r = 1``; the ``r = 0`` node carries
    zero weight because of the ``r^2`` Jacobian.
    """
    r = radial_grid(M)
    return BALL_MEASURE / M * np.sum(values * r * r, axis=-1)


def power_nonlinearity(v: np.ndarray, alpha: float) -> np.ndarray:
    """Pointwise ``|v|^alpha v``."""
    if float(alpha) == 2.0:
        return v * v * v
    return np.abs(v) ** alpha * v


def nonlinear_coefficients(a: np.ndarray, alpha: float, N_out: int, M: int) -> np.ndarray:
    """``<|f|^alpha f, e_n>`` for real coefficient arrays ``a`` (batched)."""
    w = synthesize_array(a, M)
    r = radial_grid(M)
    g = power_nonlinearity(w / r, alpha)
    return analyze_array(g * r, N_out)


# -- field-level operations ---------------------------------------------------

def synthesize(field: SpectralField, M: int) -> GridField:
    """Sample ``w = r f`` on the radial grid from spectral coefficients."""
    return GridField(synthesize_array(field.coeffs, M), M)


def analyze(grid: GridField, N: int) -> SpectralField:
    """Coefficients ``c_n = <f, e_n>`` (``n <= N``) of a grid function."""
    return SpectralField(analyze_array(grid.values, N))


def apply_nonlinearity(field: SpectralField, alpha: float, N_out: int, M: int) -> SpectralField:
    """Coefficients of ``P_{N_out} (|Re u|^alpha Re u)`` computed pseudospectrally."""
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    check_dealiasing(max(field.N, N_out), M, alpha)
    return SpectralField(nonlinear_coefficients(field.coeffs.real, alpha, N_out, M))


def l2_norm_grid(grid: GridField) -> float:
    """Quadrature L^2(B) norm of a grid function."""
    return math.sqrt(BALL_MEASURE / grid.M * float(np.sum(np.abs(grid.values) ** 2)))


def lp_norm(n: int, p: float, M: int = 4096) -> float:
    """``||e_n||_{L^p(B)}`` by radial trapezoid quadrature on ``M`` panels."""
    if n < 1:
        raise DomainError("mode index must be >= 1")
    if p < 1:
        raise DomainError("exponent p must be >= 1")
    if n * math.pi / M >= 1.0:
        raise ResolutionError(f"mode n={n} under-resolved on M={M} panels (need n pi / M < 1)")
    f = eigenfunction_value(n, radial_grid(M))
    return float(ball_integral(np.abs(f) ** p, M)) ** (1.0 / p)

