"""Time evolution of the truncated radial NLW in first-order complex form.

State ``u = sum c_n e_n`` with ``Re u`` the wave field and
``omega Im u = d/dt Re u``.  The truncated flow is

    i du/dt = sqrt(-Lap) u + coupling * P_N[(sqrt(-Lap))^-1 |Re u|^alpha Re u]

whose linear part is ``c_n -> exp(-i omega_n t) c_n`` (period 2 for
``omega_n = n pi``).  With ``coupling = 1/2`` it is the Hamiltonian flow of
``H = sum omega_n^2 |c_n|^2 + V``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate

from .basis import SpectralField, frequencies, nonlinear_coefficients
from .errors import DomainError, IntegrationError, NoConvergenceError
from .norms import sobolev_norm_array
from .random_data import ModelParams

BLOWUP_GUARD = 1e6
PICARD_NORM_INDEX = 0.4


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped states ``states[k]`` (shape ``(K, N)``) at ``times[k]``."""

    params: ModelParams
    times: np.ndarray
    states: np.ndarray
    dt: float
    method: str
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=complex)
        if states.ndim != 2 or states.shape[0] != times.size:
            raise DomainError("states must have shape (len(times), N)")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise DomainError("times must be strictly increasing")
        times.setflags(write=False)
        states.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    def __len__(self):
        return self.times.size

    @property
    def N(self) -> int:
        return self.states.shape[1]

    def state(self, k: int) -> SpectralField:
        return SpectralField(self.states[k])

    @property
    def fields(self) -> list:
        return [SpectralField(s) for s in self.states]

    def window(self, t0: float, t1: float) -> "Trajectory":
        """Sub-trajectory of samples with ``t0 <= t <= t1`` (small slack)."""
        eps = 1e-9 * max(1.0, abs(t1))
        keep = (self.times >= t0 - eps) & (self.times <= t1 + eps)
        if not np.any(keep):
            raise DomainError(f"window [{t0}, {t1}] contains no samples")
        return Trajectory(self.params, self.times[keep], self.states[keep], self.dt,
                          self.method, dict(self.info))

    def scaled(self, factor) -> "Trajectory":
        return Trajectory(self.params, self.times, self.states * factor, self.dt,
                          self.method, dict(self.info))


def linear_phase(N: int, t: float) -> np.ndarray:
    return np.exp(-1j * frequencies(N) * t)


def linear_propagate(field: SpectralField, t: float) -> SpectralField:
    """Apply the free propagator ``S(t)``."""
    return SpectralField(field.coeffs * linear_phase(field.N, t))


def linear_trajectory(field: SpectralField, params: ModelParams, times) -> Trajectory:
    times = np.asarray(times, dtype=float)
    states = field.coeffs[None, :] * np.exp(-1j * np.outer(times, frequencies(field.N)))
    dt = float(times[1] - times[0]) if times.size > 1 else 0.0
    return Trajectory(params, times, states, dt, "linear")


# -- splitting ----------------------------------------------------------------

def kick(c: np.ndarray, params: ModelParams, dt: float) -> np.ndarray:
    """Exact nonlinear sub-flow over ``dt``: ``Re c`` fixed, ``Im c`` pushed.

    Works on batches ``(..., N)``; returns a new array.
    """
    if params.coupling == 0.0:
        return np.array(c, dtype=complex)
    a = c.real
    F = nonlinear_coefficients(a, params.alpha, c.shape[-1], params.M)
    omega = frequencies(c.shape[-1])
    return a + 1j * (c.imag - (dt * params.coupling) * F / omega)


def strang_step(c: np.ndarray, params: ModelParams, dt: float) -> np.ndarray:
    """One symmetric step rotate(dt/2) -> kick(dt) -> rotate(dt/2).

    Negative ``dt`` runs the step backwards; the scheme is time-reversible.
    """
    half = linear_phase(c.shape[-1], 0.5 * dt)
    return half * kick(half * c, params, dt)


def _steps(T: float, dt: float) -> int:
    if not dt > 0:
        raise DomainError("dt must be positive")
    if T < 0:
        raise DomainError("horizon T must be nonnegative")
    n = int(round(T / dt))
    if abs(n * dt - T) > 1e-9 * max(1.0, T):
        raise DomainError(f"horizon T={T} is not a multiple of dt={dt}")
    return n


def evolve_array(c0: np.ndarray, params: ModelParams, T: float, dt: float,
                 stride: int = 1):
    """Strang-split evolution of a batch ``(..., N)`` of coefficient arrays.

    Returns ``(times, states)`` with ``states`` of shape ``(K, ..., N)``; the
    final time is always recorded.
    """
    n = _steps(T, dt)
    stride = max(int(stride), 1)
    c = np.array(c0, dtype=complex)
    record = sorted(set(range(0, n + 1, stride)) | {n})
    out = np.empty((len(record),) + c.shape, dtype=complex)
    out[0] = c
    half = linear_phase(c.shape[-1], 0.5 * dt)
    j = 1
    for k in range(1, n + 1):
        c = half * kick(half * c, params, dt)
        if j < len(record) and record[j] == k:
            out[j] = c
            j += 1
            l2 = np.sqrt(np.sum(np.abs(c) ** 2, axis=-1))
            if not np.all(np.isfinite(l2)) or np.any(l2 > BLOWUP_GUARD):
                raise IntegrationError(f"L2 norm exceeded {BLOWUP_GUARD:g} at t={k * dt:g}")
    return np.asarray(record, dtype=float) * dt, out


def evolve(field: SpectralField, params: ModelParams, T: float, dt: float = 1e-3,
           stride: int = 10) -> Trajectory:
    """Integrate the truncated problem from ``P_N field`` up to time ``T``."""
    c0 = field.project(params.N).coeffs
    times, states = evolve_array(c0, params, T, dt, stride)
    return Trajectory(params, times, states, dt, "splitting", {"stride": stride})


# -- Duhamel ------------------------------------------------------------------

def duhamel_integral(source: Trajectory, t: float) -> SpectralField:
    """``int_0^t S(t - tau) (sqrt(-Lap))^-1 f(tau) dtau`` from samples of ``f``.

    Simpson's rule on the stored samples with ``tau <= t``; if ``t`` falls
    between samples the forcing is linearly interpolated there.
    """
    times = source.times
    if times[0] != 0.0:
        raise DomainError("forcing samples must start at tau = 0")
    eps = 1e-12 * max(1.0, abs(times[-1]))
    if t < 0 or t > times[-1] + eps:
        raise DomainError(f"t={t} outside the forcing horizon [0, {times[-1]}]")
    N = source.N
    if t == 0.0:
        return SpectralField.zeros(N)
    omega = frequencies(N)
    keep = times <= t + eps
    tau = times[keep]
    f = source.states[keep]
    if abs(tau[-1] - t) > eps:
        k = tau.size
        w = (t - times[k - 1]) / (times[k] - times[k - 1])
        tau = np.append(tau, t)
        f = np.vstack([f, (1 - w) * source.states[k - 1] + w * source.states[k]])
    integrand = np.exp(1j * np.outer(tau - t, omega)) * f
    if tau.size == 2:
        val = 0.5 * (tau[1] - tau[0]) * (integrand[0] + integrand[1])
    else:
        val = integrate.simpson(integrand, x=tau, axis=0)
    return SpectralField(val / omega)


def duhamel_array(times: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Duhamel integral at every sample time; ``f`` has shape ``(K, ..., N)``."""
    N = f.shape[-1]
    omega = frequencies(N)
    shape = (times.size,) + (1,) * (f.ndim - 2) + (N,)
    phase = np.exp(1j * np.outer(times, omega)).reshape(shape)
    g = phase * f
    rule = integrate.cumulative_trapezoid if times.size < 3 else integrate.cumulative_simpson
    # cumulative_simpson drops imaginary parts, so integrate the two halves separately
    cum = (rule(g.real, x=times, axis=0, initial=0)
           + 1j * rule(g.imag, x=times, axis=0, initial=0))
    return np.conj(phase) * cum / omega


def duhamel_trajectory(source: Trajectory) -> Trajectory:
    """Duhamel integral of ``source`` evaluated at each of its sample times."""
    return Trajectory(source.params, source.times, duhamel_array(source.times, source.states),
                      source.dt, "duhamel")


# -- Picard -------------------------------------------------------------------

def picard_solve(field: SpectralField, params: ModelParams, T_loc: float = 0.1,
                 tol: float = 1e-10, nodes: int = 64, max_iter: int = 50) -> Trajectory:
    """Fixed-point iteration of the Duhamel formula on ``[0, T_loc]``.

    Iterates ``u <- S(t) phi - i coupling D[P_N F(Re u)]`` from ``u = S(t) phi``
    until the sup-in-time ``H^0.4`` increment drops below ``tol``.  ``nodes`` is
    the number of uniform time panels used by the cumulative Simpson rule.
    """
    if not T_loc > 0:
        raise DomainError("T_loc must be positive")
    phi = field.project(params.N).coeffs
    N = params.N
    times = np.linspace(0.0, T_loc, nodes + 1)
    free = phi[None, :] * np.exp(-1j * np.outer(times, frequencies(N)))
    u = free
    increments = []
    growth = 0
    for it in range(1, max_iter + 1):
        F = nonlinear_coefficients(u.real, params.alpha, N, params.M)
        new = free - 1j * params.coupling * duhamel_array(times, F)
        with np.errstate(over="ignore", invalid="ignore"):
            inc = float(np.max(sobolev_norm_array(new - u, PICARD_NORM_INDEX)))
        increments.append(inc)
        u = new
        if not math.isfinite(inc):
            raise NoConvergenceError("Picard iterate overflowed", increments)
        if inc < tol:
            return Trajectory(params, times, u, T_loc / nodes, "picard",
                              {"iterations": it, "increments": increments})
        growth = growth + 1 if len(increments) > 1 and inc > increments[-2] else 0
        if growth >= 3:
            raise NoConvergenceError("Picard iteration is not contracting", increments)
    raise NoConvergenceError(f"no convergence within {max_iter} iterations", increments)


# -- regimes ------------------------------------------------------------------

class Regime(enum.Enum):
    CONTRACTION_ADMISSIBLE = "contraction-admissible"
    CONVERGENCE_ONLY = "convergence-only"
    NO_GIBBS = "no-gibbs"


CONTRACTION_ALPHA_LIMIT = 1.0 + math.sqrt(5.0)


def contraction_window(alpha: float) -> Optional[tuple]:
    """Open interval of ``s`` where the fixed-point argument closes, or None.

    Lower end ``(3 alpha - 4) / (2 alpha)``, upper end ``(5 - alpha) / 2``; the
    interval is nonempty exactly when ``alpha^2 - 2 alpha - 4 < 0``.
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if alpha >= CONTRACTION_ALPHA_LIMIT:
        return None
    return ((3.0 * alpha - 4.0) / (2.0 * alpha), (5.0 - alpha) / 2.0)


def regime_check(alpha: float, s: float) -> Regime:
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if alpha >= 4.0:
        return Regime.NO_GIBBS
    window = contraction_window(alpha)
    if window is not None and window[0] < s < window[1]:
        return Regime.CONTRACTION_ADMISSIBLE
    return Regime.CONVERGENCE_ONLY
