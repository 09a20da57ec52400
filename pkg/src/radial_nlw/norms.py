"""Sobolev, mixed space-time Lebesgue, and X^{s,b} proxy norms.

The X^{s,b} norm is defined as an infimum over space-time representations
``f = sum_{m,n} fhat(m,n) e_n(x) exp(-i pi m t)``.  :func:`xsb_norm` evaluates
one canonical representation instead, which bounds the infimum from above.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from .basis import SpectralField, ball_integral, frequencies, radial_grid, synthesize_array
from .errors import DomainError

DEFAULT_B = 0.55
TAPER_FRACTION = 0.1
TIME_PERIOD = 2.0
MAX_XSB_WINDOW = 0.5


@dataclass(frozen=True)
class NormSpec:
    s: float = 0.0
    b: float = DEFAULT_B
    p: float = 2.0
    q: float = 2.0
    window: Optional[tuple] = None


def bracket(n):
    """Japanese bracket ``(1 + n^2)^(1/2)``."""
    n = np.asarray(n, dtype=float)
    return np.sqrt(1.0 + n * n)


def sobolev_norm_array(c: np.ndarray, s: float) -> np.ndarray:
    c = np.asarray(c)
    weights = bracket(np.arange(1, c.shape[-1] + 1)) ** (2.0 * s)
    return np.sqrt(np.sum(weights * np.abs(c) ** 2, axis=-1))


def sobolev_norm(field: SpectralField, s: float) -> float:
    """``(sum_n <n>^(2s) |c_n|^2)^(1/2)``."""
    return float(sobolev_norm_array(field.coeffs, s))


def _lebesgue(values: np.ndarray, exponent: float, axis: int, integrate_fn) -> np.ndarray:
    if math.isinf(exponent):
        return np.max(values, axis=axis)
    return integrate_fn(values ** exponent) ** (1.0 / exponent)


def mixed_norm_values(times: np.ndarray, states: np.ndarray, p: float, q: float,
                      M: int) -> np.ndarray:
    """``L^p_x L^q_t`` norm of ``|u|`` for states of shape ``(K, ..., N)``.

    Time integration uses the trapezoid rule on ``times``; space integration the
    radial trapezoid rule on ``M`` panels.  Infinite exponents are grid maxima.
    """
    f = np.abs(synthesize_array(states, M) / radial_grid(M))
    if times.size == 1 and not math.isinf(q):
        time_norm = np.zeros_like(f[0])
    else:
        time_norm = _lebesgue(f, q, 0,
                              lambda g: integrate.trapezoid(g, x=times, axis=0))
    return _lebesgue(time_norm, p, -1, lambda g: ball_integral(g, M))


def _resolve_window(traj, window):
    if window is None:
        return traj
    t0, t1 = window
    if t1 < t0:
        raise DomainError(f"empty window [{t0}, {t1}]")
    return traj.window(t0, t1)


def mixed_norm(traj, p: float, q: float, window=None, M: Optional[int] = None) -> float:
    """``||u||_{L^p_x L^q_t}`` over ``window`` (default: whole trajectory)."""
    if p < 1 or q < 1:
        raise DomainError("exponents must be >= 1")
    sub = _resolve_window(traj, window)
    M = traj.params.M if M is None else M
    return float(mixed_norm_values(sub.times, sub.states, p, q, M))


def embedding_constant(b: float = DEFAULT_B, terms: int = 10 ** 6) -> float:
    """``C = (sum_{k in Z} <k>^(-2b))^(1/2)``, so that
    ``sup_t ||u(t)||_{H^s} <= C ||u||_{X^{s,b}}`` for ``b > 1/2``.

    The tail beyond ``terms`` is bounded by its integral, so the value returned
    is an upper bound.
    """
    if b <= 0.5:
        raise DomainError("embedding needs b > 1/2")
    k = np.arange(1, terms + 1, dtype=float)
    head = 1.0 + 2.0 * float(np.sum((1.0 + k * k) ** (-b)))
    tail = 2.0 * terms ** (1.0 - 2.0 * b) / (2.0 * b - 1.0)
    return math.sqrt(head + tail)


def _raised_cosine(R: int) -> np.ndarray:
    j = np.arange(1, R + 1)
    return 0.5 * (1.0 + np.cos(math.pi * j / (R + 1)))


def extend_periodic(times: np.ndarray, states: np.ndarray,
                    taper: float = TAPER_FRACTION) -> np.ndarray:
    """Extend samples on a window to one full time period of length 2.

    Beyond each end of the window the state is continued by the free flow and
    damped by a raised-cosine ramp lasting ``taper`` times the window length;
    the rest of the period is zero.  Row ``k`` of the result is time ``k h``
    measured from the window start (negative times wrap to the end).
    """
    K = times.size
    h = float(times[1] - times[0])
    L = TIME_PERIOD / h
    if abs(L - round(L)) > 1e-6 * L:
        raise DomainError(f"time step {h} does not divide the period {TIME_PERIOD}")
    L = int(round(L))
    R = max(1, math.ceil(taper * (K - 1)))
    if K + 2 * R > L:
        raise DomainError("window too long to extend within one period")
    N = states.shape[-1]
    omega = frequencies(N)
    ramp = _raised_cosine(R)[:, None]
    steps = h * np.arange(1, R + 1)[:, None]
    out = np.zeros((L, N), dtype=complex)
    out[:K] = states
    out[K:K + R] = ramp * states[-1] * np.exp(-1j * steps * omega)
    out[L - R:] = (ramp * states[0] * np.exp(1j * steps * omega))[::-1]
    return out


def space_time_coefficients(times: np.ndarray, states: np.ndarray,
                            taper: float = TAPER_FRACTION):
    """Return ``(m, fhat)`` with ``fhat[m_index, n-1]`` for the extended signal."""
    ext = extend_periodic(times, states, taper)
    L = ext.shape[0]
    # fhat(m, n) = (1/L) sum_k f_n(t_k) exp(+i pi m t_k), t_k = 2 k / L
    fhat = np.fft.ifft(ext, axis=0)
    m = np.rint(np.fft.fftfreq(L, 1.0 / L)).astype(int)
    return m, fhat


def xsb_norm(traj, s: float, b: float = DEFAULT_B, taper: float = TAPER_FRACTION) -> float:
    """Canonical-representation proxy for ``||u||_{X^{s,b}}`` on the trajectory window.

    Weights ``<n - m>^(2b) <n>^(2s) |fhat(m, n)|^2`` summed over the time
    harmonics of the period-2 extension produced by :func:`extend_periodic`.
    """
    times = traj.times
    if times.size < 2:
        raise DomainError("X^{s,b} proxy needs at least two time samples")
    if times[-1] - times[0] > MAX_XSB_WINDOW + 1e-12:
        raise DomainError(f"window length {times[-1] - times[0]:g} exceeds {MAX_XSB_WINDOW}")
    steps = np.diff(times)
    if np.max(np.abs(steps - steps[0])) > 1e-9 * steps[0]:
        raise DomainError("X^{s,b} proxy needs uniform time samples")
    m, fhat = space_time_coefficients(times, traj.states, taper)
    n = np.arange(1, traj.N + 1)
    weight = bracket(n[None, :] - m[:, None]) ** (2.0 * b) * bracket(n)[None, :] ** (2.0 * s)
    return float(np.sqrt(np.sum(weight * np.abs(fhat) ** 2)))
