"""Monte Carlo verification suites.

Every suite is split into a member stage (``*_records``: pure function of the
configuration and a range of member indices, each member drawing from its own
derived stream) and a summary stage (``*_summary``: deterministic reduction of
the ordered records).  The run orchestrator persists the records between the
two, which is what makes interrupted runs resumable.

Members are processed in aligned chunks of :data:`CHUNK` so that batched
integration sees the same batches on every run.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .basis import (ball_integral, default_grid_size, frequencies, radial_grid,
                    synthesize_array)
from .errors import DomainError, MeasureUndefinedError, ParameterError
from .flow import Trajectory, duhamel_array, evolve_array
from .norms import DEFAULT_B, mixed_norm_values, sobolev_norm_array, xsb_norm
from .random_data import (GIBBS_ALPHA_LIMIT, ModelParams, kinetic_array, potential_array,
                          sample_free_array, sample_gibbs)
from .rng import member_rng

CHUNK = 128
DEFAULT_OBSERVABLES = ("l2sq", "potential", "re_c1", "abs_cN")
FIT_QUANTILES = (0.5, 0.99)
SCHEDULE_Q = 64.0
REPORT_QUANTILES = (0.1, 0.5, 0.9)


def _plain(obj):
    """Convert numpy scalars/arrays inside a report into JSON-friendly values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


class _Report:
    def to_dict(self) -> dict:
        return _plain(asdict(self))


def chunk_bounds(start: int, stop: int, size: int = CHUNK):
    """Split ``[start, stop)`` at multiples of ``size``."""
    lo = start
    while lo < stop:
        hi = min(stop, (lo // size + 1) * size)
        yield lo, hi
        lo = hi


def ensemble_map(fn, start: int, stop: int, threads: int = 1) -> list:
    """Apply ``fn(lo, hi) -> list`` over aligned chunks, concatenating in order."""
    bounds = list(chunk_bounds(start, stop))
    if threads <= 1 or len(bounds) <= 1:
        parts = [fn(lo, hi) for lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda b: fn(*b), bounds))
    return [rec for part in parts for rec in part]


def loglog_slope(x, y) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    return float(np.polyfit(np.log(np.asarray(x, float)), np.log(np.asarray(y, float)), 1)[0])


# -- data ---------------------------------------------------------------------

@dataclass(frozen=True)
class EnsembleConfig:
    """Reproducibility key of an ensemble run."""

    params: ModelParams
    T: float = 1.0
    dt: float = 1e-3
    count: int = 100
    master_seed: int = 0
    lambda_grid: Optional[tuple] = None
    observables: tuple = DEFAULT_OBSERVABLES
    stride: int = 10
    data: str = "gibbs"

    def __post_init__(self):
        if self.count < 2:
            raise DomainError("ensemble count must be >= 2")
        if self.lambda_grid is not None:
            grid = tuple(float(v) for v in self.lambda_grid)
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise DomainError("lambda grid must be strictly increasing")
            object.__setattr__(self, "lambda_grid", grid)
        if self.data not in ("gibbs", "free"):
            raise DomainError("data must be 'gibbs' or 'free'")
        object.__setattr__(self, "observables", tuple(self.observables))


def draw_member(cfg: EnsembleConfig, index: int):
    """Initial coefficients and rejection attempt count of member ``index``."""
    rng = member_rng(cfg.master_seed, index)
    if cfg.data == "free":
        return sample_free_array(cfg.params.N, rng), 1
    sample = sample_gibbs(cfg.params, rng)
    return sample.field.coeffs, sample.attempts


def _draw_batch(cfg: EnsembleConfig, lo: int, hi: int):
    draws = [draw_member(cfg, i) for i in range(lo, hi)]
    return np.array([d[0] for d in draws]), [d[1] for d in draws]


# -- invariance ---------------------------------------------------------------

def observable_values(c: np.ndarray, name: str, params: ModelParams) -> np.ndarray:
    if name == "l2sq":
        return np.sum(np.abs(c) ** 2, axis=-1)
    if name == "potential":
        return potential_array(c.real, params.alpha, params.M)
    if name == "hamiltonian":
        return kinetic_array(c) + potential_array(c.real, params.alpha, params.M)
    if name == "re_c1":
        return c[..., 0].real
    if name == "abs_cN":
        return np.abs(c[..., -1])
    raise DomainError(f"unknown observable {name!r}")


@dataclass(frozen=True)
class InvarianceReport(_Report):
    observables: list
    statistics: list
    pvalues: list
    corrected_pvalues: list
    rejected: list
    level: float
    count: int
    T: float

    @property
    def any_rejected(self) -> bool:
        return any(self.rejected)


def _require_gibbs(alpha: float):
    if alpha >= GIBBS_ALPHA_LIMIT:
        raise MeasureUndefinedError(f"Gibbs measure is undefined for alpha={alpha} >= 4")


def invariance_records(cfg: EnsembleConfig, start: int, stop: int) -> list:
    _require_gibbs(cfg.params.alpha)
    c0, attempts = _draw_batch(cfg, start, stop)
    n = int(round(cfg.T / cfg.dt))
    _, states = evolve_array(c0, cfg.params, cfg.T, cfg.dt, stride=max(n, 1))
    cT = states[-1]
    out = []
    vals0 = {k: observable_values(c0, k, cfg.params) for k in cfg.observables}
    valsT = {k: observable_values(cT, k, cfg.params) for k in cfg.observables}
    for j, i in enumerate(range(start, stop)):
        rec = {"index": i, "attempts": attempts[j]}
        for k in cfg.observables:
            rec[f"{k}_0"] = float(vals0[k][j])
            rec[f"{k}_T"] = float(valsT[k][j])
        out.append(rec)
    return out


def invariance_summary(cfg: EnsembleConfig, records: Sequence[dict],
                       level: float = 0.01) -> InvarianceReport:
    names = list(cfg.observables)
    st, pv = [], []
    for k in names:
        a = np.array([r[f"{k}_0"] for r in records])
        b = np.array([r[f"{k}_T"] for r in records])
        res = stats.ks_2samp(a, b)
        st.append(float(res.statistic))
        pv.append(float(res.pvalue))
    corrected = [min(1.0, p * len(names)) for p in pv]
    return InvarianceReport(names, st, pv, corrected, [p < level for p in corrected],
                            level, len(records), cfg.T)


def invariance_test(cfg: EnsembleConfig, level: float = 0.01, threads: int = 1) -> InvarianceReport:
    """Two-sample KS comparison of observables at time 0 and time ``T``."""
    _require_gibbs(cfg.params.alpha)
    recs = ensemble_map(lambda lo, hi: invariance_records(cfg, lo, hi), 0, cfg.count, threads)
    return invariance_summary(cfg, recs, level)


# -- tails --------------------------------------------------------------------

TAIL_QUANTITIES = ("linear_mixed", "data_sobolev_lp", "nonlinear_mixed", "highpass_mixed",
                   "constant")


@dataclass(frozen=True)
class TailSpec:
    """Functional whose tail is estimated.

    ``linear_mixed``: ``||S(t) phi||_{L^p_x L^q_t([0,T])}``;
    ``data_sobolev_lp``: ``||(sqrt(-Lap))^s phi||_{L^p_x}``;
    ``nonlinear_mixed``: ``||u_N||_{L^p_x L^q_t([0,T])}``;
    ``highpass_mixed``: ``||u_N - P_K u_N||_{L^p_x L^q_t([0,T])}`` for each ``K`` in
    ``cutoffs``; ``constant``: the number ``value`` (test hook).
    """

    quantity: str
    p: float = 4.0
    q: float = 8.0
    s: float = 0.0
    cutoffs: tuple = (4, 8, 16)
    value: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "cutoffs", tuple(int(k) for k in self.cutoffs))


def check_tail_admissible(spec: TailSpec) -> None:
    """Raise :class:`ParameterError` naming the violated condition."""
    if spec.quantity not in TAIL_QUANTITIES:
        raise ParameterError(f"unknown tail quantity {spec.quantity!r}")
    if spec.quantity == "constant":
        return
    if not 2.0 <= spec.p < 6.0:
        raise ParameterError(f"need 2 <= p < 6 (got p={spec.p})")
    if spec.quantity == "data_sobolev_lp":
        if not 0.0 <= spec.s < 0.5:
            raise ParameterError(f"need 0 <= s < 1/2 (got s={spec.s})")
        if not spec.p < 6.0 / (1.0 + 2.0 * spec.s):
            raise ParameterError(f"need p < 6/(1+2s) = {6.0 / (1.0 + 2.0 * spec.s):g} "
                                 f"(got p={spec.p}, s={spec.s})")
        return
    if not 2.0 <= spec.q < math.inf:
        raise ParameterError(f"need 2 <= q < infinity (got q={spec.q})")


def highpass_theta(T: float, q: float, p: float, cutoff: int) -> float:
    """``theta = T^(-1/q) K^(3/p - 1/2)`` for high-pass cutoff ``K``."""
    return T ** (-1.0 / q) * cutoff ** (3.0 / p - 0.5)


@dataclass(frozen=True)
class TailReport(_Report):
    quantity: str
    count: int
    lambdas: list
    survival: list
    stderr: list
    fit_intercept: float
    fit_rate: float
    r_squared: float
    mean: float
    quantiles: dict
    collapse: Optional[dict] = None


def survival_curve(x: np.ndarray, grid: np.ndarray):
    x = np.asarray(x, float)
    S = np.mean(x[:, None] > np.asarray(grid)[None, :], axis=0)
    return S, np.sqrt(S * (1.0 - S) / x.size)


def subgaussian_fit(x: np.ndarray, quantile_range=FIT_QUANTILES, points: int = 50):
    """Fit ``log P(X > lam) = a - c lam^2`` on empirical quantiles; return ``(a, c, R^2)``."""
    u = np.linspace(quantile_range[0], quantile_range[1], points)
    lam = np.quantile(np.asarray(x, float), u)
    y = np.log1p(-u)
    if np.ptp(lam) == 0.0:
        return 0.0, math.inf, 0.0
    A = np.column_stack([np.ones_like(lam), lam ** 2])
    coef = np.linalg.lstsq(A, y, rcond=None)[0]
    resid = y - A @ coef
    r2 = 1.0 - float(np.sum(resid ** 2)) / float(np.sum((y - y.mean()) ** 2))
    return float(coef[0]), float(-coef[1]), r2


def collapse_check(samples: dict, theta: dict, points: int = 40, quantile_range=(0.01, 0.99)):
    """Compare survival curves of ``theta_K X_K`` on a common grid.

    Curves overlay when every pairwise gap is within twice the combined
    binomial standard error.
    """
    scaled = {k: theta[k] * np.asarray(v, float) for k, v in samples.items()}
    pooled = np.concatenate(list(scaled.values()))
    grid = np.quantile(pooled, np.linspace(quantile_range[0], quantile_range[1], points))
    curves = {k: survival_curve(v, grid) for k, v in scaled.items()}
    keys = sorted(curves)
    worst = 0.0
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            Sa, ea = curves[a]
            Sb, eb = curves[b]
            se = np.sqrt(ea ** 2 + eb ** 2)
            gap = np.abs(Sa - Sb)
            z = np.where(se > 0, gap / np.where(se > 0, se, 1.0), np.where(gap > 0, np.inf, 0.0))
            worst = max(worst, float(np.max(z)))
    return {
        "cutoffs": keys,
        "theta": [theta[k] for k in keys],
        "grid": grid.tolist(),
        "survival": {str(k): curves[k][0].tolist() for k in keys},
        "stderr": {str(k): curves[k][1].tolist() for k in keys},
        "max_z": worst,
        "overlay": worst <= 2.0,
    }


def _record_times(cfg: EnsembleConfig) -> np.ndarray:
    n = int(round(cfg.T / cfg.dt))
    stride = max(cfg.stride, 1)
    steps = sorted(set(range(0, n + 1, stride)) | {n})
    return np.asarray(steps, float) * cfg.dt


def tail_records(cfg: EnsembleConfig, spec: TailSpec, start: int, stop: int) -> list:
    check_tail_admissible(spec)
    idx = list(range(start, stop))
    if spec.quantity == "constant":
        return [{"index": i, "value": float(spec.value)} for i in idx]
    c0, _ = _draw_batch(cfg, start, stop)
    M = cfg.params.M
    if spec.quantity == "data_sobolev_lp":
        weighted = c0 * frequencies(cfg.params.N) ** spec.s
        f = np.abs(synthesize_array(weighted, M) / radial_grid(M))
        vals = ball_integral(f ** spec.p, M) ** (1.0 / spec.p)
        return [{"index": i, "value": float(v)} for i, v in zip(idx, vals)]
    times = _record_times(cfg)
    if spec.quantity == "linear_mixed":
        states = c0[None] * np.exp(-1j * np.outer(times, frequencies(cfg.params.N)))[:, None, :]
    else:
        times, states = evolve_array(c0, cfg.params, cfg.T, cfg.dt, cfg.stride)
    if spec.quantity != "highpass_mixed":
        vals = mixed_norm_values(times, states, spec.p, spec.q, M)
        return [{"index": i, "value": float(v)} for i, v in zip(idx, vals)]
    recs = [{"index": i} for i in idx]
    for K in spec.cutoffs:
        hp = states.copy()
        hp[..., :K] = 0.0
        vals = mixed_norm_values(times, hp, spec.p, spec.q, M)
        for r, v in zip(recs, vals):
            r[f"value_{K}"] = float(v)
    return recs


def tail_summary(cfg: EnsembleConfig, spec: TailSpec, records: Sequence[dict]) -> TailReport:
    if spec.quantity == "highpass_mixed":
        samples = {K: np.array([r[f"value_{K}"] for r in records]) for K in spec.cutoffs}
        x = samples[spec.cutoffs[0]]
        theta = {K: highpass_theta(cfg.T, spec.q, spec.p, K) for K in spec.cutoffs}
        collapse = collapse_check(samples, theta)
    else:
        x = np.array([r["value"] for r in records])
        collapse = None
    grid = (np.asarray(cfg.lambda_grid) if cfg.lambda_grid is not None
            else np.linspace(0.0, float(np.max(x)), 50))
    S, se = survival_curve(x, grid)
    a, c, r2 = subgaussian_fit(x)
    qs = {str(u): float(np.quantile(x, u)) for u in (0.5, 0.9, 0.99)}
    return TailReport(spec.quantity, len(records), grid.tolist(), S.tolist(), se.tolist(),
                      a, c, r2, float(np.mean(x)), qs, collapse)


def tail_estimate(cfg: EnsembleConfig, quantity, threads: int = 1, **kwargs) -> TailReport:
    """Empirical survival function and sub-Gaussian fit of a named functional.

    ``quantity`` is a :class:`TailSpec` or the name of one (extra keyword
    arguments fill in the remaining fields).
    """
    spec = quantity if isinstance(quantity, TailSpec) else TailSpec(quantity, **kwargs)
    check_tail_admissible(spec)
    recs = ensemble_map(lambda lo, hi: tail_records(cfg, spec, lo, hi), 0, cfg.count, threads)
    return tail_summary(cfg, spec, recs)


# -- truncation studies -------------------------------------------------------

@dataclass(frozen=True)
class StudyConfig:
    """Parameters shared by the convergence and smoothing studies.

    All cutoffs in ``N_list`` see coupled data: member ``i`` draws one set of
    Gaussians at the largest cutoff and every truncation is its prefix.
    """

    alpha: float
    N_list: tuple
    T: float = 1.0
    count: int = 100
    master_seed: int = 0
    s: float = 0.4
    sigma: tuple = (0.8,)
    dt: float = 1e-3
    stride: int = 10
    coupling: float = 0.5

    def __post_init__(self):
        N_list = tuple(int(n) for n in self.N_list)
        if any(b <= a for a, b in zip(N_list, N_list[1:])):
            raise DomainError("N_list must be strictly increasing")
        if self.count < 1:
            raise DomainError("count must be >= 1")
        sigma = self.sigma if isinstance(self.sigma, (tuple, list)) else (self.sigma,)
        object.__setattr__(self, "N_list", N_list)
        object.__setattr__(self, "sigma", tuple(float(v) for v in sigma))

    def params(self, N: int) -> ModelParams:
        return ModelParams(self.alpha, N, None, self.coupling)


def coupled_data(cfg: StudyConfig, start: int, stop: int, N: Optional[int] = None) -> np.ndarray:
    N = max(cfg.N_list) if N is None else N
    return np.array([sample_free_array(N, member_rng(cfg.master_seed, i))
                     for i in range(start, stop)])


def _pad(a: np.ndarray, N: int) -> np.ndarray:
    out = np.zeros(a.shape[:-1] + (N,), dtype=complex)
    out[..., :a.shape[-1]] = a
    return out


def _evolve_cutoffs(cfg: StudyConfig, phi: np.ndarray):
    out = {}
    for N in cfg.N_list:
        times, states = evolve_array(phi[:, :N], cfg.params(N), cfg.T, cfg.dt, cfg.stride)
        out[N] = states
    return times, out


def bootstrap_schedule(alpha: float, N0: int, q: float = SCHEDULE_Q, C: float = 1.0) -> dict:
    """Diagnostic values of the bootstrap time step used in the convergence proof."""
    gamma = (2.0 - alpha / 2.0 - alpha / q) / 2.0
    B = math.log(N0) ** (gamma / alpha)
    dt = (1.0 / (2.0 * C * B ** alpha)) ** (1.0 / gamma)
    return {"N0": N0, "gamma": gamma, "B": B, "dt": dt}


def _quantile_table(x) -> list:
    return [float(np.quantile(x, u)) for u in REPORT_QUANTILES]


@dataclass(frozen=True)
class ConvergenceReport(_Report):
    alpha: float
    s: float
    sigma: float
    pairs: list
    quantiles: list
    medians: list
    decay_exponent: float
    data_medians: list
    data_exponent: float
    bound_exponent: float
    schedule: list


def _pairs(N_list):
    return list(zip(N_list[:-1], N_list[1:]))


def convergence_records(cfg: StudyConfig, start: int, stop: int) -> list:
    if not 0.0 < cfg.s < 0.5:
        raise ParameterError(f"need 0 < s < 1/2 (got s={cfg.s})")
    phi = coupled_data(cfg, start, stop)
    _, states = _evolve_cutoffs(cfg, phi)
    recs = [{"index": i} for i in range(start, stop)]
    for N0, N1 in _pairs(cfg.N_list):
        diff = states[N1] - _pad(states[N0], N1)
        sup = np.max(sobolev_norm_array(diff, cfg.s), axis=0)
        data = sobolev_norm_array(_pad(phi[:, :N1], N1) - _pad(phi[:, :N0], N1), cfg.s)
        for r, v, d in zip(recs, sup, data):
            r[f"diff_{N0}_{N1}"] = float(v)
            r[f"data_{N0}_{N1}"] = float(d)
    return recs


def convergence_summary(cfg: StudyConfig, records: Sequence[dict]) -> ConvergenceReport:
    pairs = _pairs(cfg.N_list)
    quantiles, medians, data_medians = [], [], []
    for N0, N1 in pairs:
        x = np.array([r[f"diff_{N0}_{N1}"] for r in records])
        d = np.array([r[f"data_{N0}_{N1}"] for r in records])
        quantiles.append(_quantile_table(x))
        medians.append(float(np.median(x)))
        data_medians.append(float(np.median(d)))
    N0s = [p[0] for p in pairs]
    usable = [m > 0 for m in medians]
    if len(pairs) >= 2 and all(usable):
        decay = -loglog_slope(N0s, medians)
        data_exp = loglog_slope(N0s, data_medians)
    else:
        decay = data_exp = math.nan
    return ConvergenceReport(cfg.alpha, cfg.s, cfg.sigma[0], [list(p) for p in pairs], quantiles,
                             medians, decay, data_medians, data_exp, (1.0 - 2.0 * cfg.s) / 16.0,
                             [bootstrap_schedule(cfg.alpha, N0) for N0 in N0s])


def convergence_study(cfg: StudyConfig, threads: int = 1) -> ConvergenceReport:
    """Coupled-data differences ``sup_t ||u_{N1} - u_{N0}||_{H^s}`` for adjacent cutoffs."""
    if not 0.0 < cfg.s < 0.5:
        raise ParameterError(f"need 0 < s < 1/2 (got s={cfg.s})")
    recs = ensemble_map(lambda lo, hi: convergence_records(cfg, lo, hi), 0, cfg.count, threads)
    return convergence_summary(cfg, recs)


@dataclass(frozen=True)
class DataDifferenceReport(_Report):
    s: float
    N_list: list
    medians: list
    exponent: float
    predicted: float


def data_difference_study(s: float, N_list: Sequence[int], count: int,
                          master_seed: int) -> DataDifferenceReport:
    """Medians of ``||phi_{2N} - phi_N||_{H^s}`` for coupled free data."""
    N_list = [int(n) for n in N_list]
    top = 2 * max(N_list)
    phi = np.array([sample_free_array(top, member_rng(master_seed, i)) for i in range(count)])
    medians = []
    for N in N_list:
        tail = _pad(phi[:, :2 * N], 2 * N)
        tail[:, :N] = 0.0
        medians.append(float(np.median(sobolev_norm_array(tail, s))))
    return DataDifferenceReport(s, N_list, medians, loglog_slope(N_list, medians), s - 0.5)


@dataclass(frozen=True)
class SmoothingReport(_Report):
    alpha: float
    sigmas: list
    N_list: list
    quantiles: dict
    medians: dict
    ratio: dict
    bounded: dict
    warning_regime: dict


def smoothing_records(cfg: StudyConfig, start: int, stop: int) -> list:
    phi = coupled_data(cfg, start, stop)
    times, states = _evolve_cutoffs(cfg, phi)
    recs = [{"index": i} for i in range(start, stop)]
    for N in cfg.N_list:
        free = phi[None, :, :N] * np.exp(-1j * np.outer(times, frequencies(N)))[:, None, :]
        nonlinear_part = states[N] - free
        for sg in cfg.sigma:
            sup = np.max(sobolev_norm_array(nonlinear_part, sg), axis=0)
            for r, v in zip(recs, sup):
                r[f"smooth_{sg:g}_{N}"] = float(v)
    return recs


def smoothing_summary(cfg: StudyConfig, records: Sequence[dict],
                      max_ratio: float = 2.0) -> SmoothingReport:
    quantiles, medians, ratio, bounded, warn = {}, {}, {}, {}, {}
    for sg in cfg.sigma:
        key = f"{sg:g}"
        qs, meds = [], []
        for N in cfg.N_list:
            x = np.array([r[f"smooth_{key}_{N}"] for r in records])
            qs.append(_quantile_table(x))
            meds.append(float(np.median(x)))
        quantiles[key] = qs
        medians[key] = meds
        lo, hi = min(meds), max(meds)
        ratio[key] = hi / lo if lo > 0 else (1.0 if hi == 0 else math.inf)
        bounded[key] = ratio[key] <= max_ratio
        warn[key] = sg >= (5.0 - cfg.alpha) / 2.0
    return SmoothingReport(cfg.alpha, list(cfg.sigma), list(cfg.N_list), quantiles, medians,
                           ratio, bounded, warn)


def smoothing_check(cfg: StudyConfig, threads: int = 1) -> SmoothingReport:
    """Size of the nonlinear Duhamel part ``u_N - S(t) P_N phi`` in ``H^sigma`` across N.

    ``sigma >= (5 - alpha)/2`` is allowed as a diagnostic and flagged in
    ``warning_regime``.
    """
    recs = ensemble_map(lambda lo, hi: smoothing_records(cfg, lo, hi), 0, cfg.count, threads)
    return smoothing_summary(cfg, recs)


# -- Strichartz ---------------------------------------------------------------

@dataclass(frozen=True)
class StrichartzConfig:
    """Random band-limited forcings on ``[0, window]``.

    Forcing member ``i``: ``f_n(t) = Re sum_{|m| <= band} g_{mn} exp(-i pi m t)``
    with iid standard complex Gaussians ``g_{mn}``, sampled every
    ``2 / samples_per_period``.
    """

    N: int = 32
    count: int = 100
    master_seed: int = 0
    s: float = 0.7
    b: float = DEFAULT_B
    p: float = 2.0
    window: float = 0.5
    samples_per_period: int = 1024
    band: Optional[int] = None
    M: Optional[int] = None


def check_strichartz_admissible(cfg: StrichartzConfig) -> None:
    if not 0.0 < cfg.s < 1.0:
        raise ParameterError(f"need 0 < s < 1 (got s={cfg.s})")
    if not cfg.p > 3.0 / (3.0 - cfg.s):
        raise ParameterError(f"need p > 3/(3-s) = {3.0 / (3.0 - cfg.s):g} (got p={cfg.p})")
    if not cfg.b > 0.5:
        raise ParameterError(f"need b > 1/2 (got b={cfg.b})")
    if not 0.0 < cfg.window <= 0.5:
        raise ParameterError(f"need window length <= 1/2 (got {cfg.window})")


def strichartz_times(cfg: StrichartzConfig) -> np.ndarray:
    h = 2.0 / cfg.samples_per_period
    k = int(round(cfg.window / h))
    return np.arange(k + 1) * h


def random_forcing(cfg: StrichartzConfig, index: int, times: np.ndarray) -> np.ndarray:
    rng = member_rng(cfg.master_seed, index)
    band = cfg.N if cfg.band is None else cfg.band
    m = np.arange(-band, band + 1)
    g = (rng.standard_normal((m.size, cfg.N)) + 1j * rng.standard_normal((m.size, cfg.N)))
    g *= math.sqrt(0.5)
    return (np.exp(-1j * math.pi * np.outer(times, m)) @ g).real


@dataclass(frozen=True)
class StrichartzReport(_Report):
    s: float
    b: float
    p: float
    count: int
    excluded: int
    max: float
    median: float
    max_over_median: float


def strichartz_ratio_of(times: np.ndarray, forcing: np.ndarray, params: ModelParams,
                        s: float, b: float, p: float):
    """``(||D f||_{X^{s,b}}, ||f||_{L^p_x L^2_t})`` for one forcing history."""
    duh = duhamel_array(times, forcing)
    num = xsb_norm(Trajectory(params, times, duh, float(times[1] - times[0]), "duhamel"), s, b)
    den = float(mixed_norm_values(times, forcing.astype(complex), p, 2.0, params.M))
    return num, den


def strichartz_records(cfg: StrichartzConfig, start: int, stop: int) -> list:
    check_strichartz_admissible(cfg)
    times = strichartz_times(cfg)
    params = ModelParams(1.0, cfg.N, cfg.M if cfg.M is not None else default_grid_size(cfg.N, 1.0))
    out = []
    for i in range(start, stop):
        f = random_forcing(cfg, i, times)
        num, den = strichartz_ratio_of(times, f, params, cfg.s, cfg.b, cfg.p)
        out.append({"index": i, "xsb": num, "lpl2": den,
                    "ratio": num / den if den > 0 else math.nan})
    return out


def strichartz_summary(cfg: StrichartzConfig, records: Sequence[dict]) -> StrichartzReport:
    r = np.array([rec["ratio"] for rec in records if rec["lpl2"] > 0])
    excluded = len(records) - r.size
    mx, med = float(np.max(r)), float(np.median(r))
    return StrichartzReport(cfg.s, cfg.b, cfg.p, int(r.size), excluded, mx, med, mx / med)


def strichartz_ratio(cfg: StrichartzConfig, threads: int = 1) -> StrichartzReport:
    """Ratio of the Duhamel term's X^{s,b} proxy to ``||f||_{L^p_x L^2_t}``."""
    check_strichartz_admissible(cfg)
    recs = ensemble_map(lambda lo, hi: strichartz_records(cfg, lo, hi), 0, cfg.count, threads)
    return strichartz_summary(cfg, recs)


# -- Gibbs sampler diagnostics -------------------------------------------------

def acceptance_rate(params: ModelParams, proposals: int, master_seed: int) -> dict:
    """Empirical rejection-sampler acceptance rate over at least ``proposals`` attempts."""
    attempts = accepted = 0
    i = 0
    while attempts < proposals:
        attempts += sample_gibbs(params, member_rng(master_seed, i)).attempts
        accepted += 1
        i += 1
    rate = accepted / attempts
    return {"rate": rate, "stderr": math.sqrt(rate * (1 - rate) / attempts),
            "attempts": attempts, "accepted": accepted}


def gibbs_chisquare(params: ModelParams, n_gibbs: int, n_free: int, master_seed: int,
                    bins: int = 20) -> dict:
    """Two-sample chi-square comparison of the potential ``V`` under accepted Gibbs
    draws and under free draws reweighted by ``exp(-V)``.

    Bin edges are weighted quantiles of the reweighted sample, so every bin has
    estimated probability ``1/bins``.  Both bin-probability estimates are noisy,
    so each squared gap is scaled by ``p (1/n_gibbs + 1/n_eff)`` with the
    effective size ``n_eff = (sum w)^2 / sum w^2`` of the weighted sample.
    """
    V_g = np.array([sample_gibbs(params, member_rng(master_seed, i)).potential
                    for i in range(n_gibbs)])
    rng = member_rng(master_seed ^ 0x5DEECE66D, 0)
    V_f = potential_array(sample_free_array(params.N, rng, n_free).real, params.alpha, params.M)
    w = np.exp(-V_f)
    n_eff = float(np.sum(w) ** 2 / np.sum(w * w))
    order = np.argsort(V_f)
    cw = np.cumsum(w[order]) / np.sum(w)
    edges = np.interp(np.arange(1, bins) / bins, cw, V_f[order])
    probs = np.diff(np.concatenate([[0.0], np.interp(edges, V_f[order], cw), [1.0]]))
    observed = np.bincount(np.searchsorted(edges, V_g), minlength=bins)
    gap = observed / n_gibbs - probs
    chi2 = float(np.sum(gap ** 2 / (probs * (1.0 / n_gibbs + 1.0 / n_eff))))
    return {"statistic": chi2, "dof": bins - 1,
            "pvalue": float(stats.chi2.sf(chi2, bins - 1)), "n_eff": n_eff,
            "observed": observed.tolist(), "expected": (probs * n_gibbs).tolist()}


# -- plain sampling and evolution ensembles -----------------------------------

def sample_records(cfg: EnsembleConfig, start: int, stop: int) -> list:
    out = []
    for i in range(start, stop):
        c, attempts = draw_member(cfg, i)
        out.append({"index": i, "attempts": attempts,
                    "l2sq": float(np.sum(np.abs(c) ** 2)),
                    "potential": float(potential_array(c.real, cfg.params.alpha, cfg.params.M)),
                    "kinetic": float(kinetic_array(c))})
    return out


def sample_summary(cfg: EnsembleConfig, records: Sequence[dict]) -> dict:
    attempts = sum(r["attempts"] for r in records)
    rate = len(records) / attempts
    return _plain({
        "count": len(records),
        "acceptance_rate": rate,
        "acceptance_stderr": math.sqrt(rate * (1 - rate) / attempts),
        "mean_l2sq": np.mean([r["l2sq"] for r in records]),
        "mean_potential": np.mean([r["potential"] for r in records]),
        "mean_kinetic": np.mean([r["kinetic"] for r in records]),
    })


def evolve_records(cfg: EnsembleConfig, start: int, stop: int) -> list:
    c0, attempts = _draw_batch(cfg, start, stop)
    _, states = evolve_array(c0, cfg.params, cfg.T, cfg.dt, cfg.stride)
    H = observable_values(states, "hamiltonian", cfg.params)
    scale = np.where(H[0] > 0, H[0], 1.0)
    drift = np.max(np.abs(H - H[0]) / scale, axis=0)
    cT = states[-1]
    return [{"index": i, "attempts": attempts[j], "hamiltonian_0": float(H[0, j]),
             "max_rel_energy_error": float(drift[j]),
             "l2sq_T": float(np.sum(np.abs(cT[j]) ** 2)),
             "potential_T": float(potential_array(cT[j].real, cfg.params.alpha, cfg.params.M))}
            for j, i in enumerate(range(start, stop))]


def evolve_summary(cfg: EnsembleConfig, records: Sequence[dict]) -> dict:
    err = np.array([r["max_rel_energy_error"] for r in records])
    return _plain({"count": len(records), "max_rel_energy_error": np.max(err),
                   "median_rel_energy_error": np.median(err)})
