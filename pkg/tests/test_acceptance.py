"""Acceptance criteria 1-13, each at its stated tolerance and runtime budget.

Every test records one PASS/FAIL line; the lines are repeated in the pytest
terminal summary under "acceptance criteria".
"""
import hashlib
import json
import math
import time

import numpy as np

from radial_nlw import experiments as ex
from radial_nlw.basis import SpectralField, analyze, l2_norm_grid, lp_norm, synthesize
from radial_nlw.flow import (Regime, contraction_window, evolve, linear_propagate, picard_solve,
                             regime_check)
from radial_nlw.norms import sobolev_norm, sobolev_norm_array
from radial_nlw.random_data import ModelParams, hamiltonian, sample_free, sample_gibbs
from radial_nlw.rng import member_rng
from radial_nlw.runner import RunConfig, run


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def test_criterion_01_transforms(criterion):
    with Timer() as t:
        rng = np.random.default_rng(1)
        c = rng.standard_normal(64) + 1j * rng.standard_normal(64)
        grid = synthesize(SpectralField(c), 512)
        roundtrip = float(np.max(np.abs(analyze(grid, 64).coeffs - c)))
        parseval = abs(l2_norm_grid(grid) ** 2 - float(np.sum(np.abs(c) ** 2)))
    ok = roundtrip <= 1e-12 and parseval <= 1e-10 and t.elapsed < 1.0
    criterion("criterion 1 (transforms)", ok,
              f"roundtrip={roundtrip:.2e} parseval={parseval:.2e} time={t.elapsed:.2f}s")


def test_criterion_02_eigenfunction_estimates(criterion):
    with Timer() as t:
        l2_dev = max(abs(lp_norm(n, 2.0) - 1.0) for n in range(1, 513))
        n = np.arange(16, 257)
        l4 = np.array([lp_norm(int(k), 4.0) for k in n])
        slope = ex.loglog_slope(n, l4)
    ok = l2_dev <= 1e-8 and abs(slope - 0.25) <= 0.05 and t.elapsed < 10.0
    criterion("criterion 2 (eigenfunction bounds)", ok,
              f"max|L2-1|={l2_dev:.2e} L4 slope={slope:.4f} time={t.elapsed:.2f}s")


def test_criterion_03_linear_flow(criterion):
    with Timer() as t:
        u = sample_free(64, member_rng(3, 0))
        id0 = float(np.max(np.abs(linear_propagate(u, 0.0).coeffs - u.coeffs)))
        id2 = float(np.max(np.abs(linear_propagate(u, 2.0).coeffs - u.coeffs)))
        norm_dev = 0.0
        for tt in (0.1, 0.37, 1.0, 1.9):
            v = linear_propagate(u, tt)
            for s in (-0.5, 0.0, 0.4, 1.0, 2.0):
                a, b = sobolev_norm(v, s), sobolev_norm(u, s)
                norm_dev = max(norm_dev, abs(a - b) / b)
    ok = id0 == 0.0 and id2 <= 1e-12 and norm_dev <= 1e-12 and t.elapsed < 1.0
    criterion("criterion 3 (linear flow)", ok,
              f"|S(0)-I|={id0:.1e} |S(2)-I|={id2:.2e} Hs drift={norm_dev:.1e} "
              f"time={t.elapsed:.2f}s")


def _energy_deviation(u, params, dt):
    tr = evolve(u, params, 2.0, dt, stride=int(round(0.01 / dt)))
    H0 = hamiltonian(tr.state(0), params.alpha, params.M)
    dev = np.array([abs(hamiltonian(f, params.alpha, params.M) - H0) / H0 for f in tr.fields])
    return tr.times, dev


def test_criterion_04_energy_conservation(criterion):
    with Timer() as t:
        params = ModelParams(2.0, 32)
        u = sample_gibbs(params, member_rng(4, 0)).field
        times, dev = _energy_deviation(u, params, 1e-3)
        _, dev_half = _energy_deviation(u, params, 5e-4)
    first, second = dev[times <= 1.0].max(), dev[times > 1.0].max()
    ratio = dev.max() / dev_half.max()
    ok = (dev.max() <= 1e-4 and second <= 2 * first and abs(ratio - 4.0) <= 0.8
          and t.elapsed < 30.0)
    criterion("criterion 4 (energy conservation)", ok,
              f"max dev={dev.max():.2e} second/first={second / first:.2f} "
              f"dt-halving ratio={ratio:.3f} time={t.elapsed:.2f}s")


def test_criterion_05_picard_vs_splitting(criterion):
    params = ModelParams(3.0, 16)
    worst = 0.0
    with Timer() as t:
        for i in range(20):
            u = sample_gibbs(params, member_rng(5, i)).field
            pic = picard_solve(u, params, T_loc=0.1, tol=1e-12, nodes=64)
            # step 0.1/1024 ~ 1e-4 puts every Picard node on the splitting grid
            ref = evolve(u, params, 0.1, 0.1 / 1024, stride=16)
            worst = max(worst, float(np.max(sobolev_norm_array(pic.states - ref.states, 0.4))))
    ok = worst <= 1e-5 and t.elapsed < 120.0
    criterion("criterion 5 (Picard oracle)", ok,
              f"max sup_t H^0.4 gap={worst:.2e} over 20 data time={t.elapsed:.1f}s")


def test_criterion_06_gibbs_sampler(criterion):
    from scipy import integrate

    with Timer() as t:
        params = ModelParams(2.0, 1)
        e1 = lambda r: math.sin(math.pi * r) / (math.sqrt(2 * math.pi) * r)
        I4, _ = integrate.quad(lambda r: 4 * math.pi * r * r * e1(r) ** 4, 0, 1,
                               epsabs=1e-14, epsrel=1e-12)
        x, w = np.polynomial.hermite.hermgauss(80)
        oracle = float(np.sum(w * np.exp(-(x / math.pi) ** 4 * I4 / 4)) / math.sqrt(math.pi))
        acc = ex.acceptance_rate(params, 100_000, 6)
        z = abs(acc["rate"] - oracle) / acc["stderr"]
        chi = ex.gibbs_chisquare(ModelParams(2.0, 16), 10_000, 10_000, 6)
    ok = z <= 3.0 and chi["pvalue"] >= 0.01 and t.elapsed < 60.0
    criterion("criterion 6 (Gibbs sampler)", ok,
              f"rate={acc['rate']:.5f} oracle={oracle:.5f} z={z:.2f} "
              f"chi2 p={chi['pvalue']:.3f} time={t.elapsed:.1f}s")


def test_criterion_07_invariance(criterion):
    with Timer() as t:
        cfg = ex.EnsembleConfig(ModelParams(2.0, 16), T=1.0, dt=1e-3, count=1000,
                                master_seed=7, stride=1000)
        rep = ex.invariance_test(cfg, level=0.01)
        control = ex.invariance_test(ex.EnsembleConfig(cfg.params, T=0.0, count=1000,
                                                       master_seed=7))
    control_zero = all(s == 0.0 for s in control.statistics)
    ok = not rep.any_rejected and control_zero and t.elapsed < 600.0
    pv = ", ".join(f"{o}={p:.3f}" for o, p in zip(rep.observables, rep.corrected_pvalues))
    criterion("criterion 7 (measure invariance)", ok,
              f"corrected p: {pv}; T=0 statistics zero={control_zero} time={t.elapsed:.1f}s")


def test_criterion_08_convergence(criterion):
    with Timer() as t:
        cfg = ex.StudyConfig(3.0, (8, 16, 32, 64), T=1.0, count=100, master_seed=8, s=0.4)
        rep = ex.convergence_study(cfg)
        data = ex.data_difference_study(0.4, [16, 32, 64, 128, 256, 512], 1000, 8)
    med = rep.medians
    decreasing = all(b < a for a, b in zip(med, med[1:]))
    ok = (decreasing and rep.decay_exponent > 0 and abs(data.exponent - (-0.1)) <= 0.05
          and t.elapsed < 1800.0)
    criterion("criterion 8 (Galerkin convergence)", ok,
              f"medians={[round(m, 4) for m in med]} decay exponent={rep.decay_exponent:.3f} "
              f"data exponent={data.exponent:.3f} time={t.elapsed:.1f}s")


def test_criterion_09_smoothing(criterion):
    with Timer() as t:
        cfg = ex.StudyConfig(3.0, (16, 32, 64, 128), T=1.0, count=100, master_seed=9,
                             sigma=(0.8,))
        rep = ex.smoothing_check(cfg)
    ratio = rep.ratio["0.8"]
    ok = ratio <= 2.0 and not rep.warning_regime["0.8"] and t.elapsed < 1800.0
    criterion("criterion 9 (nonlinear smoothing)", ok,
              f"medians={[round(m, 4) for m in rep.medians['0.8']]} max/min={ratio:.3f} "
              f"time={t.elapsed:.1f}s")


def test_criterion_10_subgaussian_tails(criterion):
    with Timer() as t:
        params = ModelParams(3.0, 32)
        data_cfg = ex.EnsembleConfig(params, T=1.0, dt=1e-2, count=10_000, master_seed=10,
                                     data="free", stride=1)
        lin = ex.tail_estimate(data_cfg, "linear_mixed", p=4.0, q=8.0)
        sob = ex.tail_estimate(data_cfg, "data_sobolev_lp", p=4.0, s=0.2)
        nl_cfg = ex.EnsembleConfig(params, T=1.0, dt=1e-3, count=1000, master_seed=10,
                                   data="free", stride=10)
        nl = ex.tail_estimate(nl_cfg, "nonlinear_mixed", p=4.0, q=8.0)
    r2 = {"linear_mixed": lin.r_squared, "data_sobolev_lp": sob.r_squared,
          "nonlinear_mixed": nl.r_squared}
    ok = min(r2.values()) >= 0.9 and t.elapsed < 1800.0
    criterion("criterion 10a (sub-Gaussian tail fits)", ok,
              " ".join(f"R2[{k}]={v:.4f}" for k, v in r2.items()) + f" time={t.elapsed:.1f}s")


def test_criterion_10_theta_collapse(criterion):
    with Timer() as t:
        cfg = ex.EnsembleConfig(ModelParams(3.0, 32), T=1.0, dt=1e-3, count=1000,
                                master_seed=10, data="free", stride=10)
        rep = ex.tail_estimate(cfg, "highpass_mixed", p=4.0, q=8.0, cutoffs=(4, 8, 16))
    col = rep.collapse
    ok = col["overlay"] and t.elapsed < 1800.0
    criterion("criterion 10b (theta-collapse, M in {4,8,16})", ok,
              f"max z={col['max_z']:.1f} (limit 2) theta={[round(v, 3) for v in col['theta']]} "
              f"time={t.elapsed:.1f}s")


def test_criterion_11_strichartz(criterion):
    with Timer() as t:
        cfg = ex.StrichartzConfig(N=32, count=100, master_seed=11, s=0.7, b=0.55, p=2.0)
        rep = ex.strichartz_ratio(cfg)
        times = ex.strichartz_times(cfg)
        f = ex.random_forcing(cfg, 0, times)
        params = ModelParams(1.0, 32)
        n1, d1 = ex.strichartz_ratio_of(times, f, params, 0.7, 0.55, 2.0)
        n2, d2 = ex.strichartz_ratio_of(times, 7.5 * f, params, 0.7, 0.55, 2.0)
    scale_dev = abs(n2 / d2 - n1 / d1) / (n1 / d1)
    ok = rep.max_over_median <= 10.0 and scale_dev <= 1e-13 and t.elapsed < 300.0
    criterion("criterion 11 (Strichartz proxy)", ok,
              f"max/median={rep.max_over_median:.3f} scale deviation={scale_dev:.1e} "
              f"time={t.elapsed:.1f}s")


def test_criterion_12_regime_classifier(criterion):
    with Timer() as t:
        runs = [(contraction_window(3.0), contraction_window(1 + math.sqrt(5)),
                 regime_check(4.0, 0.5), regime_check(3.0, 0.9)) for _ in range(3)]
    w3, empty, no_gibbs, inside = runs[0]
    ok = (w3 == (5 / 6, 1.0) and empty is None and no_gibbs is Regime.NO_GIBBS
          and inside is Regime.CONTRACTION_ADMISSIBLE and all(r == runs[0] for r in runs)
          and t.elapsed < 1.0)
    criterion("criterion 12 (regime classifier)", ok,
              f"alpha=3 window={w3} alpha=1+sqrt5 -> {empty} alpha=4 -> {no_gibbs.value}")


def _sha(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_criterion_13_reproducibility(criterion, tmp_path):
    cfg = RunConfig.from_dict({"kind": "invariance", "parameters": {
        "alpha": 2, "N": 16, "T": 0.2, "dt": 1e-3, "count": 400, "master_seed": 13,
        "stride": 50}})
    run(cfg, tmp_path / "a")
    run(cfg, tmp_path / "b", threads=2)
    run(cfg, tmp_path / "c", max_members=256)
    partial = json.loads((tmp_path / "c" / "manifest.json").read_text())["completed"]
    run(cfg, tmp_path / "c", resume=True)
    names = ("summary.csv", "members.jsonl", "report.json")
    same_repeat = all(_sha(tmp_path / "a" / n) == _sha(tmp_path / "b" / n) for n in names)
    same_resume = all(_sha(tmp_path / "a" / n) == _sha(tmp_path / "c" / n) for n in names)
    ok = same_repeat and same_resume and partial == 256
    criterion("criterion 13 (reproducibility)", ok,
              f"repeat identical={same_repeat} resumed-after-{partial} identical={same_resume} "
              f"summary sha256={_sha(tmp_path / 'a' / 'summary.csv')[:16]}")
