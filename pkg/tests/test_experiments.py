import math

import numpy as np
import pytest

from radial_nlw import experiments as ex
from radial_nlw.errors import DomainError, MeasureUndefinedError, ParameterError
from radial_nlw.random_data import ModelParams


def small_ensemble(**kw):
    base = dict(params=ModelParams(2, 8), T=0.1, dt=1e-2, count=20, master_seed=3, stride=5)
    base.update(kw)
    return ex.EnsembleConfig(**base)


def test_chunk_bounds_and_map():
    assert list(ex.chunk_bounds(0, 300)) == [(0, 128), (128, 256), (256, 300)]
    assert list(ex.chunk_bounds(130, 300)) == [(130, 256), (256, 300)]
    out = ex.ensemble_map(lambda lo, hi: list(range(lo, hi)), 0, 300, threads=2)
    assert out == list(range(300))


def test_loglog_slope():
    x = np.array([1, 2, 4, 8])
    assert ex.loglog_slope(x, 3 * x ** -0.7) == pytest.approx(-0.7)


def test_ensemble_config_validation():
    with pytest.raises(DomainError):
        small_ensemble(count=1)
    with pytest.raises(DomainError):
        small_ensemble(lambda_grid=(1.0, 0.5))
    with pytest.raises(DomainError):
        small_ensemble(data="other")


def test_records_do_not_depend_on_chunking():
    cfg = small_ensemble()
    whole = ex.invariance_records(cfg, 0, 20)
    parts = ex.invariance_records(cfg, 0, 7) + ex.invariance_records(cfg, 7, 20)
    assert whole == parts


def test_invariance_zero_time_control():
    cfg = small_ensemble(T=0.0, count=50)
    rep = ex.invariance_test(cfg)
    assert all(s == 0.0 for s in rep.statistics)
    assert not rep.any_rejected


def test_invariance_requires_gibbs_measure():
    with pytest.raises(MeasureUndefinedError):
        ex.invariance_test(small_ensemble(params=ModelParams(4, 8)))


def test_invariance_detects_a_non_invariant_ensemble():
    """Free data with strong nonlinearity is not stationary under the flow."""
    cfg = small_ensemble(params=ModelParams(2, 8, coupling=200.0), data="free", count=400,
                         T=0.3, dt=1e-3, stride=100)
    rep = ex.invariance_test(cfg, level=0.01)
    assert rep.any_rejected


def test_tail_constant_hook_and_admissibility():
    cfg = small_ensemble()
    rep = ex.tail_estimate(cfg, "constant", value=2.0)
    assert rep.mean == 2.0 and rep.r_squared == 0.0
    for kw in ({"quantity": "linear_mixed", "p": 6.0}, {"quantity": "linear_mixed", "q": math.inf},
               {"quantity": "data_sobolev_lp", "s": 0.5},
               {"quantity": "data_sobolev_lp", "s": 0.4, "p": 4.0},
               {"quantity": "nope"}):
        with pytest.raises(ParameterError):
            ex.check_tail_admissible(ex.TailSpec(**kw))


def test_subgaussian_fit_recovers_rayleigh_rate(rng):
    # Rayleigh: P(X > lam) = exp(-lam^2 / 2) exactly
    x = rng.rayleigh(1.0, 50000)
    a, c, r2 = ex.subgaussian_fit(x)
    assert r2 > 0.999
    assert c == pytest.approx(0.5, rel=0.05)
    assert a == pytest.approx(0.0, abs=0.05)


def test_collapse_check_overlays_rescaled_copies(rng):
    x = np.abs(rng.standard_normal(4000))
    y = np.abs(rng.standard_normal(4000))
    res = ex.collapse_check({4: 2 * x, 8: 4 * x}, {4: 0.5, 8: 0.25})
    assert res["overlay"] and res["max_z"] == 0.0
    res = ex.collapse_check({4: x, 8: 3 * y}, {4: 1.0, 8: 1.0})
    assert not res["overlay"]


def test_highpass_theta():
    assert ex.highpass_theta(1.0, 8, 4, 16) == pytest.approx(16 ** 0.25)
    assert ex.highpass_theta(0.5, 2, 6, 10) == pytest.approx(0.5 ** -0.5)


def test_tail_quantities_run(rng):
    cfg = small_ensemble(data="free", count=40)
    for q in ("linear_mixed", "nonlinear_mixed", "data_sobolev_lp"):
        rep = ex.tail_estimate(cfg, q, s=0.1 if q == "data_sobolev_lp" else 0.0)
        assert rep.count == 40 and rep.mean > 0
        assert rep.survival[0] <= 1.0
    hp = ex.tail_estimate(cfg, "highpass_mixed", cutoffs=(2, 4))
    assert set(hp.collapse["cutoffs"]) == {2, 4}


def test_coupled_data_are_prefixes():
    cfg = ex.StudyConfig(3, (4, 8, 16), count=3)
    big = ex.coupled_data(cfg, 0, 3)
    small = ex.coupled_data(cfg, 0, 3, N=16)
    assert np.array_equal(big, small)
    assert big.shape == (3, 16)


def test_study_config_validation():
    with pytest.raises(DomainError):
        ex.StudyConfig(3, (8, 4))
    with pytest.raises(ParameterError):
        ex.convergence_study(ex.StudyConfig(3, (4, 8), s=0.6, count=2))


def test_convergence_study_small():
    cfg = ex.StudyConfig(3, (4, 8, 16), T=0.2, count=8, dt=1e-2, stride=5)
    rep = ex.convergence_study(cfg)
    assert len(rep.medians) == 2 and all(m > 0 for m in rep.medians)
    assert rep.bound_exponent == pytest.approx((1 - 0.8) / 16)
    assert rep.schedule[0]["gamma"] == pytest.approx((2 - 1.5 - 3 / 64) / 2)


def test_data_difference_exponent():
    rep = ex.data_difference_study(0.4, [16, 32, 64, 128], 200, 1)
    assert rep.predicted == pytest.approx(-0.1)
    assert rep.exponent == pytest.approx(-0.1, abs=0.05)


def test_smoothing_check_flags_large_sigma():
    cfg = ex.StudyConfig(3, (4, 8), T=0.1, count=4, dt=1e-2, stride=5, sigma=(0.5, 1.2))
    rep = ex.smoothing_check(cfg)
    assert rep.warning_regime == {"0.5": False, "1.2": True}
    assert set(rep.medians) == {"0.5", "1.2"}


def test_strichartz_scale_invariance_and_admissibility():
    cfg = ex.StrichartzConfig(N=8, count=3, window=0.25, samples_per_period=256)
    times = ex.strichartz_times(cfg)
    f = ex.random_forcing(cfg, 0, times)
    params = ModelParams(1.0, 8)
    n1, d1 = ex.strichartz_ratio_of(times, f, params, 0.7, 0.55, 2.0)
    n2, d2 = ex.strichartz_ratio_of(times, 3.0 * f, params, 0.7, 0.55, 2.0)
    assert n2 / d2 == pytest.approx(n1 / d1, rel=1e-13)
    with pytest.raises(ParameterError):
        ex.check_strichartz_admissible(ex.StrichartzConfig(p=1.0))
    with pytest.raises(ParameterError):
        ex.check_strichartz_admissible(ex.StrichartzConfig(window=0.6))
    rep = ex.strichartz_ratio(cfg)
    assert rep.count == 3 and rep.max_over_median >= 1.0


def test_gibbs_chisquare_small():
    res = ex.gibbs_chisquare(ModelParams(2, 8), 500, 5000, 2, bins=10)
    assert res["dof"] == 9 and sum(res["observed"]) == 500
    assert sum(res["expected"]) == pytest.approx(500)
    assert res["pvalue"] > 0.001


def test_sample_and_evolve_summaries():
    cfg = small_ensemble()
    recs = ex.sample_records(cfg, 0, 20)
    summ = ex.sample_summary(cfg, recs)
    assert 0 < summ["acceptance_rate"] <= 1
    ev = ex.evolve_summary(cfg, ex.evolve_records(cfg, 0, 20))
    assert ev["max_rel_energy_error"] < 1e-3
