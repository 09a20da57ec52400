import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from radial_nlw.basis import (GridField, SpectralField, analyze, analyze_array, apply_nonlinearity,
                              ball_integral, check_dealiasing, default_grid_size,
                              eigenfunction_value, frequencies, l2_norm_grid, lp_norm, radial_grid,
                              synthesize, synthesize_array)
from radial_nlw.errors import DomainError, ResolutionError


def quad_ball(g, points=None):
    """Adaptive-quadrature oracle for a radial integral over the unit ball."""
    val, _ = integrate.quad(lambda r: 4 * math.pi * r * r * g(r), 0.0, 1.0, epsabs=1e-14,
                            epsrel=1e-12, limit=400, points=points)
    return val


def e(n, r):
    return math.sin(n * math.pi * r) / (math.sqrt(2 * math.pi) * r) if r > 0 else \
        n * math.pi / math.sqrt(2 * math.pi)


def test_frequencies_and_grid():
    assert np.allclose(frequencies(3), [math.pi, 2 * math.pi, 3 * math.pi])
    r = radial_grid(8)
    assert r[0] == 1 / 8 and r[-1] == 7 / 8 and r.size == 7


def test_eigenfunction_value_matches_formula_and_limit():
    assert eigenfunction_value(3, 0.3) == pytest.approx(e(3, 0.3), rel=1e-15)
    assert eigenfunction_value(2, 0.0) == pytest.approx(2 * math.pi / math.sqrt(2 * math.pi))
    assert eigenfunction_value(5, 1.0) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(DomainError):
        eigenfunction_value(0, 0.5)
    with pytest.raises(DomainError):
        eigenfunction_value(1, 1.5)


def test_eigenfunctions_are_orthonormal_by_quadrature():
    for m, n in [(1, 1), (2, 2), (1, 2), (3, 7)]:
        val = quad_ball(lambda r: e(m, r) * e(n, r))
        assert val == pytest.approx(1.0 if m == n else 0.0, abs=1e-12)


def test_synthesize_matches_pointwise_sum(rng):
    c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    grid = synthesize(SpectralField(c), 32)
    r = grid.r
    direct = sum(c[n - 1] * eigenfunction_value(n, r) for n in range(1, 7))
    assert np.allclose(grid.function_values(), direct, atol=1e-13)


@settings(max_examples=30, deadline=None)
@given(N=st.integers(1, 63), logM=st.integers(6, 9), seed=st.integers(0, 2 ** 32 - 1))
def test_roundtrip_and_parseval(N, logM, seed):
    M = 2 ** logM
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    grid = synthesize(SpectralField(c), M)
    back = analyze(grid, N).coeffs
    assert np.max(np.abs(back - c)) < 1e-12 * max(1.0, np.max(np.abs(c)))
    assert l2_norm_grid(grid) ** 2 == pytest.approx(np.sum(np.abs(c) ** 2), rel=1e-12)


def test_batched_transforms_agree_with_single(rng):
    c = rng.standard_normal((3, 4, 10))
    w = synthesize_array(c, 64)
    assert w.shape == (3, 4, 63)
    assert np.allclose(w[1, 2], synthesize_array(c[1, 2], 64))
    assert np.allclose(analyze_array(w, 10), c, atol=1e-13)


def test_resolution_errors():
    with pytest.raises(ResolutionError):
        synthesize_array(np.ones(64), 64)
    with pytest.raises(ResolutionError):
        check_dealiasing(16, 32, 2)
    check_dealiasing(16, 64, 2)
    check_dealiasing(16, 32, 2.5)


@pytest.mark.parametrize("N,alpha,M", [(1, 2, 64), (16, 2, 128), (32, 3, 256), (64, 2.5, 512),
                                       (100, 9, 1024)])
def test_default_grid_size(N, alpha, M):
    assert default_grid_size(N, alpha) == M
    check_dealiasing(N, M, alpha)


def test_ball_integral_of_polynomial():
    M = 2048
    r = radial_grid(M)
    # int_B (1 - r^2) dx = 4 pi (1/3 - 1/5)
    assert ball_integral(1 - r * r, M) == pytest.approx(4 * math.pi * (1 / 3 - 1 / 5), rel=1e-6)


def test_lp_norm_against_quadrature_oracle():
    for n, p in [(1, 2), (1, 4), (3, 4), (2, 3.5)]:
        oracle = quad_ball(lambda r: abs(e(n, r)) ** p) ** (1 / p)
        assert lp_norm(n, p, M=4096) == pytest.approx(oracle, rel=1e-6)


def test_lp_norm_resolution_guard():
    with pytest.raises(ResolutionError):
        lp_norm(2000, 4, M=4096)
    with pytest.raises(DomainError):
        lp_norm(1, 0.5)


def test_nonlinearity_matches_quadrature_oracle(rng):
    """Pseudospectral <|f|^a f, e_n> against adaptive quadrature of the continuum integral."""
    c = np.array([0.8, -0.3, 0.2, 0.1])
    f = lambda r: sum(c[k] * e(k + 1, r) for k in range(4))
    for alpha in (2.0, 2.5):
        got = apply_nonlinearity(SpectralField(c), alpha, 6, 1024).coeffs
        for n in range(1, 7):
            oracle = quad_ball(lambda r: abs(f(r)) ** alpha * f(r) * e(n, r))
            assert got[n - 1].real == pytest.approx(oracle, abs=1e-9)
            assert got[n - 1].imag == 0.0


def test_integer_power_is_resolution_stable(rng):
    c = rng.standard_normal(16) / frequencies(16)
    a = apply_nonlinearity(SpectralField(c), 2, 16, 128).coeffs
    b = apply_nonlinearity(SpectralField(c), 2, 16, 4096).coeffs
    assert np.max(np.abs(a - b)) < 1e-6 * np.max(np.abs(b))


def test_nonlinearity_uses_real_part():
    c = np.array([0.5 + 3.0j, 0.2 - 1.0j])
    a = apply_nonlinearity(SpectralField(c), 2, 2, 64).coeffs
    b = apply_nonlinearity(SpectralField(c.real), 2, 2, 64).coeffs
    assert np.array_equal(a, b)


def test_spectral_field_algebra():
    u = SpectralField([1, 2j])
    v = SpectralField.mode(2, 3, 5.0)
    assert u.N == 2 and v.coeffs.tolist() == [0, 5, 0]
    assert (u.project(3) + v).coeffs.tolist() == [1, 5 + 2j, 0]
    assert (u - u).coeffs.tolist() == [0, 0]
    assert (-u * 2).coeffs.tolist() == [-2, -4j]
    assert u.project(1).coeffs.tolist() == [1]
    assert u.real.coeffs.tolist() == [1, 0]
    with pytest.raises(ValueError):
        u.coeffs[0] = 3


def test_grid_field_validates_shape():
    with pytest.raises((DomainError, ValueError)):
        GridField(np.zeros(10), 8)
