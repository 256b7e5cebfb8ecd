"""Invariants checked on generated inputs."""
import math

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tfdecay.hermite import IN_H, IN_H0, HermiteCoeffs, analyze, classify_decay, summability_check, synthesize
from tfdecay.multidim import MultiCoeffs, partial_fourier
from tfdecay.transforms import bargmann_eval, bargmann_series, fourier_coeffs
from tfdecay.weights import make_weight, omega_s, young_conjugate

finite = st.floats(-5, 5, allow_nan=False, allow_infinity=False)
coeff_vectors = st.integers(1, 30).flatmap(
    lambda n: st.tuples(arrays(float, n, elements=finite), arrays(float, n, elements=finite)))
catalog = st.sampled_from(["0", "1/4", "1/3", "flat1", "flat2", "1/2"])


def as_coeffs(pair):
    re, im = pair
    return HermiteCoeffs.from_complex(re + 1j * im)


@given(coeff_vectors, st.integers(-8, 8))
def test_fourier_preserves_magnitudes(pair, k):
    c = as_coeffs(pair)
    f = fourier_coeffs(c, k)
    assert np.array_equal(f.log_abs, c.log_abs)
    ratio = f.to_complex() / np.where(c.to_complex() == 0, 1, c.to_complex())
    n = np.arange(len(c))
    expect = (-1j) ** ((n * k) % 4)
    nz = c.to_complex() != 0
    assert np.allclose(ratio[nz], expect[nz], atol=1e-12)


@given(coeff_vectors)
def test_fourier_period_four(pair):
    c = as_coeffs(pair)
    f = c
    for _ in range(4):
        f = fourier_coeffs(f)
    assert np.allclose(f.to_complex(), c.to_complex(), rtol=1e-12, atol=1e-300)


@given(coeff_vectors)
def test_round_trip_random(pair):
    c = as_coeffs(pair)
    assume(np.max(np.abs(c.to_complex())) > 1e-3)
    back = analyze(synthesize(c), len(c) - 1).to_complex()
    assert np.max(np.abs(back - c.to_complex())) <= 1e-10 * np.max(np.abs(c.to_complex()))


@given(coeff_vectors, st.complex_numbers(max_magnitude=1.5, allow_nan=False, allow_infinity=False))
def test_bargmann_intertwining(pair, z):
    re, im = pair
    n = np.arange(re.size)
    c = HermiteCoeffs.from_complex((re + 1j * im) * np.exp(-n / 2.0))
    a = bargmann_eval(bargmann_series(fourier_coeffs(c)), z, check=False)
    b = bargmann_eval(bargmann_series(c), -1j * z, check=False)
    assert abs(a - b) <= 1e-10 * max(1.0, abs(b))


@given(catalog, st.floats(0.1, 50), st.floats(0.0, 8.0))
def test_fenchel_young(s, t, x):
    w = omega_s(s)
    ps = young_conjugate(w, [t], force=True).values[0]
    assert ps + float(w.phi(x)) >= x * t - 1e-6 * max(1.0, abs(x * t))


@given(catalog)
def test_conjugate_convex_nondecreasing(s):
    t = np.linspace(0.5, 40, 60)
    v = young_conjugate(omega_s(s), t, force=True).values
    fin = np.isfinite(v)
    v = v[fin]
    assert np.all(np.diff(v) >= -1e-9)
    assert np.all(np.diff(v, 2) >= -1e-6 * (1 + np.abs(v[1:-1])))


@given(st.floats(0.3, 3.0), st.floats(1.0, 2.0), st.floats(-20, 20), st.sampled_from(["0", "1/4", "flat1"]))
def test_classify_scale_invariant(a, p, log_gamma, s):
    n = np.arange(100, dtype=float)
    c = HermiteCoeffs.from_log(-a * n ** p)
    w = omega_s(s)
    r1 = classify_decay(c, w)
    r2 = classify_decay(c.scaled(math.exp(log_gamma)), w)
    assert r1.verdict == r2.verdict and r1.passing == r2.passing


@given(st.floats(0.5, 2.0), st.floats(1.0, 1.8))
def test_membership_implies_summability_below(a, p):
    n = np.arange(120, dtype=float)
    c = HermiteCoeffs.from_log(-a * n ** p)
    w = omega_s("1/2")
    rep = classify_decay(c, w)
    if rep.verdict not in (IN_H, IN_H0):
        return
    for r in rep.r_grid:
        if r < rep.r_fit:
            assert summability_check(c, w, r=r).converged


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 3), st.integers(0, 3))
def test_partial_fourier_composition(a, b, m1, m2):
    c = MultiCoeffs.delta((a, b), 6)
    bits = ["00", "10", "01", "11"]
    one = partial_fourier(partial_fourier(c, bits[m1]), bits[m2]).to_complex()[a, b]
    k = ((m1 & 1) + (m2 & 1)) * a + ((m1 >> 1) + (m2 >> 1)) * b
    assert abs(one - (-1j) ** (k % 4)) < 1e-12


@given(st.floats(0.0, 1e6))
def test_weight_monotone(t):
    for w in (omega_s(0), omega_s("1/4"), make_weight("log_plus")):
        assert w(t * 1.5 + 1) >= w(t)
