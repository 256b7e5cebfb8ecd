import math
import warnings

import numpy as np
import pytest

from conftest import phi
from tfdecay.errors import EdgeMassWarning, GridTooShort, TailBoundExceeded
from tfdecay.hermite import HermiteCoeffs, analyze, hermite_eval, make_grid, synthesize
from tfdecay.transforms import (
    bargmann_eval,
    bargmann_growth_scan,
    bargmann_integral,
    bargmann_series,
    cauchy_coeff_bound,
    fourier_coeffs,
    fourier_grid,
    phase_relation_residual,
    stft,
    stft_bargmann_residual,
    tf_decay_scan,
    tf_decay_sweep,
)
from tfdecay.weights import omega_s

INV_SQRT_2PI = 1 / math.sqrt(2 * math.pi)


def h(n):
    return lambda x: hermite_eval(n, x)


def test_fourier_coeffs_phases():
    assert np.allclose(fourier_coeffs(HermiteCoeffs.delta(0, 3)).to_complex(), [1, 0, 0, 0])
    assert np.allclose(fourier_coeffs(HermiteCoeffs.delta(1, 3)).to_complex(), [0, -1j, 0, 0])
    rng = np.random.default_rng(1)
    c = HermiteCoeffs.from_complex(rng.normal(size=9) + 1j * rng.normal(size=9))
    four = c
    for _ in range(4):
        four = fourier_coeffs(four)
    assert np.allclose(four.to_complex(), c.to_complex(), atol=1e-15)
    assert np.array_equal(fourier_coeffs(c).log_abs, c.log_abs)


def test_fourier_square_is_parity():
    rng = np.random.default_rng(2)
    c = HermiteCoeffs.from_complex(rng.normal(size=21))
    g = make_grid(8.0, 161)
    a = synthesize(fourier_coeffs(c, 2), g).samples
    b = synthesize(c, g).samples[::-1]
    assert np.max(np.abs(a - b)) < 1e-8


def test_fourier_grid_gaussian_fixed_point():
    g = make_grid(14.0, 1401)
    fg = fourier_grid(synthesize(HermiteCoeffs.delta(0, 0), g))
    assert np.max(np.abs(fg.samples - phi(g.x))) < 1e-8


def test_fourier_grid_h2():
    g = make_grid(14.0, 1401)
    s = synthesize(HermiteCoeffs.delta(2, 2), g)
    assert np.max(np.abs(fourier_grid(s).samples + s.samples)) < 1e-8


def test_fourier_grid_closed_form():
    g = make_grid(20.0, 2001)
    from tfdecay.hermite import GridFunction
    f = GridFunction.from_callable(lambda x: np.exp(-0.4 * x * x), 20.0, 2001)
    ref = 0.8 ** -0.5 * np.exp(-g.x ** 2 / 1.6)
    assert np.max(np.abs(fourier_grid(f).samples - ref)) < 1e-8


def test_fourier_grid_matches_coefficient_route():
    rng = np.random.default_rng(4)
    c = HermiteCoeffs.from_complex(rng.normal(size=41) / np.arange(1, 42))
    g = make_grid(16.0, 1601)
    a = fourier_grid(synthesize(c, g)).samples
    b = synthesize(fourier_coeffs(c), g).samples
    assert np.max(np.abs(a - b)) < 1e-8


def test_fourier_grid_edge_warning():
    from tfdecay.hermite import GridFunction
    f = GridFunction.from_callable(lambda x: np.exp(-0.01 * x * x), 5.0, 101)
    with pytest.warns(EdgeMassWarning):
        fourier_grid(f)


def test_bargmann_series_examples():
    one = bargmann_series(HermiteCoeffs.delta(0, 20))
    assert bargmann_eval(one, 0.3 + 2j) == pytest.approx(1.0)
    s2 = bargmann_series(HermiteCoeffs.delta(2, 20))
    assert math.exp(s2.log_abs[2]) == pytest.approx(1 / math.sqrt(2))
    assert bargmann_eval(s2, 1 + 1j) == pytest.approx(math.sqrt(2) * 1j)
    assert bargmann_eval(bargmann_series(HermiteCoeffs.delta(1, 20)), 2.0) == pytest.approx(2.0)
    zero = bargmann_series(HermiteCoeffs.from_complex(np.zeros(5)))
    assert bargmann_eval(zero, 1.0) == 0


def test_bargmann_tail_guard():
    n = np.arange(21, dtype=float)
    s = bargmann_series(HermiteCoeffs.from_log(-0.01 * n))
    with pytest.raises(TailBoundExceeded):
        bargmann_eval(s, 8.0)


def test_bargmann_intertwining():
    rng = np.random.default_rng(5)
    c = HermiteCoeffs.from_complex(rng.normal(size=60) / np.exp(np.arange(60) / 3))
    z = np.array([0.3 + 0.4j, -1.1 + 0.2j, 1.5j])
    a = bargmann_eval(bargmann_series(fourier_coeffs(c)), z)
    b = bargmann_eval(bargmann_series(c), -1j * z)
    assert np.max(np.abs(a - b)) < 1e-10


def test_bargmann_integral_examples():
    assert bargmann_integral(phi, 0.7 - 0.3j) == pytest.approx(1.0, abs=1e-12)
    assert bargmann_integral(h(3), 1.0) == pytest.approx(1 / math.sqrt(6), abs=1e-12)
    z = 1.2 + 0.5j
    assert bargmann_integral(lambda x: x * phi(x), z) == pytest.approx(z / math.sqrt(2), abs=1e-12)


def test_bargmann_integral_matches_series():
    f = lambda x: (1 + x - 0.2 * x ** 3) * np.exp(-0.6 * x * x)  # noqa: E731
    c = analyze(f, 60)
    zs = 2 * np.exp(1j * np.linspace(0, 2 * np.pi, 9))
    a = bargmann_integral(f, zs)
    b = bargmann_eval(bargmann_series(c), zs)
    assert np.max(np.abs(a - b)) < 1e-8


def test_stft_examples():
    assert stft(phi, 0.0, 0.0) == pytest.approx(INV_SQRT_2PI, abs=1e-14)
    x, xi = 1.3, -0.7
    ref = INV_SQRT_2PI * math.exp(-(x * x + xi * xi) / 4) * np.exp(-0.5j * x * xi)
    assert stft(phi, x, xi) == pytest.approx(ref, abs=1e-13)
    assert stft(lambda t: 0 * t, 2.0, 1.0) == 0


@pytest.mark.parametrize("n", range(6))
def test_stft_bargmann_bridge(n):
    g = np.linspace(-4, 4, 9)
    assert stft_bargmann_residual(h(n), g, g) < 1e-8


def test_stft_bargmann_zero():
    assert stft_bargmann_residual(lambda t: 0 * t, [0.0, 1.0], [0.0]) == 0


@pytest.mark.parametrize("f", [phi, h(1), h(4)])
def test_phase_relation(f):
    pts = [(0.0, 0.0), (1.0, -0.5), (-2.0, 1.5), (3.0, 2.0)]
    assert phase_relation_residual(f, pts) < 1e-7


def test_phase_relation_origin():
    v = stft(h(2), 0.0, 0.0)
    fh = lambda x: -hermite_eval(2, x)  # noqa: E731
    assert phase_relation_residual(h(2), [(0.0, 0.0)], fhat=fh) == pytest.approx(abs(v - stft(fh, 0, 0)), abs=1e-15)
    assert phase_relation_residual(h(2), [(0.0, 0.0)], fhat=fh) > 0


def test_gap_scan_gaussian():
    a, b = tf_decay_scan(phi, 0.3)
    assert a.witness == 0.0 and a.sup_log == pytest.approx(-0.25 * math.log(math.pi))
    assert a.bounded and b.bounded


def test_gap_scan_geometric_coefficients():
    # a 600-term partial sum shows sum e^{-n} h_n(x) ~ e^{-0.377 x^2}: inside the gap for
    # lambda >= 1/8, growing like e^{0.07 x^2} at lambda = 0.05
    x = np.array([8.0, 12.0, 16.0, 20.0])
    from tfdecay.hermite import hermite_table
    ref = np.log(np.abs((np.exp(-np.arange(601.0))[:, None] * hermite_table(600, x)).sum(0))) + 0.45 * x * x
    assert np.all(np.diff(ref) > 2.0)
    n = np.arange(81, dtype=float)
    c = HermiteCoeffs.from_log(-n)
    a, b = tf_decay_scan(c, 0.05)
    assert not a.bounded and a.edge_witness
    for lam in (0.25, 0.5, 1.0):
        a, b = tf_decay_scan(c, lam)
        assert a.bounded and b.bounded


def test_gap_scan_counterexample():
    # |f| e^{(1/2 - 0.05) x^2} = e^{0.05 x^2} grows without bound
    a, _ = tf_decay_scan(lambda x: np.exp(-0.4 * x * x), 0.05)
    assert not a.bounded and a.edge_witness
    with pytest.raises(GridTooShort):
        tf_decay_scan(lambda x: np.exp(-0.4 * x * x), 0.05, strict=True)


def test_weighted_sweep_h3():
    c = HermiteCoeffs.delta(3, 40)
    res = tf_decay_sweep(c, omega_s(0), lam_grid=(4.0, 8.0))
    assert all(res.values())


def test_growth_scan_examples():
    c = HermiteCoeffs.delta(3, 40)
    assert bargmann_growth_scan(bargmann_series(c), omega_s(0), 4.0).bounded
    one = bargmann_growth_scan(bargmann_series(HermiteCoeffs.delta(0, 40)), omega_s(0), 1.0)
    assert one.sup_log <= 1e-12 and one.witness == 0
    n = np.arange(121, dtype=float)
    sq = bargmann_growth_scan(bargmann_series(HermiteCoeffs.from_log(-n * n)), omega_s("1/2"), 1.0)
    assert sq.bounded


def test_cauchy_bounds():
    assert cauchy_coeff_bound(lambda z: np.ones_like(z), 0).log_bound >= 0
    b = cauchy_coeff_bound(lambda z: z * z / math.sqrt(2), 2)
    assert abs(b.log_bound + 0.5 * math.log(2)) < 1e-6
    e = cauchy_coeff_bound(np.exp, 3)
    assert e.log_bound >= -math.log(6)
    assert e.radius == pytest.approx(3.0, rel=0.05)
    assert e.log_bound == pytest.approx(3 - 3 * math.log(3), abs=1e-3)


def test_cauchy_bound_valid_for_series():
    n = np.arange(40, dtype=float)
    s = bargmann_series(HermiteCoeffs.from_log(-0.5 * n * n / 10))
    for k in (1, 5, 12):
        cb = cauchy_coeff_bound(lambda z: s(z, check=False), k, ladder=np.geomspace(1.05, 6, 48))
        assert cb.log_bound >= s.log_abs[k] - 1e-9


def test_scan_report_json():
    a, _ = tf_decay_scan(phi, 0.3)
    js = a.to_json()
    assert {"quantity", "lambda", "sup_log10", "witness", "stabilized"} <= set(js)


def test_no_warning_for_decayed_input():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        stft(phi, 0.5, 0.5)
