"""The numba kernels and their numpy twins must agree."""
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tfdecay import _kernels
from tfdecay._accel import USE_NUMBA

rng = np.random.default_rng(7)


def test_hermite_table_parity():
    x = np.linspace(-30, 30, 301)
    a = _kernels.hermite_table_numba(60, x)
    b = _kernels.hermite_table_numpy(60, x)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-300)


def test_hermite_sum_parity():
    coef = rng.normal(size=41) + 1j * rng.normal(size=41)
    x = np.linspace(-8, 8, 101)
    assert np.allclose(_kernels.hermite_sum_numba(coef, x), _kernels.hermite_sum_numpy(coef, x), rtol=1e-11, atol=1e-14)


@pytest.mark.parametrize("gauss", [0.0, 1.0])
def test_hermite_log_sum_parity(gauss):
    la = -np.arange(81.0) ** 1.5 / 10
    ph = rng.uniform(-np.pi, np.pi, size=81)
    x = np.concatenate([np.linspace(-20, 20, 161), np.geomspace(25, 1e12, 40)])
    a = _kernels.hermite_log_sum_numba(la, ph, x, gauss)
    b = _kernels.hermite_log_sum_numpy(la, ph, x, gauss)
    assert np.allclose(a[0], b[0], rtol=1e-11, atol=1e-9)


def test_grid_sup_parity():
    s = np.linspace(0, 10, 501)
    p = np.exp(s)
    t = np.linspace(0, 50, 77)
    va, ia = _kernels.grid_sup_numba(s, p, t)
    vb, ib = _kernels.grid_sup_numpy(s, p, t)
    assert np.allclose(va, vb, rtol=1e-14)
    assert np.array_equal(ia, ib)


def test_series_log_eval_parity():
    la = -0.5 * np.arange(60.0)
    ph = rng.uniform(-np.pi, np.pi, size=60)
    z = rng.normal(size=50) * 3 + 1j * rng.normal(size=50) * 3
    a = _kernels.series_log_eval_numba(la, ph, z)
    b = _kernels.series_log_eval_numpy(la, ph, z)
    assert np.allclose(a[0], b[0], rtol=1e-11, atol=1e-10)


def test_dft_sum_parity():
    x = np.linspace(-10, 10, 201)
    wf = np.exp(-x * x) + 0j
    xi = np.linspace(-5, 5, 33)
    assert np.allclose(_kernels.dft_sum_numba(x, wf, xi), _kernels.dft_sum_numpy(x, wf, xi), atol=1e-13)


@given(st.integers(0, 40), st.floats(-12, 12))
def test_hermite_table_parity_property(n, x):
    xs = np.array([x])
    assert np.allclose(_kernels.hermite_table_numba(n, xs), _kernels.hermite_table_numpy(n, xs), rtol=1e-11, atol=1e-300)


def test_env_flag_selects_numpy():
    code = "from tfdecay._accel import USE_NUMBA; print(USE_NUMBA)"
    env = dict(os.environ, TFDECAY_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
    assert USE_NUMBA or os.environ.get("TFDECAY_DISABLE_NUMBA")


def test_numpy_path_end_to_end():
    code = ("import numpy as np; from tfdecay.hermite import analyze, hermite_eval; "
            "c = analyze(lambda x: hermite_eval(3, x), 20); print(abs(c.to_complex()[3]))")
    env = dict(os.environ, TFDECAY_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert abs(float(out.stdout) - 1.0) < 1e-12
