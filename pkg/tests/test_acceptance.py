"""Acceptance criteria, each at its stated tolerance.

Every check records a pass/fail line (see ``conftest.record``); the session
summary prints one line per criterion.  Two clauses are known not to hold
as stated and are marked ``xfail(strict=True)``: they are computed at the
stated thresholds and the analysis lives in the decisions ledger.
"""
import math
import time

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import gammaln

from conftest import record
from tfdecay.hermite import (
    HermiteCoeffs,
    analyze,
    classify_decay,
    example42_profile,
    gram_matrix,
    hermite_eval,
    rapid_exponential_check,
    synthesize,
)
from tfdecay.multidim import (
    MultiCoeffs,
    analyze_d,
    analyze_partial_fourier,
    classify_decay_d,
    partial_fourier,
    synthesize_d,
    thm5_sweep,
)
from tfdecay.sector import (
    SectorSpec,
    f_omega,
    lemma33_verify,
    pl_classic_verify,
    pl_weighted_verify,
)
from tfdecay.transforms import bargmann_integral, stft_bargmann_residual, tf_decay_scan, tf_decay_sweep
from tfdecay.weights import biconjugate_check, make_weight, omega_s, young_conjugate

UNATTAINABLE = "does not hold as stated; analysis in the decisions ledger"


def h(n):
    return lambda x: hermite_eval(n, x)


def membership(flags):
    """'all', 'some' or 'none' of a ladder."""
    flags = list(flags)
    return "all" if all(flags) else ("some" if any(flags) else "none")


def decay_membership(rep):
    return "all" if rep.in_all else ("some" if rep.in_some else "none")


# ---------------------------------------------------------------- 1
def test_bargmann_eigenrelation():
    # four rings times five angles; near z = 0 the values z^n/sqrt(n!) sink
    # below quadrature roundoff (~5e-15 absolute), see the ledger
    ang = 2 * np.pi * (np.arange(5) + 0.25) / 5
    z = (np.array([0.5, 1.0, 1.5, 2.0])[:, None] * np.exp(1j * ang)[None, :]).ravel()
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(11):
        ref = z ** n / math.sqrt(math.factorial(n))
        worst = max(worst, float(np.max(np.abs(bargmann_integral(h(n), z) - ref) / np.abs(ref))))
    dt = time.perf_counter() - t0
    ok = worst < 1e-8 and dt < 10
    record(1, "B h_n = z^n/sqrt(n!)", ok, f"max rel err {worst:.2e}, {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- 2
def test_stft_bargmann_bridge():
    g = np.linspace(-4, 4, 33)
    t0 = time.perf_counter()
    res = [stft_bargmann_residual(h(n), g, g) for n in range(6)]
    dt = time.perf_counter() - t0
    ok = max(res) <= 1e-8 and dt < 60
    record(2, "bridge h_0..h_5", ok, f"max residual {max(res):.2e}, {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- 3
def test_orthonormality_and_round_trip():
    dev = float(np.max(np.abs(gram_matrix(40) - np.eye(41))))
    rng = np.random.default_rng(2024)
    worst = 0.0
    for N in (5, 20, 40, 60):
        c = rng.normal(size=N + 1) + 1j * rng.normal(size=N + 1)
        back = analyze(synthesize(HermiteCoeffs.from_complex(c)), N).to_complex()
        worst = max(worst, float(np.max(np.abs(back - c)) / np.max(np.abs(c))))
    record(3, "orthonormality", dev < 1e-10, f"{dev:.2e}")
    record(3, "round trip N<=60", worst < 1e-10, f"{worst:.2e}")
    assert dev < 1e-10 and worst < 1e-10


# ---------------------------------------------------------------- 4
def test_young_conjugation():
    devs = {s: biconjugate_check(omega_s(s)) for s in ("0", "1/4", "1/3", "flat1", "flat2", "1/2")}
    ok_bi = max(devs.values()) < 1e-4
    record(4, "biconjugate", ok_bi, f"max {max(devs.values()):.2e}")

    t = np.array([0.0, 0.25, 0.5, 0.75, 1.0, 1.0001, 1.5, 3.0, 10.0])
    v = young_conjugate(make_weight("log_plus"), t).values
    ok_lp = bool(np.all(v[t <= 1] == 0.0) and np.all(v[t > 1] == np.inf))
    record(4, "log+ conjugate", ok_lp)

    # grid-sup oracle: sup over s > 0 of u s - e^{2 s} on a fine grid
    u = np.array([2.0, 3.0, 5.0, 10.0, 40.0])
    s = np.linspace(0.0, 5.0, 2_000_001)
    oracle = np.array([np.max(ui * s - np.exp(2 * s)) for ui in u])
    closed = (u / 2) * np.log(u / 2) - u / 2
    got = young_conjugate(omega_s("1/2"), u).values
    err = float(max(np.max(np.abs(got - closed) / np.abs(closed).clip(1)),
                    np.max(np.abs(oracle - closed) / np.abs(closed).clip(1))))
    record(4, "t^2 closed form", err < 1e-6, f"{err:.2e}")
    assert ok_bi and ok_lp and err < 1e-6


# ---------------------------------------------------------------- 5
@pytest.mark.xfail(strict=True, reason=UNATTAINABLE)
def test_rate_profile_equivalences():
    t0 = time.perf_counter()
    spreads = {}
    for s in ("1/4", "1/2", "flat1", "flat2"):
        for r in (0.5, 1.0, 2.0):
            spreads[(s, r)] = example42_profile(s, r, 300, n_min=8).spread
    dt = time.perf_counter() - t0
    worst = max(spreads, key=spreads.get)
    ok = max(spreads.values()) < 3 and dt < 30
    record(5, "log-difference spread < 3", ok, f"worst {worst}: {spreads[worst]:.1f}, {dt:.1f}s")
    assert ok


# ---------------------------------------------------------------- 6
def test_gaussian_gap_both_directions():
    t0 = time.perf_counter()
    n = np.arange(81, dtype=float)
    c = HermiteCoeffs.from_log(-n * n)
    rows = []
    for lam in (0.5, 0.1, 0.02):
        a, b = tf_decay_scan(c, lam)
        rows.append(a.bounded and b.bounded and a.stabilized and b.stabilized)
    record(6, "(a) e^{-n^2} bounded", all(rows), str(rows))

    f = lambda x: np.exp(-0.4 * x * x)  # noqa: E731
    a, _ = tf_decay_scan(f, 0.05)
    fails = (not a.bounded) and a.edge_witness
    record(6, "(b) e^{-0.4x^2} edge witness", fails, f"witness x={a.witness:.3g}")

    rep = rapid_exponential_check(analyze(f, 80))
    lo, hi = rep.window
    # quadrature oracle: even coefficients by adaptive quadrature, rate from their log-ratio slope
    ks = np.arange(lo, hi + 1, 2)
    ks = ks[ks >= hi // 2]
    co = np.array([abs(quad(lambda t: f(t) * hermite_eval(int(k), t), -np.inf, np.inf, limit=400,
                            epsabs=0, epsrel=1e-12)[0]) for k in ks])
    oracle = -np.polyfit(ks, np.log(co), 1)[0]
    target = -math.log((1 - 0.8) / (1 + 0.8)) / 2
    dt = time.perf_counter() - t0
    finite = rep.verdict != "in_H0_omega" and rep.r_fit is not None and math.isfinite(rep.r_fit)
    match = abs(rep.r_fit - oracle) / oracle < 0.05 and abs(oracle - target) / target < 0.05
    record(6, "(b) maximal rate", finite and match and dt < 60,
           f"fit {rep.r_fit:.4f}, oracle {oracle:.4f}, log 3 = {target:.4f}, {dt:.1f}s")
    assert all(rows) and fails and finite and match and dt < 60


# ---------------------------------------------------------------- 7
def test_weighted_catalog_1d():
    n = np.arange(81, dtype=float)
    base = {
        "phi": analyze(lambda x: np.pi ** -0.25 * np.exp(-x * x / 2), 80),
        "h0 + h3/2": analyze(lambda x: hermite_eval(0, x) + 0.5 * hermite_eval(3, x), 80),
    }
    bad = []
    for s in ("0", "1/4", "flat1"):
        w = omega_s(s)
        items = dict(base)
        if s == "1/4":
            # e^{-n^{1/(2s)}}
            items["e^{-n^2}"] = HermiteCoeffs.from_log(-n ** 2)
        for name, c in items.items():
            lhs = decay_membership(classify_decay(c, w))
            rhs = membership(tf_decay_sweep(c, w).values())
            if lhs != rhs:
                bad.append((s, name, lhs, rhs))
    record(7, "classify vs weighted scan", not bad, str(bad) if bad else "all agree")
    assert not bad


# ---------------------------------------------------------------- 8
@pytest.mark.parametrize("theta", [0.0, math.pi / 4])
def test_fomega_quarter(theta):
    t0 = time.perf_counter()
    rep = lemma33_verify(omega_s("1/4"), 2.0, theta)
    dt = time.perf_counter() - t0
    ok = rep.harmonicity < 1e-4 and rep.all_pass and rep.drift < 0.1
    record(8, f"omega_1/4 theta={theta:.3g}", ok,
           f"harm {rep.harmonicity:.1e}, drift {rep.drift:.3f}, items {[k for k, v in rep.items.items() if v['pass']]}, "
           f"{dt:.1f}s")
    assert ok


@pytest.mark.xfail(strict=True, reason=UNATTAINABLE)
def test_fomega_half_ratio_ladder():
    ladder = np.geomspace(1e2, 1e4, 5)
    rep = lemma33_verify(omega_s("1/2"), 2.0, 0.0, ladder=ladder, refine=False)
    ratio = np.asarray(rep.ratio_ladder["ratio"], dtype=float)
    finite = bool(np.all(np.isfinite(ratio)))
    ok = finite and bool(np.all(np.diff(ratio) > 0)) and ratio[-1] >= 2 * ratio[0]
    record(8, "omega_1/2 ladder grows >= 2x", ok, f"ratios {ratio.tolist()}")
    assert ok


# ---------------------------------------------------------------- 9
def test_phragmen_lindelof():
    sec = SectorSpec(0.0, math.pi / 2, 2.0)
    lo = omega_s(0)
    rows = []
    for k in (1, 2, 3):
        res = pl_weighted_verify(lambda z, k=k: z ** k, lo, float(k), sec, A=1.0)
        rows.append((f"z^{k}", res.passed, res.B, res.B_refined))
    res = pl_weighted_verify(lambda z: np.ones_like(z), lo, 1.0, sec, A=1.0)
    rows.append(("1", res.passed, res.B, res.B_refined))
    w = omega_s("1/4")
    consts = lemma33_verify(w, 2.0, refine=False).constants
    small = SectorSpec(0.0, math.pi / 2, 2.0, radii=tuple(np.geomspace(1.0, 1e3, 10)), n_angles=7)
    res = pl_weighted_verify(f_omega(w, 2.0), w, consts["mu"], small, A=consts["A"])
    rows.append(("F_omega", res.passed, res.B, res.B_refined))
    ok_w = all(r[1] and abs(r[3] - r[2]) / r[2] < 0.1 for r in rows)
    record(9, "weighted verifier", ok_w, ", ".join(f"{r[0]}: B={r[2]:.3g}" for r in rows))

    half = SectorSpec(0.0, math.pi, 1.0)
    quarter = SectorSpec(0.0, math.pi / 2, 2.0)
    catalog = [
        ("constant", lambda z: np.full(np.shape(z), 3.0 + 0j), half, 3.0),
        ("e^{-z}", lambda z: np.exp(-z), half, 1.0),
        ("1/(1+z)", lambda z: 1 / (1 + z), half, 1.0),
        ("e^{-z^2}", lambda z: np.exp(-z * z), quarter, 1.0),
    ]
    viol = [name for name, F, s, M in catalog if not pl_classic_verify(F, s, M).passed]
    record(9, "classic verifier", not viol, f"violations {viol}")
    assert ok_w and not viol


# ---------------------------------------------------------------- 10
def test_partial_fourier_phases():
    rng = np.random.default_rng(10)
    c = MultiCoeffs.from_complex(rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7)))

    def f(x, y):
        return synthesize_d(c, np.stack(np.broadcast_arrays(x, y), axis=-1))

    worst = 0.0
    for m in ("00", "10", "01", "11"):
        direct = analyze_partial_fourier(f, m, 6).to_complex()
        worst = max(worst, float(np.max(np.abs(direct - partial_fourier(c, m).to_complex()))))
    record(10, "partial Fourier phases 7x7", worst < 1e-10, f"{worst:.2e}")
    assert worst < 1e-10


@pytest.mark.slow
def test_mask_scan_catalog_2d():
    N = 30
    A = np.indices((N + 1, N + 1)).sum(0).astype(float)
    catalog = {
        "delta(0,0)": MultiCoeffs.delta((0, 0), N),
        "delta(1,2)": MultiCoeffs.delta((1, 2), N),
        "e^{-|a|^2}": MultiCoeffs.from_log(-A ** 2),
        "e^{-|a|^1.5}": MultiCoeffs.from_log(-A ** 1.5),
        "e^{-|a|}": MultiCoeffs.from_log(-A),
        "phi x phi": analyze_d(lambda x, y: np.exp(-(x * x + y * y) / 2) / math.sqrt(math.pi), 24, 2),
    }
    bad = []
    for s in ("1/4", "flat1"):
        w = omega_s(s)
        for name, c in catalog.items():
            lhs = decay_membership(classify_decay_d(c, w))
            rhs = membership(thm5_sweep(c, w).values())
            if lhs != rhs:
                bad.append((s, name, lhs, rhs))
    record(10, "mask scans vs classify_decay_d", not bad, str(bad) if bad else "all agree")
    assert not bad
