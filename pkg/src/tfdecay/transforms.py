"""Fourier, Bargmann and short-time Fourier transforms plus decay/growth scanners.

Conventions: ``fhat(xi) = (2 pi)^{-1/2} int f(t) e^{-i t xi} dt`` and the
Gaussian window ``phi(x) = pi^{-1/4} e^{-x^2/2}``; then ``h_n`` has Fourier
transform ``(-i)^n h_n`` and Bargmann transform ``z^n / sqrt(n!)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _kernels
from .errors import EdgeMassWarning, GridTooShort, TailBoundExceeded
from .hermite import (
    GridFunction,
    HermiteCoeffs,
    analyze,
    gauss_hermite,
    hermite_series,
    hermite_series_log,
    log_sqrt_factorial,
    edge_terms,
    stabilized,
    truncation_cut,
    trusted_expansion,
)

INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)
PI_M14 = math.pi ** -0.25
DEFAULT_LAMBDA_GRID = (0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
EDGE_TOL = 1e-12
RADIAL_SCALE = 10.0


def gaussian(x):
    """The window ``pi^{-1/4} e^{-x^2/2}``."""
    x = np.asarray(x, dtype=float)
    return PI_M14 * np.exp(-0.5 * x * x)


# --------------------------------------------------------------------------
# Fourier
# --------------------------------------------------------------------------

def fourier_coeffs(c: HermiteCoeffs, power: int = 1) -> HermiteCoeffs:
    """Coefficients of the Fourier transform: entry ``n`` times ``(-i)^{n * power}``."""
    n = np.arange(len(c))
    quarter = (-(n * power)) % 4
    return HermiteCoeffs(c.log_abs, c.phase + quarter * (math.pi / 2), c.provenance)


def _as_callable(f) -> Callable:
    if isinstance(f, HermiteCoeffs):
        return lambda x, f=f: hermite_series(f, x)
    if isinstance(f, GridFunction):
        return f
    return f


def fourier_grid(f, xi=None, warn: bool = True) -> GridFunction:
    """Fourier transform of grid samples by the trapezoid rule.

    Parameters
    ----------
    f : GridFunction
    xi : GridFunction template or None
        Output grid; defaults to ``f``'s own grid.
    """
    if not isinstance(f, GridFunction):
        raise TypeError("fourier_grid needs a GridFunction")
    if warn and f.edge_ratio() > EDGE_TOL:
        warnings.warn(f"samples at the window edge are {f.edge_ratio():.2e} of the peak", EdgeMassWarning,
                      stacklevel=2)
    tmpl = f if xi is None else xi
    wf = f.h * np.array(f.samples)
    wf[0] *= 0.5
    wf[-1] *= 0.5
    vals = INV_SQRT_2PI * _kernels.dft_sum(f.x, wf, tmpl.x)
    return GridFunction(tmpl.X, tmpl.h, vals, tag="fourier")


# --------------------------------------------------------------------------
# Bargmann
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EntireFunctionSeries:
    """Power series ``sum_n exp(log_abs[n] + i phase[n]) z^n`` truncated at ``N``."""

    log_abs: np.ndarray
    phase: np.ndarray
    tail_tol: float = 1e-12

    @property
    def order(self) -> int:
        return self.log_abs.size - 1

    def _envelope(self) -> float:
        """max ``|b_n| sqrt(n!)`` over the last quarter: a coefficient-size proxy for the tail."""
        N = self.order
        lo = N - max(1, (N + 1) // 4) + 1
        n = np.arange(lo, N + 1)
        return float(np.max(self.log_abs[lo:] + log_sqrt_factorial(n)))

    def tail_log(self, r: float) -> float:
        """log of ``envelope * sum_{n > N} r^n / sqrt(n!)``."""
        env = self._envelope()
        if not np.isfinite(env) or r == 0:
            return -math.inf
        N = self.order
        # terms peak near n = r^2; sum well past both N and the peak
        top = int(max(N + 60, 2 * r * r + 60 + 10 * r))
        n = np.arange(N + 1, top + 1, dtype=float)
        lt = n * math.log(r) - log_sqrt_factorial(n)
        return env + float(np.logaddexp.reduce(lt))

    def guard(self, r: float) -> bool:
        return r * r * math.e / max(self.order, 1) < 0.5

    def eval_log(self, z, check: bool = True):
        """``(log|F(z)|, arg F(z), log tail bound)`` arrays."""
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        la, ph = _kernels.series_log_eval(self.log_abs, self.phase, z.ravel())
        r = np.abs(z.ravel())
        tails = np.array([self.tail_log(float(ri)) for ri in np.unique(r)])
        tail = tails[np.searchsorted(np.unique(r), r)]
        if check:
            n = np.arange(self.order + 1)
            with np.errstate(divide="ignore"):
                lr = np.log(r)
            # scale: largest single term, so cancellation to tiny |F| does not trip the guard
            with np.errstate(invalid="ignore"):
                powers = np.where(n[:, None] == 0, 0.0, n[:, None] * lr[None, :])
            big = np.max(self.log_abs[:, None] + powers, axis=0)
            scale = np.maximum(la, big)
            bad = tail > scale + math.log(self.tail_tol)
            if np.any(bad):
                k = int(np.flatnonzero(bad)[0])
                raise TailBoundExceeded(
                    f"truncation tail ~{math.exp(tail[k] - scale[k]):.2e} relative at |z|={r[k]:.3g} (order {self.order})")
        return la.reshape(z.shape), ph.reshape(z.shape), tail.reshape(z.shape)

    def __call__(self, z, check: bool = True):
        la, ph, _ = self.eval_log(z, check)
        with np.errstate(under="ignore", over="ignore"):
            out = np.exp(la) * np.exp(1j * ph)
        return out if np.ndim(z) else complex(out.ravel()[0])


def bargmann_series(c: HermiteCoeffs) -> EntireFunctionSeries:
    """``b_n = c_n / sqrt(n!)``."""
    n = np.arange(len(c))
    return EntireFunctionSeries(np.asarray(c.log_abs) - log_sqrt_factorial(n), np.asarray(c.phase))


def bargmann_eval(series: EntireFunctionSeries, z, check: bool = True):
    """Evaluate the series at ``z``; raises :class:`TailBoundExceeded` unless ``check`` is off."""
    return series(z, check)


def _edge_check(f):
    if isinstance(f, GridFunction) and f.edge_ratio() > EDGE_TOL:
        warnings.warn(f"samples at the window edge are {f.edge_ratio():.2e} of the peak", EdgeMassWarning,
                      stacklevel=3)


def bargmann_integral(f, z, q: int = 160):
    """``pi^{-1/4} int f(t) exp(-(z^2 + t^2)/2 + sqrt(2) t z) dt`` by shifted Gauss-Hermite.

    The nodes are centred at ``Re(z)/sqrt(2)``, where the Gaussian part of the
    integrand peaks for ``f`` of Gaussian type; ``z`` enters analytically.
    """
    _edge_check(f)
    g = _as_callable(f)
    z = np.asarray(z, dtype=complex)
    u, W = gauss_hermite(q)
    zz = z.ravel()
    t = u[None, :] + zz.real[:, None] / math.sqrt(2.0)
    vals = np.asarray(g(t.ravel()), dtype=complex).reshape(t.shape)
    expo = -0.5 * (zz[:, None] ** 2 + t * t) + math.sqrt(2.0) * t * zz[:, None]
    out = PI_M14 * np.sum(W[None, :] * vals * np.exp(expo), axis=1)
    return out.reshape(z.shape) if z.ndim else complex(out[0])


# --------------------------------------------------------------------------
# short-time Fourier transform
# --------------------------------------------------------------------------

def stft(f, x, xi, q: int = 160):
    """``V_phi f(x, xi) = (2 pi)^{-1/2} int f(t) phi(t - x) e^{-i t xi} dt``.

    ``x`` and ``xi`` broadcast against each other.  Nodes are centred at
    ``x/2``, the peak of ``phi(t) phi(t - x)``.
    """
    _edge_check(f)
    g = _as_callable(f)
    x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
    xs, ks = x.ravel(), xi.ravel()
    u, W = gauss_hermite(q)
    t = u[None, :] + 0.5 * xs[:, None]
    vals = np.asarray(g(t.ravel()), dtype=complex).reshape(t.shape)
    kern = PI_M14 * np.exp(-0.5 * (t - xs[:, None]) ** 2 - 1j * t * ks[:, None])
    out = INV_SQRT_2PI * np.sum(W[None, :] * vals * kern, axis=1)
    return out.reshape(x.shape) if x.ndim else complex(out[0])


def stft_from_bargmann(series: EntireFunctionSeries, x, xi, check: bool = True):
    """Right-hand side of the STFT-Bargmann bridge at ``z = x + i xi``."""
    x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
    w = (x - 1j * xi) / math.sqrt(2.0)
    F = series(w, check)
    return INV_SQRT_2PI * np.exp(-0.25 * (x * x + xi * xi) - 0.5j * x * xi) * F


def stft_bargmann_residual(f, xs, xis, N: int | None = None, q: int = 160) -> float:
    """Max over the ``xs x xis`` grid of ``|V_phi f - bridge(B f)|``.

    ``f`` may be a callable, a GridFunction or HermiteCoeffs; the order
    defaults to ``ceil(2 e max|w|^2)`` with ``|w|^2 = (x^2 + xi^2)/2``.
    """
    X, K = np.meshgrid(np.asarray(xs, dtype=float), np.asarray(xis, dtype=float), indexing="ij")
    if isinstance(f, HermiteCoeffs):
        c = f
    else:
        if N is None:
            wmax = float(np.max(X ** 2 + K ** 2)) / 2.0
            N = max(16, int(math.ceil(2 * math.e * wmax)) + 2)
        c = analyze(_as_callable(f), N)
    lhs = stft(f, X, K, q)
    rhs = stft_from_bargmann(bargmann_series(c), X, K)
    return float(np.max(np.abs(lhs - rhs)))


def phase_relation_residual(f, points, fhat=None, X: float = 12.0, n: int = 2401, q: int = 160) -> float:
    """Max of ``|V_phi f(x, xi) - e^{-i x xi} V_phi fhat(xi, -x)|`` over ``points``.

    ``fhat`` defaults to :func:`fourier_grid` of ``f`` sampled on ``[-X, X]``
    (spline-interpolated between samples).
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if fhat is None:
        if isinstance(f, HermiteCoeffs):
            fhat = fourier_coeffs(f)
        else:
            grid = f if isinstance(f, GridFunction) else GridFunction.from_callable(_as_callable(f), X, n)
            fhat = fourier_grid(GridFunction(grid.X, grid.h, grid.samples))
    x, xi = pts[:, 0], pts[:, 1]
    lhs = stft(f, x, xi, q)
    rhs = np.exp(-1j * x * xi) * stft(fhat, xi, -x, q)
    return float(np.max(np.abs(lhs - rhs)))


# --------------------------------------------------------------------------
# scanners
# --------------------------------------------------------------------------

@dataclass
class ScanReport:
    """Finite-grid supremum of a named log-domain quantity."""

    quantity: str
    params: dict
    sup_log: float
    witness: object
    stabilized: bool
    table: list = field(default_factory=list)
    edge_witness: bool = False

    @property
    def bounded(self) -> bool:
        return bool(self.stabilized and np.isfinite(self.sup_log))

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, float) and not np.isfinite(v):
                return "inf" if v > 0 else "-inf"
            return v

        return {
            "quantity": self.quantity,
            **{k: enc(v) for k, v in self.params.items()},
            "sup_log10": enc(self.sup_log / math.log(10.0) if np.isfinite(self.sup_log) else self.sup_log),
            "witness": enc(self.witness),
            "stabilized": self.stabilized,
            "edge_witness": self.edge_witness,
            "table": [{k: enc(v) for k, v in row.items()} for row in self.table],
        }


def radial_grid(x_max: float = 1e12, n_lin: int = 801, lin_top: float = 40.0, n_log: int = 800) -> np.ndarray:
    """Dense linear grid on ``[0, lin_top]`` followed by a log grid up to ``x_max``."""
    lin = np.linspace(0.0, min(lin_top, x_max), n_lin)
    if x_max <= lin_top:
        return lin
    return np.concatenate([lin, np.geomspace(lin_top, x_max, n_log + 1)[1:]])


def _sup_scan(x, vals, quantity, params, strict):
    vals = np.asarray(vals, dtype=float)
    finite = np.isfinite(vals) | (vals == np.inf)
    idx = np.flatnonzero(finite)
    if idx.size == 0:
        return ScanReport(quantity, params, -math.inf, None, True)
    last = idx[-1]
    window = vals[: last + 1]
    window = np.where(np.isnan(window), -np.inf, window)
    top = float(np.max(window))
    k = int(np.flatnonzero(window >= top - 1e-12 * max(1.0, abs(top)))[0])
    # outer fifth measured in a coordinate that is linear near 0 and logarithmic far out
    u = np.log1p(np.asarray(x[: last + 1], dtype=float) / RADIAL_SCALE)
    outer = u >= 0.8 * u[-1]
    stab = stabilized(window, frac=float(np.mean(outer))) if outer.any() and not outer.all() else False
    tail = window[outer]
    if stab and tail.size > 1 and np.isfinite(tail[-1]):
        # still climbing at the end of the window: the sup found so far proves nothing
        rising = tail[-1] >= np.max(tail) and tail[-1] > np.min(tail) + 1e-9 * max(1.0, abs(tail[-1]))
        if rising:
            stab = False
            k = last
    edge = bool(outer[k]) and not stab
    if edge and strict:
        raise GridTooShort(f"{quantity}: sup witness at x={x[k]:.4g} near the grid edge {x[last]:.4g}")
    return ScanReport(quantity, params, top, float(x[k]), stab, edge_witness=edge)


def _log_abs_samples(g, x, floor):
    vals = np.abs(np.asarray(g(x), dtype=complex))
    peak = vals.max()
    with np.errstate(divide="ignore"):
        lv = np.log(vals)
    # below the floor the samples are rounding noise, not decay information
    return np.where(vals > floor * peak, lv, np.nan)


def tf_decay_scan(f, lam: float, omega=None, fhat=None, mode: str | None = None, x=None,
                  X: float = 20.0, n: int = 4001, floor: float = 1e-14, strict: bool = False):
    """Scan ``|f(x)| e^{(1/2 - lam) x^2}`` (gap mode) or ``|f(x)| e^{x^2/2 - lam omega(|x|)}`` (weighted).

    The same quantity is scanned for ``fhat``; the pair is bounded when both
    running sups stabilise before the end of the informative window.

    Parameters
    ----------
    f : HermiteCoeffs, GridFunction or callable
        Coefficients are evaluated in log form on a log-radial grid reaching
        ``1e12``; other inputs are sampled on ``[0, X]`` and samples below
        ``floor`` times the peak are discarded as noise.
    lam : float
    omega : WeightFunction, optional
        Selects the weighted mode.
    fhat : same kinds as ``f``, optional
        Defaults to the Fourier transform (exact for coefficients, trapezoid
        on ``[-X, X]`` otherwise).
    strict : bool
        Raise :class:`GridTooShort` on an edge witness instead of reporting it.

    Returns
    -------
    (ScanReport, ScanReport)
        For ``f`` and ``fhat``.
    """
    mode = mode or ("weighted" if omega is not None else "gaussian_gap")
    if mode == "weighted" and omega is None:
        raise ValueError("weighted mode needs omega")

    def penalty(xx):
        if mode == "gaussian_gap":
            return lam * xx * xx
        return lam * omega(np.abs(xx))

    params = {"lambda": lam, "mode": mode}
    if isinstance(f, HermiteCoeffs):
        xx = radial_grid() if x is None else np.asarray(x, dtype=float)
        f, reach = trusted_expansion(f)
        fh = fourier_coeffs(f) if fhat is None else fhat
        out = []
        for label, c in (("f", f), ("fhat", fh)):
            # log|c(x)| + x^2/2 directly from the recurrence: no cancellation at large x
            la_pos, _ = hermite_series_log(c, xx, drop_gaussian=True)
            la_neg, _ = hermite_series_log(c, -xx, drop_gaussian=True)
            total = np.maximum(la_pos, la_neg)
            edge = edge_terms(c)
            edge_l = np.maximum(hermite_series_log(edge, xx, True)[0], hermite_series_log(edge, -xx, True)[0])
            lv = total - penalty(xx)
            lv[xx > reach] = np.nan
            cut = truncation_cut(total, edge_l)
            if cut is not None:
                lv[cut:] = np.nan
            out.append(_sup_scan(xx, lv, f"{label}: {_quantity(mode)}", params, strict))
        return tuple(out)

    g = _as_callable(f)
    grid = f if isinstance(f, GridFunction) else GridFunction.from_callable(g, X, 2 * n - 1)
    if fhat is None:
        fhat = fourier_grid(GridFunction(grid.X, grid.h, grid.samples), warn=True)
    out = []
    for label, h in (("f", grid), ("fhat", fhat)):
        hx = h.x
        pos = hx >= 0
        xs = hx[pos]
        lv_p = _log_abs_samples(h, xs, floor)
        lv_n = _log_abs_samples(h, -xs, floor)
        lv = np.fmax(lv_p, lv_n) + 0.5 * xs * xs - penalty(xs)
        out.append(_sup_scan(xs, lv, f"{label}: {_quantity(mode)}", params, strict))
    return tuple(out)


def _quantity(mode):
    if mode == "gaussian_gap":
        return "|f(x)| exp((1/2 - lambda) x^2)"
    return "|f(x)| exp(x^2/2 - lambda omega(|x|))"


def tf_decay_sweep(f, omega=None, lam_grid=DEFAULT_LAMBDA_GRID, **kw) -> dict:
    """``{lam: bounded}`` over a lambda grid (both ``f`` and ``fhat`` must be bounded)."""
    out = {}
    for lam in lam_grid:
        a, b = tf_decay_scan(f, lam, omega=omega, **kw)
        out[float(lam)] = a.bounded and b.bounded
    return out


def bargmann_growth_scan(series: EntireFunctionSeries, omega, lam: float, radii=None, n_angles: int = 64,
                         check: bool = True) -> ScanReport:
    """Sup of ``log|F(z)| - lam omega(|z|)`` over circles ``|z| = radii``.

    ``stabilized`` when the per-radius max over the outer 20% of the radii
    does not exceed the max over the inner part.
    """
    radii = np.linspace(0.0, 6.0, 61) if radii is None else np.asarray(radii, dtype=float)
    th = 2 * np.pi * np.arange(n_angles) / n_angles
    z = radii[:, None] * np.exp(1j * th)[None, :]
    la, _, _ = series.eval_log(z, check)
    per_r = np.max(la, axis=1) - lam * omega(radii)
    table = [{"radius": float(r), "sup_log": float(v)} for r, v in zip(radii, per_r)]
    top = float(np.max(per_r))
    k = int(np.flatnonzero(per_r >= top - 1e-12 * max(1.0, abs(top)))[0])
    j = int(np.argmax(la[k]))
    stab = stabilized(per_r)
    return ScanReport("|F(z)| exp(-lambda omega(|z|))", {"lambda": lam}, top, complex(z[k, j]), stab, table,
                      edge_witness=not stab)


@dataclass
class CauchyBound:
    log_bound: float
    radius: float
    weighted_log_bound: float | None = None


def _circle_log_max(F, t, m):
    th = 2 * np.pi * np.arange(m) / m
    vals = np.abs(np.asarray(F(t * np.exp(1j * th)), dtype=complex))
    return float(np.max(vals))


def cauchy_coeff_bound(F: Callable, n: int, omega=None, lam: float | None = None, ladder=None,
                       m: int = 256) -> CauchyBound:
    """``min_t (log max_{|z| = t} |F| - n log t)``: an upper bound for ``log |F^(n)(0)/n!|``.

    The circle max uses ``m`` and ``2m`` equispaced points with one Richardson
    step ``M_2m + (M_2m - M_m)/3``.  The ladder defaults to 96 log-spaced radii
    on ``[1.05, 32]``.  With ``omega`` and ``lam`` also returns
    ``min_t (lam omega(t) - n log t)``.
    """
    ladder = np.geomspace(1.05, 32.0, 96) if ladder is None else np.asarray(ladder, dtype=float)
    best, arg = math.inf, float(ladder[0])
    for t in ladder:
        m1 = _circle_log_max(F, t, m)
        m2 = _circle_log_max(F, t, 2 * m)
        mx = max(m2 + (m2 - m1) / 3.0, m2)
        v = (math.log(mx) if mx > 0 else -math.inf) - n * math.log(t)
        if v < best:
            best, arg = v, float(t)
    weighted = None
    if omega is not None and lam is not None:
        weighted = float(np.min(lam * omega(ladder) - n * np.log(ladder)))
    return CauchyBound(best, arg, weighted)
