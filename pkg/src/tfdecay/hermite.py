"""Hermite functions, Gauss-Hermite analysis/synthesis and coefficient decay tests.

Hermite functions are the normalised ``h_n(x) = (2^n n! sqrt(pi))^{-1/2}
H_n(x) e^{-x^2/2}``.  Coefficients ``H(f, n) = <f, h_n>`` are stored in
:class:`HermiteCoeffs` as ``(log|c_n|, arg c_n)`` pairs so that bounds mixing
``sqrt(n!)`` with exponentially small factors can be evaluated for ``n`` in
the hundreds without overflow.
"""
from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gammaln, roots_hermite

from . import _kernels
from .errors import OrderTooLarge, QuadratureUnderresolved, WindowingWarning, WindowTooShort

N_MAX = 2048
ZERO_LOG = math.log(1e-300)
DEFAULT_R_GRID = (0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0)
NOISE_FLOOR = 1e-13

SQRT_PI = math.sqrt(math.pi)


def log_sqrt_factorial(n):
    """``log sqrt(n!)`` via log-Gamma, elementwise."""
    return 0.5 * gammaln(np.asarray(n, dtype=float) + 1.0)


def stirling_gap(n):
    """``log n! - Stirling(n)``; lies in ``(0, 1/(12 n))`` for ``n >= 1``."""
    n = np.asarray(n, dtype=float)
    stirling = n * np.log(n) - n + 0.5 * np.log(2.0 * np.pi * n)
    return gammaln(n + 1.0) - stirling


def hermite_eval(n: int, x):
    """Value of ``h_n`` at ``x`` (scalar or array).

    Examples
    --------
    >>> round(float(hermite_eval(0, 0.0)), 12)
    0.751125544465
    """
    n = int(n)
    if n < 0:
        raise ValueError("order must be nonnegative")
    if n > N_MAX:
        raise OrderTooLarge(f"order {n} exceeds N_max={N_MAX}")
    xa = np.asarray(x, dtype=float)
    vals = _kernels.hermite_table(n, xa.ravel())[n]
    return vals.reshape(xa.shape) if xa.ndim else float(vals[0])


def hermite_table(nmax: int, x) -> np.ndarray:
    """``(nmax + 1, len(x))`` array of ``h_0 ... h_nmax`` at ``x``."""
    if nmax > N_MAX:
        raise OrderTooLarge(f"order {nmax} exceeds N_max={N_MAX}")
    return _kernels.hermite_table(nmax, np.asarray(x, dtype=float).ravel())


@lru_cache(maxsize=64)
def _gauss_hermite_cached(q: int):
    x, _ = roots_hermite(q)
    # Christoffel numbers of the orthonormal functions: W_i = w_i exp(x_i^2),
    # computed without forming exp(x_i^2) (which overflows for q > ~700)
    tab = _kernels.hermite_table(q - 1, x)
    W = 1.0 / np.sum(tab * tab, axis=0)
    x.flags.writeable = False
    W.flags.writeable = False
    return x, W


def gauss_hermite(q: int):
    """Nodes and scaled weights with ``int g(x) dx ~= sum W_i g(x_i)``.

    The scaled weight ``W_i`` equals ``w_i e^{x_i^2}`` for the classical
    Gauss-Hermite weights ``w_i``; it is exact for ``g = p(x) e^{-x^2}`` with
    ``deg p <= 2q - 1``.
    """
    if q < 1:
        raise ValueError("need at least one node")
    return _gauss_hermite_cached(int(q))


def default_nodes(N: int) -> int:
    return max(2 * N + 2, 128)


def gram_matrix(nmax: int, q: int | None = None) -> np.ndarray:
    """``<h_m, h_n>`` for ``m, n <= nmax`` by Gauss-Hermite quadrature."""
    x, W = gauss_hermite(q or default_nodes(nmax))
    tab = hermite_table(nmax, x)
    return (tab * W) @ tab.T


# --------------------------------------------------------------------------
# data types
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples on the symmetric grid ``-X, -X + h, ..., X``.

    ``closed_form`` optionally keeps the callable the samples came from so
    that analysis can requadrature exactly instead of interpolating.
    """

    X: float
    h: float
    samples: np.ndarray
    closed_form: Callable | None = None
    tag: str = ""

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=complex)
        if s.ndim != 1 or s.size % 2 == 0:
            raise ValueError("grid needs an odd number of samples")
        if not np.all(np.isfinite(s)):
            raise ValueError("samples must be finite")
        if not math.isclose((s.size - 1) * self.h, 2 * self.X, rel_tol=1e-9):
            raise ValueError("X, h and sample count disagree")
        s.flags.writeable = False
        object.__setattr__(self, "samples", s)

    @property
    def x(self) -> np.ndarray:
        n = self.samples.size // 2
        return self.h * np.arange(-n, n + 1)

    @classmethod
    def from_callable(cls, f: Callable, X: float = 12.0, n: int = 2401, tag: str = "") -> "GridFunction":
        if n % 2 == 0:
            n += 1
        x = np.linspace(-X, X, n)
        return cls(X, 2 * X / (n - 1), np.asarray(f(x), dtype=complex), closed_form=f, tag=tag)

    @classmethod
    def zeros_like(cls, grid: "GridFunction") -> "GridFunction":
        return cls(grid.X, grid.h, np.zeros_like(grid.samples))

    def __call__(self, x):
        """Closed form if known, else cubic-spline interpolation (zero outside)."""
        x = np.asarray(x, dtype=float)
        if self.closed_form is not None:
            return np.asarray(self.closed_form(x), dtype=complex)
        xs = self.x
        re = CubicSpline(xs, self.samples.real)(x)
        im = CubicSpline(xs, self.samples.imag)(x)
        return np.where(np.abs(x) <= self.X, re + 1j * im, 0.0)

    def edge_ratio(self) -> float:
        a = np.abs(self.samples)
        peak = a.max()
        return float(max(a[0], a[-1]) / peak) if peak > 0 else 0.0

    def norm2(self) -> float:
        """Trapezoid L2 norm squared."""
        a2 = np.abs(self.samples) ** 2
        return float(self.h * (a2.sum() - 0.5 * (a2[0] + a2[-1])))


def make_grid(X: float = 12.0, n: int = 2401) -> GridFunction:
    """An all-zero template grid."""
    if n % 2 == 0:
        n += 1
    return GridFunction(X, 2 * X / (n - 1), np.zeros(n, dtype=complex))


@dataclass(frozen=True, eq=False)
class HermiteCoeffs:
    """Coefficients ``c_n = exp(log_abs[n] + i phase[n])``, ``n = 0..N``.

    ``log_abs = -inf`` marks an exact zero.
    """

    log_abs: np.ndarray
    phase: np.ndarray
    provenance: str = "synthetic"

    def __post_init__(self):
        la = np.array(self.log_abs, dtype=float)
        ph = np.array(self.phase, dtype=float)
        if la.shape != ph.shape or la.ndim != 1 or la.size == 0:
            raise ValueError("log_abs and phase must be equal-length 1-d arrays")
        if np.any(np.isnan(la)) or np.any(la == np.inf):
            raise ValueError("log_abs must be finite or -inf")
        ph = np.where(np.isneginf(la), 0.0, np.where(np.abs(ph) <= math.pi, ph, np.angle(np.exp(1j * ph))))
        la.flags.writeable = False
        ph.flags.writeable = False
        object.__setattr__(self, "log_abs", la)
        object.__setattr__(self, "phase", ph)

    @property
    def order(self) -> int:
        return self.log_abs.size - 1

    def __len__(self):
        return self.log_abs.size

    @classmethod
    def from_complex(cls, c, provenance: str = "synthetic") -> "HermiteCoeffs":
        c = np.asarray(c, dtype=complex)
        a = np.abs(c)
        with np.errstate(divide="ignore"):
            la = np.where(a < 1e-300, -np.inf, np.log(np.where(a > 0, a, 1.0)))
        return cls(la, np.angle(c), provenance)

    @classmethod
    def from_log(cls, log_abs, phase=None, provenance: str = "synthetic") -> "HermiteCoeffs":
        la = np.asarray(log_abs, dtype=float)
        return cls(la, np.zeros_like(la) if phase is None else phase, provenance)

    @classmethod
    def delta(cls, n: int, N: int | None = None, value: complex = 1.0) -> "HermiteCoeffs":
        N = n if N is None else N
        c = np.zeros(N + 1, dtype=complex)
        c[n] = value
        return cls.from_complex(c)

    def to_complex(self) -> np.ndarray:
        with np.errstate(under="ignore"):
            return np.exp(self.log_abs) * np.exp(1j * self.phase)

    def scaled(self, gamma: float) -> "HermiteCoeffs":
        return HermiteCoeffs(self.log_abs + math.log(gamma), self.phase, self.provenance)

    def with_phase(self, extra) -> "HermiteCoeffs":
        return HermiteCoeffs(self.log_abs, self.phase + np.asarray(extra, dtype=float), self.provenance)

    def nonzero(self) -> np.ndarray:
        return np.flatnonzero(np.isfinite(self.log_abs))

    def norm2(self) -> float:
        return float(np.sum(np.exp(2 * self.log_abs)))


# --------------------------------------------------------------------------
# analysis / synthesis
# --------------------------------------------------------------------------

def _node_values(f, x):
    if isinstance(f, GridFunction):
        if f.closed_form is None:
            outside = np.abs(x) > f.X
            if outside.any() and f.edge_ratio() > 1e-12:
                warnings.warn(f"quadrature nodes reach |x| = {np.abs(x).max():.3g} beyond the grid "
                              f"half-width {f.X:g} while samples have not decayed", WindowingWarning,
                              stacklevel=3)
        return f(x)
    return np.asarray(f(x), dtype=complex) * np.ones_like(x)


def _project(vals, x, W, N):
    tab = hermite_table(N, x)
    return tab @ (W * vals)


def analyze(f, N: int, q: int | None = None, check: bool = True, tol: float = 1e-8) -> HermiteCoeffs:
    """Hermite coefficients ``<f, h_n>``, ``n = 0..N``, by Gauss-Hermite quadrature.

    Parameters
    ----------
    f : callable or GridFunction
        Vectorised function of ``x``.
    N : int
        Highest order.
    q : int, optional
        Node count, default ``max(2N + 2, 128)``.
    check : bool
        Repeat with ``2q`` nodes and raise :class:`QuadratureUnderresolved`
        when any coefficient moves by more than ``tol`` relative to the
        largest one.
    """
    if N > N_MAX:
        raise OrderTooLarge(f"order {N} exceeds N_max={N_MAX}")
    q = q or default_nodes(N)
    x, W = gauss_hermite(q)
    c = _project(_node_values(f, x), x, W, N)
    if check:
        x2, W2 = gauss_hermite(2 * q)
        c2 = _project(_node_values(f, x2), x2, W2, N)
        scale = np.abs(c2).max()
        err = np.abs(c2 - c).max()
        if scale > 0 and err > tol * scale:
            raise QuadratureUnderresolved(
                f"doubling nodes {q}->{2 * q} moved coefficients by {err / scale:.2e} (relative)")
        c = c2
    return HermiteCoeffs.from_complex(c, provenance="analyzed")


def l2_norm2(f, q: int = 256) -> float:
    """``||f||_2^2`` by Gauss-Hermite quadrature."""
    x, W = gauss_hermite(q)
    return float(np.sum(W * np.abs(_node_values(f, x)) ** 2))


def synthesize(c: HermiteCoeffs, grid=None) -> GridFunction:
    """Samples of ``sum_n c_n h_n`` on ``grid`` (a GridFunction template).

    The sum runs alongside the forward recurrence with a carried exponent, so
    large orders and far-out points neither overflow nor lose the tail.
    """
    grid = make_grid() if grid is None else grid
    x = grid.x
    la, ph = _kernels.hermite_log_sum(c.log_abs, c.phase, x)
    with np.errstate(under="ignore"):
        vals = np.exp(la) * np.exp(1j * ph)

    def closed(t, c=c):
        t = np.asarray(t, dtype=float)
        a, p = _kernels.hermite_log_sum(c.log_abs, c.phase, t.ravel())
        with np.errstate(under="ignore"):
            return (np.exp(a) * np.exp(1j * p)).reshape(t.shape)

    return GridFunction(grid.X, grid.h, vals, closed_form=closed, tag="synthesized")


def hermite_series(c: HermiteCoeffs, x) -> np.ndarray:
    """Pointwise ``sum_n c_n h_n(x)``."""
    x = np.asarray(x, dtype=float)
    la, ph = _kernels.hermite_log_sum(c.log_abs, c.phase, x.ravel())
    with np.errstate(under="ignore"):
        return (np.exp(la) * np.exp(1j * ph)).reshape(x.shape)


def hermite_series_log(c: HermiteCoeffs, x, drop_gaussian: bool = False):
    """``(log|f(x)|, arg f(x))`` for ``f = sum c_n h_n``; usable far beyond underflow.

    ``drop_gaussian`` returns ``log|f(x) e^{x^2/2}|`` instead.
    """
    x = np.asarray(x, dtype=float)
    la, ph = _kernels.hermite_log_sum(c.log_abs, c.phase, x.ravel(), drop_gaussian)
    return la.reshape(x.shape), ph.reshape(x.shape)


# --------------------------------------------------------------------------
# decay classification
# --------------------------------------------------------------------------

IN_H = "in_H_omega"
IN_H0 = "in_H0_omega"
NEITHER = "neither"
FINITE = "finite_combination"
GAUSSIAN = "gaussian_multiple"


@dataclass
class DecayReport:
    """Verdict of a coefficient-decay test with the per-rate table."""

    verdict: str
    r_grid: list
    r_fit: float | None
    witness_n: int | None
    table: list = field(default_factory=list)
    residuals: np.ndarray | None = None
    window: tuple = (0, 0)
    notes: dict = field(default_factory=dict)

    @property
    def passing(self) -> list:
        return [row["r"] for row in self.table if row["bounded"]]

    @property
    def in_some(self) -> bool:
        return self.verdict in (IN_H, IN_H0, FINITE, GAUSSIAN)

    @property
    def in_all(self) -> bool:
        return self.verdict in (IN_H0, GAUSSIAN) or (self.verdict == FINITE and len(self.passing) == len(self.r_grid))

    def to_json(self, residuals_path: str | None = None) -> dict:
        def fin(v):
            return v if v is None or np.isfinite(v) else ("inf" if v > 0 else "-inf")

        return {
            "verdict": self.verdict,
            "r_grid": list(self.r_grid),
            "r_fit": fin(self.r_fit),
            "witness_n": self.witness_n,
            "residuals_path": residuals_path,
            "window": list(self.window),
            "table": [{k: fin(v) if isinstance(v, float) else v for k, v in row.items()} for row in self.table],
            **({"notes": self.notes} if self.notes else {}),
        }


def _floor_coeffs(c: HermiteCoeffs, noise_floor: float | None):
    """Apply the relative noise floor; return log|c| and the effective window end."""
    la = np.array(c.log_abs)
    if noise_floor is None:
        noise_floor = NOISE_FLOOR if c.provenance == "analyzed" else 0.0
    top = la.max()
    if not np.isfinite(top):
        raise ValueError("coefficient sequence is identically zero")
    n_end = la.size - 1
    limited = False
    if noise_floor > 0:
        cut = top + math.log(noise_floor)
        la = np.where(la < cut, -np.inf, la)
        last = int(np.flatnonzero(np.isfinite(la))[-1])
        # a gradual approach to the floor means the sequence was cut by noise, not by structure
        if last < c.order and la[last] < cut + math.log(1e4):
            n_end = last
            limited = True
    return la, n_end, limited


def trusted_expansion(c: HermiteCoeffs, noise_floor: float | None = None):
    """Floor-trimmed coefficients and the radius up to which their sum can be trusted.

    Analysed coefficients that drop abruptly to the noise floor before the
    box order describe an exact finite combination, trusted everywhere.
    Otherwise the truncated sum is trusted up to the turning point
    ``sqrt(2N + 1)`` of ``h_N``.  Other provenances pass through untouched.
    """
    if c.provenance != "analyzed":
        return c, math.inf
    la, _, limited = _floor_coeffs(c, noise_floor)
    last = int(np.flatnonzero(np.isfinite(la))[-1])
    reach = math.inf if not limited and last < c.order else math.sqrt(2 * c.order + 1)
    return HermiteCoeffs(la, c.phase, c.provenance), reach


def truncation_cut(total_log, edge_log, share: float = 1e-6):
    """First index of the trailing run where the box-edge terms exceed ``share`` of the sum.

    Past that index the finite sum is dominated by its truncation and says
    nothing about the function it stands for.  Returns ``None`` if the run
    is empty; isolated zeros of the sum do not trigger a cut.
    """
    with np.errstate(invalid="ignore"):
        bad = np.asarray(edge_log) > np.asarray(total_log) + math.log(share)
    if bad.size == 0 or not bad[-1]:
        return None
    good = np.flatnonzero(~bad)
    return int(good[-1] + 1) if good.size else 0


def edge_terms(c: HermiteCoeffs, width: int = 2) -> HermiteCoeffs:
    """Only the top ``width`` orders of ``c`` (two, so parity zeros do not hide the edge)."""
    la = np.full(len(c), -np.inf)
    la[-width:] = c.log_abs[-width:]
    return HermiteCoeffs(la, c.phase, c.provenance)


def _sup_witness(vals):
    top = np.max(vals)
    if not np.isfinite(top):
        return top, int(np.argmax(vals))
    tol = 1e-12 * max(1.0, abs(top))
    return top, int(np.flatnonzero(vals >= top - tol)[0])


def stabilized(vals, frac: float = 0.2) -> bool:
    """Running sup unchanged over the outer ``frac`` of the window."""
    vals = np.asarray(vals, dtype=float)
    if np.any(vals == np.inf):
        return False
    k = max(1, int(math.ceil(frac * vals.size)))
    inner, outer = vals[:-k], vals[-k:]
    if inner.size == 0:
        return False
    ref = np.max(inner)
    if np.isneginf(ref):
        return bool(np.all(np.isneginf(outer)))
    return bool(np.max(outer) <= ref + 1e-12 * max(1.0, abs(ref)))


def _phistar_fn(omega, phistar):
    from .weights import young_conjugate

    if phistar is not None:
        return phistar.at
    return lambda t: young_conjugate(omega, np.asarray(t, dtype=float).ravel(), force=True).values.reshape(np.shape(t))


def bound_profile(g, phistar_at, r: float) -> np.ndarray:
    """``g_n + (1/r) phi*(r n)`` with ``-inf + inf = -inf`` (zero coefficients)."""
    n = np.arange(g.size, dtype=float)
    ps = np.asarray(phistar_at(r * n), dtype=float)
    with np.errstate(invalid="ignore"):
        out = g + ps / r
    return np.where(np.isneginf(g), -np.inf, out)


def _exponential_profile(g, _unused, r: float) -> np.ndarray:
    """``g_n + r n``."""
    return g + r * np.arange(g.size, dtype=float)


def classify_profile(g, phistar_at, r_grid=DEFAULT_R_GRID, n_end: int | None = None,
                     refine: bool = False, notes: dict | None = None, profile=bound_profile) -> DecayReport:
    """Decay verdict from ``g_n = log|c_n| - log sqrt(n!)`` (or a reduced multi-index profile).

    ``profile(g, phistar_at, r)`` builds the log-domain bound sequence for one rate.
    """
    g = np.asarray(g, dtype=float)
    n_end = g.size - 1 if n_end is None else n_end
    g = g[: n_end + 1]
    r_grid = sorted(float(r) for r in r_grid)
    table = []
    profiles = {}
    for r in r_grid:
        b = profile(g, phistar_at, r)
        sup, wit = _sup_witness(b)
        ok = bool(np.isfinite(sup) and stabilized(b))
        profiles[r] = b
        table.append({"r": r, "sup_log": float(sup), "witness_n": wit, "bounded": ok})
    passing = [row["r"] for row in table if row["bounded"]]
    r_fit = max(passing) if passing else None
    if refine and passing and len(passing) < len(r_grid):
        lo = r_fit
        hi = min(r for r in r_grid if r > lo)
        for _ in range(40):
            mid = math.sqrt(lo * hi)
            b = profile(g, phistar_at, mid)
            if np.isfinite(np.max(b)) and stabilized(b):
                lo = mid
            else:
                hi = mid
        r_fit = lo

    ps_inf = False
    nz = np.flatnonzero(np.isfinite(g))
    if phistar_at is not None:
        for r in r_grid:
            vals = np.asarray(phistar_at(r * np.arange(g.size, dtype=float)))
            ps_inf |= bool(np.any(np.isinf(vals)))
    if len(passing) == len(r_grid):
        verdict = IN_H0
    elif passing:
        verdict = IN_H
    else:
        verdict = NEITHER
    if ps_inf and passing:
        if nz.size and nz.max() == 0 and len(passing) == len(r_grid):
            verdict = GAUSSIAN
        else:
            verdict = FINITE
    ref_r = r_fit if r_fit is not None else r_grid[0]
    if ref_r not in profiles:
        profiles[ref_r] = profile(g, phistar_at, ref_r)
    res = profiles[ref_r]
    sup, wit = _sup_witness(res)
    return DecayReport(verdict, r_grid, r_fit, wit, table, res, (0, int(n_end)), notes or {})


def classify_decay(c: HermiteCoeffs, omega=None, phistar=None, r_grid=DEFAULT_R_GRID,
                   noise_floor: float | None = None, refine: bool = False) -> DecayReport:
    """Test ``|c_n| <~ sqrt(n!) exp(-(1/r) phi*(r n))`` for each ``r`` in ``r_grid``.

    A rate passes when the log-domain sup over the window is finite and
    unchanged over the outer 20% of the window.  Verdicts:

    ``in_H0_omega``
        every tested ``r`` passes;
    ``in_H_omega``
        some ``r`` passes (``r_fit`` is the largest);
    ``finite_combination`` / ``gaussian_multiple``
        ``phi*`` takes the value ``+inf`` and only finitely many (or only the
        zeroth) coefficients survive;
    ``neither``
        no rate passes.

    Parameters
    ----------
    c : HermiteCoeffs
    omega : WeightFunction, optional
        Used to compute ``phi*`` when ``phistar`` is not given.
    phistar : YoungConjugate, optional
    r_grid : sequence of float
    noise_floor : float, optional
        Entries below ``noise_floor * max|c|`` count as zero; defaults to
        ``1e-13`` for analysed coefficients and 0 otherwise.
    refine : bool
        Bisect ``r_fit`` between the largest passing and smallest failing rate.
    """
    if c.order < 16:
        raise WindowTooShort(f"need order >= 16, got {c.order}")
    if omega is None and phistar is None:
        raise ValueError("give omega or phistar")
    la, n_end, limited = _floor_coeffs(c, noise_floor)
    g = la - log_sqrt_factorial(np.arange(la.size))
    notes = {"floor_limited": True} if limited else {}
    return classify_profile(g, _phistar_fn(omega, phistar), r_grid, n_end, refine, notes)


def rapid_exponential_check(c: HermiteCoeffs, r_grid=DEFAULT_R_GRID,
                            noise_floor: float | None = None) -> DecayReport:
    """Test ``sup_n |c_n| e^{r n} < inf`` for every ``r`` in ``r_grid``.

    ``verdict`` is ``in_H0_omega`` when all rates pass.  Otherwise ``r_fit``
    is a geometric rate fitted by least squares to ``log|c_n|`` over the upper
    half of the nonzero window, and ``notes["largest_grid_r"]`` the largest
    passing grid rate.
    """
    if c.order < 16:
        raise WindowTooShort(f"need order >= 16, got {c.order}")
    la, n_end, limited = _floor_coeffs(c, noise_floor)
    la = la[: n_end + 1]
    n = np.arange(la.size, dtype=float)
    rep = classify_profile(la, None, r_grid, n_end, profile=_exponential_profile)
    passing = rep.passing
    nz = np.flatnonzero(np.isfinite(la))
    notes = {"largest_grid_r": max(passing) if passing else None}
    if limited:
        notes["floor_limited"] = True
    if len(passing) == len(rep.r_grid):
        verdict = IN_H0
        r_fit = math.inf if nz.size and nz.max() < c.order and not limited else None
    else:
        verdict = IN_H if passing else NEITHER
        tail = nz[nz >= nz.max() // 2] if nz.size else nz
        if tail.size >= 2:
            slope = np.polyfit(n[tail], la[tail], 1)[0]
            r_fit = float(-slope)
        else:
            r_fit = None
        notes["fitted_rate"] = r_fit
    rep.verdict = verdict
    rep.r_fit = r_fit
    rep.notes = notes
    return rep


# --------------------------------------------------------------------------
# closed-form comparisons and sums
# --------------------------------------------------------------------------

@dataclass
class Example42Profile:
    n: np.ndarray
    conjugate_side: np.ndarray
    closed_side: np.ndarray
    spread: float
    effective_rate: np.ndarray

    @property
    def difference(self) -> np.ndarray:
        return self.conjugate_side - self.closed_side


def example42_profile(s, r: float, N: int, n_min: int = 1, phistar=None) -> Example42Profile:
    """Compare ``log(sqrt(n!) e^{-(1/r) phi*_s(r n)})`` with its closed-form model.

    The model is ``-r n^{1/(2s)}`` for real ``0 < s <= 1/2`` and
    ``n log r - log(n!)/(2 sigma)`` for ``flat_sigma``.  ``spread`` is
    ``max - min`` of the difference over ``n = n_min..N``.  ``effective_rate``
    is the rate ``rho(n)`` with ``-rho n^{1/(2s)}`` (real s) or
    ``n log rho - log(n!)/(2 sigma)`` (flat) reproducing the conjugate side.
    """
    from .weights import Flat, omega_s, parse_index, young_conjugate

    idx = parse_index(s)
    if not isinstance(idx, Flat) and idx == 0:
        from .errors import BadIndex

        raise BadIndex("the closed-form model needs s > 0")
    n = np.arange(n_min, N + 1, dtype=float)
    if phistar is None:
        ps = young_conjugate(omega_s(idx), r * n, force=True).values
    else:
        ps = phistar.at(r * n)
    lhs = log_sqrt_factorial(n) - ps / r
    lf = gammaln(n + 1.0)
    if isinstance(idx, Flat):
        rhs = n * math.log(r) - lf / (2.0 * idx.sigma)
        rate = np.exp((lhs + lf / (2.0 * idx.sigma)) / n)
    else:
        p = 1.0 / (2.0 * idx)
        rhs = -r * n ** p
        rate = -lhs / n ** p
    diff = lhs - rhs
    return Example42Profile(n, lhs, rhs, float(diff.max() - diff.min()), rate)


@dataclass
class SummabilityResult:
    log_partial: np.ndarray
    converged: bool

    @property
    def log_sum(self) -> float:
        return float(self.log_partial[-1])


def summability_check(c: HermiteCoeffs, omega=None, phistar=None, r: float = 1.0,
                      rel_tol: float = 1e-12, noise_floor: float | None = None) -> SummabilityResult:
    """Partial sums of ``sum_n |c_n| / sqrt(n!) e^{(1/r) phi*(r n)}`` in log form.

    ``converged`` when every increment over the outer 20% of the window is
    below ``rel_tol`` times the running sum.
    """
    if omega is None and phistar is None:
        raise ValueError("give omega or phistar")
    la, n_end, _ = _floor_coeffs(c, noise_floor)
    g = la - log_sqrt_factorial(np.arange(la.size))
    terms = bound_profile(g[: n_end + 1], _phistar_fn(omega, phistar), r)
    if np.any(terms == np.inf):
        return SummabilityResult(np.full(terms.size, np.inf), False)
    partial = np.logaddexp.accumulate(terms)
    k = max(1, int(math.ceil(0.2 * terms.size)))
    with np.errstate(invalid="ignore"):
        rel = terms[-k:] - partial[-k:]
    rel = np.where(np.isnan(rel), -np.inf, rel)
    return SummabilityResult(partial, bool(np.all(rel < math.log(rel_tol))))


# --------------------------------------------------------------------------
# CSV I/O
# --------------------------------------------------------------------------

def _fmt(v: float) -> str:
    if np.isneginf(v):
        return "-inf"
    if np.isposinf(v):
        return "inf"
    return repr(float(v))


def write_coeffs_csv(c: HermiteCoeffs, path) -> None:
    """Header ``n,log10_abs,phase_radians``; exact zeros are written as ``-inf``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "log10_abs", "phase_radians"])
        for n, (a, p) in enumerate(zip(c.log_abs / math.log(10.0), c.phase)):
            w.writerow([n, _fmt(a), _fmt(p)])


def read_coeffs_csv(path, provenance: str = "synthetic") -> HermiteCoeffs:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows or set(rows[0]) != {"n", "log10_abs", "phase_radians"}:
        raise ValueError(f"{path}: expected header n,log10_abs,phase_radians")
    rows.sort(key=lambda r: int(r["n"]))
    if [int(r["n"]) for r in rows] != list(range(len(rows))):
        raise ValueError(f"{path}: orders must be 0..N without gaps")
    la = np.array([float(r["log10_abs"]) for r in rows]) * math.log(10.0)
    ph = np.array([float(r["phase_radians"]) for r in rows])
    return HermiteCoeffs(la, ph, provenance)


def write_grid_csv(g: GridFunction, path) -> None:
    """Header ``x,re,im``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "re", "im"])
        for x, v in zip(g.x, g.samples):
            w.writerow([repr(float(x)), repr(float(v.real)), repr(float(v.imag))])


def read_grid_csv(path) -> GridFunction:
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.dtype.names != ("x", "re", "im"):
        raise ValueError(f"{path}: expected header x,re,im")
    x = np.atleast_1d(data["x"])
    h = float(np.mean(np.diff(x)))
    if not np.allclose(np.diff(x), h, rtol=1e-8, atol=1e-12) or not math.isclose(x[0], -x[-1], abs_tol=1e-9 * h):
        raise ValueError(f"{path}: grid must be uniform and symmetric")
    return GridFunction(float(x[-1]), h, data["re"] + 1j * data["im"])


def coeffs_from_sequence(values: Sequence[float] | np.ndarray, log: bool = False) -> HermiteCoeffs:
    """Real coefficient sequence (or its natural log when ``log``)."""
    if log:
        return HermiteCoeffs.from_log(values)
    return HermiteCoeffs.from_complex(values)
