"""Tensor-product Hermite analysis in up to three dimensions.

Multi-index coefficients ``H(f, alpha) = <f, h_alpha>`` with
``h_alpha(x) = prod_j h_{alpha_j}(x_j)``, partial Fourier transforms acting
on a subset of axes, the shell-reduced decay classifier, and per-mask
Gaussian decay scans.
"""
from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_hermite

from . import _kernels
from .errors import BadIndex, OrderTooLarge, QuadratureUnderresolved
from .hermite import (
    DEFAULT_R_GRID,
    NOISE_FLOOR,
    DecayReport,
    HermiteCoeffs,
    _phistar_fn,
    analyze,
    classify_decay,
    classify_profile,
    gauss_hermite,
    hermite_eval,
    hermite_table,
    log_sqrt_factorial,
    truncation_cut,
)
from .transforms import INV_SQRT_2PI, _sup_scan, fourier_coeffs, radial_grid, stft, tf_decay_scan

D_MAX = 3
N_MAX_D = 64


def _check_dim(d: int) -> None:
    if not 1 <= d <= D_MAX:
        raise ValueError(f"dimension {d} outside 1..{D_MAX}")


def hermite_eval_d(alpha: Sequence[int], x) -> np.ndarray:
    """``prod_j h_{alpha_j}(x_j)``; ``x`` has trailing axis of length ``d``."""
    alpha = tuple(int(a) for a in alpha)
    _check_dim(len(alpha))
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != len(alpha):
        raise ValueError("point dimension does not match the multi-index")
    out = np.ones(x.shape[:-1])
    for j, a in enumerate(alpha):
        out = out * hermite_eval(a, x[..., j])
    return out


# --------------------------------------------------------------------------
# masks and coefficients
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class VarpiMask:
    """Binary axis selector for the partial Fourier transform."""

    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"mask entries must be 0 or 1, got {self.bits}")
        _check_dim(len(bits))
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, s: str) -> "VarpiMask":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"mask must be a bitstring, got {s!r}")
        return cls(tuple(int(ch) for ch in s))

    @property
    def d(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __add__(self, other: "VarpiMask") -> "VarpiMask":
        if any(a and b for a, b in zip(self.bits, other.bits)):
            raise ValueError("masks overlap")
        return VarpiMask(tuple(a | b for a, b in zip(self.bits, other.bits)))


def all_masks(d: int) -> list[VarpiMask]:
    return [VarpiMask(bits) for bits in itertools.product((0, 1), repeat=d)]


@dataclass(frozen=True, eq=False)
class MultiCoeffs:
    """Coefficients on the box ``{0..N}^d`` stored as ``(log|c|, arg c)`` arrays."""

    log_abs: np.ndarray
    phase: np.ndarray
    provenance: str = "synthetic"

    def __post_init__(self):
        la = np.array(self.log_abs, dtype=float)
        ph = np.asarray(self.phase, dtype=float)
        if la.shape != ph.shape:
            raise ValueError("log_abs and phase shapes differ")
        _check_dim(la.ndim)
        if len(set(la.shape)) != 1:
            raise ValueError(f"coefficient box must be square, got {la.shape}")
        if la.shape[0] - 1 > N_MAX_D:
            raise OrderTooLarge(f"order {la.shape[0] - 1} exceeds {N_MAX_D} per axis")
        if np.any(la == np.inf) or np.any(np.isnan(la)):
            raise ValueError("log_abs must be finite or -inf")
        ph = np.where(np.isneginf(la), 0.0, np.where(np.abs(ph) <= math.pi, ph, np.angle(np.exp(1j * ph))))
        la.setflags(write=False)
        ph.setflags(write=False)
        object.__setattr__(self, "log_abs", la)
        object.__setattr__(self, "phase", ph)

    @property
    def d(self) -> int:
        return self.log_abs.ndim

    @property
    def order(self) -> int:
        return self.log_abs.shape[0] - 1

    @classmethod
    def from_complex(cls, c, provenance: str = "synthetic") -> "MultiCoeffs":
        c = np.asarray(c, dtype=complex)
        mag = np.abs(c)
        with np.errstate(divide="ignore"):
            la = np.where(mag < 1e-300, -np.inf, np.log(np.where(mag > 0, mag, 1.0)))
        return cls(la, np.where(np.isfinite(la), np.angle(c), 0.0), provenance)

    @classmethod
    def from_log(cls, log_abs, phase=None, provenance: str = "synthetic") -> "MultiCoeffs":
        la = np.asarray(log_abs, dtype=float)
        return cls(la, np.zeros_like(la) if phase is None else phase, provenance)

    @classmethod
    def from_function(cls, fn: Callable, d: int, N: int) -> "MultiCoeffs":
        """``log|c_alpha| = fn(alpha)`` for an array-valued ``fn`` of the index grids."""
        grids = np.meshgrid(*([np.arange(N + 1)] * d), indexing="ij")
        return cls.from_log(np.asarray(fn(*grids), dtype=float) * np.ones(grids[0].shape))

    @classmethod
    def delta(cls, alpha: Sequence[int], N: int, value: complex = 1.0) -> "MultiCoeffs":
        alpha = tuple(int(a) for a in alpha)
        if any(a < 0 or a > N for a in alpha):
            raise BadIndex(f"multi-index {alpha} outside the box of order {N}")
        c = np.zeros((N + 1,) * len(alpha), dtype=complex)
        c[alpha] = value
        return cls.from_complex(c)

    def to_complex(self) -> np.ndarray:
        with np.errstate(under="ignore"):
            return np.exp(self.log_abs) * np.exp(1j * self.phase)

    def degrees(self) -> np.ndarray:
        """``|alpha|`` on the box."""
        return np.sum(np.indices(self.log_abs.shape), axis=0)

    def degrees_max(self) -> np.ndarray:
        """``max_j alpha_j`` over the box."""
        return np.indices(self.log_abs.shape).max(axis=0)

    def log_sqrt_factorial(self) -> np.ndarray:
        """``log sqrt(alpha!)`` on the box."""
        lsf = log_sqrt_factorial(np.arange(self.order + 1))
        return sum(lsf[idx] for idx in np.indices(self.log_abs.shape))

    def to_1d(self) -> HermiteCoeffs:
        if self.d != 1:
            raise ValueError("not one-dimensional")
        return HermiteCoeffs(self.log_abs, self.phase, self.provenance)

    @classmethod
    def from_1d(cls, c: HermiteCoeffs) -> "MultiCoeffs":
        return cls(np.asarray(c.log_abs), np.asarray(c.phase), c.provenance)


# --------------------------------------------------------------------------
# analysis
# --------------------------------------------------------------------------

def _tensor_project(f, N, q, d):
    x, W = gauss_hermite(q)
    grids = np.meshgrid(*([x] * d), indexing="ij")
    vals = np.asarray(f(*grids), dtype=complex) * np.ones(grids[0].shape)
    tab = hermite_table(N, x) * W[None, :]
    for axis in range(d):
        # contract node axis `axis` against the table; the new order axis goes last
        vals = np.tensordot(vals, tab, axes=([0], [1]))
    return vals


def analyze_d(f: Callable, N: int, d: int | None = None, q: int | None = None, check: bool = True,
              tol: float = 1e-8) -> MultiCoeffs:
    """Coefficients ``<f, h_alpha>`` on ``{0..N}^d`` by tensor Gauss-Hermite quadrature.

    ``f(x1, ..., xd)`` takes broadcast coordinate arrays.  ``d = 1`` uses the
    one-dimensional routine unchanged.
    """
    d = d or 1
    _check_dim(d)
    if N > N_MAX_D:
        raise OrderTooLarge(f"order {N} exceeds {N_MAX_D} per axis")
    if d == 1:
        return MultiCoeffs.from_1d(analyze(f, N, q, check, tol))
    q = q or max(2 * N + 2, 96 if d == 2 else 48)
    if q < 2 * N + 2:
        raise ValueError(f"need at least {2 * N + 2} nodes per axis, got {q}")
    c = _tensor_project(f, N, q, d)
    if check:
        c2 = _tensor_project(f, N, 2 * q, d)
        scale = np.abs(c2).max()
        err = np.abs(c2 - c).max()
        if scale > 0 and err > tol * scale:
            raise QuadratureUnderresolved(f"doubling nodes {q}->{2 * q} moved coefficients by {err / scale:.2e}")
        c = c2
    return MultiCoeffs.from_complex(c, provenance="analyzed")


def synthesize_d(c: MultiCoeffs, points) -> np.ndarray:
    """``sum_alpha c_alpha h_alpha`` at ``points`` of shape ``(..., d)``."""
    pts = np.asarray(points, dtype=float)
    la, ph = log_synthesis(c, pts.reshape(-1, c.d))
    sq = np.sum(pts.reshape(-1, c.d) ** 2, axis=1)
    with np.errstate(under="ignore"):
        return (np.exp(la - 0.5 * sq) * np.exp(1j * ph)).reshape(pts.shape[:-1])


def _log_tables(N, x):
    """``log|h_n(x) e^{x^2/2}|`` and its phase for ``n = 0..N``."""
    L = np.empty((N + 1, x.size))
    P = np.empty((N + 1, x.size))
    zeros = np.zeros(N + 1)
    for n in range(N + 1):
        la = np.full(N + 1, -np.inf)
        la[n] = 0.0
        L[n], P[n] = _kernels.hermite_log_sum(la[: n + 1], zeros[: n + 1], x, True)
    return L, P


def log_synthesis(c: MultiCoeffs, points, chunk: int = 4_000_000):
    """``(log|F(x) e^{|x|^2/2}|, arg F(x))`` for ``F = sum c_alpha h_alpha`` at ``points`` ``(M, d)``.

    Built from per-axis log tables, so it stays finite far beyond the
    underflow of ``F`` itself.
    """
    pts = np.asarray(points, dtype=float)
    M = pts.shape[0]
    tabs = [_log_tables(c.order, pts[:, j]) for j in range(c.d)]
    la = c.log_abs.ravel()
    keep = np.flatnonzero(np.isfinite(la))
    out_l = np.full(M, -np.inf)
    out_p = np.zeros(M)
    if keep.size == 0:
        return out_l, out_p
    idx = np.unravel_index(keep, c.log_abs.shape)
    base_l = la[keep][:, None]
    base_p = c.phase.ravel()[keep][:, None]
    step = max(1, chunk // keep.size)
    for s in range(0, M, step):
        sl = slice(s, min(M, s + step))
        T = base_l + sum(tabs[j][0][idx[j], sl] for j in range(c.d))
        Ph = base_p + sum(tabs[j][1][idx[j], sl] for j in range(c.d))
        top = np.max(T, axis=0)
        safe = np.where(np.isfinite(top), top, 0.0)
        with np.errstate(under="ignore", invalid="ignore"):
            acc = np.sum(np.exp(T - safe) * np.exp(1j * Ph), axis=0)
        with np.errstate(divide="ignore"):
            out_l[sl] = np.where(np.isfinite(top), safe + np.log(np.abs(acc)), -np.inf)
        out_p[sl] = np.angle(acc)
    return out_l, out_p


# --------------------------------------------------------------------------
# partial Fourier transform
# --------------------------------------------------------------------------

def partial_fourier(c: MultiCoeffs, mask: VarpiMask | str) -> MultiCoeffs:
    """Entry ``alpha`` times ``prod_j (-i)^{mask_j alpha_j}``; magnitudes untouched."""
    mask = VarpiMask.parse(mask) if isinstance(mask, str) else mask
    if mask.d != c.d:
        raise ValueError(f"mask of length {mask.d} for a {c.d}-dimensional box")
    if c.d == 1:
        if not mask.bits[0]:
            return c
        fc = fourier_coeffs(c.to_1d())
        return MultiCoeffs(fc.log_abs, fc.phase, c.provenance)
    idx = np.indices(c.log_abs.shape)
    total = sum(b * idx[j] for j, b in enumerate(mask.bits))
    quarter = (-total) % 4
    return MultiCoeffs(c.log_abs, c.phase + quarter * (math.pi / 2), c.provenance)


def analyze_partial_fourier(f: Callable, mask: VarpiMask | str, N: int, q: int | None = None,
                            q_in: int = 160, check: bool = True, tol: float = 1e-8) -> MultiCoeffs:
    """Coefficients of the partially transformed ``f`` by direct tensor quadrature.

    On each masked axis ``(2 pi)^{-1/2} int g(t) e^{-i t xi} dt`` is applied
    as a matrix from ``q_in`` Gauss-Hermite nodes scaled by ``sqrt 2`` (the
    factor ``e^{-t^2/2}`` absorbed in the weights) to the analysis nodes; no
    coefficient identity is used.
    """
    mask = VarpiMask.parse(mask) if isinstance(mask, str) else mask
    d = mask.d
    u, w = roots_hermite(q_in)
    t = math.sqrt(2.0) * u
    wt = math.sqrt(2.0) * w * np.exp(u * u) * INV_SQRT_2PI

    def project(qq):
        x, W = gauss_hermite(qq)
        axes = [t if b else x for b in mask.bits]
        vals = np.asarray(f(*np.meshgrid(*axes, indexing="ij")), dtype=complex)
        K = wt[None, :] * np.exp(-1j * x[:, None] * t[None, :])
        tab = hermite_table(N, x) * W[None, :]
        for b in mask.bits:
            if b:
                vals = np.tensordot(vals, K, axes=([0], [1]))
            else:
                vals = np.moveaxis(vals, 0, -1)
        for _ in range(d):
            vals = np.tensordot(vals, tab, axes=([0], [1]))
        return vals

    q = q or max(2 * N + 2, 96 if d <= 2 else 48)
    c = project(q)
    if check:
        c2 = project(2 * q)
        scale = np.abs(c2).max()
        err = np.abs(c2 - c).max()
        if scale > 0 and err > tol * scale:
            raise QuadratureUnderresolved(f"doubling nodes {q}->{2 * q} moved coefficients by {err / scale:.2e}")
        c = c2
    return MultiCoeffs.from_complex(c, provenance="analyzed")


# --------------------------------------------------------------------------
# decay classification
# --------------------------------------------------------------------------

def shell_profile(c: MultiCoeffs, noise_floor: float | None = None):
    """``g_m = max_{|alpha| = m} (log|c_alpha| - log sqrt(alpha!))`` for ``m = 0..dN``.

    Returns the profile, the effective window end and the floor-limited flag.
    """
    la = np.array(c.log_abs)
    if noise_floor is None:
        noise_floor = NOISE_FLOOR if c.provenance == "analyzed" else 0.0
    top = la.max()
    if not np.isfinite(top):
        raise ValueError("coefficient box is identically zero")
    if noise_floor > 0:
        la = np.where(la < top + math.log(noise_floor), -np.inf, la)
    vals = la - c.log_sqrt_factorial()
    deg = c.degrees().ravel()
    g = np.full(c.d * c.order + 1, -np.inf)
    np.maximum.at(g, deg, vals.ravel())
    n_end = g.size - 1
    limited = False
    if noise_floor > 0:
        fin = np.flatnonzero(np.isfinite(g))
        last = int(fin[-1])
        best = np.full(g.size, -np.inf)
        np.maximum.at(best, deg, la.ravel())
        if last < n_end and best[last] < top + math.log(noise_floor) + math.log(1e4):
            n_end = last
            limited = True
    return g, n_end, limited


def classify_decay_d(c: MultiCoeffs, omega=None, phistar=None, r_grid=DEFAULT_R_GRID,
                     noise_floor: float | None = None, refine: bool = False) -> DecayReport:
    """Test ``|c_alpha| <~ sqrt(alpha!) exp(-(1/r) phi*(r |alpha|))`` over the box.

    The sup over the box equals the sup over shells ``|alpha| = m`` of the
    shell profile, so the one-dimensional verdict logic applies to it.  Shells
    with ``m > N`` are only partly inside the box; the window is ``[0, dN]``.
    """
    if omega is None and phistar is None:
        raise ValueError("give omega or phistar")
    if c.d == 1:
        return classify_decay(c.to_1d(), omega, phistar, r_grid, noise_floor, refine)
    g, n_end, limited = shell_profile(c, noise_floor)
    notes = {"dimension": c.d, "box_order": c.order, "degree_window": [0, int(n_end)]}
    if limited:
        notes["floor_limited"] = True
    return classify_profile(g, _phistar_fn(omega, phistar), r_grid, n_end, refine, notes)


# --------------------------------------------------------------------------
# per-mask decay scans
# --------------------------------------------------------------------------

def default_directions(d: int, n_angles: int = 16) -> np.ndarray:
    """Unit vectors: equally spaced angles for ``d = 2``, axes and diagonals for ``d = 3``."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        th = 2 * np.pi * np.arange(n_angles) / n_angles
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    v = np.array([p for p in itertools.product((-1, 0, 1), repeat=3) if any(p)], dtype=float)
    return v / np.linalg.norm(v, axis=1)[:, None]


def trusted_expansion_d(c: MultiCoeffs, noise_floor: float | None = None):
    """Box analogue of :func:`tfdecay.hermite.trusted_expansion`."""
    if c.provenance != "analyzed":
        return c, math.inf
    noise_floor = NOISE_FLOOR if noise_floor is None else noise_floor
    la = np.array(c.log_abs)
    la = np.where(la < la.max() + math.log(noise_floor), -np.inf, la)
    _, _, limited = shell_profile(c, noise_floor)
    top_axis = max(int(np.max(np.nonzero(np.isfinite(la))[k])) for k in range(c.d))
    reach = math.inf if not limited and top_axis < c.order else math.sqrt(2 * c.order + 1)
    return MultiCoeffs(la, c.phase, c.provenance), reach


def _scan_coeffs(c: MultiCoeffs, reach, penalty, radii, dirs, quantity, params, strict, floor):
    pts = (radii[:, None, None] * dirs[None, :, :]).reshape(-1, c.d)
    la, _ = log_synthesis(c, pts)
    la = la.reshape(radii.size, dirs.shape[0])
    edge = np.where(c.degrees_max() >= c.order - 1, c.log_abs, -np.inf)
    le, _ = log_synthesis(MultiCoeffs(edge, c.phase, c.provenance), pts)
    cut = truncation_cut(np.max(la, axis=1), np.max(le.reshape(la.shape), axis=1))
    if math.isfinite(reach):
        # truncated expansions carry no information past the turning point of h_N
        # or below the noise floor of the samples
        actual = la - 0.5 * radii[:, None] ** 2
        peak = np.max(actual)
        la = np.where(actual < peak + math.log(floor), np.nan, la)
        la[radii > reach] = np.nan
    if cut is not None:
        la[cut:] = np.nan
    with np.errstate(invalid="ignore"):
        per_r = np.nanmax(np.where(np.isnan(la), -np.inf, la), axis=1)
    per_r = np.where(np.all(np.isnan(la), axis=1), np.nan, per_r)
    return _sup_scan(radii, per_r - penalty(radii), quantity, params, strict)


def thm5_scan(f, lam: float, omega=None, masks=None, mode: str | None = None, N: int = 40, d: int | None = None,
              radii=None, directions=None, floor: float = 1e-14, strict: bool = False) -> dict:
    """Per-mask sup of ``|F_mask f(xi)| e^{|xi|^2/2 - lam omega(|xi|)}`` (or ``e^{(1/2 - lam)|xi|^2}``).

    Parameters
    ----------
    f : MultiCoeffs or callable
        Callables are analysed on the box of order ``N`` first; analysed
        expansions are only scanned inside the turning point ``sqrt(2N + 1)``
        and above ``floor`` times the peak.
    lam : float
    omega : WeightFunction, optional
        Selects the weighted mode; otherwise the Gaussian-gap mode.
    masks : iterable of VarpiMask or bitstrings, optional
        Defaults to all ``2^d`` masks.

    Returns
    -------
    dict
        ``{mask string: ScanReport}``; see :func:`thm5_bounded`.
    """
    mode = mode or ("weighted" if omega is not None else "gaussian_gap")
    if mode == "weighted" and omega is None:
        raise ValueError("weighted mode needs omega")
    if not isinstance(f, MultiCoeffs):
        f = analyze_d(f, N, d)
    masks = all_masks(f.d) if masks is None else [VarpiMask.parse(m) if isinstance(m, str) else m for m in masks]

    if f.d == 1:
        fr, fh = tf_decay_scan(f.to_1d(), lam, omega=omega, mode=mode, x=radii, strict=strict)
        return {str(m): (fh if m.bits[0] else fr) for m in masks}

    def penalty(r):
        return lam * r * r if mode == "gaussian_gap" else lam * omega(r)

    f, reach = trusted_expansion_d(f)
    radii = radial_grid(1e12, 401, 40.0, 400) if radii is None else np.asarray(radii, dtype=float)
    dirs = default_directions(f.d) if directions is None else np.asarray(directions, dtype=float)
    quantity = ("|F f(xi)| exp((1/2 - lambda)|xi|^2)" if mode == "gaussian_gap"
                else "|F f(xi)| exp(|xi|^2/2 - lambda omega(|xi|))")
    out = {}
    for m in masks:
        out[str(m)] = _scan_coeffs(partial_fourier(f, m), reach, penalty, radii, dirs, f"mask {m}: {quantity}",
                                   {"lambda": lam, "mode": mode, "mask": str(m)}, strict, floor)
    return out


def thm5_bounded(reports: dict) -> bool:
    """All masks bounded."""
    return all(r.bounded for r in reports.values())


def thm5_sweep(f, omega=None, lam_grid=(0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0), **kw) -> dict:
    """``{lam: all masks bounded}``."""
    if not isinstance(f, MultiCoeffs):
        f = analyze_d(f, kw.pop("N", 40), kw.pop("d", None))
    return {float(lam): thm5_bounded(thm5_scan(f, lam, omega, **kw)) for lam in lam_grid}


# --------------------------------------------------------------------------
# short-time Fourier transform lift
# --------------------------------------------------------------------------

def rotate(mask: VarpiMask, x, xi):
    """``((1 - m) x - m xi, m x + (1 - m) xi)`` componentwise.

    With ``V f(x, xi) = (2 pi)^{-d/2} int f(t) phi(t - x) e^{-i<t, xi>} dt``
    this is the map for which
    ``V[F_m f](x, xi) = e^{-i<m, x xi>} V f(rotate(m, x, xi))``; on a
    transformed axis ``(x, xi) -> (-xi, x)``.
    """
    m = np.asarray(mask.bits, dtype=float)
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    return (1 - m) * x - m * xi, m * x + (1 - m) * xi


def stft_d(c: MultiCoeffs, x, xi, q: int = 96) -> complex:
    """Gaussian-window STFT of ``sum c_alpha h_alpha`` at ``(x, xi)`` by per-axis quadrature."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)
    tabs = []
    for j in range(c.d):
        tabs.append(np.array([stft(lambda t, n=n: hermite_eval(n, t), x[j], xi[j], q)
                              for n in range(c.order + 1)], dtype=complex).ravel())
    acc = c.to_complex()
    for j in range(c.d):
        acc = np.tensordot(acc, tabs[j], axes=([0], [0]))
    return complex(acc)


def stft_rotation_residual(c: MultiCoeffs, mask: VarpiMask | str, n_points: int = 12, box: float = 3.0,
                           seed: int = 0, q: int = 96) -> float:
    """Max of ``|V[F_mask f](x, xi) - e^{-i<m, x xi>} V f(rotate(m, x, xi))|`` over seeded points."""
    mask = VarpiMask.parse(mask) if isinstance(mask, str) else mask
    rng = np.random.default_rng(seed)
    fc = partial_fourier(c, mask)
    worst = 0.0
    for _ in range(n_points):
        x = rng.uniform(-box, box, c.d)
        xi = rng.uniform(-box, box, c.d)
        u, v = rotate(mask, x, xi)
        lhs = stft_d(fc, x, xi, q)
        rhs = np.exp(-1j * np.dot(mask.bits, x * xi)) * stft_d(c, u, v, q)
        worst = max(worst, abs(lhs - rhs))
    return worst


# --------------------------------------------------------------------------
# CSV
# --------------------------------------------------------------------------

def write_multi_csv(c: MultiCoeffs, path) -> None:
    from .hermite import _fmt

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"a{j + 1}" for j in range(c.d)] + ["log10_abs", "phase"])
        for alpha in np.ndindex(c.log_abs.shape):
            la = c.log_abs[alpha]
            w.writerow(list(alpha) + [_fmt(la / math.log(10.0)) if np.isfinite(la) else "-inf",
                                      _fmt(c.phase[alpha])])


def read_multi_csv(path, provenance: str = "synthetic") -> MultiCoeffs:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    head, body = rows[0], [r for r in rows[1:] if r]
    d = len(head) - 2
    if d < 1 or head[-2:] != ["log10_abs", "phase"] or head[:d] != [f"a{j + 1}" for j in range(d)]:
        raise ValueError(f"unexpected header {head}")
    idx = np.array([[int(v) for v in r[:d]] for r in body])
    N = int(idx.max())
    la = np.full((N + 1,) * d, -np.inf)
    ph = np.zeros_like(la)
    for r, a in zip(body, idx):
        la[tuple(a)] = float(r[d]) * math.log(10.0)
        ph[tuple(a)] = float(r[d + 1])
    return MultiCoeffs(la, ph, provenance)


__all__ = [
    "MultiCoeffs", "VarpiMask", "all_masks", "analyze_d", "classify_decay_d", "default_directions",
    "hermite_eval_d", "log_synthesis", "partial_fourier", "analyze_partial_fourier", "read_multi_csv",
    "rotate", "shell_profile", "stft_d", "stft_rotation_residual", "synthesize_d", "thm5_bounded", "thm5_scan",
    "thm5_sweep", "write_multi_csv",
]
