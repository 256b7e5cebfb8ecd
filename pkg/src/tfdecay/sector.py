"""Harmonic extensions on the right half-plane and sector bound verifiers.

For an even weight ``kappa(|t|)`` the Poisson extension to ``x > 0`` is

    P(x, y) = (x / pi) int kappa(|t|) / (x^2 + (y - t)^2) dt,

with the harmonic conjugate fixed by ``V(1, 0) = 0``.  ``exp(P + iV)`` is
analytic; composed with ``z -> z^sigma e^{-i sigma theta}`` it gives a
function on the sector ``|arg z - theta| < pi / (2 sigma)`` whose modulus is
governed by the weight.  All verifiers here sample, fit constants in the
least-max sense and report witnesses; none of them prove anything.
"""
from __future__ import annotations

import math
import warnings
import weakref
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .errors import BoundaryViolated, OutsideSector, TailDivergent, TailBoundExceeded, Unstable
from .weights import HOLDS, WeightFunction, _trend_verdict, check_condition

EPS_LADDER = (1.0, 0.1, 0.01)
_QUAD = {"epsabs": 0.0, "epsrel": 1e-10, "limit": 400}

_beta1_cache: "weakref.WeakKeyDictionary[WeightFunction, str]" = weakref.WeakKeyDictionary()


def _require_beta1(kappa: WeightFunction) -> None:
    verdict = _beta1_cache.get(kappa)
    if verdict is None:
        verdict = check_condition(kappa, "beta", 1.0).verdict
        _beta1_cache[kappa] = verdict
    if verdict != HOLDS:
        raise TailDivergent(f"{kappa.name}: int kappa(t) t^-2 dt does not converge (beta_1 {verdict})")


def _quad(f, a, b, epsabs=0.0):
    opts = dict(_QUAD, epsabs=epsabs)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(f, a, b, **opts)
        except integrate.IntegrationWarning as exc:
            if "roundoff" not in str(exc).lower():
                raise TailDivergent(f"quadrature did not converge: {exc}") from exc
            # accuracy floor reached on a convergent integrand; keep the value
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, _ = integrate.quad(f, a, b, **opts)
    if not math.isfinite(val):
        raise TailDivergent("quadrature returned a non-finite value")
    return val


def _scalar(kappa):
    return lambda t: float(kappa(abs(t)))


def _line_integral(g, x, y) -> float:
    """``int_R g`` split at the kink ``t = 0`` and around the Lorentzian ``y +- x``."""
    pad = 20.0 * (x + 1.0)
    lo, hi = min(0.0, y) - pad, max(0.0, y) + pad
    # geometric breakpoints resolve the Lorentzian of width x at t = y
    steps = x * 10.0 ** np.arange(0, max(1, math.ceil(math.log10(pad / x))) + 1)
    pts = sorted({lo, hi, 0.0, y, *(y - steps), *(y + steps)})
    pts = [p for p in pts if lo <= p <= hi]
    # absolute tolerance from the Lorentzian mass scale near t = y
    tol = 1e-13 * x * max(abs(g(p)) for p in (y - x, y, y + x))
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        if b > a:
            total += _quad(g, a, b, tol)
    return total + _tail(g, lo, -1.0, tol) + _tail(g, hi, 1.0, tol)


def _tail(g, start, sign, tol):
    """``int`` of ``g`` from ``start`` to ``sign * inf`` via ``t = start / u``."""
    a = abs(start)
    return _quad(lambda u: g(sign * a / u) * a / (u * u) if u > 0 else 0.0, 0.0, 1.0, tol)


def poisson_extend(kappa: WeightFunction, x: float, y: float, force: bool = False) -> float:
    """Poisson integral ``(x/pi) int kappa(|t|) / (x^2 + (y - t)^2) dt`` for ``x > 0``.

    Raises
    ------
    TailDivergent
        If ``kappa`` fails ``(beta_1)`` (checked once per weight), or, with
        ``force``, if the quadrature itself does not converge.
    """
    if not x > 0:
        raise ValueError("need x > 0")
    if not force:
        _require_beta1(kappa)
    k = _scalar(kappa)
    x2 = x * x
    return x / math.pi * _line_integral(lambda t: k(t) / (x2 + (y - t) ** 2), x, y)


def poisson_radial(kappa: WeightFunction, x: float, force: bool = False) -> float:
    """``(2/pi) int_0^inf kappa(x t) / (1 + t^2) dt``: the extension on the real axis."""
    if not x > 0:
        raise ValueError("need x > 0")
    if not force:
        _require_beta1(kappa)
    k = _scalar(kappa)
    return 2.0 / math.pi * (_quad(lambda t: k(x * t) / (1 + t * t), 0.0, 1.0)
                            + _quad(lambda t: k(x * t) / (1 + t * t), 1.0, math.inf))


def conjugate_extend(kappa: WeightFunction, x: float, y: float, force: bool = False) -> float:
    """Harmonic conjugate of the Poisson extension, gauged by ``V(1, 0) = 0``.

    ``V = (1/pi) int kappa(|t|) [(t - y)/(x^2 + (y - t)^2) - t/(1 + t^2)] dt``,
    whose bracket equals ``(-y - t(x^2 + y^2 - 1) + y t^2) / ((x^2 + (y - t)^2)(1 + t^2))``
    and decays like ``t^-2``.
    """
    if not x > 0:
        raise ValueError("need x > 0")
    if not force:
        _require_beta1(kappa)
    k = _scalar(kappa)
    q = x * x + y * y - 1.0

    def g(t):
        return k(t) * (-y - t * q + y * t * t) / ((x * x + (y - t) ** 2) * (1.0 + t * t))

    return _line_integral(g, x, y) / math.pi


@dataclass(frozen=True, eq=False)
class HarmonicExtension:
    """``P`` and its conjugate ``V`` for one weight."""

    kappa: WeightFunction
    force: bool = False

    def P(self, x, y):
        if x <= 0:
            return float(self.kappa(abs(y)))
        return poisson_extend(self.kappa, x, y, self.force)

    def V(self, x, y):
        return conjugate_extend(self.kappa, x, y, self.force)

    def cr_residual(self, x, y, h: float | None = None) -> float:
        """``|P_x - V_y| + |P_y + V_x|`` by central differences, over ``1 + |grad P|``."""
        h = h or 1e-3 * max(1.0, math.hypot(x, y))
        px = (self.P(x + h, y) - self.P(x - h, y)) / (2 * h)
        py = (self.P(x, y + h) - self.P(x, y - h)) / (2 * h)
        vx = (self.V(x + h, y) - self.V(x - h, y)) / (2 * h)
        vy = (self.V(x, y + h) - self.V(x, y - h)) / (2 * h)
        return (abs(px - vy) + abs(py + vx)) / (1.0 + math.hypot(px, py))

    def laplacian_residual(self, x, y, h: float | None = None) -> float:
        """Five-point Laplacian times ``r^2`` over ``1 + |P|`` (scale-free), ``r = |(x, y)|``."""
        r = max(1.0, math.hypot(x, y))
        h = h or 1e-2 * min(r, x)
        p0 = self.P(x, y)
        lap = (self.P(x + h, y) + self.P(x - h, y) + self.P(x, y + h) + self.P(x, y - h) - 4 * p0) / (h * h)
        return abs(lap) * r * r / (1.0 + abs(p0))


def harmonic_extension(kappa: WeightFunction, force: bool = False) -> HarmonicExtension:
    if not force:
        _require_beta1(kappa)
    return HarmonicExtension(kappa, force)


def cr_residual(kappa, x, y, h=None):
    return HarmonicExtension(kappa).cr_residual(x, y, h)


def laplacian_residual(kappa, x, y, h=None):
    return HarmonicExtension(kappa).laplacian_residual(x, y, h)


# --------------------------------------------------------------------------
# sectors
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SectorSpec:
    """The sector ``|arg z - theta| < rho / 2`` with sampling geometry."""

    theta: float
    rho: float
    sigma: float = 1.0
    radii: tuple = tuple(np.geomspace(0.05, 50.0, 25))
    n_angles: int = 15

    def __post_init__(self):
        if not 0 < self.rho <= math.pi / self.sigma + 1e-12:
            raise ValueError(f"opening {self.rho} outside (0, pi/sigma]")
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))

    def interior(self) -> np.ndarray:
        k = np.arange(self.n_angles)
        ang = self.theta - self.rho / 2 + self.rho * (k + 0.5) / self.n_angles
        return np.asarray(self.radii)[:, None] * np.exp(1j * ang)[None, :]

    def boundary(self) -> np.ndarray:
        ang = np.array([self.theta - self.rho / 2, self.theta + self.rho / 2])
        return np.asarray(self.radii)[:, None] * np.exp(1j * ang)[None, :]

    def refined(self) -> "SectorSpec":
        r = np.asarray(self.radii)
        mids = np.sqrt(r[1:] * r[:-1])
        return SectorSpec(self.theta, self.rho, self.sigma, tuple(np.sort(np.concatenate([r, mids]))),
                          2 * self.n_angles + 1)

    def contains(self, z, tol: float = 1e-12) -> bool:
        if z == 0:
            return True
        d = np.angle(z * np.exp(-1j * self.theta))
        return abs(d) <= self.rho / 2 + tol


def _log_abs(F, z):
    if hasattr(F, "log_abs"):
        return np.asarray(F.log_abs(z), dtype=float)
    vals = np.abs(np.asarray(F(z), dtype=complex))
    with np.errstate(divide="ignore"):
        return np.log(vals)


@dataclass(frozen=True, eq=False)
class FOmega:
    """``exp(P + iV)`` of the substituted weight, pulled back to the sector."""

    omega: WeightFunction
    sigma: float
    theta: float
    ext: HarmonicExtension

    def to_w(self, z):
        z = complex(z)
        if z == 0:
            return 0j
        d = np.angle(z * np.exp(-1j * self.theta))
        half = math.pi / (2 * self.sigma)
        if abs(d) > half + 1e-12:
            raise OutsideSector(f"arg z = {np.angle(z):.6g} outside the sector around {self.theta:.6g}")
        d = max(-half, min(half, d))
        r = abs(z) ** self.sigma
        if half - abs(d) <= 1e-12:
            # on a boundary ray: land exactly on the imaginary axis
            return complex(0.0, math.copysign(r, d))
        return r * complex(math.cos(self.sigma * d), math.sin(self.sigma * d))

    def log_abs(self, z):
        zs = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(zs.shape)
        for i, zi in np.ndenumerate(zs):
            w = self.to_w(zi)
            out[i] = self.ext.P(w.real, w.imag) if w.real > 0 else float(self.ext.kappa(abs(w.imag)))
        return out if np.ndim(z) else float(out.ravel()[0])

    def arg(self, z):
        """Phase ``V``; ``nan`` on the boundary rays, where only the modulus is continued."""
        zs = np.atleast_1d(np.asarray(z, dtype=complex))
        out = np.empty(zs.shape)
        for i, zi in np.ndenumerate(zs):
            w = self.to_w(zi)
            out[i] = self.ext.V(w.real, w.imag) if w.real > 0 else math.nan
        return out if np.ndim(z) else float(out.ravel()[0])

    def __call__(self, z):
        return self.log_abs(z), self.arg(z)


def f_omega(omega: WeightFunction, sigma: float, theta: float = 0.0, force: bool = False) -> FOmega:
    """Analytic ``F`` on the sector ``|arg z - theta| < pi/(2 sigma)`` built from ``omega``.

    ``log|F(z)| = P(Re w, Im w)`` and ``arg F(z) = V(Re w, Im w)`` with
    ``w = z^sigma e^{-i sigma theta}`` and the weight ``t -> omega(t^{1/sigma})``.

    Raises
    ------
    TailDivergent
        If ``omega`` fails ``(beta_sigma)``.
    """
    kt = omega.substituted(sigma)
    if not force:
        rep = check_condition(omega, "beta", sigma)
        if rep.verdict != HOLDS:
            raise TailDivergent(f"{omega.name} fails (beta_{sigma:g}) ({rep.verdict}); F_omega does not exist")
        _beta1_cache[kt] = HOLDS
    return FOmega(omega, sigma, theta, HarmonicExtension(kt, force))


def harmonicity_residual_z(F: FOmega, z, rel_step: float = 1e-2) -> float:
    """Scale-free five-point Laplacian of ``log|F|`` in the ``z``-plane."""
    z = complex(z)
    r = abs(z)
    h = rel_step * r
    vals = [F.log_abs(z + d) for d in (h, -h, 1j * h, -1j * h)]
    p0 = F.log_abs(z)
    lap = (sum(vals) - 4 * p0) / (h * h)
    return abs(lap) * r * r / (1.0 + abs(p0))


# --------------------------------------------------------------------------
# the F_omega constants
# --------------------------------------------------------------------------

def tail_weighted_integral(omega: WeightFunction, sigma: float, t: float) -> float:
    """``int_0^inf omega(t s) / (s^{1-sigma} + s^{sigma+1}) ds`` (``inf`` if divergent)."""
    k = _scalar(omega)

    def g_low(s):
        return k(t * s) * s ** (sigma - 1) / (1 + s ** (2 * sigma))

    def g_high(u):
        # s = 1/u on (1, inf)
        return k(t / u) * u ** (sigma - 1) / (1 + u ** (2 * sigma)) if u > 0 else 0.0

    try:
        return _quad(g_low, 0.0, 1.0) + _quad(g_high, 0.0, 1.0)
    except TailDivergent:
        return math.inf


@dataclass
class Lemma33Report:
    """Fitted constants and per-item verdicts for the ``F_omega`` construction."""

    weight: str
    sigma: float
    theta: float
    preconditions: dict
    constants: dict
    items: dict
    harmonicity: float
    drift: float | None
    refined_constants: dict | None
    grids: dict
    ratio_ladder: dict = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(v.get("pass") for v in self.items.values())

    def to_json(self) -> dict:
        def enc(v):
            if isinstance(v, float) and not math.isfinite(v):
                return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
            if isinstance(v, dict):
                return {k: enc(u) for k, u in v.items()}
            if isinstance(v, (list, tuple)):
                return [enc(u) for u in v]
            return v

        return enc({
            "weight": self.weight, "sigma": self.sigma, "theta": self.theta,
            "preconditions": self.preconditions, "constants": self.constants,
            "lemma_items": self.items, "harmonicity": self.harmonicity, "drift": self.drift,
            "refined_constants": self.refined_constants, "grids": self.grids,
            "ratio_ladder": self.ratio_ladder,
        })


def _fit_constants(F: FOmega, omega, radii, n_angles, eps_ladder, lam):
    sigma, theta = F.sigma, F.theta
    half = math.pi / (2 * sigma)
    radii = np.asarray(radii, dtype=float)
    k = np.arange(n_angles)
    ang = theta - half + 2 * half * (k + 0.5) / n_angles
    Z = radii[:, None] * np.exp(1j * ang)[None, :]
    P = np.vectorize(F.log_abs)(Z)
    om = omega(np.abs(Z))
    # near-boundary rays (one millionth of the opening inside)
    bang = np.array([theta - half * (1 - 1e-6), theta + half * (1 - 1e-6)])
    Zb = radii[:, None] * np.exp(1j * bang)[None, :]
    Pb = np.vectorize(F.log_abs)(Zb)
    omb = omega(np.abs(Zb))

    upper = radii >= np.sqrt(radii[0] * radii[-1])
    ratio = P / np.where(om > 0, om, np.nan)
    nu1 = float(np.nanmin(ratio[upper]))
    log_c = float(np.min(P - nu1 * om))
    nu2 = float(np.nanmax(ratio[upper]))
    log_C = float(np.max(P - nu2 * om))
    mu = float(np.nanmax((Pb / np.where(omb > 0, omb, np.nan))[upper]))
    log_K = float(np.max(Pb - mu * omb))
    ceps = {}
    for eps in eps_ladder:
        v = P - eps * np.abs(Z) ** sigma
        j = np.unravel_index(np.argmax(v), v.shape)
        ceps[str(eps)] = {"log_C": float(v[j]), "witness_radius": float(radii[j[0]]),
                          "interior": bool(j[0] < int(0.8 * (radii.size - 1)))}
    consts = {"c": math.exp(log_c), "nu1": nu1, "mu": mu, "log_K": log_K, "nu2": nu2, "C": math.exp(log_C),
              "A": nu2 / nu1, "B": math.exp((log_C - log_c) * lam / nu1), "C_eps": ceps}
    per_r_ratio = np.nanmax(ratio, axis=1)
    return consts, per_r_ratio, (P, Pb)


def lemma33_verify(omega: WeightFunction, sigma: float, theta: float = 0.0, radii=None, n_angles: int = 9,
                   ladder=None, refine: bool = True, lam: float = 1.0, eps_ladder=EPS_LADDER) -> Lemma33Report:
    """Fit ``c, nu1, mu, nu2, C, C_eps`` for ``F_omega`` and check the four items.

    Items
    -----
    i
        ``c e^{nu1 omega} <= |F| <= C_eps e^{eps |z|^sigma}`` on the samples
        with ``nu1 > 0`` and every ``C_eps`` witness off the outer radii.
    ii
        ``log|F| <= log K + mu omega`` on the near-boundary rays.
    iii
        ``int_0^inf omega(ts)/(s^{1-sigma} + s^{sigma+1}) ds / log|F(t e^{i theta})|``
        bounded along the ``t`` ladder.
    iv
        ``|F| <= C e^{nu2 omega}`` with the ratio ``log|F| / omega`` bounded
        along the radii; only applicable under ``(beta*_sigma)``.

    When ``(beta_sigma)`` fails no ``F_omega`` exists: the report then
    carries the failed precondition, ``inf`` item-iii ladder entries and no
    constants.
    """
    radii = np.geomspace(1.0, 1e4, 13) if radii is None else np.asarray(radii, dtype=float)
    ladder = np.geomspace(10.0, 1e4, 7) if ladder is None else np.asarray(ladder, dtype=float)
    pre = {c: check_condition(omega, c, sigma if c.startswith("beta") else None).verdict
           for c in ("alpha", "beta", "beta_star")}
    grids = {"radii": [float(r) for r in radii], "n_angles": n_angles, "t_ladder": [float(t) for t in ladder],
             "eps_ladder": list(eps_ladder)}
    if pre["beta"] != HOLDS:
        iii = [tail_weighted_integral(omega, sigma, float(t)) for t in ladder]
        items = {k: {"pass": False, "reason": f"beta_{sigma:g} {pre['beta']}"} for k in ("i", "ii", "iii", "iv")}
        items["iii"]["integrals"] = iii
        return Lemma33Report(omega.name, sigma, theta, pre, {}, items, math.nan, None, None, grids,
                             {"t": grids["t_ladder"], "ratio": [math.inf] * len(iii)})

    F = f_omega(omega, sigma, theta)
    consts, per_r_ratio, _ = _fit_constants(F, omega, radii, n_angles, eps_ladder, lam)
    items = {}
    items["i"] = {"pass": bool(consts["nu1"] > 0 and all(v["interior"] for v in consts["C_eps"].values())),
                  "c": consts["c"], "nu1": consts["nu1"], "C_eps": consts["C_eps"]}
    items["ii"] = {"pass": bool(math.isfinite(consts["mu"]) and consts["mu"] > 0),
                   "mu": consts["mu"], "log_K": consts["log_K"]}
    lhs = np.array([tail_weighted_integral(omega, sigma, float(t)) for t in ladder])
    rhs = np.array([F.log_abs(complex(t * np.exp(1j * theta))) for t in ladder])
    ratio = lhs / rhs
    v3 = _trend_verdict(ratio, grow_factor=2.0) if np.all(np.isfinite(ratio)) else "fails"
    items["iii"] = {"pass": v3 == HOLDS, "verdict": v3, "witness": float(np.max(ratio))}
    v4 = _trend_verdict(per_r_ratio, grow_factor=1.5)
    if pre["beta_star"] == HOLDS:
        items["iv"] = {"pass": v4 == HOLDS, "verdict": v4, "nu2": consts["nu2"], "C": consts["C"]}
    else:
        items["iv"] = {"pass": False, "verdict": "not_applicable", "reason": f"beta*_{sigma:g} {pre['beta_star']}",
                       "ratio_trend": v4}
    zs = [complex(r * np.exp(1j * (theta + a))) for r in (2.0, 10.0, 50.0)
          for a in (0.0, 0.5 * math.pi / (2 * sigma))]
    harm = max(harmonicity_residual_z(F, z) for z in zs)
    drift = refined = None
    if refine:
        r2 = np.sort(np.concatenate([radii, np.sqrt(radii[1:] * radii[:-1])]))
        refined, _, _ = _fit_constants(F, omega, r2, 2 * n_angles + 1, eps_ladder, lam)
        keys = ("c", "nu1", "mu", "nu2", "C")
        drift = max(abs(refined[k] - consts[k]) / abs(consts[k]) for k in keys if consts[k] != 0)
    return Lemma33Report(omega.name, sigma, theta, pre, consts, items, harm, drift, refined, grids,
                         {"t": grids["t_ladder"], "ratio": [float(x) for x in ratio]})


# --------------------------------------------------------------------------
# Phragmen-Lindelof verifiers
# --------------------------------------------------------------------------

@dataclass
class PLResult:
    passed: bool
    witness: complex
    value: float
    B: float | None = None
    B_refined: float | None = None
    M: float | None = None
    notes: dict = field(default_factory=dict)


def pl_classic_verify(F: Callable, sector: SectorSpec, M: float, tol: float = 1e-9) -> PLResult:
    """Check ``|F| <= M`` on boundary samples, then report the interior max.

    Raises
    ------
    BoundaryViolated
        If a boundary sample (apex included) already exceeds ``M (1 + tol)``.
    """
    zb = np.concatenate([sector.boundary().ravel(), [0j]])
    lb = _log_abs(F, zb)
    lim = math.log(M) + math.log1p(tol)
    if np.any(lb > lim):
        k = int(np.argmax(lb))
        raise BoundaryViolated(f"|F({zb[k]:.4g})| = e^{lb[k]:.6g} exceeds M = {M:g} on the boundary")
    zi = sector.interior().ravel()
    li = _log_abs(F, zi)
    k = int(np.argmax(li))
    return PLResult(bool(li[k] <= lim), complex(zi[k]), float(li[k]), M=M)


def _weighted_B(F, omega, lam, A, M, sector):
    z = np.concatenate([sector.interior().ravel(), sector.boundary().ravel(), [0j]])
    v = _log_abs(F, z) - math.log(M) - A * lam * omega(np.abs(z))
    k = int(np.argmax(v))
    return float(v[k]), complex(z[k])


def pl_weighted_verify(F: Callable, omega: WeightFunction, lam: float, sector: SectorSpec,
                       A: float | None = None, M: float | None = None, eps_ladder=EPS_LADDER,
                       drift_tol: float = 0.1) -> PLResult:
    """Fit the least ``B`` with ``|F| <= B M e^{A lam omega(|z|)}`` on the closed sector.

    ``M`` defaults to the least boundary constant ``max |F| e^{-lam omega}``;
    when given it is verified.  ``A`` defaults to ``nu2 / nu1`` from
    :func:`lemma33_verify`.  Passes when ``B`` is finite and moves by less than
    ``drift_tol`` (relative) under one grid refinement.

    Raises
    ------
    BoundaryViolated
        Boundary premise fails for the given ``M``.
    Unstable
        ``B`` grows by more than ``drift_tol`` under refinement.
    """
    zb = np.concatenate([sector.boundary().ravel(), [0j]])
    vb = _log_abs(F, zb) - lam * omega(np.abs(zb))
    if M is None:
        M = math.exp(float(np.max(vb)))
    elif np.any(vb > math.log(M) + 1e-9):
        k = int(np.argmax(vb))
        raise BoundaryViolated(f"|F({zb[k]:.4g})| e^(-lam omega) = e^{vb[k]:.6g} exceeds M = {M:g}")
    if A is None:
        A = lemma33_verify(omega, sector.sigma, sector.theta, refine=False).constants["A"]
    growth = {}
    zi = sector.interior()
    li = _log_abs(F, zi.ravel()).reshape(zi.shape)
    for eps in eps_ladder:
        v = np.max(li - eps * np.abs(zi) ** sector.sigma, axis=1)
        growth[str(eps)] = bool(np.argmax(v) < int(0.8 * (v.size - 1)) or v[-1] <= v.max())
    logB, wit = _weighted_B(F, omega, lam, A, M, sector)
    logB2, _ = _weighted_B(F, omega, lam, A, M, sector.refined())
    B, B2 = math.exp(logB), math.exp(logB2)
    drift = abs(B2 - B) / B
    if B2 > B * (1 + drift_tol):
        raise Unstable(f"B grows under refinement: {B:.6g} -> {B2:.6g}")
    return PLResult(bool(math.isfinite(B) and drift <= drift_tol), wit, logB, B, B2, M,
                    {"A": A, "growth_interior_witness": growth})


def quadrant_bound_scan(series, eps: float, lam_grid=(0.125, 0.25, 0.5, 1.0), radii=None, n_angles: int = 24):
    """Numerical run of the quadrant argument for ``F = Bf`` on ``0 <= arg z <= pi/2``.

    ``G(z) = F(z) exp(-eps (z e^{-i pi/4})^2)`` is scanned against
    ``e^{lam x^2}`` on the positive axis and against ``e^{lam y^2}`` on the
    ray ``arg z = arctan(1/(4 eps))``; then ``|F| e^{-2 eps |z|^2}`` is
    scanned below that ray and ``|F| e^{-9 eps |z|^2}`` above it.

    Raises
    ------
    TailBoundExceeded
        When the series is not resolved at the outer radius (for instance a
        truncated non-entire series).
    """
    from .transforms import ScanReport
    from .hermite import stabilized

    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    radii = np.linspace(0.0, 12.0, 49) if radii is None else np.asarray(radii, dtype=float)
    th = math.atan(1.0 / (4.0 * eps))
    rot = np.exp(-1j * math.pi / 4)

    def logG(z):
        la, _, _ = series.eval_log(z)
        return la + np.real(-eps * (z * rot) ** 2)

    rows = []
    axis = radii.astype(complex)
    ray = radii * np.exp(1j * th)
    la_axis, la_ray = logG(axis), logG(ray)
    ok = True
    for lam in lam_grid:
        a = la_axis - lam * radii ** 2
        b = la_ray - lam * (radii * math.sin(th)) ** 2
        sa, sb = stabilized(a), stabilized(b)
        ok &= sa and sb
        rows.append({"lambda": float(lam), "axis_sup_log": float(np.max(a)), "ray_sup_log": float(np.max(b)),
                     "axis_stable": sa, "ray_stable": sb})
    ang = np.linspace(0.0, math.pi / 2, n_angles + 1)
    Z = radii[:, None] * np.exp(1j * ang)[None, :]
    la, _, _ = series.eval_log(Z)
    pen = np.where(ang[None, :] <= th, 2 * eps, 9 * eps) * np.abs(Z) ** 2
    per_r = np.max(la - pen, axis=1)
    top = float(np.max(per_r))
    k = int(np.argmax(per_r))
    stab = stabilized(per_r)
    return ScanReport("|Bf(z)| exp(-c eps |z|^2) on the first quadrant", {"eps": eps, "theta": th}, top,
                      complex(radii[k]), bool(stab and ok), rows, edge_witness=not stab)


__all__ = [
    "EPS_LADDER", "FOmega", "HarmonicExtension", "Lemma33Report", "PLResult", "SectorSpec", "conjugate_extend",
    "cr_residual", "f_omega", "harmonic_extension", "harmonicity_residual_z", "laplacian_residual",
    "lemma33_verify", "pl_classic_verify", "pl_weighted_verify", "poisson_extend", "poisson_radial",
    "quadrant_bound_scan", "tail_weighted_integral", "TailBoundExceeded",
]
