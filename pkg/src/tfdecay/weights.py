"""Weight functions, numerical condition checks and Young conjugation.

A weight function is an unbounded non-decreasing map ``omega: [0, inf) ->
[0, inf)``.  Everything here works with sampled evidence: condition checks
return a :class:`ConditionReport` carrying a verdict (``holds``, ``fails`` or
``inconclusive``) plus the witness that produced it; nothing is proved.

The Young conjugate of ``phi(s) = omega(e^s)`` is

    phi*(t) = sup_{s > 0} (s t - phi(s)),

and may be ``+inf`` (log-type weights).  It is stored as a float array with
``np.inf`` entries.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import integrate

from . import _kernels
from .errors import BadIndex, Bounded, Inconclusive, NotConvex, NotNondecreasing

HOLDS = "holds"
FAILS = "fails"
INCONCLUSIVE = "inconclusive"

CONDITIONS = ("alpha", "beta", "beta_star", "gamma", "delta")


def default_ladder(top_exp: int = 20) -> np.ndarray:
    """The test ladder ``{0, 1, 2, 4, ..., 2**top_exp}``."""
    return np.concatenate([[0.0], 2.0 ** np.arange(top_exp + 1)])


# --------------------------------------------------------------------------
# weight objects
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WeightFunction:
    """A weight ``omega`` with an optional closed form for ``phi(s) = omega(e^s)``.

    ``phi_func`` exists because ``omega(np.exp(s))`` overflows for large ``s``
    even when ``phi`` itself is moderate (``log(1 + e^s)``).
    """

    name: str
    func: Callable[[np.ndarray], np.ndarray]
    smooth: bool = True
    known_conditions: frozenset = frozenset()
    phi_func: Callable[[np.ndarray], np.ndarray] | None = None
    spec: dict = field(default_factory=dict)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return self.func(t)

    def phi(self, s):
        s = np.asarray(s, dtype=float)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            if self.phi_func is not None:
                return self.phi_func(s)
            return self.func(np.exp(s))

    def substituted(self, sigma: float) -> "WeightFunction":
        """``t -> omega(t**(1/sigma))``."""
        if sigma == 1:
            return self
        inner = self.func
        phi_inner = self.phi
        return WeightFunction(
            name=f"{self.name}@sigma={sigma:g}",
            func=lambda t: inner(np.power(t, 1.0 / sigma)),
            smooth=self.smooth,
            phi_func=lambda s: phi_inner(s / sigma),
            spec={"substituted": self.spec, "sigma": sigma},
        )

    def __repr__(self):
        return f"WeightFunction({self.name!r})"


@dataclass(frozen=True)
class Flat:
    """The index ``flat_sigma`` sitting between the reals ``< 1/2`` and ``1/2``."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise BadIndex(f"flat index needs sigma > 0, got {self.sigma}")

    def __str__(self):
        return f"flat{self.sigma:g}"


def parse_index(s) -> float | Flat:
    """Read an index from a float, a fraction string, ``"flat2"``, ``"b2"`` or ``"♭2"``."""
    if isinstance(s, Flat):
        return s
    if isinstance(s, str):
        text = s.strip()
        for prefix in ("flat", "♭", "b"):
            if text.startswith(prefix):
                try:
                    return Flat(float(text[len(prefix):]))
                except ValueError as exc:
                    raise BadIndex(f"cannot parse index {s!r}") from exc
        try:
            s = float(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise BadIndex(f"cannot parse index {s!r}") from exc
    s = float(s)
    if not 0.0 <= s <= 0.5:
        raise BadIndex(f"index must lie in [0, 1/2], got {s}")
    return s


def _log1p_phi(s):
    return np.logaddexp(0.0, s)


def _log_plus(t):
    with np.errstate(divide="ignore"):
        return np.where(t > 1.0, np.log(np.where(t > 1.0, t, 1.0)), 0.0)


def _catalog(name: str, params: dict) -> WeightFunction:
    spec = {"name": name, "kind": "catalog", "params": dict(params)}
    if name in ("log1p", "omega0"):
        return WeightFunction("log1p", np.log1p, phi_func=_log1p_phi,
                              known_conditions=frozenset({"alpha", "delta", "beta_star(2)"}), spec=spec)
    if name in ("log_plus", "logplus"):
        return WeightFunction("log_plus", _log_plus, smooth=False,
                              phi_func=lambda s: np.maximum(s, 0.0),
                              known_conditions=frozenset({"alpha", "delta"}), spec=spec)
    if name == "log_power":
        p = float(params["p"])
        return WeightFunction(f"log1p^{p:g}", lambda t: np.log1p(t) ** p,
                              phi_func=lambda s: _log1p_phi(s) ** p, spec=spec)
    if name == "power":
        p = float(params["p"])
        if p <= 0:
            raise Bounded(f"power weight needs p > 0, got {p}")
        return WeightFunction(f"t^{p:g}", lambda t: np.power(t, p),
                              phi_func=lambda s: np.exp(p * s), spec=spec)
    if name == "omega_s":
        return omega_s(params["s"])
    if name == "quadratic_over_log2":
        # t^2 / log(e + t)^2: satisfies (beta_2) but not (beta*_2)
        return WeightFunction("t^2/log(e+t)^2", lambda t: t * t / np.log(math.e + t) ** 2,
                              phi_func=lambda s: np.exp(2 * s) / np.logaddexp(1.0, s) ** 2, spec=spec)
    if name == "constant":
        c = float(params.get("c", 1.0))
        return WeightFunction(f"const({c:g})", lambda t: np.full(np.shape(t), c),
                              phi_func=lambda s: np.full(np.shape(s), c), spec=spec)
    raise ValueError(f"unknown catalog weight {name!r}")


_EXPR_NAMESPACE = {k: getattr(np, k) for k in (
    "log", "log1p", "exp", "sqrt", "abs", "power", "maximum", "minimum", "where", "sinh", "cosh", "arctan")}
_EXPR_NAMESPACE.update(pi=math.pi, e=math.e)


def _expr_weight(expr: str, spec: dict) -> WeightFunction:
    code = compile(expr, "<weight-expr>", "eval")
    for name in code.co_names:
        if name not in _EXPR_NAMESPACE and name != "t":
            raise ValueError(f"name {name!r} not allowed in weight expression")

    def func(t):
        return np.broadcast_to(eval(code, {"__builtins__": {}}, dict(_EXPR_NAMESPACE, t=t)), np.shape(t)) * 1.0

    return WeightFunction(expr, func, spec=spec)


def _table_weight(params: dict, spec: dict) -> WeightFunction:
    if "points" in params:
        pts = np.asarray(params["points"], dtype=float)
        tt, ww = pts[:, 0], pts[:, 1]
    else:
        tt = np.asarray(params["t"], dtype=float)
        ww = np.asarray(params["w"], dtype=float)
    order = np.argsort(tt)
    tt, ww = tt[order], ww[order]
    if np.any(np.diff(ww) < 0):
        raise NotNondecreasing("table values decrease")
    slope = (ww[-1] - ww[-2]) / (tt[-1] - tt[-2]) if tt.size > 1 else 0.0

    def func(t):
        inside = np.interp(t, tt, ww)
        return np.where(t > tt[-1], ww[-1] + slope * (t - tt[-1]), inside)

    return WeightFunction("table", func, smooth=False, spec=spec)


def validate_weight(w: WeightFunction, ladder=None, tol: float = 1e-12) -> None:
    """Raise unless ``w`` is nonnegative, nondecreasing and growing on the ladder."""
    ladder = default_ladder() if ladder is None else np.asarray(ladder, dtype=float)
    vals = w(ladder)
    if np.any(~np.isfinite(vals)) or np.any(vals < -tol):
        raise NotNondecreasing(f"{w.name}: negative or non-finite values on the ladder")
    fine = np.linspace(0.0, 4.0, 401)
    for grid in (ladder, fine):
        v = w(grid)
        if np.any(np.diff(v) < -tol * (1.0 + np.abs(v[1:]))):
            raise NotNondecreasing(f"{w.name}: decreases on the test grid")
    top = vals[-3:]
    if not np.all(np.diff(top) > tol * (1.0 + np.abs(top[1:]))):
        raise Bounded(f"{w.name}: no growth at the top of the ladder")


def make_weight(spec, validate: bool = True) -> WeightFunction:
    """Build a weight from a spec dict ``{"name", "kind", "params"}`` or a catalog name.

    Examples
    --------
    >>> make_weight("log1p")(math.e - 1)
    array(1.)
    """
    if isinstance(spec, str):
        spec = {"name": spec, "kind": "catalog", "params": {}}
    kind = spec.get("kind", "catalog")
    params = dict(spec.get("params", {}))
    if kind == "catalog":
        w = _catalog(spec["name"], params)
    elif kind == "expr":
        w = _expr_weight(params.get("expr", spec.get("name")), spec)
    elif kind == "table":
        w = _table_weight(params, spec)
    else:
        raise ValueError(f"unknown weight kind {kind!r}")
    if validate:
        validate_weight(w)
    return w


def constant_weight(c: float = 1.0) -> WeightFunction:
    """A constant profile; bounded, so it is not a weight function proper."""
    return _catalog("constant", {"c": c})


def omega_s(s) -> WeightFunction:
    """The weight attached to a Pilipovic index ``s <= 1/2``.

    ``log(1 + t)**(1/(1 - 2s))`` for real ``s < 1/2``, ``t**(2 sigma/(sigma + 1))``
    for ``flat_sigma`` and ``t**2`` for ``s = 1/2``.
    """
    s = parse_index(s)
    spec = {"name": "omega_s", "kind": "catalog", "params": {"s": str(s) if isinstance(s, Flat) else s}}
    if isinstance(s, Flat):
        q = 2.0 * s.sigma / (s.sigma + 1.0)
        conds = {"alpha", "gamma", "delta", "beta_star(2)"}
        return WeightFunction(f"omega_{s}", lambda t: np.power(t, q), phi_func=lambda u: np.exp(q * u),
                              known_conditions=frozenset(conds), spec=spec)
    if s == 0.5:
        return WeightFunction("omega_1/2", lambda t: t * t, phi_func=lambda u: np.exp(2.0 * u),
                              known_conditions=frozenset({"alpha", "gamma", "delta"}), spec=spec)
    p = 1.0 / (1.0 - 2.0 * s)
    conds = {"alpha", "delta", "beta_star(2)"} | ({"gamma"} if s > 0 else set())
    if s == 0:
        return WeightFunction("omega_0", np.log1p, phi_func=_log1p_phi, known_conditions=frozenset(conds), spec=spec)
    return WeightFunction(f"omega_{s:g}", lambda t: np.log1p(t) ** p, phi_func=lambda u: _log1p_phi(u) ** p,
                          known_conditions=frozenset(conds), spec=spec)


# --------------------------------------------------------------------------
# condition checks
# --------------------------------------------------------------------------

@dataclass
class ConditionReport:
    condition: str
    verdict: str
    witness: float
    sigma: float | None = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_json(self) -> dict:
        out = {"condition": self.condition, "verdict": self.verdict, "witness": self.witness,
               "ladder": self.diagnostics.get("ladder")}
        if self.sigma is not None:
            out["sigma"] = self.sigma
        return out


def _quad(f, a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=1e-11, limit=200)
    return val


def tail_integral(w: WeightFunction, sigma: float, start: float = 1.0, rel_tol: float = 1e-8,
                  max_doublings: int = 200, warmup: int = 4):
    """``int_start^inf w(s) s^(-1-sigma) ds`` by doubling the upper limit.

    Each doubling ``[T, 2T]`` is one adaptive Gauss-Kronrod call.  Increments
    are modelled as ``C m^-p`` in the position ``m = log2(T) + 1``:

    * increments shrinking by less than a factor 0.7 per doubling with
      ``p >= 1.2`` and ``p`` stable to 0.05 on three successive doublings (and
      at least 40 doublings done): the remaining tail is extrapolated as
      ``inc * m / (p - 1)`` and added to the total;
    * increment ratio ``>= 0.9`` with ``p <= 1.05`` on three successive
      doublings: divergence, value ``inf``.

    Returns ``(value, converged, increments)``; ``converged`` is ``None`` when
    the budget ran out first.
    """
    total = 0.0
    incs = []
    lo = float(start)
    div_streak = conv_streak = 0
    p_last = math.nan
    m0 = math.log2(lo) + 1.0
    for k in range(max_doublings):
        hi = 2.0 * lo
        inc = _quad(lambda s: float(w(s)) * s ** (-1.0 - sigma), lo, hi)
        total += inc
        incs.append(inc)
        if total > 0 and inc < rel_tol * total:
            return total, True, incs
        if total == 0 and k >= warmup and not any(incs):
            return 0.0, True, incs
        if k >= warmup and incs[-4] > 0 and inc > 0:
            m, m_prev = m0 + k, m0 + k - 3
            p = -math.log(inc / incs[-4]) / math.log(m / m_prev)
            algebraic = inc > 0.7 * incs[-2]
            if algebraic and p >= 1.2 and abs(p - p_last) < 0.05:
                conv_streak += 1
                if conv_streak >= 3 and k >= 40:
                    return total + inc * m / (p - 1.0), True, incs
            else:
                conv_streak = 0
            p_last = p
            if inc >= 0.9 * incs[-2] and p <= 1.05:
                div_streak += 1
                if div_streak >= 3:
                    return math.inf, False, incs
            else:
                div_streak = 0
        lo = hi
    return total, None, incs


def _trend_verdict(ratios, grow_factor, flat_factor=1.05, settle_factor=1.25):
    """Verdict on a ratio ladder that must stay bounded.

    ``holds`` when the upper half adds at most ``flat_factor`` to the running
    max, or when it grows by less than ``settle_factor`` with shrinking steps.
    ``fails`` on monotone growth by ``grow_factor`` over the upper half.
    """
    r = np.asarray(ratios, dtype=float)
    half = len(r) // 2
    lower, upper = r[: half + 1], r[half:]
    if np.max(upper) <= flat_factor * np.max(lower):
        return HOLDS
    steps = np.diff(upper)
    if r[-1] <= settle_factor * r[half] and np.all(np.diff(steps) <= 1e-12 * (1 + np.abs(upper[1:-1]))):
        return HOLDS
    if np.all(np.diff(upper) >= 0) and r[-1] >= grow_factor * r[half]:
        return FAILS
    return INCONCLUSIVE


def check_condition(w: WeightFunction, condition: str, sigma: float | None = None, ladder=None,
                    strict: bool = False, max_doublings: int = 200) -> ConditionReport:
    """Numerical verdict on one of the conditions alpha, beta, beta_star, gamma, delta.

    Parameters
    ----------
    w : WeightFunction
    condition : str
        One of ``alpha``, ``beta``, ``beta_star``, ``gamma``, ``delta``.
    sigma : float, optional
        Exponent for ``beta`` / ``beta_star``.
    ladder : array_like, optional
        Sample ladder; defaults to ``{0, 1, 2, ..., 2**20}``.
    strict : bool
        Raise :class:`Inconclusive` instead of returning an inconclusive report.
    """
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}")
    if condition in ("beta", "beta_star") and not (sigma and sigma > 0):
        raise ValueError(f"{condition} needs sigma > 0")
    ladder = default_ladder() if ladder is None else np.asarray(ladder, dtype=float)
    diag = {"ladder": [float(ladder.min()), float(ladder.max()), int(ladder.size)]}

    if condition == "alpha":
        vals = w(ladder)
        tt, ss = np.meshgrid(ladder, ladder, indexing="ij")
        ratio = w(tt + ss) / (vals[:, None] + vals[None, :] + 1.0)
        prefix = np.array([ratio[: k + 1, : k + 1].max() for k in range(len(ladder))])
        diag["prefix_sup"] = prefix.tolist()
        verdict = _trend_verdict(prefix, grow_factor=2.0)
        witness = float(prefix[-1])
    elif condition == "beta":
        value, converged, incs = tail_integral(w, sigma, max_doublings=max_doublings)
        diag["doublings"] = len(incs)
        if converged:
            verdict, witness = HOLDS, value
        elif converged is False:
            verdict, witness = FAILS, value
            diag["increments"] = incs[-4:]
        else:
            verdict, witness = INCONCLUSIVE, value
    elif condition == "beta_star":
        base = check_condition(w, "beta", sigma, ladder, max_doublings=max_doublings)
        if base.verdict != HOLDS:
            verdict, witness = base.verdict, base.witness
            diag["reason"] = f"beta({sigma:g}) {base.verdict}"
        else:
            tpts = ladder[(ladder >= 1.0) & (w(ladder) > 0)]
            ratios = []
            for t in tpts:
                tail, conv, _ = tail_integral(w, sigma, start=float(t), max_doublings=max_doublings)
                ratios.append(t ** sigma * tail / float(w(t)))
            diag["ratios"] = ratios
            diag["t"] = tpts.tolist()
            verdict = _trend_verdict(ratios, grow_factor=1.5)
            witness = float(np.max(ratios))
    elif condition == "gamma":
        tpts = ladder[ladder >= 2.0]
        ratios = np.log(tpts) / w(tpts)
        half = len(ratios) // 2
        diag["ratios"] = ratios.tolist()
        q = ratios[-1] / ratios[half]
        if q <= 0.75 and np.all(np.diff(ratios[half:]) <= 0):
            verdict = HOLDS
        elif q >= 0.95:
            verdict = FAILS
        else:
            verdict = INCONCLUSIVE
        witness = float(ratios[-1])
    else:  # delta
        u = np.linspace(-20.0, 20.0, 4001)
        ph = w.phi(u)
        d2 = ph[2:] - 2 * ph[1:-1] + ph[:-2]
        scale = 1e-10 * np.maximum(1.0, np.abs(ph[1:-1]))
        h = u[1] - u[0]
        worst = int(np.argmin(d2 + scale))
        witness = float(d2[worst] / h ** 2)
        verdict = HOLDS if np.all(d2 >= -scale) else FAILS
        diag["argmin_u"] = float(u[worst + 1])
    report = ConditionReport(condition, verdict, witness, sigma, diag)
    if strict and verdict == INCONCLUSIVE:
        raise Inconclusive(f"{condition} on {w.name}: trend not monotone within budget")
    return report


# --------------------------------------------------------------------------
# Young conjugate
# --------------------------------------------------------------------------

@dataclass
class YoungConjugate:
    """Sampled ``phi*`` with ``np.inf`` entries where the supremum diverged."""

    grid: np.ndarray
    values: np.ndarray
    source: WeightFunction
    infinity_threshold: float | None
    argmax: np.ndarray
    half_line: bool = True
    config: dict = field(default_factory=dict)

    @property
    def finite(self) -> np.ndarray:
        return np.isfinite(self.values)

    def at(self, t) -> np.ndarray:
        """phi* at new points, computed with the same configuration."""
        t = np.asarray(t, dtype=float)
        vals, _ = _conjugate_values(self.source.phi, t.ravel(), half_line=self.half_line, **self.config)
        return vals.reshape(t.shape)

    def to_json(self) -> dict:
        return {"weight": self.source.name, "t": self.grid.tolist(),
                "phi_star": [v if np.isfinite(v) else "inf" for v in self.values.tolist()],
                "infinity_threshold": self.infinity_threshold}


_INV_GOLD = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, iters: int = 100):
    """Vectorised golden-section maximisation of unimodal ``f`` on ``[lo, hi]``.

    Returns ``(argmax, max)`` where the maximum also considers both endpoints.
    """
    a, b = np.array(lo, dtype=float), np.array(hi, dtype=float)
    c = b - _INV_GOLD * (b - a)
    d = a + _INV_GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc >= fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _INV_GOLD * (b - a)
        new_d = a + _INV_GOLD * (b - a)
        # reuse one evaluation per branch
        c_next = np.where(left, new_c, d)
        d_next = np.where(left, c, new_d)
        fc_known = np.where(left, np.nan, fd)
        fd_known = np.where(left, fc, np.nan)
        need_c, need_d = left, ~left
        fc = fc_known
        fd = fd_known
        if need_c.any():
            fc = np.where(need_c, f(c_next), fc)
        if need_d.any():
            fd = np.where(need_d, f(d_next), fd)
        c, d = c_next, d_next
    xs = np.stack([a, b, c, d])
    fs = np.stack([f(a), f(b), fc, fd])
    fs = np.where(np.isnan(fs), -np.inf, fs)
    k = np.argmax(fs, axis=0)
    cols = np.arange(xs.shape[1]) if xs.ndim > 1 else 0
    return xs[k, cols], fs[k, cols]


def _sgrid(lo, hi, n):
    lin = np.linspace(lo, hi, n // 2)
    if lo == 0.0:
        geo = np.geomspace(hi * 1e-9, hi, n - n // 2)
    else:
        geo = np.linspace(lo, hi, n - n // 2)
    return np.unique(np.concatenate([[lo], lin, geo, [hi]]))


def _conjugate_values(phi, t, half_line=True, s_max=64.0, n_grid=4001, max_doublings=48):
    """Grid sup + golden refinement of ``s t - phi(s)`` for every ``t``.

    The search window ``[0, S]`` (or ``[-S, S]``) is doubled while the argmax
    sits on its right edge.  A value is declared ``+inf`` once three successive
    doublings keep the argmax on the edge with a non-decreasing average slope
    ``(v(2S) - v(S)) / S``; for finite conjugates that slope must eventually
    drop below zero.
    """
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape)
    arg = np.empty(t.shape)
    todo = np.arange(t.size)
    S = float(s_max)
    hist_v = {i: [] for i in todo}
    for _ in range(max_doublings + 1):
        lo = 0.0 if half_line else -S
        s = _sgrid(lo, S, n_grid)
        with np.errstate(over="ignore", invalid="ignore"):
            ph = phi(s)
        ph = np.where(np.isnan(ph), np.inf, ph)
        best, idx = _kernels.grid_sup(s, ph, t[todo])
        edge = idx == s.size - 1
        inner = todo[~edge]
        if inner.size:
            k = idx[~edge]
            a = s[np.maximum(k - 1, 0)]
            b = s[np.minimum(k + 1, s.size - 1)]
            tt = t[inner]

            def obj(x, tt=tt):
                with np.errstate(over="ignore", invalid="ignore"):
                    v = x * tt - phi(x)
                return np.where(np.isnan(v), -np.inf, v)

            xs, fs = golden_max(obj, a, b)
            better = fs > best[~edge]
            out[inner] = np.where(better, fs, best[~edge])
            arg[inner] = np.where(better, xs, s[k])
        still = todo[edge]
        keep = []
        for j, i in enumerate(still):
            hv = hist_v[i]
            hv.append((S, best[edge][j]))
            if len(hv) >= 4:
                slopes = [(hv[m + 1][1] - hv[m][1]) / hv[m][0] for m in range(len(hv) - 1)]
                last = slopes[-3:]
                if all(last[m + 1] >= last[m] * (1 - 1e-6) - 1e-300 for m in range(2)) and last[-1] > 0:
                    out[i] = np.inf
                    arg[i] = np.inf
                    continue
            keep.append(i)
        todo = np.array(keep, dtype=int)
        if todo.size == 0:
            break
        S *= 2.0
    for i in todo:  # budget exhausted with shrinking increments: converged to the edge value
        out[i] = hist_v[i][-1][1]
        arg[i] = hist_v[i][-1][0]
    return out, arg


def young_conjugate(w: WeightFunction, tgrid, s_max: float = 64.0, n_grid: int = 4001,
                    force: bool = False, half_line: bool = True) -> YoungConjugate:
    """Young conjugate of ``phi(s) = w(e^s)`` on ``tgrid``.

    Parameters
    ----------
    w : WeightFunction
    tgrid : array_like
        Increasing nonnegative points.
    s_max : float
        Initial search window ``[0, s_max]``; doubled as needed.
    force : bool
        Skip the convexity check of ``phi``.
    half_line : bool
        Take the supremum over ``s > 0`` (default).  ``False`` takes it over all
        real ``s``, which differs only where the unconstrained maximiser is negative.
    """
    if not force:
        rep = check_condition(w, "delta")
        if rep.verdict != HOLDS:
            raise NotConvex(f"phi(s) = {w.name}(e^s) is not convex (min second difference {rep.witness:.3g})")
    tgrid = np.asarray(tgrid, dtype=float)
    config = {"s_max": s_max, "n_grid": n_grid}
    vals, arg = _conjugate_values(w.phi, tgrid, half_line=half_line, **config)
    inf_pts = tgrid[~np.isfinite(vals)]
    thr = float(inf_pts.min()) if inf_pts.size else None
    if thr is not None:
        # conjugates are nondecreasing: enforce the +inf tail convention
        vals = np.where(tgrid >= thr, np.inf, vals)
    return YoungConjugate(tgrid, vals, w, thr, arg, half_line, config)


def biconjugate_check(w: WeightFunction, s_window=(0.0, 10.0), n: int = 41, force: bool = False,
                      return_detail: bool = False):
    """Max over a grid in ``s_window`` of ``|(phi*)*(s) - phi(s)| / (1 + |phi(s)|)``.

    ``(phi*)*(s) = sup_{t >= 0} (s t - phi*(t))`` is computed by a grid sup over
    ``t`` followed by golden refinement, with ``phi*`` recomputed at every
    refinement point.
    """
    if not force:
        rep = check_condition(w, "delta")
        if rep.verdict != HOLDS:
            raise NotConvex(f"{w.name}: phi not convex")
    s = np.linspace(s_window[0], s_window[1], n)
    phi_s = w.phi(s)
    # slope of phi at the window's right end bounds the maximising t
    h = 1e-4
    slope = float((w.phi(s[-1] + h) - w.phi(s[-1] - h)) / (2 * h))
    t_top = max(4.0, 4.0 * slope)
    tg = np.unique(np.concatenate([[0.0, 1.0], np.geomspace(1e-6, t_top, 3000), np.linspace(0, min(t_top, 50.0), 1000)]))
    conj = young_conjugate(w, tg, force=True)

    best, idx = _kernels.grid_sup(tg, conj.values, s)
    a = tg[np.maximum(idx - 1, 0)]
    b = tg[np.minimum(idx + 1, tg.size - 1)]

    def obj(t):
        v = s * t - conj.at(t)
        return np.where(np.isnan(v), -np.inf, v)

    _, fv = golden_max(obj, a, b, iters=60)
    bb = np.maximum(best, fv)
    dev = np.abs(bb - phi_s) / (1.0 + np.abs(phi_s))
    if return_detail:
        return float(dev.max()), {"s": s, "biconjugate": bb, "phi": phi_s, "deviation": dev}
    return float(dev.max())


# --------------------------------------------------------------------------
# equivalence
# --------------------------------------------------------------------------

@dataclass
class EquivalenceResult:
    verdict: str
    c: float
    C: float
    ratios: np.ndarray

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


def equivalence_check(w: WeightFunction, k: WeightFunction, window=(1.0, 2.0 ** 20), n: int = 200,
                      strict: bool = False) -> EquivalenceResult:
    """Test ``w ≍ k`` from the ratio ``w/k`` on a log-spaced grid.

    ``c`` and ``C`` are the min and max of the ratio.  The verdict is ``holds``
    when the ratio drifts by less than 25% over the upper half of the window,
    ``fails`` when it moves monotonically by more than a factor 2 there.
    """
    t0, t1 = window
    if t0 < 1:
        raise ValueError("window must start at T0 >= 1")
    t = np.geomspace(t0, t1, n)
    ratio = w(t) / k(t)
    c, C = float(ratio.min()), float(ratio.max())
    half = n // 2
    with np.errstate(divide="ignore"):
        lr = np.log(ratio)
    drift = np.max(np.abs(lr[half:] - lr[half]))
    move = abs(lr[-1] - lr[half])
    d = np.diff(lr[half:])
    monotone = np.all(d >= -1e-12) or np.all(d <= 1e-12)
    if drift < math.log(1.25):
        verdict = HOLDS
    elif monotone and move > math.log(2.0):
        verdict = FAILS
    else:
        verdict = INCONCLUSIVE
        if strict:
            raise Inconclusive("ratio does not stabilise")
    return EquivalenceResult(verdict, c, C, ratio)
