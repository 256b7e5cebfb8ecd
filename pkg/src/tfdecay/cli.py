"""Command-line front end: function specs, scenario runs and report output."""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import PreconditionFailed, ReportIOError, SchemaError, TFDecayError
from .hermite import (
    DEFAULT_R_GRID,
    HermiteCoeffs,
    analyze,
    classify_decay,
    example42_profile,
    hermite_eval,
    make_grid,
    rapid_exponential_check,
    read_coeffs_csv,
    read_grid_csv,
    synthesize,
    write_coeffs_csv,
    write_grid_csv,
)
from .weights import CONDITIONS, HOLDS, INCONCLUSIVE, check_condition, make_weight, omega_s, young_conjugate

PASS, FAIL, UNSURE = "pass", "fail", "inconclusive"
EXIT = {PASS: 0, FAIL: 2, UNSURE: 3}
EXIT_ERROR = 1
EXIT_PRECONDITION = 4
SCENARIOS = ("thm11", "thm13", "cor16", "prop43", "lemma33", "thm31", "thm5", "example42")


# --------------------------------------------------------------------------
# function specs
# --------------------------------------------------------------------------

def _phi(x):
    return np.pi ** -0.25 * np.exp(-0.5 * np.asarray(x, dtype=float) ** 2)


# closed forms addressable by tag; callables take one array per axis
EXPRESSIONS = {
    "phi": (1, _phi),
    "h3_combination": (1, lambda x: hermite_eval(0, x) + 0.5 * hermite_eval(3, x)),
    "sech": (1, lambda x: 1.0 / np.cosh(x)),
    "phi2": (2, lambda x, y: _phi(x) * _phi(y)),
    "gauss04_phi": (2, lambda x, y: np.exp(-0.4 * x * x) * _phi(y)),
}


@dataclass
class FunctionSpec:
    """A resolved function description.

    Kinds: ``hermite_coeffs`` (values, log_abs/phase, a decay law or a CSV
    path), ``gaussian`` (``exp(-a |x|^2)``, ``a > 0``), ``hermite_mode``
    (``n`` or multi-index ``alpha``), ``grid_file`` (``x,re,im`` CSV) and
    ``expression`` (a tag from :data:`EXPRESSIONS`).
    """

    kind: str
    params: dict
    d: int = 1
    raw: dict = field(default_factory=dict)

    def callable(self):
        k, p = self.kind, self.params
        if k == "gaussian":
            a = p["a"]
            return lambda *xs: np.exp(-a * sum(np.asarray(x, dtype=float) ** 2 for x in xs))
        if k == "hermite_mode":
            alpha = p["alpha"]
            return lambda *xs: np.prod([hermite_eval(a, x) for a, x in zip(alpha, xs)], axis=0)
        if k == "expression":
            return EXPRESSIONS[p["tag"]][1]
        if k == "grid_file":
            return read_grid_csv(p["path"])
        if k == "hermite_coeffs":
            if self.d == 1:
                c = self.coeffs()
                return lambda x: synthesize(c).closed_form(x)
            from .multidim import synthesize_d

            c = self.coeffs()
            return lambda *xs: synthesize_d(c, np.stack(np.broadcast_arrays(*xs), axis=-1))
        raise SchemaError("kind", f"unknown kind {k!r}")

    def coeffs(self, N: int | None = None, tol: float = 1e-8):
        """Hermite coefficients: given directly or by analysis up to order ``N``."""
        p = self.params
        if self.kind == "hermite_coeffs":
            return _coeffs_from_params(p, self.d)
        N = N or p.get("N", 80 if self.d == 1 else 40)
        f = self.callable()
        if self.d == 1:
            return analyze(f, N, tol=tol)
        from .multidim import analyze_d

        return analyze_d(f, N, self.d, tol=tol)


def _coeffs_from_params(p: dict, d: int):
    from .multidim import MultiCoeffs, read_multi_csv

    if "path" in p:
        return read_coeffs_csv(p["path"]) if d == 1 else read_multi_csv(p["path"])
    if "decay" in p:
        law = p["decay"]
        N = p["N"]
        idx = np.indices((N + 1,) * d).sum(axis=0).astype(float)
        a = float(law.get("a", 1.0))
        if law["type"] == "power":
            la = -a * idx ** float(law.get("p", 1.0))
        elif law["type"] == "geometric":
            la = idx * math.log(float(law["q"]))
        else:
            raise SchemaError("decay.type", f"unknown decay law {law['type']!r}")
        return HermiteCoeffs.from_log(la) if d == 1 else MultiCoeffs.from_log(la)
    if "log_abs" in p:
        la = np.array([-np.inf if v is None else v for v in np.ravel(p["log_abs"])], dtype=float)
        ph = np.asarray(p.get("phase", np.zeros(la.size)), dtype=float).ravel()
        if d == 1:
            return HermiteCoeffs.from_log(la, ph)
        n = round(la.size ** (1.0 / d))
        return MultiCoeffs.from_log(la.reshape((n,) * d), ph.reshape((n,) * d))
    vals = np.array([complex(v[0], v[1]) if isinstance(v, list) else complex(v) for v in p["values"]])
    if d == 1:
        return HermiteCoeffs.from_complex(vals)
    n = round(vals.size ** (1.0 / d))
    return MultiCoeffs.from_complex(vals.reshape((n,) * d))


def _read_json_arg(src, what: str) -> dict:
    if isinstance(src, dict):
        return src
    text = str(src).strip()
    if not text.startswith("{"):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise SchemaError(what, f"cannot read {src!r}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(what, f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise SchemaError(what, "expected a JSON object")
    return obj


def _need(obj, key, path, types=None):
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "required field missing")
    v = obj[key]
    if types is not None and not isinstance(v, types):
        raise SchemaError(f"{path}.{key}", f"expected {types}, got {type(v).__name__}")
    return v


def load_function_spec(src) -> FunctionSpec:
    """Parse a function spec from a path, an inline JSON string or a dict.

    Raises
    ------
    SchemaError
        With the offending field path.
    """
    obj = _read_json_arg(src, "function")
    kind = _need(obj, "kind", "function", str)
    params = {k: v for k, v in obj.items() if k not in ("kind", "d", "params")}
    params.update(obj.get("params", {}))
    d = obj.get("d", 1)
    if not isinstance(d, int) or not 1 <= d <= 3:
        raise SchemaError("function.d", "dimension must be 1, 2 or 3")
    if kind == "gaussian":
        a = _need(params, "a", "function", (int, float))
        if not a > 0:
            raise SchemaError("function.a", f"must be positive, got {a}")
        params["a"] = float(a)
    elif kind == "hermite_mode":
        if "alpha" in params:
            alpha = params["alpha"]
            if not isinstance(alpha, list) or not all(isinstance(a, int) and a >= 0 for a in alpha):
                raise SchemaError("function.alpha", "expected a list of nonnegative integers")
        else:
            n = _need(params, "n", "function", int)
            if n < 0:
                raise SchemaError("function.n", "must be nonnegative")
            alpha = [n] * 1
        params["alpha"] = alpha
        d = len(alpha)
    elif kind == "expression":
        tag = _need(params, "tag", "function", str)
        if tag not in EXPRESSIONS:
            raise SchemaError("function.tag", f"unknown tag {tag!r}; known: {sorted(EXPRESSIONS)}")
        d = EXPRESSIONS[tag][0]
    elif kind == "grid_file":
        _need(params, "path", "function", str)
        if d != 1:
            raise SchemaError("function.d", "grid files are one-dimensional")
    elif kind == "hermite_coeffs":
        if not any(k in params for k in ("values", "log_abs", "decay", "path")):
            raise SchemaError("function", "hermite_coeffs needs values, log_abs, decay or path")
        if "decay" in params:
            law = _need(params, "decay", "function", dict)
            if _need(law, "type", "function.decay", str) not in ("power", "geometric"):
                raise SchemaError("function.decay.type", "expected 'power' or 'geometric'")
            if law["type"] == "geometric":
                q = _need(law, "q", "function.decay", (int, float))
                if not 0 < q:
                    raise SchemaError("function.decay.q", "must be positive")
            N = _need(params, "N", "function", int)
            if N < 1:
                raise SchemaError("function.N", "must be positive")
    else:
        raise SchemaError("function.kind", f"unknown kind {kind!r}")
    return FunctionSpec(kind, params, d, obj)


def load_weight(src):
    """Weight from a catalog name (``omega_s:1/4`` shorthand allowed), a JSON spec or a path."""
    if src is None:
        return None
    try:
        if isinstance(src, str) and not src.strip().startswith("{") and not os.path.exists(src):
            name, _, arg = src.partition(":")
            return omega_s(arg) if name == "omega_s" and arg else make_weight(name)
        return make_weight(_read_json_arg(src, "weight"))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, TFDecayError):
            raise
        raise SchemaError("weight", str(exc)) from exc


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------

def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(u) for k, u in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(u) for u in v]
    if isinstance(v, np.ndarray):
        return [_jsonable(u) for u in v.tolist()]
    if isinstance(v, (np.bool_, bool)):
        return bool(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _dump(v, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v[k], indent + 1)}" for k in sorted(v)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if all(not isinstance(u, (dict, list)) for u in v):
            return "[" + ", ".join(_dump(u) for u in v) + "]"
        return "[\n" + ",\n".join(pad + _dump(u, indent + 1) for u in v) + "\n" + end + "]"
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return '"nan"'
        if math.isinf(v):
            return '"inf"' if v > 0 else '"-inf"'
        return format(v, ".17g")
    return json.dumps(v)


def dumps_report(report: dict) -> str:
    """Sorted keys, floats with 17 significant digits, non-finite floats as strings."""
    return _dump(_jsonable(report)) + "\n"


def _tables(obj, prefix=""):
    """Every list of flat dicts in the report, keyed by its path."""
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _tables(obj[k], f"{prefix}{k}." if prefix or k else k)
    elif isinstance(obj, list):
        if obj and all(isinstance(r, dict) and all(not isinstance(v, (dict, list)) for v in r.values()) for r in obj):
            yield prefix.rstrip("."), obj
        else:
            for i, u in enumerate(obj):
                yield from _tables(u, f"{prefix}{i}.")


def emit_report(report: dict, fmt: str = "json", out: str | None = None) -> list[str]:
    """Write ``report`` as JSON (to ``out`` or stdout) or as a CSV bundle directory.

    Returns the written paths.

    Raises
    ------
    ReportIOError
        If the destination cannot be written.
    """
    report = _jsonable(report)
    try:
        if fmt == "json":
            text = dumps_report(report)
            if out in (None, "-"):
                sys.stdout.write(text)
                return []
            Path(out).write_text(text)
            return [str(out)]
        if fmt == "csv-bundle":
            if out in (None, "-"):
                raise ReportIOError("csv-bundle output needs --out DIR")
            root = Path(out)
            root.mkdir(parents=True, exist_ok=True)
            files = []
            for name, rows in _tables(report):
                fname = (name or "table").replace(".", "_") + ".csv"
                keys = sorted({k for r in rows for k in r})
                with open(root / fname, "w", newline="") as fh:
                    w = csv.writer(fh)
                    w.writerow(keys)
                    for r in rows:
                        w.writerow([_cell(r.get(k)) for k in keys])
                files.append(fname)
            (root / "report.json").write_text(dumps_report(report))
            manifest = {"report": "report.json", "tables": files}
            (root / "manifest.json").write_text(dumps_report(manifest))
            return [str(root / f) for f in ["manifest.json", "report.json", *files]]
        raise ValueError(f"unknown format {fmt!r}")
    except OSError as exc:
        if isinstance(exc, ReportIOError):
            raise
        raise ReportIOError(f"cannot write report to {out}: {exc}") from exc


def _cell(v):
    if isinstance(v, float):
        return _dump(v).strip('"')
    return "" if v is None else v


def _versions() -> dict:
    import numba
    import scipy

    from ._accel import USE_NUMBA

    return {"tfdecay": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "numba": numba.__version__, "numba_enabled": USE_NUMBA}


def _combine(verdicts) -> str:
    verdicts = list(verdicts)
    if FAIL in verdicts:
        return FAIL
    if UNSURE in verdicts:
        return UNSURE
    return PASS


def _check(name: str, verdict: str, **details) -> dict:
    return {"name": name, "verdict": verdict, **details}


# --------------------------------------------------------------------------
# scenarios
# --------------------------------------------------------------------------

@dataclass
class ScenarioConfig:
    scenario: str
    function: FunctionSpec | None = None
    weight: object = None
    lambda_grid: list | None = None
    r_grid: list | None = None
    options: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @classmethod
    def load(cls, src) -> "ScenarioConfig":
        obj = _read_json_arg(src, "scenario")
        name = _need(obj, "scenario", "scenario", str)
        if name not in SCENARIOS:
            raise SchemaError("scenario.scenario", f"unknown scenario {name!r}; known: {list(SCENARIOS)}")
        fn = load_function_spec(obj["function"]) if "function" in obj else None
        needs_fn = {"thm11", "thm13", "cor16", "prop43", "thm5"}
        if name in needs_fn and fn is None:
            raise SchemaError("scenario.function", f"scenario {name} needs a function")
        w = load_weight(obj["weight"]) if "weight" in obj else None
        if name in {"thm13", "prop43", "lemma33", "thm31"} and w is None:
            raise SchemaError("scenario.weight", f"scenario {name} needs a weight")
        opts = {k: v for k, v in obj.items()
                if k not in ("scenario", "function", "weight", "lambda_grid", "r_grid")}
        return cls(name, fn, w, obj.get("lambda_grid"), obj.get("r_grid"), opts, obj)


def _scan_verdict(rep) -> str:
    if rep.bounded:
        return PASS
    return UNSURE if rep.edge_witness else FAIL


def _sweep(f, lam_grid, omega, **kw):
    from .transforms import tf_decay_scan

    rows = []
    for lam in lam_grid:
        a, b = tf_decay_scan(f, float(lam), omega=omega, **kw)
        rows.append({"lambda": float(lam), "f_bounded": a.bounded, "fhat_bounded": b.bounded,
                     "f_sup_log10": a.to_json()["sup_log10"], "fhat_sup_log10": b.to_json()["sup_log10"],
                     "f_edge": a.edge_witness, "fhat_edge": b.edge_witness,
                     "verdict": _combine([_scan_verdict(a), _scan_verdict(b)])})
    return rows


def _membership(rows) -> tuple:
    """Scan-side membership for "some lambda" and "every lambda": True, False or None (undecided)."""
    v = [r["verdict"] for r in rows]
    some = True if PASS in v else (None if UNSURE in v else False)
    every = True if all(x == PASS for x in v) else (False if FAIL in v else None)
    return some, every


def _implies(name, a, b, **details) -> dict:
    """Directional check ``a => b``; ``None`` marks an undecided side."""
    if b is True or a is False:
        verdict = PASS
    elif a is True and b is False:
        verdict = FAIL
    else:
        verdict = UNSURE
    return _check(name, verdict, premise=a, conclusion=b, **details)


def _biconditional(label, coef_side: str, scan_side: str, coef, scan, **details) -> list:
    """Both directions of ``coefficients <=> scan`` as independent checks."""
    return [
        _implies(f"{label}{coef_side} => {scan_side}", coef, scan, **details),
        _implies(f"{label}{scan_side} => {coef_side}", scan, coef),
    ]


def _require(w, conditions):
    out = {}
    for cond, sigma in conditions:
        rep = check_condition(w, cond, sigma)
        out[f"{cond}({sigma:g})" if sigma else cond] = rep.verdict
        if rep.verdict != HOLDS:
            raise PreconditionFailed(f"weight {w.name} fails required condition {cond}"
                                     + (f" (sigma={sigma:g})" if sigma else "") + f": {rep.verdict}")
    return out


def _thm11(cfg, tol):
    lam = cfg.lambda_grid or [0.5, 0.1, 0.02]
    r_grid = cfg.r_grid or list(DEFAULT_R_GRID)
    c = cfg.function.coeffs(tol=tol)
    coef = rapid_exponential_check(c, r_grid)
    rows = _sweep(c, lam, None)
    _, every = _membership(rows)
    checks = _biconditional("", "|H(f,n)| <~ e^{-rn} for every r",
                            "|f|, |fhat| <~ e^{-(1/2 - lambda) x^2} for every lambda",
                            coef.in_all, every, coefficients=coef.to_json(), scans=rows)
    return checks, {"lambda_grid": lam, "r_grid": r_grid}


def _thm13_core(f, w, lam, r_grid, tol, label=""):
    c = f.coeffs(tol=tol)
    dec = classify_decay(c, w, r_grid=r_grid)
    # the decay side reads f pointwise through its trusted expansion, not through the profile test
    rows = _sweep(c, lam, w)
    some, every = _membership(rows)
    return (_biconditional(label, "coefficients in H_omega (some r)", "decay bound for some lambda",
                           dec.in_some, some, coefficients=dec.to_json(), scans=rows)
            + _biconditional(label, "coefficients in H_0,omega (every r)", "decay bound for every lambda",
                             dec.in_all, every))


def _thm13(cfg, tol):
    lam = cfg.lambda_grid or [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    r_grid = cfg.r_grid or list(DEFAULT_R_GRID)
    pre = _require(cfg.weight, [("beta_star", 2.0), ("delta", None)])
    checks = _thm13_core(cfg.function, cfg.weight, lam, r_grid, tol)
    return checks, {"lambda_grid": lam, "r_grid": r_grid, "preconditions": pre}


def _cor16(cfg, tol):
    lam = cfg.lambda_grid or [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    r_grid = cfg.r_grid or list(DEFAULT_R_GRID)
    s_list = cfg.options.get("s_list", ["0", "1/4", "flat1"])
    checks, pre = [], {}
    for s in s_list:
        w = omega_s(s)
        pre[w.name] = _require(w, [("beta_star", 2.0), ("delta", None)])
        checks += _thm13_core(cfg.function, w, lam, r_grid, tol, label=f"{w.name}: ")
    return checks, {"lambda_grid": lam, "r_grid": r_grid, "s_list": s_list, "preconditions": pre}


def _prop43(cfg, tol):
    from .hermite import trusted_expansion
    from .transforms import bargmann_growth_scan, bargmann_series

    lam = cfg.lambda_grid or [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    r_grid = cfg.r_grid or list(DEFAULT_R_GRID)
    pre = _require(cfg.weight, [("delta", None)])
    c = cfg.function.coeffs(tol=tol)
    dec = classify_decay(c, cfg.weight, r_grid=r_grid)
    radii = np.asarray(cfg.options.get("radii", np.linspace(0.0, 6.0, 61)), dtype=float)
    ser = bargmann_series(trusted_expansion(c)[0])
    rows = []
    for lv in lam:
        rep = bargmann_growth_scan(ser, cfg.weight, float(lv), radii)
        rows.append({"lambda": float(lv), "sup_log": rep.sup_log, "witness": rep.witness, "bounded": rep.bounded,
                     "verdict": PASS if rep.bounded else UNSURE})
    some, every = _membership(rows)
    checks = (_biconditional("", "coefficients in H_omega (some r)", "|Bf| <~ e^{lambda omega} for some lambda",
                             dec.in_some, some, coefficients=dec.to_json(), scans=rows)
              + _biconditional("", "coefficients in H_0,omega (every r)",
                               "|Bf| <~ e^{lambda omega} for every lambda", dec.in_all, every))
    return checks, {"lambda_grid": lam, "r_grid": r_grid, "radii": radii, "preconditions": pre}


def _lemma33(cfg, tol):
    from .sector import lemma33_verify

    sigma = float(cfg.options.get("sigma", 2.0))
    thetas = cfg.options.get("theta", [0.0, math.pi / 4])
    thetas = thetas if isinstance(thetas, list) else [thetas]
    checks, reports = [], []
    for th in thetas:
        rep = lemma33_verify(cfg.weight, sigma, float(th))
        reports.append(rep.to_json())
        for item, res in rep.items.items():
            checks.append(_check(f"theta={th:.6g}: item {item}", PASS if res.get("pass") else FAIL))
        if rep.constants:
            checks.append(_check(f"theta={th:.6g}: harmonicity", PASS if rep.harmonicity < 1e-4 else FAIL,
                                 residual=rep.harmonicity))
            checks.append(_check(f"theta={th:.6g}: refinement drift", PASS if rep.drift < 0.1 else FAIL,
                                 drift=rep.drift))
    return checks, {"sigma": sigma, "theta": thetas, "reports": reports}


def _analytic(spec: dict, sigma: float, theta: float):
    from .sector import f_omega

    kind = spec.get("kind", "monomial")
    if kind == "monomial":
        k = int(spec.get("k", 1))
        return lambda z: np.asarray(z, dtype=complex) ** k
    if kind == "constant":
        v = float(spec.get("value", 1.0))
        return lambda z: v * np.ones_like(np.asarray(z, dtype=complex))
    if kind == "exp_neg":
        return lambda z: np.exp(-np.asarray(z, dtype=complex))
    if kind == "fomega":
        return f_omega(load_weight(spec["weight"]), sigma, theta)
    raise SchemaError("analytic.kind", f"unknown analytic kind {kind!r}")


def _thm31(cfg, tol):
    from .sector import SectorSpec, pl_weighted_verify

    sigma = float(cfg.options.get("sigma", 2.0))
    theta = float(cfg.options.get("theta", 0.0))
    rho = float(cfg.options.get("rho", math.pi / sigma))
    lam = float((cfg.lambda_grid or [1.0])[0])
    sec = SectorSpec(theta, rho, sigma)
    catalog = cfg.options.get("analytic", [{"kind": "monomial", "k": 1}, {"kind": "monomial", "k": 2},
                                           {"kind": "constant", "value": 1.0}])
    checks = []
    for spec in catalog:
        F = _analytic(spec, sigma, theta)
        lam_k = float(spec.get("k", lam)) if spec.get("kind") == "monomial" else lam
        res = pl_weighted_verify(F, cfg.weight, lam_k, sec, A=cfg.options.get("A"))
        checks.append(_check(f"{spec}", PASS if res.passed else FAIL, B=res.B, B_refined=res.B_refined, M=res.M,
                             witness=res.witness, A=res.notes.get("A")))
    return checks, {"sigma": sigma, "theta": theta, "rho": rho, "lambda": lam}


def _thm5(cfg, tol):
    from .multidim import N_MAX_D, MultiCoeffs, classify_decay_d, thm5_scan

    f = cfg.function
    w = cfg.weight
    lam = cfg.lambda_grid or [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    r_grid = cfg.r_grid or list(DEFAULT_R_GRID)
    pre = _require(w, [("beta_star", 2.0), ("delta", None)]) if w is not None else {}
    c = f.coeffs(cfg.options.get("N", N_MAX_D if f.d == 1 else None), tol=tol)
    if isinstance(c, HermiteCoeffs):
        c = MultiCoeffs.from_1d(c)
    dec = _shell_exponential_check(c, r_grid) if w is None else classify_decay_d(c, w, r_grid=r_grid)
    rows = []
    for lv in lam:
        reps = thm5_scan(c, float(lv), w)
        verdicts = [_scan_verdict(r) for r in reps.values()]
        rows.append({"lambda": float(lv), "verdict": _combine(verdicts),
                     **{f"mask_{m}": r.bounded for m, r in reps.items()}})
    some, every = _membership(rows)
    checks = _biconditional("", "coefficients: every rate", "partial Fourier decay for every lambda",
                            dec.in_all, every, coefficients=dec.to_json(), scans=rows)
    if w is not None:
        checks += _biconditional("", "coefficients: some rate", "partial Fourier decay for some lambda",
                                 dec.in_some, some)
    return checks, {"lambda_grid": lam, "r_grid": r_grid, "preconditions": pre}


def _example42(cfg, tol):
    s_list = cfg.options.get("s_list", ["1/4", "1/2", "flat1", "flat2"])
    r_list = cfg.r_grid or [0.5, 1.0, 2.0]
    n_min, N = int(cfg.options.get("n_min", 8)), int(cfg.options.get("N", 300))
    limit = float(cfg.options.get("spread_limit", 3.0))
    checks = []
    for s in s_list:
        for r in r_list:
            prof = example42_profile(s, float(r), N, n_min)
            checks.append(_check(f"s={s}, r={r:g}", PASS if prof.spread < limit else FAIL, spread=prof.spread,
                                 effective_rate_end=float(prof.effective_rate[-1])))
    return checks, {"s_list": s_list, "r_grid": r_list, "window": [n_min, N], "spread_limit": limit}


def _shell_exponential_check(c, r_grid):
    """``sup |c_alpha| e^{r |alpha|}`` over the box, via the per-shell maxima of ``|c_alpha|``."""
    g = np.full(c.d * c.order + 1, -np.inf)
    np.maximum.at(g, c.degrees().ravel(), np.asarray(c.log_abs).ravel())
    rep = rapid_exponential_check(HermiteCoeffs.from_log(g, provenance=c.provenance), r_grid)
    rep.notes.update({"dimension": c.d, "degree_window": [0, int(g.size - 1)]})
    return rep


_RUNNERS = {"thm11": _thm11, "thm13": _thm13, "cor16": _cor16, "prop43": _prop43, "lemma33": _lemma33,
            "thm31": _thm31, "thm5": _thm5, "example42": _example42}


def run_scenario(cfg: ScenarioConfig, tol: float = 1e-8, seed: int = 0, timing: bool = False) -> dict:
    """Run one scenario and return its report dict (``status`` in pass/fail/inconclusive).

    Raises
    ------
    PreconditionFailed
        When the weight fails a condition the scenario requires.
    """
    np.random.seed(seed)
    t0 = time.perf_counter()
    checks, echo = _RUNNERS[cfg.scenario](cfg, tol)
    report = {
        "scenario": cfg.scenario,
        "inputs": {"config": cfg.raw, "tol": tol, "seed": seed, **echo},
        "checks": checks,
        "status": _combine(c["verdict"] for c in checks),
        "versions": _versions(),
    }
    if timing:
        report["wall_time_s"] = time.perf_counter() - t0
    return report


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------

def _floats(s: str | None, default=None):
    if s is None:
        return default
    return [float(v) for v in s.split(",") if v.strip()]


def _load_coeffs_file(path):
    with open(path) as fh:
        head = fh.readline().strip()
    if head.startswith("n,"):
        return read_coeffs_csv(path)
    from .multidim import read_multi_csv

    return read_multi_csv(path)


def _write_complex_grid(path, rows, header=("x", "xi", "re", "im")):
    from .hermite import _fmt

    fh = sys.stdout if path in (None, "-") else open(path, "w", newline="")
    try:
        w = csv.writer(fh)
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(v) for v in r])
    finally:
        if fh is not sys.stdout:
            fh.close()


def cmd_weights(args):
    w = load_weight(args.weight)
    if args.action == "check":
        conds = CONDITIONS if args.condition == "all" else [args.condition]
        reps = [check_condition(w, c, args.sigma if c.startswith("beta") else None).to_json() for c in conds]
        verdicts = [r["verdict"] for r in reps]
        status = FAIL if "fails" in verdicts else (UNSURE if INCONCLUSIVE in verdicts else PASS)
        return {"weight": w.name, "conditions": reps, "status": status}
    t = np.linspace(0.0, args.t_max, args.n) if args.t is None else np.asarray(_floats(args.t))
    conj = young_conjugate(w, t, half_line=not args.full_line)
    return {"weight": w.name, "conjugate": conj.to_json(), "status": PASS}


def cmd_hermite(args):
    if args.action == "analyze":
        c = load_function_spec(args.function).coeffs(args.N, tol=args.tol)
        if args.out in (None, "-"):
            import io

            buf = io.StringIO()
            _write_coeffs_stream(c, buf)
            sys.stdout.write(buf.getvalue())
        else:
            write_coeffs_csv(c, args.out)
        return None
    if args.action == "synthesize":
        c = read_coeffs_csv(args.coeffs)
        g = synthesize(c, make_grid(args.X, args.n))
        if args.out in (None, "-"):
            rows = zip(g.x, np.real(g.samples), np.imag(g.samples))
            _write_complex_grid(None, rows, ("x", "re", "im"))
        else:
            write_grid_csv(g, args.out)
        return None
    if args.function:
        c = load_function_spec(args.function).coeffs(args.N, tol=args.tol)
    elif args.coeffs:
        c = _load_coeffs_file(args.coeffs)
    else:
        raise SchemaError("hermite", "classify needs --function or --coeffs")
    w = load_weight(args.weight)
    r_grid = _floats(args.r_grid, list(DEFAULT_R_GRID))
    if w is None:
        rep = rapid_exponential_check(c, r_grid)
    elif getattr(c, "d", 1) > 1:
        from .multidim import classify_decay_d

        rep = classify_decay_d(c, w, r_grid=r_grid)
    else:
        rep = classify_decay(c, w, r_grid=r_grid)
    return {"decay": rep.to_json(), "status": PASS}


def _write_coeffs_stream(c, fh):
    from .hermite import _fmt

    w = csv.writer(fh)
    w.writerow(["n", "log10_abs", "phase_radians"])
    for n, (la, ph) in enumerate(zip(c.log_abs, c.phase)):
        w.writerow([n, _fmt(la / math.log(10.0)), _fmt(ph)])


def cmd_transform(args):
    from .transforms import (
        bargmann_series,
        fourier_coeffs,
        fourier_grid,
        stft,
        stft_bargmann_residual,
    )

    if args.action == "fourier":
        if args.coeffs:
            fc = fourier_coeffs(read_coeffs_csv(args.coeffs))
            if args.out in (None, "-"):
                _write_coeffs_stream(fc, sys.stdout)
            else:
                write_coeffs_csv(fc, args.out)
        else:
            g = fourier_grid(read_grid_csv(args.grid))
            if args.out in (None, "-"):
                _write_complex_grid(None, zip(g.x, np.real(g.samples), np.imag(g.samples)), ("x", "re", "im"))
            else:
                write_grid_csv(g, args.out)
        return None
    xs = np.linspace(-args.extent, args.extent, args.n)
    X, XI = np.meshgrid(xs, xs, indexing="ij")
    if args.action == "bargmann":
        c = read_coeffs_csv(args.coeffs) if args.coeffs else load_function_spec(args.function).coeffs(tol=args.tol)
        vals = bargmann_series(c)(X + 1j * XI)
        _write_complex_grid(args.out, zip(X.ravel(), XI.ravel(), vals.real.ravel(), vals.imag.ravel()))
        return None
    f = load_function_spec(args.function)
    if args.action == "stft":
        g = f.callable()
        vals = stft(g, X, XI)
        _write_complex_grid(args.out, zip(X.ravel(), XI.ravel(), vals.real.ravel(), vals.imag.ravel()))
        return None
    res = stft_bargmann_residual(f.callable(), xs, xs)
    return {"residual": res, "tolerance": args.tol, "status": PASS if res <= args.tol else FAIL,
            "grid": {"extent": args.extent, "n": args.n}}


def cmd_sector(args):
    from .sector import SectorSpec, f_omega, lemma33_verify, pl_classic_verify, pl_weighted_verify

    w = load_weight(args.weight)
    if args.action == "build-fomega":
        F = f_omega(w, args.sigma, args.theta)
        half = math.pi / (2 * args.sigma)
        radii = np.geomspace(args.r_min, args.r_max, args.n_radii)
        angles = args.theta - half + 2 * half * (np.arange(args.n_angles) + 0.5) / args.n_angles
        rows = [(r, a, F.log_abs(r * np.exp(1j * a))) for r in radii for a in angles]
        _write_complex_grid(args.out, rows, ("r", "angle", "logF"))
        return None
    if args.action == "lemma33":
        rep = lemma33_verify(w, args.sigma, args.theta)
        ok = rep.all_pass and rep.harmonicity < 1e-4 and (rep.drift or 0.0) < 0.1
        return {"lemma33": rep.to_json(), "status": PASS if ok else FAIL}
    sec = SectorSpec(args.theta, args.rho or math.pi / args.sigma, args.sigma)
    F = _analytic(_read_json_arg(args.analytic, "analytic"), args.sigma, args.theta)
    if args.classic:
        res = pl_classic_verify(F, sec, args.M)
        return {"pass": res.passed, "witness": res.witness, "log_max": res.value, "M": args.M,
                "status": PASS if res.passed else FAIL}
    res = pl_weighted_verify(F, w, args.lam, sec, A=args.A)
    return {"pass": res.passed, "B": res.B, "B_refined": res.B_refined, "M": res.M, "witness": res.witness,
            "notes": res.notes, "status": PASS if res.passed else FAIL}


def cmd_multidim(args):
    from .multidim import VarpiMask, partial_fourier, read_multi_csv, thm5_scan, write_multi_csv

    if args.coeffs:
        c = read_multi_csv(args.coeffs)
    elif args.function:
        c = load_function_spec(args.function).coeffs(args.N, tol=args.tol)
    else:
        raise SchemaError("multidim", f"{args.action} needs --function or --coeffs")
    if args.action in ("analyze", "partial-fourier"):
        if args.action == "partial-fourier":
            c = partial_fourier(c, VarpiMask.parse(args.mask))
        write_multi_csv(c, args.out if args.out not in (None, "-") else "/dev/stdout")
        return None
    w = load_weight(args.weight)
    reps = thm5_scan(c, args.lam, w, masks=args.masks.split(",") if args.masks else None)
    verdicts = [_scan_verdict(r) for r in reps.values()]
    return {"masks": {m: r.to_json() for m, r in reps.items()}, "status": _combine(verdicts)}


def cmd_scenario(args):
    cfg = ScenarioConfig.load(args.config)
    return run_scenario(cfg, tol=args.tol, seed=args.seed, timing=args.timing)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tfdecay", description="Hermite, Bargmann and sector tools for "
                                "Gaussian time-frequency decay.")
    p.add_argument("--tol", type=float, default=1e-8, help="numerical tolerance (default 1e-8)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output file (json) or directory (csv-bundle)")
    p.add_argument("--format", choices=("json", "csv-bundle"), default="json")
    p.add_argument("--version", action="version", version=f"tfdecay {__version__}")
    sub = p.add_subparsers(dest="group", required=True)

    g = sub.add_parser("weights", help="condition checks and Young conjugates")
    g.add_argument("action", choices=("check", "conjugate"))
    g.add_argument("--weight", required=True, help="catalog name, JSON spec or path")
    g.add_argument("--condition", default="all", choices=("all",) + CONDITIONS)
    g.add_argument("--sigma", type=float, default=2.0)
    g.add_argument("--t", default=None, help="comma-separated conjugate grid")
    g.add_argument("--t-max", type=float, default=20.0)
    g.add_argument("--n", type=int, default=81)
    g.add_argument("--full-line", action="store_true", help="sup over all real s")
    g.set_defaults(func=cmd_weights)

    g = sub.add_parser("hermite", help="coefficient analysis, synthesis and decay classes")
    g.add_argument("action", choices=("analyze", "synthesize", "classify"))
    g.add_argument("--function")
    g.add_argument("--coeffs")
    g.add_argument("--weight")
    g.add_argument("--N", type=int, default=None)
    g.add_argument("--X", type=float, default=12.0)
    g.add_argument("--n", type=int, default=2401)
    g.add_argument("--r-grid", default=None)
    g.set_defaults(func=cmd_hermite)

    g = sub.add_parser("transform", help="Fourier, Bargmann and short-time Fourier transforms")
    g.add_argument("action", choices=("fourier", "bargmann", "stft", "verify-bridge"))
    g.add_argument("--function")
    g.add_argument("--coeffs")
    g.add_argument("--grid")
    g.add_argument("--extent", type=float, default=4.0)
    g.add_argument("--n", type=int, default=33)
    g.set_defaults(func=cmd_transform)

    g = sub.add_parser("sector", help="harmonic extensions and Phragmen-Lindelof checks")
    g.add_argument("action", choices=("build-fomega", "pl-verify", "lemma33"))
    g.add_argument("--weight", default="omega0")
    g.add_argument("--sigma", type=float, default=2.0)
    g.add_argument("--theta", type=float, default=0.0)
    g.add_argument("--rho", type=float, default=None)
    g.add_argument("--lam", type=float, default=1.0)
    g.add_argument("--A", type=float, default=None)
    g.add_argument("--M", type=float, default=1.0)
    g.add_argument("--classic", action="store_true", help="bounded boundary data (no weight)")
    g.add_argument("--analytic", default='{"kind": "monomial", "k": 1}')
    g.add_argument("--r-min", type=float, default=0.1)
    g.add_argument("--r-max", type=float, default=100.0)
    g.add_argument("--n-radii", type=int, default=13)
    g.add_argument("--n-angles", type=int, default=9)
    g.set_defaults(func=cmd_sector)

    g = sub.add_parser("multidim", help="tensor Hermite analysis and partial Fourier transforms")
    g.add_argument("action", choices=("analyze", "partial-fourier", "thm5"))
    g.add_argument("--function")
    g.add_argument("--coeffs")
    g.add_argument("--weight")
    g.add_argument("--mask", default="1")
    g.add_argument("--masks", default=None, help="comma-separated bitstrings (default: all)")
    g.add_argument("--lam", type=float, default=1.0)
    g.add_argument("--N", type=int, default=None)
    g.set_defaults(func=cmd_multidim)

    g = sub.add_parser("scenario", help="end-to-end verification scenarios")
    g.add_argument("action", choices=("run",))
    g.add_argument("config", help="scenario JSON (path or inline)")
    g.add_argument("--timing", action="store_true", help="include wall time (breaks byte-stability)")
    g.set_defaults(func=cmd_scenario)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.func(args)
        if report is None:
            return 0
        emit_report(report, args.format, args.out)
        return EXIT[report.get("status", PASS)]
    except PreconditionFailed as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (TFDecayError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
