"""Hot numeric kernels, each in an ``@njit`` loop form and a numpy form.

The public names at the bottom dispatch on :data:`tfdecay._accel.USE_NUMBA`.
Both forms are kept importable (``*_numba`` / ``*_numpy``) so tests and the
benchmark can compare them directly.

All Hermite kernels run the normalised three-term recurrence

    h_{n+1}(x) = x sqrt(2/(n+1)) h_n(x) - sqrt(n/(n+1)) h_{n-1}(x)

on a mantissa together with a separately carried natural-log exponent, so
that h_n(x) stays representable for |x| far beyond the point where
h_0(x) = pi^{-1/4} exp(-x^2/2) underflows.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit

_BIG = 1e150
_LOG_BIG = math.log(_BIG)
_LOG_PI_QUARTER = 0.25 * math.log(math.pi)


# --------------------------------------------------------------------------
# numba forms
# --------------------------------------------------------------------------

@njit(cache=True)
def hermite_table_numba(nmax, x):
    m = x.shape[0]
    out = np.zeros((nmax + 1, m))
    for j in range(m):
        xj = x[j]
        lg = -0.5 * xj * xj - _LOG_PI_QUARTER
        prev = 0.0
        cur = 1.0
        for n in range(nmax + 1):
            if cur != 0.0:
                out[n, j] = math.copysign(math.exp(lg + math.log(abs(cur))), cur)
            if n == nmax:
                break
            nxt = xj * math.sqrt(2.0 / (n + 1)) * cur - math.sqrt(n / (n + 1.0)) * prev
            prev = cur
            cur = nxt
            big = max(abs(cur), abs(prev))
            if big > _BIG:
                cur /= _BIG
                prev /= _BIG
                lg += _LOG_BIG
            elif big < 1.0 / _BIG and big > 0.0:
                cur *= _BIG
                prev *= _BIG
                lg -= _LOG_BIG
    return out


@njit(cache=True)
def hermite_sum_numba(coef, x):
    nmax = coef.shape[0] - 1
    m = x.shape[0]
    out = np.zeros(m, dtype=np.complex128)
    for j in range(m):
        xj = x[j]
        lg = -0.5 * xj * xj - _LOG_PI_QUARTER
        prev = 0.0
        cur = 1.0
        acc = 0.0 + 0.0j
        for n in range(nmax + 1):
            if cur != 0.0 and coef[n] != 0.0:
                acc += coef[n] * math.copysign(math.exp(lg + math.log(abs(cur))), cur)
            if n == nmax:
                break
            nxt = xj * math.sqrt(2.0 / (n + 1)) * cur - math.sqrt(n / (n + 1.0)) * prev
            prev = cur
            cur = nxt
            big = max(abs(cur), abs(prev))
            if big > _BIG:
                cur /= _BIG
                prev /= _BIG
                lg += _LOG_BIG
            elif big < 1.0 / _BIG and big > 0.0:
                cur *= _BIG
                prev *= _BIG
                lg -= _LOG_BIG
        out[j] = acc
    return out


@njit(cache=True)
def hermite_log_sum_numba(log_abs, phase, x, gauss):
    nmax = log_abs.shape[0] - 1
    m = x.shape[0]
    out_log = np.empty(m)
    out_arg = np.empty(m)
    for j in range(m):
        xj = x[j]
        lg = -0.5 * gauss * xj * xj - _LOG_PI_QUARTER
        prev = 0.0
        cur = 1.0
        acc = 0.0 + 0.0j
        e = -np.inf
        for n in range(nmax + 1):
            if cur != 0.0 and log_abs[n] > -np.inf:
                lt = log_abs[n] + lg + math.log(abs(cur))
                unit = math.copysign(1.0, cur) * (math.cos(phase[n]) + 1j * math.sin(phase[n]))
                if e == -np.inf:
                    acc = unit
                    e = lt
                elif lt > e:
                    acc = acc * math.exp(e - lt) + unit
                    e = lt
                else:
                    acc += unit * math.exp(lt - e)
            if n == nmax:
                break
            nxt = xj * math.sqrt(2.0 / (n + 1)) * cur - math.sqrt(n / (n + 1.0)) * prev
            prev = cur
            cur = nxt
            big = max(abs(cur), abs(prev))
            if big > _BIG:
                cur /= _BIG
                prev /= _BIG
                lg += _LOG_BIG
            elif big < 1.0 / _BIG and big > 0.0:
                cur *= _BIG
                prev *= _BIG
                lg -= _LOG_BIG
        a = abs(acc)
        if a == 0.0:
            out_log[j] = -np.inf
            out_arg[j] = 0.0
        else:
            out_log[j] = e + math.log(a)
            out_arg[j] = math.atan2(acc.imag, acc.real)
    return out_log, out_arg


@njit(cache=True)
def grid_sup_numba(s, phi, t):
    ns = s.shape[0]
    nt = t.shape[0]
    best = np.empty(nt)
    idx = np.empty(nt, dtype=np.int64)
    for j in range(nt):
        bv = -np.inf
        bi = 0
        tj = t[j]
        for i in range(ns):
            v = s[i] * tj - phi[i]
            if v > bv:
                bv = v
                bi = i
        best[j] = bv
        idx[j] = bi
    return best, idx


@njit(cache=True)
def series_log_eval_numba(log_abs, phase, z):
    nmax = log_abs.shape[0] - 1
    m = z.shape[0]
    out_log = np.empty(m)
    out_arg = np.empty(m)
    for j in range(m):
        zj = z[j]
        r = abs(zj)
        th = math.atan2(zj.imag, zj.real)
        lr = math.log(r) if r > 0.0 else -np.inf
        acc = 0.0 + 0.0j
        e = -np.inf
        for n in range(nmax + 1):
            if log_abs[n] == -np.inf:
                continue
            if n == 0:
                lt = log_abs[0]
            elif r == 0.0:
                continue
            else:
                lt = log_abs[n] + n * lr
            ang = phase[n] + n * th
            unit = math.cos(ang) + 1j * math.sin(ang)
            if e == -np.inf:
                acc = unit
                e = lt
            elif lt > e:
                acc = acc * math.exp(e - lt) + unit
                e = lt
            else:
                acc += unit * math.exp(lt - e)
        a = abs(acc)
        if a == 0.0:
            out_log[j] = -np.inf
            out_arg[j] = 0.0
        else:
            out_log[j] = e + math.log(a)
            out_arg[j] = math.atan2(acc.imag, acc.real)
    return out_log, out_arg


@njit(cache=True)
def dft_sum_numba(x, wf, xi):
    nx = x.shape[0]
    nk = xi.shape[0]
    out = np.zeros(nk, dtype=np.complex128)
    for k in range(nk):
        acc = 0.0 + 0.0j
        for j in range(nx):
            a = -x[j] * xi[k]
            acc += wf[j] * (math.cos(a) + 1j * math.sin(a))
        out[k] = acc
    return out


# --------------------------------------------------------------------------
# numpy forms
# --------------------------------------------------------------------------

def _recurrence_steps(x, gauss=1.0):
    """Yield (n, mantissa, log-exponent) for n = 0, 1, ... (vectorised over x)."""
    lg = -0.5 * gauss * x * x - _LOG_PI_QUARTER
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    n = 0
    while True:
        yield n, cur, lg
        nxt = x * math.sqrt(2.0 / (n + 1)) * cur - math.sqrt(n / (n + 1.0)) * prev
        prev, cur = cur, nxt
        big = np.maximum(np.abs(cur), np.abs(prev))
        hi = big > _BIG
        lo = (big < 1.0 / _BIG) & (big > 0.0)
        if hi.any() or lo.any():
            scale = np.where(hi, 1.0 / _BIG, np.where(lo, _BIG, 1.0))
            cur = cur * scale
            prev = prev * scale
            lg = lg + np.where(hi, _LOG_BIG, np.where(lo, -_LOG_BIG, 0.0))
        n += 1


def _mantissa_value(cur, lg):
    with np.errstate(divide="ignore"):
        return np.where(cur != 0.0, np.sign(cur) * np.exp(lg + np.log(np.abs(cur))), 0.0)


def hermite_table_numpy(nmax, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros((nmax + 1, x.shape[0]))
    for n, cur, lg in _recurrence_steps(x):
        out[n] = _mantissa_value(cur, lg)
        if n == nmax:
            break
    return out


def hermite_sum_numpy(coef, x):
    x = np.asarray(x, dtype=float)
    nmax = coef.shape[0] - 1
    acc = np.zeros(x.shape[0], dtype=complex)
    for n, cur, lg in _recurrence_steps(x):
        if coef[n] != 0:
            acc += coef[n] * _mantissa_value(cur, lg)
        if n == nmax:
            break
    return acc


def _aligned_add(acc, e, lt, unit):
    """Add unit*exp(lt) into acc*exp(e), elementwise, keeping the larger exponent."""
    lt = np.where(np.isnan(lt), -np.inf, lt)
    first = np.isneginf(e)
    new_e = np.maximum(e, lt)
    with np.errstate(invalid="ignore", over="ignore"):
        a_scale = np.where(first, 0.0, np.exp(e - new_e))
        t_scale = np.where(np.isneginf(lt), 0.0, np.exp(lt - new_e))
    new_acc = acc * a_scale + unit * t_scale
    new_e = np.where(first & np.isneginf(lt), -np.inf, new_e)
    return new_acc, new_e


def hermite_log_sum_numpy(log_abs, phase, x, gauss=1.0):
    x = np.asarray(x, dtype=float)
    nmax = log_abs.shape[0] - 1
    acc = np.zeros(x.shape[0], dtype=complex)
    e = np.full(x.shape[0], -np.inf)
    for n, cur, lg in _recurrence_steps(x, gauss):
        if log_abs[n] > -np.inf:
            with np.errstate(divide="ignore"):
                lt = log_abs[n] + lg + np.log(np.abs(cur))
            unit = np.sign(cur) * np.exp(1j * phase[n])
            acc, e = _aligned_add(acc, e, lt, unit)
        if n == nmax:
            break
    a = np.abs(acc)
    with np.errstate(divide="ignore"):
        out_log = np.where(a > 0, e + np.log(np.where(a > 0, a, 1.0)), -np.inf)
    out_arg = np.where(a > 0, np.angle(acc), 0.0)
    return out_log, out_arg


def grid_sup_numpy(s, phi, t, block=256):
    t = np.asarray(t, dtype=float)
    best = np.empty(t.shape[0])
    idx = np.empty(t.shape[0], dtype=np.int64)
    for lo in range(0, t.shape[0], block):
        tb = t[lo:lo + block]
        with np.errstate(invalid="ignore"):
            vals = np.outer(s, tb) - phi[:, None]
        vals = np.where(np.isnan(vals), -np.inf, vals)
        k = np.argmax(vals, axis=0)
        idx[lo:lo + block] = k
        best[lo:lo + block] = vals[k, np.arange(tb.shape[0])]
    return best, idx


def series_log_eval_numpy(log_abs, phase, z):
    z = np.asarray(z, dtype=complex)
    n = np.arange(log_abs.shape[0])
    r = np.abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        lr = np.log(r)
        lt = log_abs[:, None] + n[:, None] * lr[None, :]
    lt[0, :] = log_abs[0]
    lt = np.where(np.isnan(lt), -np.inf, lt)
    ang = phase[:, None] + n[:, None] * np.angle(z)[None, :]
    e = lt.max(axis=0)
    safe_e = np.where(np.isneginf(e), 0.0, e)
    acc = np.sum(np.exp(lt - safe_e) * np.exp(1j * ang), axis=0)
    a = np.abs(acc)
    with np.errstate(divide="ignore"):
        out_log = np.where(a > 0, safe_e + np.log(np.where(a > 0, a, 1.0)), -np.inf)
    return out_log, np.where(a > 0, np.angle(acc), 0.0)


def dft_sum_numpy(x, wf, xi, block=512):
    xi = np.asarray(xi, dtype=float)
    out = np.empty(xi.shape[0], dtype=complex)
    for lo in range(0, xi.shape[0], block):
        out[lo:lo + block] = np.exp(-1j * np.outer(xi[lo:lo + block], x)) @ wf
    return out


# --------------------------------------------------------------------------
# dispatch
# --------------------------------------------------------------------------

def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def hermite_table(nmax, x):
    """Rows h_0(x) ... h_nmax(x) for a 1-d array of points."""
    x = _f64(x)
    if USE_NUMBA:
        return hermite_table_numba(int(nmax), x)
    return hermite_table_numpy(int(nmax), x)


def hermite_sum(coef, x):
    """sum_n coef[n] h_n(x), complex."""
    coef = np.ascontiguousarray(coef, dtype=np.complex128)
    x = _f64(x)
    if USE_NUMBA:
        return hermite_sum_numba(coef, x)
    return hermite_sum_numpy(coef, x)


def hermite_log_sum(log_abs, phase, x, drop_gaussian=False):
    """(log|f(x)|, arg f(x)) for f = sum exp(log_abs + i phase) h_n.

    With ``drop_gaussian`` the factor ``exp(-x^2/2)`` is left out, i.e. the
    result is ``log|f(x) exp(x^2/2)|``; this avoids cancellation when the
    caller adds ``x^2/2`` back for large ``x``.
    """
    la, ph, x = _f64(log_abs), _f64(phase), _f64(x)
    gauss = 0.0 if drop_gaussian else 1.0
    if USE_NUMBA:
        return hermite_log_sum_numba(la, ph, x, gauss)
    return hermite_log_sum_numpy(la, ph, x, gauss)


def grid_sup(s, phi, t):
    """max_i (s_i t_j - phi_i) and the first maximising index, for each t_j."""
    s, phi, t = _f64(s), _f64(phi), _f64(t)
    if USE_NUMBA:
        return grid_sup_numba(s, phi, t)
    return grid_sup_numpy(s, phi, t)


def series_log_eval(log_abs, phase, z):
    """(log|F(z)|, arg F(z)) for F(z) = sum exp(log_abs + i phase) z^n."""
    la, ph = _f64(log_abs), _f64(phase)
    z = np.ascontiguousarray(z, dtype=np.complex128)
    if USE_NUMBA:
        return series_log_eval_numba(la, ph, z)
    return series_log_eval_numpy(la, ph, z)


def dft_sum(x, wf, xi):
    """sum_j wf_j exp(-i x_j xi_k) for each xi_k."""
    x, xi = _f64(x), _f64(xi)
    wf = np.ascontiguousarray(wf, dtype=np.complex128)
    if USE_NUMBA:
        return dft_sum_numba(x, wf, xi)
    return dft_sum_numpy(x, wf, xi)
