"""Monotone bracketing and bisection helpers used throughout the package.

All solvers here assume positive arguments and work in log coordinates, so
they are robust across many decades.  ``solve_increasing`` is vectorized:
one call solves fn(t) = y for a whole array of targets at once, which keeps
conjugation and norm evaluation fast without per-point Python loops.
"""

import numpy as np


def expand_upper(fn, target, start=1.0, cap=None, grow=4.0):
    """Smallest probe t (geometric expansion) with fn(t) >= target.

    Returns the bracket endpoint, or None if the cap is reached first.
    """
    t = float(start)
    cap = np.inf if cap is None else float(cap)
    for _ in range(600):
        with np.errstate(over="ignore", invalid="ignore"):
            v = fn(t)
        if np.isnan(v):
            return None
        if v >= target:
            return t
        if t >= cap:
            return None
        t = min(t * grow, cap)
    return None


def expand_lower(fn, target, start=1.0, floor=1e-280, shrink=4.0):
    """Largest probe t (geometric shrinking) with fn(t) <= target, or None."""
    t = float(start)
    for _ in range(600):
        v = fn(t)
        if v <= target:
            return t
        if t <= floor:
            return None
        t = max(t / shrink, floor)
    return None


def solve_increasing(fn, targets, lo, hi, iters=80):
    """Solve fn(t) = target for nondecreasing fn by log-space bisection.

    ``targets`` may be a scalar or an array; the answer matches its shape.
    ``lo``/``hi`` must bracket every target: fn(lo) <= targets <= fn(hi).
    Jump discontinuities are fine; the iteration converges to the crossing.
    """
    t_arr = np.asarray(targets, dtype=float)
    scalar = t_arr.ndim == 0
    t_arr = np.atleast_1d(t_arr)
    # log coordinates: geometric midpoints without overflow near float max
    lo_a = np.full(t_arr.shape, np.log(float(lo)))
    hi_a = np.full(t_arr.shape, np.log(float(hi)))
    for _ in range(iters):
        mid = 0.5 * (lo_a + hi_a)
        with np.errstate(over="ignore", invalid="ignore"):
            val = fn(np.exp(mid))
        val = np.asarray(val, dtype=float)
        high = ~(val < t_arr)  # treat nan/inf as "already past the target"
        hi_a = np.where(high, mid, hi_a)
        lo_a = np.where(high, lo_a, mid)
    out = np.exp(0.5 * (lo_a + hi_a))
    return float(out[0]) if scalar else out


def bisect_root(fn, lo, hi, iters=200, rtol=1e-14):
    """Scalar bisection for fn with fn(lo) and fn(hi) of opposite sign."""
    flo = fn(lo)
    if flo == 0.0:
        return lo
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0 or (hi - lo) <= rtol * abs(mid):
            return mid
        if (fm > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_INV_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def golden_max(fn, lo, hi, iters=200):
    """Maximize a unimodal fn on [lo, hi] in log coordinates; returns (t, fn(t))."""
    a, b = np.log(lo), np.log(hi)
    c = b - _INV_GOLDEN * (b - a)
    d = a + _INV_GOLDEN * (b - a)
    fc, fd = fn(np.exp(c)), fn(np.exp(d))
    for _ in range(iters):
        if b - a < 1e-14:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_GOLDEN * (b - a)
            fc = fn(np.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INV_GOLDEN * (b - a)
            fd = fn(np.exp(d))
    t = np.exp(0.5 * (a + b))
    return t, fn(t)


def log_slope(x, y):
    """Least-squares slope of log(y) against log(x); both arrays positive."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])
