"""Calculus of N-functions: convex growth functions B with B(t)/t -> 0 at the
origin and B(t)/t -> infinity at infinity.

The module provides the built-in growth families, Legendre-type conjugation,
inversion, doubling (Delta-2) diagnostics, growth-index estimates, domination
tests, and the piecewise construction of a polynomially trapped function whose
doubling ratios are unbounded.

Instances are immutable and hold no hidden state, so they are safe to share
across threads and to reuse between reports.
"""

import math

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from . import roots
from .errors import DomainCapExceeded, InvalidExponents, SupremumOutOfRange

POLY_CAP = 1.0e12
EXP_CAP = 700.0
# Kinds growing like t*log t stay well inside float range far beyond the
# polynomial default; the larger cap is needed to observe their lower growth
# index approaching 1.
LOGLIN_CAP = 1.0e304

_FD_STEP = 1e-6


def _match_shape(out, arr):
    """Return a float for 0-d input, an array of the input's shape otherwise."""
    out = np.asarray(out, dtype=float)
    if arr.ndim == 0:
        return float(out.reshape(-1)[0])
    return out.reshape(arr.shape)


class NFunction:
    """A convex increasing growth function with B(0) = 0.

    Evaluation, differentiation, and inversion accept scalars or numpy
    arrays.  ``domain_cap`` is the largest argument at which evaluation is
    numerically trusted; beyond it :class:`DomainCapExceeded` is raised.
    Validation of the N-function axioms is a separate concern (see
    :func:`check_nfunction`), so intentionally degenerate instances can be
    built for experiments.
    """

    def __init__(self, kind, eval_fn, derivative_fn=None, second_derivative_fn=None,
                 inverse_fn=None, domain_cap=POLY_CAP, params=None):
        self.kind = kind
        self._eval = eval_fn
        self._derivative = derivative_fn
        self._second = second_derivative_fn
        self._inverse = inverse_fn
        self.domain_cap = float(domain_cap)
        self.params = dict(params or {})
        self._cap_error = DomainCapExceeded

    def __repr__(self):
        keys = {k: v for k, v in self.params.items() if np.isscalar(v)}
        return f"NFunction(kind={self.kind!r}, params={keys}, cap={self.domain_cap:g})"

    def _check_domain(self, t):
        if np.any(t < 0):
            raise ValueError(f"{self.kind}: negative argument")
        if np.any(t > self.domain_cap * (1 + 1e-9)):
            tmax = float(np.max(t))
            raise self._cap_error(
                f"{self.kind}: argument {tmax:.6g} exceeds domain cap {self.domain_cap:.6g}")

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        self._check_domain(arr)
        return _match_shape(self._eval(np.minimum(arr, self.domain_cap)), arr)

    @property
    def has_closed_derivative(self):
        return self._derivative is not None

    def derivative(self, t):
        """dB/dt, closed-form where available, else a central difference."""
        arr = np.asarray(t, dtype=float)
        self._check_domain(arr)
        if self._derivative is not None:
            return _match_shape(self._derivative(np.minimum(arr, self.domain_cap)), arr)
        return _match_shape(self._fd_derivative(np.atleast_1d(arr).copy()), arr)

    def _fd_derivative(self, t):
        t = np.minimum(t, self.domain_cap / (1 + 2 * _FD_STEP))
        hi = t * (1 + _FD_STEP)
        lo = t * (1 - _FD_STEP)
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = (self._eval(hi[pos]) - self._eval(lo[pos])) / (2 * t[pos] * _FD_STEP)
        return out

    def second_derivative(self, t):
        arr = np.asarray(t, dtype=float)
        self._check_domain(arr)
        if self._second is not None:
            return _match_shape(self._second(np.minimum(arr, self.domain_cap)), arr)
        flat = np.atleast_1d(arr).astype(float)
        flat = np.minimum(flat, self.domain_cap / (1 + 2 * _FD_STEP))
        hi = flat * (1 + _FD_STEP)
        lo = flat * (1 - _FD_STEP)
        out = np.zeros_like(flat)
        pos = flat > 0
        out[pos] = (self.derivative(hi[pos]) - self.derivative(lo[pos])) / (2 * flat[pos] * _FD_STEP)
        return _match_shape(out, arr)

    def inverse(self, y):
        """Solve B(t) = y for t >= 0 to relative tolerance 1e-10."""
        arr = np.asarray(y, dtype=float)
        if np.any(arr < 0):
            raise ValueError(f"{self.kind}: inverse of negative value")
        cap_val = self(self.domain_cap)
        if np.any(arr > cap_val * (1 + 1e-9)):
            raise DomainCapExceeded(
                f"{self.kind}: inverse target {np.max(arr):.6g} exceeds B(domain_cap)={cap_val:.6g}")
        if self._inverse is not None:
            return _match_shape(self._inverse(np.minimum(arr, cap_val)), arr)
        flat = np.atleast_1d(arr).astype(float)
        out = np.zeros_like(flat)
        pos = flat > 0
        if np.any(pos):
            out[pos] = roots.solve_increasing(self, flat[pos], 1e-280, self.domain_cap)
        return _match_shape(out, arr)

    def slope_cap(self):
        """Largest trusted slope value: B'(t) at the domain cap, clipped to float range."""
        t_edge = self.domain_cap * (1 - 1e-12)
        with np.errstate(over="ignore", invalid="ignore"):
            s = float(self.derivative(t_edge))
        if np.isfinite(s):
            return s
        return 1e300


def evaluate(B, t):
    """B(t); exact for closed-form kinds, monotone-interpolated for tables."""
    return B(t)


def inverse(B, y):
    """Inverse of the growth function; see :meth:`NFunction.inverse`."""
    return B.inverse(y)


# ---------------------------------------------------------------------------
# built-in kinds


def power(p, scale=1.0):
    """B(t) = scale * t**p with p > 1."""
    if p <= 1:
        raise InvalidExponents(f"power kind needs p > 1, got {p}")
    p = float(p)
    c = float(scale)
    return NFunction(
        "power",
        lambda t: c * t ** p,
        derivative_fn=lambda t: c * p * t ** (p - 1),
        second_derivative_fn=lambda t: c * p * (p - 1) * np.where(t > 0, t, 1.0) ** (p - 2) * (t > 0),
        inverse_fn=lambda y: (y / c) ** (1.0 / p),
        domain_cap=POLY_CAP,
        params={"p": p, "scale": c},
    )


def zygmund(p, beta):
    """B(t) = t**p * log(1+t)**beta, the power-log scale."""
    if p <= 1 or beta < 0:
        raise InvalidExponents(f"zygmund kind needs p > 1 and beta >= 0, got ({p}, {beta})")
    p = float(p)
    b = float(beta)

    def _eval(t):
        L = np.log1p(t)
        return t ** p * L ** b

    def _deriv(t):
        t = np.asarray(t, dtype=float)
        L = np.log1p(t)
        out = np.zeros_like(t)
        pos = t > 0
        tp, Lp = t[pos], L[pos]
        out[pos] = p * tp ** (p - 1) * Lp ** b + b * tp ** p * Lp ** (b - 1) / (1 + tp)
        return out

    def _second(t):
        t = np.asarray(t, dtype=float)
        L = np.log1p(t)
        out = np.zeros_like(t)
        pos = t > 0
        tp, Lp = t[pos], L[pos]
        one = 1 + tp
        term = p * (p - 1) * tp ** (p - 2) * Lp ** b
        term = term + 2 * p * b * tp ** (p - 1) * Lp ** (b - 1) / one
        term = term + b * (b - 1) * tp ** p * Lp ** (b - 2) / one ** 2
        term = term - b * tp ** p * Lp ** (b - 1) / one ** 2
        out[pos] = term
        return out

    return NFunction("zygmund", _eval, _deriv, _second, domain_cap=POLY_CAP,
                     params={"p": p, "beta": b})


def llogl():
    """B(s) = (1+s) log(1+s) - s, the L log L growth function."""
    return NFunction(
        "llogl",
        lambda s: (1 + s) * np.log1p(s) - s,
        derivative_fn=np.log1p,
        second_derivative_fn=lambda s: 1.0 / (1 + s),
        domain_cap=LOGLIN_CAP,
        params={},
    )


def exp_conjugate():
    """B(s) = exp(s) - s - 1, the conjugate partner of the L log L function."""
    return NFunction(
        "exp_conjugate",
        lambda s: np.expm1(s) - s,
        derivative_fn=np.expm1,
        second_derivative_fn=np.exp,
        domain_cap=EXP_CAP,
        params={},
    )


def t_exp_t():
    """B(t) = t * exp(t); grows faster than every power, not doubling."""
    return NFunction(
        "t_exp_t",
        lambda t: t * np.exp(t),
        derivative_fn=lambda t: (1 + t) * np.exp(t),
        second_derivative_fn=lambda t: (2 + t) * np.exp(t),
        domain_cap=EXP_CAP,
        params={},
    )


def tabulated(knots_t, knots_y, domain_cap=None):
    """Monotone-cubic interpolant through positive increasing samples.

    Below the first knot the table extrapolates as the power law fitted to
    the first two knots (so the value still vanishes at 0); above the last
    knot evaluation raises :class:`DomainCapExceeded`.
    """
    kt = np.asarray(knots_t, dtype=float)
    ky = np.asarray(knots_y, dtype=float)
    if kt.ndim != 1 or kt.shape != ky.shape or kt.size < 4:
        raise ValueError("tabulated kind needs matching 1-d knot arrays, at least 4 points")
    if np.any(kt <= 0) or np.any(ky <= 0):
        raise ValueError("tabulated knots must be strictly positive")
    if np.any(np.diff(kt) <= 0) or np.any(np.diff(ky) <= 0):
        raise ValueError("tabulated knots must be strictly increasing")
    lx, ly = np.log(kt), np.log(ky)
    spline = PchipInterpolator(lx, ly, extrapolate=False)
    dspline = spline.derivative()
    head_slope = (ly[1] - ly[0]) / (lx[1] - lx[0])
    cap = float(kt[-1]) if domain_cap is None else float(domain_cap)

    def _logeval(x):
        out = np.empty_like(x)
        below = x < lx[0]
        out[~below] = spline(np.minimum(x[~below], lx[-1]))
        out[below] = ly[0] + head_slope * (x[below] - lx[0])
        return out

    def _eval(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = np.exp(_logeval(np.log(t[pos])))
        return out

    def _deriv(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.zeros_like(t)
        pos = t > 0
        x = np.log(t[pos])
        slope = np.where(x < lx[0], head_slope, dspline(np.clip(x, lx[0], lx[-1])))
        out[pos] = np.exp(_logeval(x)) * slope / t[pos]
        return out

    return NFunction("tabulated", _eval, _deriv, domain_cap=cap,
                     params={"knots_t": kt, "knots_y": ky})


def tabulate(B, n=512, lo=1e-6, hi=None):
    """Sample B on a log grid and return the Tabulated version."""
    hi = B.domain_cap if hi is None else hi
    ts = np.geomspace(lo, hi, n)
    return tabulated(ts, B(ts), domain_cap=hi)


# ---------------------------------------------------------------------------
# piecewise construction: polynomially trapped but with unbounded doubling ratios


class PathologicalSegments:
    """Chord segments of the trapped construction; one entry per excursion."""

    def __init__(self, k, a, b, c, m):
        self.k = np.asarray(k, dtype=int)
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.c = np.asarray(c, dtype=float)  # value at the left endpoint, a**p
        self.m = np.asarray(m, dtype=float)  # chord slope

    def __len__(self):
        return len(self.k)


def _first_segment_index(p, q):
    k = max(2, math.floor(2 ** p) + 1)
    while not (k > 2 ** p and ((k - 1) / q) ** (1.0 / k) <= 2.0 ** (q - p)):
        k += 1
        if k > 10_000:
            raise InvalidExponents(f"no admissible first index for (p, q)=({p}, {q})")
    return k


def pathological_nfunction(p, q, domain_cap=POLY_CAP):
    """Growth function trapped between t**p and t**q that is not doubling.

    Outside a sparse sequence of intervals (a_i, b_i) the function equals
    t**p; inside each interval it follows a steep chord chosen so that
    B(2 a_i) = k_i * B(a_i) with k_i -> infinity.  Segments are generated up
    to ``domain_cap``.
    """
    if not (p > 1 and q > p):
        raise InvalidExponents(f"need 1 < p < q, got ({p}, {q})")
    p, q = float(p), float(q)
    ks, aa, bb, cc, mm = [], [], [], [], []
    k = _first_segment_index(p, q)
    while 2.0 ** k <= domain_cap:
        a = 2.0 ** k
        c = a ** p
        m = 2.0 ** ((p - 1) * k) * (k - 1)
        # admissibility of the index (kept in sync with the construction)
        assert k > 2 ** p and ((k - 1) / q) ** (1.0 / k) <= 2.0 ** (q - p)
        assert m < q * a ** (q - 1), "chord must stay under the upper trap"

        def chord_gap(t, c=c, m=m, a=a):
            return c + m * (t - a) - t ** p

        lo = 2 * a
        assert chord_gap(lo) > 0, "chord must lie above t**p at 2a"
        hi = 4 * a
        while chord_gap(hi) > 0:
            hi *= 2
            if hi > 1e290:
                raise InvalidExponents("chord never returns to the lower trap")
        b = brentq(chord_gap, lo, hi, xtol=1e-300, rtol=8.9e-16)
        assert 2 * a < b
        ks.append(k)
        aa.append(a)
        bb.append(b)
        cc.append(c)
        mm.append(m)
        # least k with 2^k >= b; a root sitting numerically on a power of two
        # is snapped so rounding noise cannot skip a level
        lg = math.log2(b)
        k_next = round(lg) if abs(lg - round(lg)) < 1e-9 else math.ceil(lg)
        k = max(k + 1, k_next)
    seg = PathologicalSegments(ks, aa, bb, cc, mm)

    def _branch(t):
        idx = np.searchsorted(seg.a, t, side="right") - 1
        safe = np.clip(idx, 0, len(seg) - 1)
        on_chord = (idx >= 0) & (t < seg.b[safe])
        return safe, on_chord

    def _eval(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        idx, on_chord = _branch(t)
        out = t ** p
        out[on_chord] = seg.c[idx[on_chord]] + seg.m[idx[on_chord]] * (t[on_chord] - seg.a[idx[on_chord]])
        return out

    def _deriv(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        idx, on_chord = _branch(t)
        out = p * t ** (p - 1)
        out[on_chord] = seg.m[idx[on_chord]]
        return out

    def _inv(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        idx = np.searchsorted(seg.c, y, side="right") - 1
        safe = np.clip(idx, 0, len(seg) - 1)
        on_chord = (idx >= 0) & (y < seg.b[safe] ** p)
        out = y ** (1.0 / p)
        out[on_chord] = seg.a[idx[on_chord]] + (y[on_chord] - seg.c[idx[on_chord]]) / seg.m[idx[on_chord]]
        return out

    return NFunction("pathological", _eval, _deriv, inverse_fn=_inv,
                     domain_cap=domain_cap,
                     params={"p": p, "q": q, "segments": seg})


# ---------------------------------------------------------------------------
# conjugation


def _maximizer_by_slope(B, s):
    """Solve B'(t) = s (vectorized); the argmax of t*s - B(t) for convex B."""
    s = np.asarray(s, dtype=float)
    smax = float(np.max(s))
    hi = roots.expand_upper(B.derivative, smax, start=1.0, cap=B.domain_cap * (1 - 1e-12))
    if hi is None:
        raise SupremumOutOfRange(
            f"slope {smax:.6g} not reached by {B.kind}' below its domain cap")
    return roots.solve_increasing(B.derivative, s, 1e-280, hi)


def _maximizer_by_golden(B, s_scalar):
    cap = B.domain_cap * (1 - 1e-12)

    def neg_gap(t):
        return t * s_scalar - B(t)

    # expand until the objective starts decreasing, i.e. we passed the argmax
    hi = 1.0
    last = neg_gap(hi)
    for _ in range(600):
        if hi >= cap:
            break
        nxt = min(hi * 4, cap)
        val = neg_gap(nxt)
        if val < last:
            hi = nxt
            break
        hi, last = nxt, val
    else:
        raise SupremumOutOfRange(f"no interior maximizer below cap for slope {s_scalar:.6g}")
    if hi >= cap and neg_gap(cap * 0.999999) > neg_gap(cap * 0.99999):
        raise SupremumOutOfRange(f"maximizer at the domain cap for slope {s_scalar:.6g}")
    t, _ = roots.golden_max(neg_gap, 1e-280, hi)
    return t


def conjugate(B):
    """Legendre-type conjugate: conj(s) = sup over t > 0 of (t*s - B(t)).

    When a derivative is available the supremum is located by a monotone
    bracketing solve of B'(t) = s; otherwise a golden-section search on the
    concave objective is used.  The result is a lazily evaluated NFunction
    whose own derivative is the maximizer map (envelope identity), so double
    conjugation stays accurate.  Conjugates of tabulated kinds are returned
    as tabulated kinds.  The result is cached on the instance.
    """
    cached = getattr(B, "_conjugate_cache", None)
    if cached is not None:
        return cached
    scap = B.slope_cap()

    use_slope = B._derivative is not None

    def conj_eval(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if np.any(s > scap * (1 + 1e-9)):
            raise SupremumOutOfRange(
                f"conjugate of {B.kind}: slope {np.max(s):.6g} beyond trusted range {scap:.6g}")
        out = np.zeros_like(s)
        pos = s > 0
        if np.any(pos):
            if use_slope:
                tstar = _maximizer_by_slope(B, s[pos])
            else:
                tstar = np.array([_maximizer_by_golden(B, float(v)) for v in s[pos]])
            with np.errstate(over="ignore"):
                out[pos] = np.maximum(s[pos] * tstar - B(tstar), 0.0)
        return out

    def conj_deriv(s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        out = np.zeros_like(s)
        pos = s > 0
        if np.any(pos):
            if use_slope:
                out[pos] = _maximizer_by_slope(B, s[pos])
            else:
                out[pos] = np.array([_maximizer_by_golden(B, float(v)) for v in s[pos]])
        return out

    if B.kind == "tabulated":
        t_lo = float(B.params["knots_t"][0])
        s_lo = max(float(B.derivative(t_lo)), 1e-290)
        s_knots = np.geomspace(s_lo * 1.0001, scap * 0.9999, 512)
        vals = conj_eval(s_knots)
        keep = vals > 0
        result = tabulated(s_knots[keep], vals[keep], domain_cap=float(s_knots[keep][-1]))
        B._conjugate_cache = result
        return result

    second = None
    if B._second is not None and use_slope:
        def second(s):  # noqa: E731 - closure, kept readable
            s = np.atleast_1d(np.asarray(s, dtype=float))
            out = np.zeros_like(s)
            pos = s > 0
            if np.any(pos):
                tstar = _maximizer_by_slope(B, s[pos])
                curv = B.second_derivative(tstar)
                out[pos] = np.where(curv > 0, 1.0 / np.maximum(curv, 1e-300), 0.0)
            return out

    out = NFunction(f"conjugate({B.kind})", conj_eval, conj_deriv, second,
                    domain_cap=scap, params={"base_kind": B.kind})
    # arguments beyond the trusted slope range are a supremum failure, not a
    # plain evaluation overflow
    out._cap_error = SupremumOutOfRange
    B._conjugate_cache = out
    return out


def fenchel_young_check(B, pairs):
    """Max violation of |xi.eta| <= B(|xi|) + conj(B)(|eta|) over sample pairs.

    ``pairs`` is an iterable of (xi, eta) vectors (or scalars).  Returns a
    dict with the worst violation and the evidence table.
    """
    Bt = conjugate(B)
    rows = []
    worst = -np.inf
    for xi, eta in pairs:
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        eta = np.atleast_1d(np.asarray(eta, dtype=float))
        lhs = abs(float(np.dot(xi, eta)))
        rhs = float(B(np.linalg.norm(xi)) + Bt(np.linalg.norm(eta)))
        violation = lhs - rhs
        worst = max(worst, violation)
        rows.append({"lhs": lhs, "rhs": rhs, "violation": violation})
    return {"max_violation": worst, "rows": rows}


# ---------------------------------------------------------------------------
# growth diagnostics


def delta2_stats(B, s_lo=1e-3, s_hi=None, n=200, extra_points=None):
    """Doubling ratios B(2s)/B(s) on a geometric grid.

    Bounded ratios are numeric evidence for the doubling property, not a
    proof; the ``doubling_evidence`` flag encodes the observed trend.
    """
    cap = B.domain_cap
    s_hi = cap / 2 if s_hi is None else s_hi
    if s_hi > cap / 2:
        raise DomainCapExceeded(f"need s_hi <= cap/2 = {cap / 2:.6g}")
    grid = np.geomspace(s_lo, s_hi, n)
    if extra_points is not None:
        pts = np.asarray(extra_points, dtype=float)
        grid = np.unique(np.concatenate([grid, pts[(pts >= s_lo) & (pts <= s_hi)]]))
    ratios = B(2 * grid) / B(grid)
    half = len(ratios) // 2
    tail_growth = float(np.max(ratios[half:]) / np.max(ratios[:half]))
    bounded = tail_growth < 2.0
    return {
        "grid": grid,
        "ratios": ratios,
        "ratio_max": float(np.max(ratios)),
        "tail_growth": tail_growth,
        "doubling_evidence": bounded,
    }


def simonenko_indices(B, t_lo=1e-3, t_hi=None, n=400, extra_points=None):
    """Estimated lower/upper growth indices: inf and sup of t B'(t)/B(t)."""
    t_hi = B.domain_cap * (1 - 1e-9) if t_hi is None else t_hi
    grid = np.geomspace(t_lo, t_hi, n)
    if extra_points is not None:
        pts = np.asarray(extra_points, dtype=float)
        grid = np.unique(np.concatenate([grid, pts[(pts >= t_lo) & (pts <= t_hi)]]))
    ratio = grid * B.derivative(grid) / B(grid)
    return {
        "grid": grid,
        "ratio": ratio,
        "lower": float(np.min(ratio)),
        "upper": float(np.max(ratio)),
    }


def dominates_much(P, B, eps_grid=(0.25, 0.5, 1.0, 2.0), tmax=None, n=60,
                   tail_tol=1e-3):
    """Numeric evidence that P grows essentially slower than B.

    For each epsilon the ratio P(t)/B(eps*t) is traced on a geometric grid up
    to ``tmax`` (default: the largest trusted argument); the verdict requires
    every tail to be decreasing and to end below ``tail_tol``.  Returns
    (verdict, evidence).
    """
    evidence = []
    verdict = True
    for eps in eps_grid:
        cap = min(P.domain_cap, B.domain_cap / eps)
        hi = cap * (1 - 1e-9) if tmax is None else min(tmax, cap * (1 - 1e-9))
        grid = np.geomspace(1.0, hi, n)
        with np.errstate(over="ignore"):
            ratio = P(grid) / B(eps * grid)
        tail = ratio[-8:]
        decreasing = bool(np.all(np.diff(tail) <= 0))
        small = bool(ratio[-1] < tail_tol)
        verdict = verdict and decreasing and small
        evidence.append({"eps": float(eps), "grid": grid, "ratio": ratio,
                         "tail_decreasing": decreasing, "tail_below_tol": small})
    return verdict, evidence


# ---------------------------------------------------------------------------
# validation and serialization


def check_nfunction(B, t_lo=1e-6, t_hi=None, n=80, tol=1e-7):
    """Sampled check of the N-function axioms; returns a dict of findings."""
    t_hi = B.domain_cap * (1 - 1e-9) if t_hi is None else t_hi
    grid = np.geomspace(t_lo, t_hi, n)
    vals = B(grid)
    mid = 0.5 * grid[:-1] + 0.5 * grid[1:]
    convex_gap = B(mid) - 0.5 * (vals[:-1] + vals[1:])
    # B(t)/t must decay toward 0 near the origin and keep rising at the far
    # end; over a finite window the honest witness is quotient growth by a
    # definite factor on each side of a reference point.
    t_ref = min(1.0, t_hi)
    small = np.geomspace(max(min(t_lo, 1e-10), 1e-280), t_ref, 16)
    big = np.geomspace(t_ref, t_hi, 16)
    quots_small = B(small) / small
    quots_big = B(big) / big
    return {
        "zero_at_zero": abs(B(0.0)) <= tol,
        "strictly_increasing": bool(np.all(np.diff(vals) > 0)),
        "midpoint_convex": bool(np.all(convex_gap <= tol * np.maximum(vals[1:], 1.0))),
        "superlinear_origin": bool(2 * quots_small[0] <= quots_small[-1] + tol),
        "superlinear_infinity": bool(quots_big[-1] >= 2 * quots_big[0]),
        "max_convex_gap": float(np.max(convex_gap / np.maximum(vals[1:], 1e-300))),
    }


_FACTORY = {
    "power": lambda params: power(params["p"], params.get("scale", 1.0)),
    "zygmund": lambda params: zygmund(params["p"], params["beta"]),
    "llogl": lambda params: llogl(),
    "exp_conjugate": lambda params: exp_conjugate(),
    "t_exp_t": lambda params: t_exp_t(),
    "pathological": lambda params: pathological_nfunction(
        params["p"], params["q"], params.get("domain_cap", POLY_CAP)),
    "tabulated": lambda params: tabulated(params["knots_t"], params["knots_y"],
                                          params.get("domain_cap")),
}


def from_spec(spec):
    """Build an NFunction from its JSON-style description {kind, params}."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError("growth function spec must be a dict with a 'kind' key")
    kind = spec["kind"]
    if kind not in _FACTORY:
        raise ValueError(f"unknown growth function kind {kind!r}; "
                         f"expected one of {sorted(_FACTORY)}")
    params = spec.get("params", {})
    try:
        return _FACTORY[kind](params)
    except KeyError as exc:
        raise ValueError(f"kind {kind!r} is missing parameter {exc}") from exc


def to_spec(B):
    """JSON-style description of a built-in NFunction."""
    params = {}
    for key, val in B.params.items():
        if np.isscalar(val):
            params[key] = float(val) if isinstance(val, (float, np.floating)) else val
        elif isinstance(val, np.ndarray):
            params[key] = val.tolist()
    return {"kind": B.kind, "params": params}
