"""Growth classification at infinity, the optimal-embedding transform of a
growth function, and the level-set regularity targets derived from it.

The central object is the tail integral

    I(s) = integral of (t / B(t))^(1/(N-1)) over (0, s),

whose behavior as s grows separates two regimes: slow growth (divergent tail,
Marcinkiewicz-type regularity) and fast growth (convergent tail, bounded
solutions).  The transform H_N = I^(1/N'), the transformed growth function
B_N, and the companion phi_N = H_N^(N') are tabulated on a fixed log grid and
exposed as tabulated growth functions.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import roots
from .errors import BoundaryNotZero, UndeterminedGrowth
from .nfunction import NFunction, tabulated

SLOW = "Slow"
FAST = "Fast"
UNDETERMINED = "Undetermined"

TABLE_KNOTS = 512
TABLE_START = 1e-6
# dyadic increment ratio thresholds: decaying below FAST_RATIO means a
# convergent tail, growth above SLOW_RATIO means a divergent one; the band
# between them (notably exact borderlines with ratio 1) stays Undetermined
FAST_RATIO = 0.9
SLOW_RATIO = 1.03
NEGLIGIBLE_INCREMENT = 1e-250


def normalize_origin(B):
    """Replace B below t = 1 by the linear segment t * B(1).

    This keeps values and monotonicity while making the origin tail integral
    finite for every growth function; the output has a kink at t = 1 (noted
    in ``params``), which is harmless for all integral computations here.
    """
    b1 = float(B(1.0))

    def _eval(t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= 1.0, t * b1, B(np.maximum(t, 1.0)))

    def _deriv(t):
        t = np.asarray(t, dtype=float)
        return np.where(t < 1.0, b1, B.derivative(np.maximum(t, 1.0)))

    def _inverse(y):
        y = np.asarray(y, dtype=float)
        return np.where(y <= b1, y / b1, B.inverse(np.maximum(y, b1)))

    return NFunction(f"origin_normalized({B.kind})", _eval, _deriv,
                     inverse_fn=_inverse, domain_cap=B.domain_cap,
                     params={"kink_at_one": True, "base_kind": B.kind})


def origin_exponent(B, t_probe=1e-6):
    """Local log-log slope of B near the origin."""
    return roots.log_slope(np.array([t_probe, 2 * t_probe]),
                           np.array([B(t_probe), B(2 * t_probe)]))


def needs_origin_normalization(B, N):
    """True when the origin integral of (t/B(t))^(1/(N-1)) diverges.

    The integrand behaves like t^((1-a)/(N-1)) with a the local growth
    exponent at 0; the integral diverges there exactly when a >= N.
    """
    return origin_exponent(B) >= N - 1e-2


def tail_integrand(B, N):
    def g(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        pos = t > 0
        out[pos] = (t[pos] / B(t[pos])) ** (1.0 / (N - 1))
        return out if out.ndim else float(out)
    return g


def growth_class(B, N, override=None):
    """Classify tail growth from dyadic increments of the tail integral.

    Returns (label, evidence).  The increments D_j = I(2^(j+1)) - I(2^j) are
    computed by adaptive quadrature; the label is Fast when the last five
    ratios D_{j+1}/D_j all fall below 0.9, Slow when they all exceed 1.03,
    and Undetermined otherwise.  ``override`` short-circuits the heuristic.
    """
    if N < 2:
        raise ValueError(f"dimension must be >= 2, got {N}")
    if override is not None:
        if override not in (SLOW, FAST):
            raise ValueError(f"override must be {SLOW!r} or {FAST!r}")
        return override, {"override": True}
    g = tail_integrand(B, N)
    j_top = int(np.floor(np.log2(B.domain_cap * (1 - 1e-9))))
    exponents = np.arange(0, j_top)
    increments = []
    for j in exponents:
        val, _ = quad(g, 2.0 ** j, 2.0 ** (j + 1), limit=200)
        increments.append(val)
        if val < NEGLIGIBLE_INCREMENT:
            break
    increments = np.asarray(increments)
    evidence = {"T": 2.0 ** exponents[: len(increments)], "increments": increments}
    if increments[-1] < NEGLIGIBLE_INCREMENT:
        evidence["ratios"] = np.array([])
        return FAST, evidence
    ratios = increments[1:] / increments[:-1]
    evidence["ratios"] = ratios
    tail = ratios[-5:]
    if len(tail) < 5:
        return UNDETERMINED, evidence
    if np.all(tail < FAST_RATIO):
        return FAST, evidence
    if np.all(tail > SLOW_RATIO):
        return SLOW, evidence
    return UNDETERMINED, evidence


@dataclass(frozen=True)
class EmbeddingData:
    """The embedding transform of a growth function in dimension N."""

    N: int
    Nprime: float
    growth_class: str
    H_N: NFunction
    B_N: NFunction
    phi_N: NFunction
    base: NFunction = field(repr=False)
    normalized: bool = False
    knots_s: np.ndarray = field(repr=False, default=None)
    knots_H: np.ndarray = field(repr=False, default=None)


def _head_integral(g, s0, B, N):
    """Integral of g over (0, s0) via the local power approximation.

    Near the origin g(t) ~ g(s0) (t/s0)^((1-a)/(N-1)) with a the local
    exponent of B, so the head integrates to g(s0) s0 (N-1)/(N-a); this is
    exact for power-type origins and avoids quadrature on the singular end.
    """
    a = roots.log_slope(np.array([s0, 1.02 * s0]), np.array([B(s0), B(1.02 * s0)]))
    if a >= N - 1e-9:
        raise UndeterminedGrowth(
            f"origin integral diverges (local exponent {a:.3f} >= N={N}); "
            "normalize the origin first")
    return float(g(s0)) * s0 * (N - 1.0) / (N - a)


def embedding_functions(B, N, override_class=None):
    """Tabulate H_N, B_N, phi_N on 512 log knots; classify growth first.

    The origin is linearized (see :func:`normalize_origin`) only when the
    origin integral would diverge, mirroring the substitution argument that
    the transform's origin behavior can be bypassed.
    """
    if N < 2:
        raise ValueError(f"dimension must be >= 2, got {N}")
    klass, _ = growth_class(B, N, override=override_class)
    if klass == UNDETERMINED:
        raise UndeterminedGrowth(
            "growth classification is inconclusive; pass override_class")
    base = B
    normalized = False
    if needs_origin_normalization(B, N):
        base = normalize_origin(B)
        normalized = True
    nprime = N / (N - 1.0)
    g = tail_integrand(base, N)
    s = np.geomspace(TABLE_START, base.domain_cap * (1 - 1e-9), TABLE_KNOTS)
    pieces = np.empty(TABLE_KNOTS)
    pieces[0] = _head_integral(g, s[0], base, N)
    for i in range(TABLE_KNOTS - 1):
        val, _ = quad(g, s[i], s[i + 1], limit=200)
        pieces[i + 1] = val
    integral = np.cumsum(pieces)
    H_vals = integral ** (1.0 / nprime)
    # for fast kinds the integral saturates within double precision; keep the
    # strictly increasing prefix of the table (the plateau carries no
    # information the last retained knot does not)
    rising = np.diff(H_vals) > 0
    if not rising.all():
        stop = int(np.argmin(rising)) + 1
        if stop < 8:
            raise UndeterminedGrowth("transform table is not strictly increasing")
        s, H_vals = s[:stop], H_vals[:stop]
    H_N = tabulated(s, H_vals, domain_cap=float(s[-1]))
    B_vals = base(s)
    B_N = tabulated(H_vals, B_vals, domain_cap=float(H_vals[-1]))

    def phi_eval(x):
        return np.asarray(H_N(x), dtype=float) ** nprime

    def phi_deriv(x):
        x = np.asarray(x, dtype=float)
        return nprime * np.asarray(H_N(x), dtype=float) ** (nprime - 1) * H_N.derivative(x)

    def phi_inverse(y):
        y = np.asarray(y, dtype=float)
        return H_N.inverse(y ** (1.0 / nprime))

    phi_N = NFunction("tabulated", phi_eval, phi_deriv, inverse_fn=phi_inverse,
                      domain_cap=float(s[-1]),
                      params={"knots_t": s, "knots_y": H_vals ** nprime,
                              "derived_from": "H_N"})
    return EmbeddingData(N=N, Nprime=nprime, growth_class=klass, H_N=H_N,
                         B_N=B_N, phi_N=phi_N, base=base, normalized=normalized,
                         knots_s=s, knots_H=H_vals)


@dataclass(frozen=True)
class RegularityTargets:
    """Level-set decay targets for the solution and its gradient."""

    Phi1: object
    Psi1: object
    Phi2: object
    Psi2: object
    l_infinity: bool
    gradient_target: object
    constants: dict
    growth_class: str


def regularity_targets(B, N, K, diam_omega, embedding=None, override_class=None):
    """Build the always-defined targets (Phi1, Psi1) plus the regime pair.

    Slow regime: Phi2(r) = B_N(cbar r^((N-1)/N)) / r and Psi2 = B / phi_N.
    Fast regime: the solution target is boundedness itself and the gradient
    target is the weak space measured by B.

    Phi1(r) = (B(c1 r)/(K r))^(N'), with c1 = 1/(4 diam).  Psi1 composes the
    two tail bounds of the level-set argument: the auxiliary map phi is
    realized as phi(r) = K r Phi1(r) — the value equating the bounds — and
    Psi1(r) = B(r)/(Kbar phi^{-1}(B(r))) with Kbar = 2 max(K, K^(N')).
    """
    if K <= 0 or diam_omega <= 0:
        raise ValueError("K and diam_omega must be positive")
    nprime = N / (N - 1.0)
    c1 = 1.0 / (4.0 * diam_omega)
    kbar = 2.0 * max(K, K ** nprime)
    cbar = K ** (-1.0 / N)

    def Phi1(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        pos = r > 0
        out[pos] = (B(c1 * r[pos]) / (K * r[pos])) ** nprime
        return out if out.ndim else float(out)

    def phi_aux(r):
        r = np.asarray(r, dtype=float)
        return K * r * Phi1(r)

    def phi_aux_inverse(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.zeros_like(y)
        pos = y > 0
        if np.any(pos):
            hi = roots.expand_upper(phi_aux, float(np.max(y[pos])), start=1.0,
                                    cap=B.domain_cap / c1 * (1 - 1e-12))
            if hi is None:
                raise UndeterminedGrowth("auxiliary map not invertible in range")
            out[pos] = roots.solve_increasing(phi_aux, y[pos], 1e-280, hi)
        return out if np.asarray(y).ndim else float(out[0])

    def Psi1(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        pos = r > 0
        if np.any(pos):
            br = np.asarray(B(r[pos]), dtype=float)
            out[pos] = br / (kbar * phi_aux_inverse(br))
        return out if out.ndim else float(out)

    emb = embedding
    if emb is None:
        klass, _ = growth_class(B, N, override=override_class)
    else:
        klass = emb.growth_class
    Phi2 = Psi2 = None
    l_infinity = False
    gradient_target = None
    if klass == SLOW:
        if emb is None:
            emb = embedding_functions(B, N, override_class=klass)

        def Phi2(r, _emb=emb):
            r = np.asarray(r, dtype=float)
            out = np.zeros_like(r)
            pos = r > 0
            out[pos] = _emb.B_N(cbar * r[pos] ** ((N - 1.0) / N)) / r[pos]
            return out if out.ndim else float(out)

        def Psi2(r, _emb=emb):
            r = np.asarray(r, dtype=float)
            out = np.zeros_like(r)
            pos = r > 0
            out[pos] = B(r[pos]) / _emb.phi_N(r[pos])
            return out if out.ndim else float(out)

        gradient_target = Psi2
    elif klass == FAST:
        l_infinity = True
        gradient_target = B
    else:
        # the always-defined pair stays usable; the regime pair raises on use
        def _undetermined(_r):
            raise UndeterminedGrowth(
                "growth classification is inconclusive; rebuild the targets "
                "with override_class to use the regime-specific pair")

        Phi2 = Psi2 = _undetermined
    return RegularityTargets(Phi1=Phi1, Psi1=Psi1, Phi2=Phi2, Psi2=Psi2,
                             l_infinity=l_infinity, gradient_target=gradient_target,
                             constants={"c1": c1, "K": K, "Kbar": kbar, "cbar": cbar,
                                        "N": N, "Nprime": nprime,
                                        "diam_omega": diam_omega},
                             growth_class=klass)


# ---------------------------------------------------------------------------
# modular inequalities on sampled fields


def _require_zero_boundary(u, tol=1e-12):
    edge = np.abs(u.values[u.boundary_mask()])
    if edge.size and float(np.max(edge)) > tol:
        raise BoundaryNotZero(
            f"boundary cells reach {float(np.max(edge)):.3g} > {tol:.3g}")


def _diam(field_u):
    return field_u.extent * np.sqrt(field_u.dim)


def sobolev_poincare_check(B, u, grad_u, N):
    """Modular Sobolev inequality: lhs = (sum B^(N')(c1 |u|) m)^(1/N'),
    rhs = sum B(|grad u|) m, with c1 = 1/(4 diam).  Returns lhs, rhs, ratio.
    """
    u.same_grid(grad_u)
    _require_zero_boundary(u)
    nprime = N / (N - 1.0)
    c1 = 1.0 / (4.0 * _diam(u))
    lhs_integrand = np.asarray(B(c1 * u.magnitude()), dtype=float) ** nprime
    lhs = float(np.sum(lhs_integrand) * u.cell_measure) ** (1.0 / nprime)
    rhs = float(np.sum(B(grad_u.magnitude())) * u.cell_measure)
    ratio = 0.0 if lhs == 0.0 else (np.inf if rhs == 0.0 else lhs / rhs)
    return {"lhs": lhs, "rhs": rhs, "ratio": ratio, "c1": c1}


def poincare_check(B, u, grad_u, N):
    """Modular Poincare inequality: lhs = sum B(c1 |u|) m against the same rhs."""
    u.same_grid(grad_u)
    _require_zero_boundary(u)
    c1 = 1.0 / (4.0 * _diam(u))
    lhs = float(np.sum(B(c1 * u.magnitude())) * u.cell_measure)
    rhs = float(np.sum(B(grad_u.magnitude())) * u.cell_measure)
    ratio = 0.0 if lhs == 0.0 else (np.inf if rhs == 0.0 else lhs / rhs)
    return {"lhs": lhs, "rhs": rhs, "ratio": ratio, "c1": c1}
