"""Monotone flux operators in divergence form.

The canonical model is the potential flux A(x, z, xi) = B'(|xi|) xi / |xi|,
which is coercive with constant 1 because t B'(t) >= B(t) for every convex B
vanishing at the origin.  A bounded zero-order perturbation multiplies the
flux by 1 + theta * arctan(z) / pi, keeping coercivity and monotonicity
checkable by sampling.  Structure constants (d0 for coercivity, d for the
conjugate growth bound) are fitted numerically rather than assumed.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainCapExceeded
from .fields import SampledField
from .nfunction import NFunction, LOGLIN_CAP, conjugate, power
from .norms import modular

POTENTIAL_GRADIENT_FLUX = "potential_gradient_flux"
Z_PERTURBED_FLUX = "z_perturbed_flux"
CUSTOM_FLUX = "custom"

#: lambda grid used by the desk proxy for membership of K in the
#: closure-of-bounded-functions subspace of the conjugate Orlicz space
MEMBERSHIP_LAMBDAS = tuple(2.0 ** j for j in range(-5, 6))


@dataclass(frozen=True)
class OperatorSpec:
    """Divergence-form flux together with its structure constants.

    ``flux(x, z, xi)`` maps cell positions ``x`` (m, dim), scalar state ``z``
    (m,), and gradients ``xi`` (m, dim) to flux vectors of the same shape as
    ``xi``.  ``d0`` is the coercivity constant (flux . xi >= d0 B(|xi|)) and
    ``d`` scales the conjugate growth bound
    |flux| <= (1/(3d)) [Btilde^{-1}(B(|xi|)) + Ptilde^{-1}(B(|z|)) + K(x)].
    """

    B: NFunction
    P: NFunction
    K_field: SampledField
    d0: float
    d: float
    form: str
    flux: Callable
    strongly_monotone: bool = True
    theta: float = 0.0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.d0 <= 0 or self.d <= 0:
            raise ValueError("structure constants d0 and d must be positive")
        if self.form not in (POTENTIAL_GRADIENT_FLUX, Z_PERTURBED_FLUX, CUSTOM_FLUX):
            raise ValueError(f"unknown flux form {self.form!r}")
        if abs(self.theta) >= 1:
            raise ValueError(f"perturbation amplitude must satisfy |theta| < 1, got {self.theta}")


def _unit_and_magnitude(xi):
    xi = np.asarray(xi, dtype=float)
    squeeze = xi.ndim == 1
    mat = np.atleast_2d(xi)
    mag = np.sqrt(np.sum(mat * mat, axis=1))
    safe = np.where(mag > 0, mag, 1.0)
    unit = mat / safe[:, None]
    unit[mag == 0] = 0.0
    return mat, mag, unit, squeeze


def radial_flux_magnitude(B, mag):
    """|A| for the potential flux: B'(|xi|), with the origin mapped to 0."""
    mag = np.asarray(mag, dtype=float)
    out = np.zeros_like(np.atleast_1d(mag))
    pos = np.atleast_1d(mag) > 0
    if np.any(pos):
        out[pos] = B.derivative(np.atleast_1d(mag)[pos])
    return out if mag.ndim else float(out[0])


def slow_companion(B):
    """A principled much-slower N-function P << B for the growth bound.

    Polynomial-scale kinds take the power of the averaged exponent
    (1 + p) / 2; exponential kinds admit any power, and the borderline
    L log L kind gets the square-root logarithmic minorant t sqrt(log(1+t)),
    whose gap to B is genuine but only logarithmic.
    """
    kind = B.kind
    p = B.params.get("p")
    if kind in ("power", "zygmund", "pathological") and p is not None:
        avg = 0.5 * (1.0 + float(p))
        if avg > 1.05:
            return power(avg)
        return _sqrt_log_minorant()
    if kind in ("exp_conjugate", "t_exp_t"):
        return power(2.0)
    if kind == "llogl":
        return _sqrt_log_minorant()
    return power(1.5)


def _sqrt_log_minorant():
    """t sqrt(log(1+t)): convex, superlinear, and << t log t."""

    def ev(t):
        t = np.asarray(t, dtype=float)
        return t * np.sqrt(np.log1p(t))

    def dv(t):
        t = np.asarray(t, dtype=float)
        root = np.sqrt(np.log1p(t))
        safe = np.where(root > 0, root, 1.0)
        out = root + np.where(root > 0, t / (2.0 * safe * (1.0 + t)), 0.0)
        return out

    return NFunction("t_sqrt_log", ev, derivative_fn=dv, domain_cap=LOGLIN_CAP,
                     params={})


def fit_growth_scale(B, theta=0.0, samples=120):
    """Largest safe d (with 10% margin) for the conjugate growth bound.

    The potential flux has |A| = B'(|xi|) (times at most 1 + |theta|/2), so d
    must satisfy 3 d (1 + |theta|/2) B'(t) <= Btilde^{-1}(B(t)) on the working
    range; the minimizer over a log grid is taken with a safety factor.
    """
    Bt = conjugate(B)
    hi = min(B.domain_cap * 0.9, 1e9)
    ts = np.geomspace(1e-3, hi, samples)
    ratio = Bt.inverse(B(ts)) / (3.0 * B.derivative(ts) * (1.0 + abs(theta) / 2.0))
    d = 0.9 * float(np.min(ratio))
    if not np.isfinite(d) or d <= 0:
        raise ValueError("could not fit a positive growth scale d")
    return d


def _default_k_field(dim=1, n=32, extent=1.0):
    return SampledField.constant(1.0, dim=dim, n=n, extent=extent)


def gradient_flux_operator(B, K_field=None, P=None, d=None, strongly_monotone=True):
    """The canonical potential flux A = B'(|xi|) xi / |xi| with d0 = 1."""
    P = slow_companion(B) if P is None else P
    K_field = _default_k_field() if K_field is None else K_field
    d = fit_growth_scale(B) if d is None else d

    def flux(x, z, xi):
        mat, mag, unit, squeeze = _unit_and_magnitude(xi)
        out = radial_flux_magnitude(B, mag)[:, None] * unit
        return out[0] if squeeze else out

    return OperatorSpec(B=B, P=P, K_field=K_field, d0=1.0, d=d,
                        form=POTENTIAL_GRADIENT_FLUX, flux=flux,
                        strongly_monotone=strongly_monotone, theta=0.0,
                        params={"model": "potential"})


def z_perturbed_operator(B, theta, K_field=None, P=None, d=None,
                         strongly_monotone=True):
    """Potential flux scaled by 1 + theta arctan(z)/pi; coercive with
    d0 = 1 - |theta|/2 since the coefficient stays in [1-|theta|/2, 1+|theta|/2]."""
    if abs(theta) >= 1:
        raise ValueError(f"perturbation amplitude must satisfy |theta| < 1, got {theta}")
    P = slow_companion(B) if P is None else P
    K_field = _default_k_field() if K_field is None else K_field
    d = fit_growth_scale(B, theta=theta) if d is None else d

    def flux(x, z, xi):
        mat, mag, unit, squeeze = _unit_and_magnitude(xi)
        coeff = 1.0 + theta * np.arctan(np.atleast_1d(np.asarray(z, dtype=float))) / np.pi
        if coeff.size == 1 and mat.shape[0] > 1:
            coeff = np.full(mat.shape[0], float(coeff[0]))
        out = coeff[:, None] * radial_flux_magnitude(B, mag)[:, None] * unit
        return out[0] if squeeze else out

    return OperatorSpec(B=B, P=P, K_field=K_field, d0=1.0 - abs(theta) / 2.0, d=d,
                        form=Z_PERTURBED_FLUX, flux=flux,
                        strongly_monotone=strongly_monotone, theta=theta,
                        params={"model": "z_perturbed", "theta": theta})


def _sample_gradients(op, rng, n_samples, dim):
    hi = min(op.B.domain_cap * 0.5, 1e4)
    mags = np.exp(rng.uniform(np.log(1e-3), np.log(hi), n_samples))
    dirs = rng.normal(size=(n_samples, dim))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return mags[:, None] * dirs


def membership_in_conjugate_class(B, K_field, lambdas=MEMBERSHIP_LAMBDAS):
    """Desk proxy for K in E_{Btilde}: the conjugate modular of K/lambda is a
    finite double for every lambda on a two-sided dyadic grid."""
    Bt = conjugate(B)
    table = {}
    for lam in lambdas:
        try:
            val = modular(Bt, K_field, lam=lam)
            table[lam] = float(val) if np.isfinite(val) else None
        except (DomainCapExceeded, OverflowError, FloatingPointError):
            table[lam] = None
    ok = all(v is not None for v in table.values())
    return ok, table


def validate_operator(op, n_samples=200, seed=0, tol=1e-9):
    """Sampled structure report: coercivity, conjugate growth bound, zero flux
    at zero gradient, (strict) monotonicity, and K-membership.

    Returns a dict with one sub-report per property plus an overall ``ok``.
    """
    rng = np.random.default_rng(seed)
    dim = op.K_field.dim
    cells = np.stack(op.K_field.centers(), axis=1)
    idx = rng.integers(0, cells.shape[0], n_samples)
    x = cells[idx]
    kvals = np.abs(op.K_field.values[idx]).astype(float)
    z = rng.uniform(-50.0, 50.0, n_samples)
    xi = _sample_gradients(op, rng, n_samples, dim)
    mag = np.linalg.norm(xi, axis=1)

    a = np.atleast_2d(op.flux(x, z, xi))
    pairing = np.sum(a * xi, axis=1)
    coercivity_margin = pairing - op.d0 * op.B(mag)
    coercivity_ok = bool(np.min(coercivity_margin) >= -tol * np.maximum(1.0, np.abs(pairing)).max())

    Bt = conjugate(op.B)
    Pt = conjugate(op.P)
    bound = (Bt.inverse(op.B(mag)) + Pt.inverse(op.B(np.abs(z))) + kvals) / (3.0 * op.d)
    flux_mag = np.linalg.norm(a, axis=1)
    growth_ok = bool(np.max(flux_mag - bound) <= tol * max(1.0, float(np.max(bound))))

    zero_flux = np.atleast_2d(op.flux(x, z, np.zeros_like(xi)))
    zero_ok = bool(np.max(np.abs(zero_flux)) <= tol)

    eta = _sample_gradients(op, rng, n_samples, dim)
    a_eta = np.atleast_2d(op.flux(x, z, eta))
    mono = np.sum((a - a_eta) * (xi - eta), axis=1)
    sep = np.linalg.norm(xi - eta, axis=1)
    mono_ok = bool(np.min(mono) >= -tol * max(1.0, float(np.max(np.abs(mono)))))
    strict_ok = True
    if op.strongly_monotone:
        visible = sep > 1e-9
        strict_ok = bool(np.all(mono[visible] > 0))

    member_ok, member_table = membership_in_conjugate_class(op.B, op.K_field)

    report = {
        "coercivity": {"ok": coercivity_ok,
                       "min_margin": float(np.min(coercivity_margin))},
        "growth": {"ok": growth_ok,
                   "max_excess": float(np.max(flux_mag - bound))},
        "zero_at_zero": {"ok": zero_ok, "max_abs": float(np.max(np.abs(zero_flux)))},
        "monotonicity": {"ok": mono_ok, "strict_ok": strict_ok,
                         "min_pairing": float(np.min(mono))},
        "K_membership": {"ok": member_ok, "modulars": member_table},
        "d0": op.d0,
        "d": op.d,
        "n_samples": int(n_samples),
    }
    report["ok"] = bool(coercivity_ok and growth_ok and zero_ok and mono_ok
                        and strict_ok and member_ok)
    return report
