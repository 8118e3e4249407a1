"""Acceptance suite: eleven numbered criteria with pinned tolerances.

Each criterion is a function returning a :class:`CriterionResult` whose
``detail`` line records the measured quantities next to their tolerances.
Criteria are grouped into named suites (calculus, norms, embedding, solver,
all) for the CLI ``verify`` subcommand; the test suite drives the same
functions, so the command line and the tests cannot drift apart.

Oracles used (all independent of the implementation under test):
  1.  conjugate of (1+s)log(1+s) - s equals e^s - s - 1 (closed form)
  2.  biconjugation is the identity on convex functions
  3.  the two-exponent staircase construction satisfies exact doubling
      identities at its breakpoints, worked in integer arithmetic
  4.  the Luxemburg norm of a constant c on measure m is c / B^{-1}(1/m)
  5.  rearrangement preserves the value multiset and the integral;
      f(x) = x^{-1/2} has f**(s) = 2 s^{-1/2}, giving Marcinkiewicz norm 2
      against phi(t) = t^2
  6.  B(t) = t^2 in dimension 3 transforms to t^6/16; the transform of t^p
      has log-log slope Np/(N-p)
  7.  1-D torsion closed forms: u = x(1-x)/2 (quadratic case, second-order
      convergence) and u(1/2) = (3/4)(1/2)^{4/3} = 0.29764 (quartic case)
  8.  the truncated-gradient modular bound with c0 = 2/d0
  9.  the 2-D unit-square Green's function (double sine series) for the
      point-mass pairing; in-measure Cauchy property across mollifier levels
  10. strictly monotone flux: mollified and clamped data sequences share one
      limit
  11. t e^t flux with bounded data: bounded solutions with a finite weak
      gradient quasi-norm, stable under refinement
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from . import nfunction as nf
from . import norms
from . import roots
from .embedding import (
    FAST,
    SLOW,
    embedding_functions,
    growth_class,
    regularity_targets,
)
from .fields import SampledField
from .operators import gradient_flux_operator, z_perturbed_operator
from .solver import (
    MOLLIFY_SEQUENCE,
    AtomicMeasure,
    ProblemSpec,
    apriori_report,
    convergence_study,
    data_sequence,
    mollify_measure,
    refinement_stability,
    regularity_verdict,
    solve_approximate,
    uniqueness_experiment,
)

#: pinned runtime limits, seconds (criterion 8 shares criterion 7's budget)
RUNTIME_LIMITS = {1: 1.0, 2: 5.0, 3: 2.0, 4: 5.0, 5: 5.0, 6: 10.0,
                  7: 30.0, 8: 30.0, 9: 180.0, 10: 60.0, 11: 60.0}

SUITES = {
    "calculus": (1, 2, 3),
    "norms": (4, 5),
    "embedding": (6,),
    "solver": (7, 8, 9, 10, 11),
    "all": tuple(range(1, 12)),
}


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    runtime: float
    limit: float
    detail: str

    @property
    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.number:2d} ({self.name}): "
                f"{self.detail} [{self.runtime:.2f}s / {self.limit:.0f}s]")


def _result(number, name, t0, checks, detail):
    runtime = time.time() - t0
    limit = RUNTIME_LIMITS[number]
    passed = bool(all(checks)) and runtime <= limit
    return CriterionResult(number=number, name=name, passed=passed,
                           runtime=runtime, limit=limit, detail=detail)


# ---------------------------------------------------------------------------


def criterion_1(seed=0):
    """Numeric conjugate of the log-linear kind matches e^s - s - 1."""
    t0 = time.time()
    Bt = nf.conjugate(nf.llogl())
    ss = np.geomspace(0.01, 20.0, 30)
    exact = np.expm1(ss) - ss
    rel = float(np.max(np.abs(Bt(ss) / exact - 1)))
    return _result(1, "conjugate pair", t0, [rel <= 1e-5],
                   f"max rel err {rel:.2e} <= 1e-05 at 30 points in [0.01, 20]")


def criterion_2(seed=0):
    """Biconjugation recovers every built-in kind to 1e-6."""
    t0 = time.time()
    kinds = [nf.power(2.0), nf.power(1.5), nf.zygmund(2.0, 1.0), nf.llogl(),
             nf.exp_conjugate(), nf.t_exp_t(),
             nf.pathological_nfunction(2.0, 3.0)]
    worst, worst_kind = 0.0, ""
    for B in kinds:
        CC = nf.conjugate(nf.conjugate(B))
        hi = min(100.0, 0.5 * B.domain_cap, 0.5 * CC.domain_cap)
        ts = np.geomspace(0.1, hi, 20)
        rel = float(np.max(np.abs(CC(ts) / B(ts) - 1)))
        if rel > worst:
            worst, worst_kind = rel, B.kind
    return _result(2, "biconjugate identity", t0, [worst <= 1e-6],
                   f"worst kind {worst_kind}: max rel err {worst:.2e} <= 1e-06 "
                   f"(20 points x {len(kinds)} kinds)")


def criterion_3(seed=0):
    """The (2,3)-staircase sits between t^2 and t^3 and breaks doubling."""
    t0 = time.time()
    B = nf.pathological_nfunction(2.0, 3.0)
    ts = np.geomspace(1.0, 1e6, 4000)
    vals = B(ts)
    trapped = bool(np.all(vals >= ts ** 2 * (1 - 1e-12))
                   and np.all(vals <= ts ** 3 * (1 + 1e-12)))
    seg = B.params["segments"]
    ratios = B(2.0 * seg.a[:4]) / B(seg.a[:4])
    exact = bool(np.array_equal(ratios, seg.k[:4].astype(float)))
    increasing = bool(np.all(np.diff(seg.k[:4]) > 0))
    return _result(3, "staircase counterexample", t0,
                   [trapped, exact, increasing],
                   f"t^2 <= B <= t^3 on [1, 1e6]: {trapped}; "
                   f"B(2a_i)/B(a_i) = k_i exactly: {exact}; "
                   f"k_i strictly increasing: {list(seg.k[:4])}")


def criterion_4(seed=0):
    """Luxemburg norm: constant closed form plus homogeneity/unit-modular."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    kinds = [nf.power(1.6), nf.power(3.0), nf.zygmund(2.0, 1.0), nf.llogl(),
             nf.t_exp_t()]
    worst_const = 0.0
    for _ in range(10):
        c = float(rng.uniform(0.2, 8.0))
        m = float(rng.uniform(0.3, 4.0))
        B = kinds[int(rng.integers(len(kinds)))]
        f = SampledField.constant(c, dim=1, n=64, extent=m)
        exact = c / B.inverse(1.0 / m)
        worst_const = max(worst_const,
                          abs(norms.luxemburg_norm(B, f) / exact - 1))
    B = nf.zygmund(2.0, 1.0)
    worst_hom, worst_mod = 0.0, 0.0
    for _ in range(100):
        n = int(rng.integers(8, 64))
        f = SampledField(1, n, float(rng.uniform(0.5, 2.0)), rng.normal(size=n))
        lam = norms.luxemburg_norm(B, f)
        worst_mod = max(worst_mod, norms.modular(B, f, lam) - 1.0)
        lam2 = norms.luxemburg_norm(B, f.with_values(2.0 * f.values))
        worst_hom = max(worst_hom, abs(lam2 - 2.0 * lam) / max(1.0, lam))
    return _result(4, "Luxemburg norm", t0,
                   [worst_const <= 1e-7, worst_hom <= 1e-7, worst_mod <= 1e-6],
                   f"constant-field rel err {worst_const:.2e} <= 1e-07 (10 draws); "
                   f"homogeneity {worst_hom:.2e} <= 1e-07, "
                   f"unit-modular excess {worst_mod:.2e} <= 1e-06 (100 fields)")


def criterion_5(seed=0):
    """Rearrangement exactness and the s^{-1/2} Marcinkiewicz oracle."""
    t0 = time.time()
    rng = np.random.default_rng(seed)
    f = SampledField(1, 500, 2.0, rng.normal(size=500))
    prof = norms.rearrange(f)
    equimeasurable = bool(
        np.array_equal(np.sort(np.abs(f.values)), np.sort(prof.levels)))
    integral_gap = abs(prof.integral()
                       - math.fsum(np.abs(f.values)) * f.cell_measure)
    vals = []
    for n in (2048, 4096, 8192):
        x = (np.arange(n) + 0.5) / n
        g = SampledField(1, n, 1.0, x ** -0.5)
        vals.append(norms.marcinkiewicz_norm(nf.power(2.0), g))
    norm_err = abs(vals[-1] - 2.0)
    return _result(5, "rearrangement", t0,
                   [equimeasurable, integral_gap <= 1e-12, norm_err <= 0.01],
                   f"equimeasurable: {equimeasurable}; integral gap "
                   f"{integral_gap:.2e} <= 1e-12; Marcinkiewicz norm "
                   f"{vals[-1]:.4f} = 2.000 +/- 0.01 under refinement")


def criterion_6(seed=0):
    """Embedding transform closed form, slopes, and growth classification."""
    t0 = time.time()
    data = embedding_functions(nf.power(2.0), 3)
    b3_err = abs(data.B_N(2.0) - 4.0)
    slope_errs = []
    for p, N in ((1.5, 2), (2.0, 3), (3.0, 4)):
        d = embedding_functions(nf.power(p), N)
        ts = np.geomspace(d.B_N.domain_cap * 1e-4, d.B_N.domain_cap * 0.9, 30)
        slope = roots.log_slope(ts, d.B_N(ts))
        slope_errs.append(abs(slope - N * p / (N - p)))
    classes_ok = True
    for N in (2, 3):
        for p in (1.3, 1.6, 2.5, 4.0, 6.0):
            if abs(p - N) < 0.5:
                continue  # borderline p = N excluded by the criterion
            got, _ = growth_class(nf.power(p), N)
            want = SLOW if p < N else FAST
            classes_ok = classes_ok and (got == want)
    return _result(6, "embedding transform", t0,
                   [b3_err <= 1e-3, max(slope_errs) <= 0.05, classes_ok],
                   f"B_3(2) err {b3_err:.2e} <= 1e-03; worst slope err "
                   f"{max(slope_errs):.3f} <= 0.05; power classification "
                   f"correct: {classes_ok}")


def criterion_7(seed=0):
    """Quartic point value and quadratic convergence order."""
    t0 = time.time()
    op4 = gradient_flux_operator(nf.power(4.0, scale=0.25))
    f = SampledField.constant(1.0, dim=1, n=512, extent=1.0)
    res = solve_approximate(op4, f)
    mid = res.u.value_at(0.5)
    mid_err = abs(mid - 0.29764)
    op2 = gradient_flux_operator(nf.power(2.0, scale=0.5))
    errs = []
    for n in (128, 256, 512):
        r = solve_approximate(op2, SampledField.constant(1.0, dim=1, n=n,
                                                         extent=1.0))
        x = (np.arange(n) + 0.5) / n
        errs.append(float(np.max(np.abs(r.u.values - x * (1 - x) / 2))))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    return _result(7, "solver closed forms", t0,
                   [mid_err <= 1e-3, min(orders) >= 1.9],
                   f"u(1/2) = {mid:.5f} = 0.29764 +/- 1e-03 (n=512); quadratic "
                   f"orders {orders[0]:.2f}, {orders[1]:.2f} >= 1.9")


def _solver_battery():
    const = SampledField.constant
    battery = [
        ("quadratic", gradient_flux_operator(nf.power(2.0, scale=0.5)),
         const(1.0, dim=1, n=256, extent=1.0)),
        ("quartic", gradient_flux_operator(nf.power(4.0, scale=0.25)),
         const(1.0, dim=1, n=256, extent=1.0)),
        ("loglinear", gradient_flux_operator(nf.llogl()),
         const(5.0, dim=1, n=128, extent=1.0)),
        ("exponential", gradient_flux_operator(nf.t_exp_t()),
         const(5.0, dim=1, n=128, extent=1.0)),
        ("z-perturbed", z_perturbed_operator(nf.power(2.0, scale=0.5), theta=0.5),
         const(1.0, dim=1, n=128, extent=1.0)),
        ("quadratic-2d", gradient_flux_operator(nf.power(2.0, scale=0.5)),
         const(1.0, dim=2, n=33, extent=1.0)),
        ("dirac-2d", gradient_flux_operator(nf.power(2.0)),
         mollify_measure(AtomicMeasure(atoms=(((0.5, 0.5), 1.0),)), 8,
                         grid=(2, 65, 1.0))),
    ]
    return battery


def criterion_8(seed=0):
    """Truncated-gradient modular bound across the whole solver battery."""
    t0 = time.time()
    worst_ratio, worst_name = 0.0, ""
    count = 0
    for name, op, f in _solver_battery():
        res = solve_approximate(op, f)
        umax = float(np.max(np.abs(res.u.values)))
        levels = tuple(umax * fr for fr in (0.25, 0.5, 1.0, 2.0))
        rep = apriori_report(op, res, f, truncation_levels=levels)
        for row in rep["rows"]:
            count += 1
            ratio = row["lhs1"] / row["bound1"] if row["bound1"] > 0 else 0.0
            if ratio > worst_ratio:
                worst_ratio, worst_name = ratio, name
    return _result(8, "a priori estimate", t0, [worst_ratio <= 1.1],
                   f"max LHS/(c0 t |f|_1) = {worst_ratio:.4f} <= 1.1 over "
                   f"{count} instance-levels (worst: {worst_name})")


def _green_half(x, y, x0=0.5, y0=0.5, terms=400):
    """Half the unit-square Green's function (flux 2 grad u), stabilized."""
    total = np.zeros_like(x, dtype=float)
    for m in range(1, terms + 1):
        a = m * np.pi * np.minimum(y, y0)
        b = m * np.pi * (1.0 - np.maximum(y, y0))
        c = m * np.pi
        coef = 2.0 / c * np.sin(m * np.pi * x) * np.sin(m * np.pi * x0)
        frac = (np.exp(a + b - c) * (1 - np.exp(-2 * a)) * (1 - np.exp(-2 * b))
                / (2.0 * (1 - np.exp(-2 * c))))
        total += coef * frac
    return total / 2.0


def criterion_9(seed=0):
    """2-D point mass: pairing accuracy, Cauchy decrease, stable verdicts."""
    t0 = time.time()
    B = nf.power(2.0)
    op = gradient_flux_operator(B)
    mu = AtomicMeasure(atoms=(((0.5, 0.5), 1.0),))
    n, k = 129, 16
    fk = mollify_measure(mu, k, grid=(2, n, 1.0))
    res = solve_approximate(op, fk)
    h = 1.0 / n
    c = (np.arange(n) + 0.5) * h
    X, Y = np.meshgrid(c, c, indexing="ij")
    uh = res.u.values.reshape(n, n)
    uex = _green_half(X, Y)
    pair_errs = []
    for phi in (1 + X ** 2 + Y ** 2, np.sin(np.pi * X) * np.sin(np.pi * Y),
                np.exp(X - Y)):
        ph = float(np.sum(uh * phi)) * h * h
        pe = float(np.sum(uex * phi)) * h * h
        pair_errs.append(abs(ph - pe) / abs(pe))
    prob = ProblemSpec(dim=2, n=n, extent=1.0, datum=mu,
                       mollifier_levels=(4.0, 8.0, 16.0),
                       truncation_levels=(1.0, 2.0, 4.0),
                       approximation_mode=MOLLIFY_SEQUENCE)
    st = convergence_study(op, prob)
    cauchy_ok = True
    for M in st["cauchy"].values():
        sup = [M[j][j + 1] for j in range(len(M) - 1)]
        cauchy_ok = cauchy_ok and all(sup[i] > sup[i + 1]
                                      for i in range(len(sup) - 1))
    targets = regularity_targets(B, N=2, K=1.0, diam_omega=math.sqrt(2.0))
    vals_u, vals_g, verdicts = [], [], []
    for nn in (65, 129, 257):
        fkn = mollify_measure(mu, k, grid=(2, nn, 1.0))
        rn = solve_approximate(op, fkn)
        rep = regularity_verdict(rn.u, rn.gradient_field(), targets)
        verdicts.append(rep["verdict"])
        vals_u.append(rep["quasi_norms"]["u_vs_Phi1"])
        vals_g.append(rep["quasi_norms"]["grad_vs_Psi1"])
    stab_u = refinement_stability(vals_u)["verdict"]
    stab_g = refinement_stability(vals_g)["verdict"]
    checks = [max(pair_errs) <= 0.05, cauchy_ok,
              all(v == "finite" for v in verdicts),
              stab_u == "stable", stab_g == "stable"]
    return _result(9, "point-mass data", t0, checks,
                   f"pairing errs {['%.3f' % e for e in pair_errs]} <= 0.05; "
                   f"Cauchy strictly decreasing: {cauchy_ok}; verdicts "
                   f"{verdicts}, u-stability {stab_u}, grad-stability {stab_g}")


def criterion_10(seed=0):
    """Two approximation sequences share one limit (strict monotonicity)."""
    t0 = time.time()
    op = gradient_flux_operator(nf.power(2.0, scale=0.5))
    f = SampledField.constant(1.0, dim=1, n=512, extent=1.0)
    seq_a = data_sequence(f, (2, 4, 8, 16), "mollifier")
    seq_b = data_sequence(f, (0.25, 0.5, 1.0, 2.0), "truncation")
    out = uniqueness_experiment(op, f, two_sequences=(seq_a, seq_b))
    gaps = [lvl["u"] for lvl in out["per_level"]]
    monotone = all(gaps[i] >= gaps[i + 1] for i in range(len(gaps) - 1))
    return _result(10, "uniqueness of limits", t0,
                   [out["max_discrepancy_u"] <= 1e-6, monotone],
                   f"limit discrepancy {out['max_discrepancy_u']:.2e} <= 1e-06 "
                   f"(n=512); per-level gaps {['%.1e' % g for g in gaps]} "
                   f"nonincreasing: {monotone}")


def criterion_11(seed=0):
    """Fast growth: bounded solutions, finite weak gradient quasi-norm."""
    t0 = time.time()
    B = nf.t_exp_t()
    op = gradient_flux_operator(B)
    umaxes, weak_vals = [], []
    for n in (128, 256, 512):
        f = SampledField.constant(5.0, dim=1, n=n, extent=1.0)
        res = solve_approximate(op, f)
        umaxes.append(float(np.max(np.abs(res.u.values))))
        grad = res.gradient_field()
        weak_vals.append(float(norms.weak_marcinkiewicz(B, grad)))
    spread = max(umaxes) / min(umaxes) - 1.0
    weak_finite = all(np.isfinite(v) for v in weak_vals)
    return _result(11, "fast-growth boundedness", t0,
                   [spread < 0.02, weak_finite],
                   f"sup-norm spread {spread:.2e} < 2e-02 across three grids; "
                   f"weak gradient quasi-norms {['%.3f' % v for v in weak_vals]} "
                   f"all finite: {weak_finite}")


CRITERIA = {i: fn for i, fn in enumerate(
    (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
     criterion_6, criterion_7, criterion_8, criterion_9, criterion_10,
     criterion_11), start=1)}


def run_criterion(number, seed=0):
    return CRITERIA[number](seed=seed)


def run_suite(name, seed=0):
    """Run a named suite; returns the list of CriterionResult in order."""
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; expected one of "
                         f"{sorted(SUITES)}")
    return [run_criterion(num, seed=seed) for num in SUITES[name]]
