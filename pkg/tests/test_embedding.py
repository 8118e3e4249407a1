"""Tests for growth classification, the embedding transform, the regularity
targets, and the modular Sobolev/Poincare inequalities.

Closed-form oracles used below:
  * B(t) = t^2, N = 3: the tail integrand is t^(-1/2), the tail integral is
    2 sqrt(s), so H_3(s) = (2 sqrt(s))^(2/3), phi_3(s) = 2 sqrt(s), and
    B_3(t) = t^6 / 16 (hence B_3(2) = 4)
  * B(t) = t^p, p < N: B_N grows like t^(Np/(N-p))
  * tent function u on (0,1) with B(t) = t^2, c1 = 1/4:
    integral of u^2 is 1/3, so lhs = 1/48; |u'| = 2 gives rhs = 4
"""

import numpy as np
import pytest

from orlicz_lab import embedding as emb
from orlicz_lab import nfunction as nf
from orlicz_lab import roots
from orlicz_lab.errors import BoundaryNotZero, UndeterminedGrowth
from orlicz_lab.fields import SampledField


# ---------------------------------------------------------------------------
# origin normalization


def test_normalize_origin_power3():
    B0 = emb.normalize_origin(nf.power(3.0))
    assert abs(B0(0.5) - 0.5) < 1e-14
    assert B0(1.0) == 1.0
    ts = np.geomspace(1.001, 100.0, 20)
    assert np.max(np.abs(B0(ts) - ts ** 3)) < 1e-9
    # linear piece makes the origin tail integrand constant
    g = emb.tail_integrand(B0, 3)
    small = np.geomspace(1e-9, 0.5, 10)
    assert np.max(np.abs(g(small) - 1.0)) < 1e-12
    assert B0.params["kink_at_one"]


def test_needs_origin_normalization():
    assert not emb.needs_origin_normalization(nf.power(2.0), 3)
    assert emb.needs_origin_normalization(nf.power(5.0), 2)
    assert emb.needs_origin_normalization(nf.power(3.0), 3)  # borderline p = N
    # quadratic origin makes the N = 2 origin integral diverge, but not N = 3
    assert emb.needs_origin_normalization(nf.llogl(), 2)
    assert not emb.needs_origin_normalization(nf.llogl(), 3)


# ---------------------------------------------------------------------------
# growth classification


def test_growth_class_powers():
    for p in (1.5, 2.0, 3.0, 5.0):
        for N in (2, 3, 4):
            if p == N:
                continue
            klass, evidence = emb.growth_class(nf.power(p), N)
            expect = emb.SLOW if p < N else emb.FAST
            assert klass == expect, (p, N, evidence["ratios"][-5:])


def test_growth_class_borderline_and_override():
    klass, _ = emb.growth_class(nf.power(3.0), 3)
    assert klass == emb.UNDETERMINED
    forced, ev = emb.growth_class(nf.power(3.0), 3, override=emb.SLOW)
    assert forced == emb.SLOW and ev["override"]
    with pytest.raises(ValueError):
        emb.growth_class(nf.power(2.0), 3, override="Sideways")
    with pytest.raises(ValueError):
        emb.growth_class(nf.power(2.0), 1)


def test_growth_class_fast_exponential():
    for N in (2, 3, 4):
        klass, _ = emb.growth_class(nf.t_exp_t(), N)
        assert klass == emb.FAST, N


def test_growth_class_slow_examples():
    klass, _ = emb.growth_class(nf.llogl(), 2)
    assert klass == emb.SLOW
    klass2, _ = emb.growth_class(nf.zygmund(2.0, 1.0), 3)
    assert klass2 == emb.SLOW


# ---------------------------------------------------------------------------
# embedding transform


def test_embedding_functions_power2_dim3_closed_form():
    data = emb.embedding_functions(nf.power(2.0), 3)
    assert data.growth_class == emb.SLOW
    assert not data.normalized
    assert abs(data.Nprime - 1.5) < 1e-15
    ss = np.geomspace(1e-4, 1e10, 40)
    exact_H = (2.0 * np.sqrt(ss)) ** (2.0 / 3.0)
    assert np.max(np.abs(data.H_N(ss) / exact_H - 1)) < 1e-6
    exact_phi = 2.0 * np.sqrt(ss)
    assert np.max(np.abs(data.phi_N(ss) / exact_phi - 1)) < 1e-6
    ts = np.geomspace(1e-2, 1e3, 40)
    assert np.max(np.abs(data.B_N(ts) / (ts ** 6 / 16.0) - 1)) < 1e-5
    assert abs(data.B_N(2.0) - 4.0) < 1e-3
    assert data.phi_N(0.0) == 0.0


def test_embedding_table_invariants():
    for B, N in [(nf.power(2.0), 3), (nf.zygmund(2.0, 1.0), 3), (nf.llogl(), 2)]:
        data = emb.embedding_functions(B, N)
        # strict monotonicity at every knot
        assert np.all(np.diff(data.knots_H) > 0)
        # composition identity on the construction grid
        s = data.knots_s[:: len(data.knots_s) // 50][:50]
        lhs = data.B_N(data.H_N(s))
        rhs = data.base(s)
        assert np.max(np.abs(lhs / rhs - 1)) < 1e-6, B.kind
        # companion identity
        phi = data.phi_N(s)
        assert np.max(np.abs(phi / data.H_N(s) ** data.Nprime - 1)) < 1e-10, B.kind


def test_embedding_slope_matches_sobolev_exponent():
    for p, N in [(1.5, 2), (2.0, 3), (3.0, 4)]:
        data = emb.embedding_functions(nf.power(p), N)
        ts = np.geomspace(data.B_N.domain_cap * 1e-4, data.B_N.domain_cap * 0.9, 30)
        slope = roots.log_slope(ts, data.B_N(ts))
        expect = N * p / (N - p)
        assert abs(slope - expect) < 0.05, (p, N, slope)


def test_embedding_fast_kind_produces_truncated_table():
    data = emb.embedding_functions(nf.power(5.0), 2)
    assert data.growth_class == emb.FAST
    assert data.normalized
    assert np.all(np.diff(data.knots_H) > 0)
    # H saturates: two decades below the trusted end it has already leveled
    s_last = float(data.knots_s[-1])
    assert data.H_N(s_last) / data.H_N(s_last / 100.0) < 1.05


def test_embedding_undetermined_raises_without_override():
    with pytest.raises(UndeterminedGrowth):
        emb.embedding_functions(nf.power(3.0), 3)
    data = emb.embedding_functions(nf.power(3.0), 3, override_class=emb.SLOW)
    assert data.growth_class == emb.SLOW


# ---------------------------------------------------------------------------
# regularity targets


def test_targets_power_slopes():
    # Phi1 ~ r^((p-1) N'); for p = 2, N = 2: slope 2, and Psi1 ~ r^(4/3)
    B = nf.power(2.0)
    targets = emb.regularity_targets(B, N=2, K=1.0, diam_omega=np.sqrt(2.0))
    rr = np.geomspace(1.0, 1e4, 25)
    assert abs(roots.log_slope(rr, targets.Phi1(rr)) - 2.0) < 1e-6
    assert abs(roots.log_slope(rr, targets.Psi1(rr)) - 4.0 / 3.0) < 1e-3
    assert targets.growth_class == emb.UNDETERMINED or targets.growth_class in (
        emb.SLOW, emb.FAST)


def test_targets_slow_case_power2_dim3():
    B = nf.power(2.0)
    targets = emb.regularity_targets(B, N=3, K=1.0, diam_omega=1.0)
    assert targets.growth_class == emb.SLOW
    assert not targets.l_infinity
    rr = np.geomspace(1e2, 1e6, 30)
    # B_3(r^(2/3)) ~ r^4 so Phi2 ~ r^3
    slope_phi2 = roots.log_slope(rr, targets.Phi2(rr))
    assert abs(slope_phi2 - 3.0) < 0.05
    # classical super-level decay exponent N(p-1)/(N-p) = 3
    decay = roots.log_slope(rr, targets.constants["K"] * rr / (rr * targets.Phi2(rr)))
    assert abs(decay + 3.0) < 0.05
    # gradient target Psi2 = B / phi_N ~ t^(3/2): N(p-1)/(N-1) = 1.5
    slope_psi2 = roots.log_slope(rr, targets.Psi2(rr))
    assert abs(slope_psi2 - 1.5) < 0.05
    assert targets.gradient_target is targets.Psi2


def test_targets_increasing_where_defined():
    # strictness is asserted beyond the origin-normalization scale (below it
    # the linearized origin makes Phi2 exactly constant by design)
    for B, N in [(nf.power(2.0), 3), (nf.zygmund(2.0, 1.0), 3)]:
        targets = emb.regularity_targets(B, N=N, K=2.0, diam_omega=1.0)
        rr = np.geomspace(10.0, 1e5, 60)
        for name in ("Phi1", "Psi1", "Phi2", "Psi2"):
            fn = getattr(targets, name)
            vals = fn(rr)
            assert np.all(np.diff(vals) > 0), (B.kind, name)


def test_targets_zygmund_slopes_tend_to_limits():
    # log factors push the finite-window slope above the limit exponent and
    # the excess shrinks as the window moves outward
    targets = emb.regularity_targets(nf.zygmund(2.0, 1.0), N=3, K=1.0, diam_omega=1.0)
    near = np.geomspace(1e2, 1e3, 20)
    far = np.geomspace(1e4, 3e5, 20)
    s_near = roots.log_slope(near, targets.Phi2(near))
    s_far = roots.log_slope(far, targets.Phi2(far))
    assert s_near > s_far > 3.0
    assert s_far < 3.5
    g_near = roots.log_slope(near, targets.Psi2(near))
    g_far = roots.log_slope(far, targets.Psi2(far))
    assert g_near > g_far > 1.5
    assert g_far < 1.8


def test_targets_fast_case():
    targets = emb.regularity_targets(nf.t_exp_t(), N=2, K=1.0, diam_omega=1.0)
    assert targets.l_infinity
    assert targets.gradient_target is not None
    assert targets.Phi2 is None and targets.Psi2 is None
    assert abs(targets.gradient_target(3.0) - 3.0 * np.exp(3.0)) < 1e-9
    assert targets.constants["Kbar"] == 2.0


def test_targets_constants():
    targets = emb.regularity_targets(nf.power(2.0), N=3, K=4.0, diam_omega=2.0,
                                     override_class=emb.SLOW)
    c = targets.constants
    assert c["c1"] == 1.0 / 8.0
    assert abs(c["Kbar"] - 2.0 * 4.0 ** 1.5) < 1e-12
    assert abs(c["cbar"] - 4.0 ** (-1.0 / 3.0)) < 1e-15
    with pytest.raises(ValueError):
        emb.regularity_targets(nf.power(2.0), N=3, K=-1.0, diam_omega=1.0)


# ---------------------------------------------------------------------------
# modular inequalities


def tent_field(n):
    u = SampledField.from_function(lambda x: 1.0 - np.abs(2.0 * x - 1.0), dim=1, n=n)
    vals = u.values.copy()
    vals[u.boundary_mask()] = 0.0
    grad = np.where(np.arange(n) < n // 2, 2.0, -2.0)[:, None]
    return u.with_values(vals), SampledField(1, n, 1.0, grad)


def test_poincare_tent_closed_form():
    B = nf.power(2.0)
    u, grad = tent_field(400)
    out = emb.poincare_check(B, u, grad, N=2)
    assert abs(out["c1"] - 0.25) < 1e-15
    assert abs(out["lhs"] - 1.0 / 48.0) < 1e-4
    assert abs(out["rhs"] - 4.0) < 1e-12
    assert out["ratio"] <= 1.0


def test_poincare_zero_field():
    B = nf.power(2.0)
    z = SampledField.constant(0.0, dim=1, n=20, extent=1.0)
    out = emb.poincare_check(B, z, z, N=2)
    assert out["lhs"] == 0.0 and out["ratio"] == 0.0
    out2 = emb.sobolev_poincare_check(B, z, z, N=2)
    assert out2["lhs"] == 0.0 and out2["ratio"] == 0.0


def test_poincare_lhs_monotone_in_constant():
    from orlicz_lab import norms
    B = nf.zygmund(2.0, 1.0)
    u, _ = tent_field(64)
    full = norms.modular(B, u.with_values(0.25 * np.abs(u.values)), 1.0)
    half = norms.modular(B, u.with_values(0.125 * np.abs(u.values)), 1.0)
    assert half <= full


def test_sobolev_tent_and_scaling_family():
    B = nf.zygmund(2.0, 1.0)
    u, grad = tent_field(256)
    ratios = []
    for lam in (0.1, 1.0, 10.0):
        out = emb.sobolev_poincare_check(
            B, u.with_values(lam * u.values),
            grad.with_values(lam * grad.values), N=2)
        assert out["lhs"] > 0 and out["rhs"] > 0
        ratios.append(out["ratio"])
    assert max(ratios) < 10.0


def test_sobolev_tent_quadratic_vs_classical_constant():
    B = nf.power(2.0)
    u, grad = tent_field(400)
    out = emb.sobolev_poincare_check(B, u, grad, N=2)
    # for this tent the classical (p=2, d=1) Sobolev quotient is far above
    # the modular ratio; anything bounded by 1 is consistent
    assert out["ratio"] <= 1.0


def test_boundary_not_zero_raises():
    B = nf.power(2.0)
    u = SampledField.constant(1.0, dim=1, n=32, extent=1.0)
    with pytest.raises(BoundaryNotZero):
        emb.poincare_check(B, u, u, N=2)
    v2 = SampledField.constant(1.0, dim=2, n=8, extent=1.0)
    with pytest.raises(BoundaryNotZero):
        emb.sobolev_poincare_check(B, v2, v2, N=2)
