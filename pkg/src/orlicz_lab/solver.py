"""Finite-difference solver for zero-Dirichlet problems -div A(x,u,grad u) = f.

Discretization: cell-centered uniform grid, one unknown per cell, fluxes on
cell faces (three-point in 1-D, edge-centered five-point in 2-D).  The
Dirichlet condition enters through ghost-cell reflection (ghost = -adjacent),
so a boundary face carries the difference 2 u / h over a half-width dual cell.
For the potential flux the discrete problem is the strictly convex minimization

    E(u) = sum_faces m_f B(|D_f u|) - sum_cells f u h^d,

solved by damped Newton with Armijo backtracking on E; the flux modulus is
regularized as sqrt(t^2 + eps^2) with eps = 1e-8 * extent so the Jacobian
exists at flat faces.  The z-dependent form is solved by an outer fixed point
that freezes the face-averaged state with under-relaxation 0.5.

Measure data is realized by an on-grid-normalized bump mollifier; integrable
data by normalized convolution (which preserves constants exactly) followed by
the pointwise clamp |f_k| <= 2 |f| wherever f does not vanish.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse
from scipy.signal import convolve, fftconvolve
from scipy.sparse.linalg import spsolve

from . import roots
from .embedding import SLOW
from .errors import (AtomTooCloseToBoundary, DomainCapExceeded, EmptyTail,
                     GridMismatch, NonConvergence, NotStronglyMonotone,
                     UndeterminedGrowth)
from .fields import SampledField
from .nfunction import conjugate, from_spec
from .norms import distribution_measure, truncate, weak_marcinkiewicz
from .operators import (CUSTOM_FLUX, POTENTIAL_GRADIENT_FLUX, Z_PERTURBED_FLUX,
                        OperatorSpec, gradient_flux_operator, z_perturbed_operator)

MOLLIFY_SEQUENCE = "mollify_sequence"
TWO_SEQUENCE_UNIQUENESS = "two_sequence_uniqueness"

#: accepted solves must reach max-residual <= RESIDUAL_ACCEPT * ||f||_inf;
#: Newton itself aims an order below to leave headroom for the weak-form checks
RESIDUAL_ACCEPT = 1e-9
NEWTON_TOL_FACTOR = 1e-10
FLUX_EPS_FACTOR = 1e-8
TRUST_CAP_FRACTION = 0.97
ARMIJO_SIGMA = 1e-4
#: rounding allowance in the Armijo test — near the minimizer the predicted
#: decrease drops below the float noise of the energy sum
ARMIJO_NOISE = 1e-13


# ---------------------------------------------------------------------------
# problem data


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite sum of point masses: ((location, weight), ...)."""

    atoms: tuple

    def __post_init__(self):
        if not self.atoms:
            raise ValueError("an atomic measure needs at least one atom")
        clean = []
        dim = None
        for loc, w in self.atoms:
            loc = tuple(float(c) for c in np.atleast_1d(loc))
            if dim is None:
                dim = len(loc)
            elif len(loc) != dim:
                raise ValueError("atoms with inconsistent dimensions")
            if w == 0:
                raise ValueError("atom weights must be nonzero")
            clean.append((loc, float(w)))
        object.__setattr__(self, "atoms", tuple(clean))

    @property
    def dim(self):
        return len(self.atoms[0][0])

    @property
    def total_mass(self):
        return float(sum(abs(w) for _, w in self.atoms))


@dataclass(frozen=True)
class ProblemSpec:
    """Grid, datum, and approximation levels for one experiment."""

    dim: int
    n: int
    extent: float
    datum: object                      # SampledField or AtomicMeasure
    mollifier_levels: tuple
    truncation_levels: tuple
    approximation_mode: str = MOLLIFY_SEQUENCE

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.n < 3:
            raise ValueError(f"need at least 3 cells per axis, got {self.n}")
        if self.extent <= 0:
            raise ValueError("extent must be positive")
        ml = tuple(int(k) for k in self.mollifier_levels)
        tl = tuple(float(t) for t in self.truncation_levels)
        if any(k <= 0 for k in ml) or any(b <= a for a, b in zip(ml, ml[1:])):
            raise ValueError("mollifier levels must be positive and increasing")
        if any(t <= 0 for t in tl) or any(b <= a for a, b in zip(tl, tl[1:])):
            raise ValueError("truncation levels must be positive and increasing")
        if self.approximation_mode not in (MOLLIFY_SEQUENCE, TWO_SEQUENCE_UNIQUENESS):
            raise ValueError(f"unknown approximation mode {self.approximation_mode!r}")
        object.__setattr__(self, "mollifier_levels", ml)
        object.__setattr__(self, "truncation_levels", tl)
        if isinstance(self.datum, SampledField):
            if self.datum.dim != self.dim or self.datum.n != self.n:
                raise GridMismatch("datum grid does not match the problem grid")
        elif isinstance(self.datum, AtomicMeasure):
            if self.datum.dim != self.dim:
                raise ValueError("atomic datum dimension does not match the problem")
        else:
            raise TypeError("datum must be a SampledField or an AtomicMeasure")

    def template(self):
        return SampledField.constant(0.0, dim=self.dim, n=self.n, extent=self.extent)


def load_problem(obj):
    """Build (OperatorSpec, ProblemSpec) from a parsed JSON object."""
    if "operator" not in obj or "problem" not in obj:
        raise ValueError("problem JSON needs 'operator' and 'problem' sections")
    osec, psec = obj["operator"], obj["problem"]
    B = from_spec(osec["nfunction"])
    form = osec.get("form", "potential")
    theta = float(osec.get("theta", 0.0))
    strongly = bool(osec.get("strongly_monotone", True))
    if form in ("potential", POTENTIAL_GRADIENT_FLUX):
        op = gradient_flux_operator(B, strongly_monotone=strongly)
    elif form in ("z_perturbed", Z_PERTURBED_FLUX):
        op = z_perturbed_operator(B, theta, strongly_monotone=strongly)
    else:
        raise ValueError(f"unknown operator form {form!r}")

    dim = int(psec["dim"])
    n = int(psec["n"])
    extent = float(psec.get("extent", 1.0))
    dsec = psec["datum"]
    kind = dsec["type"]
    if kind == "atomic":
        atoms = tuple((tuple(a["location"]), float(a["weight"])) for a in dsec["atoms"])
        datum = AtomicMeasure(atoms)
    elif kind == "constant":
        datum = SampledField.constant(float(dsec["value"]), dim=dim, n=n, extent=extent)
    elif kind == "values":
        datum = SampledField(dim=dim, n=n, extent=extent,
                             values=np.asarray(dsec["values"], dtype=float))
    elif kind == "csv":
        datum = SampledField.from_csv(dsec["path"])
    else:
        raise ValueError(f"unknown datum type {kind!r}")
    problem = ProblemSpec(dim=dim, n=n, extent=extent, datum=datum,
                          mollifier_levels=tuple(psec.get("mollifier_levels", (4, 8, 16))),
                          truncation_levels=tuple(psec.get("truncation_levels",
                                                           (0.25, 0.5, 1.0, 2.0))),
                          approximation_mode=psec.get("mode", MOLLIFY_SEQUENCE))
    return op, problem


# ---------------------------------------------------------------------------
# discretization


def _diff_1d(n, h):
    rows, cols, vals = [], [], []
    rows.append(0); cols.append(0); vals.append(2.0 / h)
    for i in range(1, n):
        rows += [i, i]; cols += [i - 1, i]; vals += [-1.0 / h, 1.0 / h]
    rows.append(n); cols.append(n - 1); vals.append(-2.0 / h)
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n + 1, n))


def _avg_1d(n):
    rows, cols, vals = [], [], []
    for i in range(1, n):
        rows += [i, i]; cols += [i - 1, i]; vals += [0.5, 0.5]
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n + 1, n))


def _face_to_cell_1d(n):
    rows, cols, vals = [], [], []
    for i in range(n):
        rows += [i, i]; cols += [i, i + 1]; vals += [0.5, 0.5]
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n + 1))


class Discretization:
    """Sparse face-difference operators and measures for one uniform grid."""

    def __init__(self, dim, n, extent):
        self.dim, self.n, self.extent = int(dim), int(n), float(extent)
        self.h = self.extent / self.n
        self.cell_measure = self.h ** self.dim
        self.ncells = self.n ** self.dim
        d1 = _diff_1d(self.n, self.h)
        a1 = _avg_1d(self.n)
        c1 = _face_to_cell_1d(self.n)
        w = np.full(self.n + 1, self.cell_measure)
        w[0] *= 0.5
        w[-1] *= 0.5
        if dim == 1:
            self.D = d1.tocsr()
            self.face_average = a1.tocsr()
            self.face_measure = w.copy()
            self._axis_slices = (slice(0, self.n + 1),)
            self._face_to_cell = (c1.tocsr(),)
        else:
            eye = sparse.identity(self.n, format="csr")
            dx, dy = sparse.kron(d1, eye), sparse.kron(eye, d1)
            self.D = sparse.vstack([dx, dy]).tocsr()
            self.face_average = sparse.vstack(
                [sparse.kron(a1, eye), sparse.kron(eye, a1)]).tocsr()
            mx = np.repeat(w, self.n)
            my = np.tile(w, self.n)
            self.face_measure = np.concatenate([mx, my])
            nx = (self.n + 1) * self.n
            self._axis_slices = (slice(0, nx), slice(nx, 2 * nx))
            self._face_to_cell = (sparse.kron(c1, eye).tocsr(),
                                  sparse.kron(eye, c1).tocsr())
        self.nfaces = self.D.shape[0]
        self.DT = self.D.T.tocsr()

    def template(self):
        return SampledField.constant(0.0, dim=self.dim, n=self.n, extent=self.extent)

    def cell_gradient(self, u_vals):
        """Cell-centered gradient components (ncells, dim) by face averaging."""
        Du = self.D @ u_vals
        comps = [self._face_to_cell[ax] @ Du[self._axis_slices[ax]]
                 for ax in range(self.dim)]
        return np.stack(comps, axis=1)


def _face_flux(disc, B, u_vals, eps, coeff=None):
    """Signed face flux of the regularized potential model; returns (Du, flux)."""
    Du = disc.D @ u_vals
    r = np.sqrt(Du * Du + eps * eps)
    flux = B.derivative(r) * Du / r
    if coeff is not None:
        flux = coeff * flux
    return Du, flux


def _residual_vector(disc, flux, fvec):
    return disc.DT @ (disc.face_measure * flux) - disc.cell_measure * fvec


# ---------------------------------------------------------------------------
# data approximation


def _as_template(grid):
    if isinstance(grid, SampledField):
        return SampledField.constant(0.0, dim=grid.dim, n=grid.n, extent=grid.extent)
    dim, n, extent = grid
    return SampledField.constant(0.0, dim=dim, n=n, extent=extent)


def mollify_measure(mu, k, grid):
    """Bump-mollified atomic measure on the grid.

    Each atom contributes weight * rho_k(x - atom) with the C-infinity bump
    rho(x) = exp(-1/(1-|x|^2)) on |x| < 1, scaled to radius 1/k and normalized
    on the grid so the discrete integral of each atom equals its weight
    exactly.  Atoms must satisfy k * dist(atom, boundary) > 1 so the bump
    support stays inside the domain.
    """
    if int(k) <= 0:
        raise ValueError(f"mollifier level must be positive, got {k}")
    k = int(k)
    template = _as_template(grid)
    centers = np.stack(template.centers(), axis=1)
    vals = np.zeros(template.ncells)
    for loc, w in mu.atoms:
        loc_arr = np.asarray(loc, dtype=float)
        dist = float(min(np.min(loc_arr), np.min(template.extent - loc_arr)))
        if k * dist <= 1.0:
            raise AtomTooCloseToBoundary(
                f"atom at {loc} sits {dist:.4g} from the boundary; "
                f"level {k} needs distance > {1.0 / k:.4g}")
        r2 = (k * k) * np.sum((centers - loc_arr[None, :]) ** 2, axis=1)
        bump = np.zeros_like(r2)
        inside = r2 < 1.0
        bump[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
        mass = float(np.sum(bump)) * template.cell_measure
        if mass == 0.0:
            raise ValueError(
                f"mollifier level {k} is not resolved by the {template.n}-cell grid")
        vals += (w / mass) * bump
    return template.with_values(vals)


def _bump_kernel_1d(k, h):
    jmax = int(math.floor(1.0 / (k * h)))
    js = np.arange(-jmax, jmax + 1)
    r2 = (k * h * js) ** 2
    w = np.zeros_like(r2)
    inside = r2 < 1.0
    w[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
    if w.sum() == 0:
        w[js == 0] = 1.0
    return w


def _bump_kernel_2d(k, h):
    jmax = int(math.floor(1.0 / (k * h)))
    js = np.arange(-jmax, jmax + 1)
    r2 = (k * h) ** 2 * (js[:, None] ** 2 + js[None, :] ** 2)
    w = np.zeros_like(r2)
    inside = r2 < 1.0
    w[inside] = np.exp(-1.0 / (1.0 - r2[inside]))
    if w.sum() == 0:
        w[jmax, jmax] = 1.0
    return w


def approximate_l1_data(f, k):
    """Smooth bounded approximation of integrable data at mollifier level k.

    Normalized convolution with the on-grid bump kernel: both the datum and
    the constant 1 are convolved with zero padding and the quotient is taken,
    so constants survive exactly and no boundary mass is lost; the result is
    then clamped to |f_k| <= 2 |f| at every cell where f does not vanish.
    """
    if int(k) <= 0:
        raise ValueError(f"mollifier level must be positive, got {k}")
    if f.is_vector:
        raise ValueError("data approximation expects a scalar field")
    k = int(k)
    fv = f.values
    if f.dim == 1:
        w = _bump_kernel_1d(k, f.h)
        num = convolve(fv, w, mode="same", method="direct")
        den = convolve(np.ones_like(fv), w, mode="same", method="direct")
        smooth = num / den
    else:
        w = _bump_kernel_2d(k, f.h)
        arr = fv.reshape(f.n, f.n)
        num = fftconvolve(arr, w, mode="same")
        den = fftconvolve(np.ones_like(arr), w, mode="same")
        smooth = (num / den).reshape(-1)
    lim = 2.0 * np.abs(fv)
    clipped = np.clip(smooth, -lim, lim)
    out = np.where(fv != 0.0, clipped, smooth)
    return f.with_values(out)


# ---------------------------------------------------------------------------
# Newton solver


@dataclass
class SolveResult:
    """Accepted (or best-effort) discrete solution with its diagnostics."""

    u: SampledField
    f: SampledField
    op: OperatorSpec
    residual: float
    tol: float
    converged: bool
    iterations: int
    outer_iterations: int
    energy_trace: tuple
    eps: float
    face_coeff: Optional[np.ndarray] = None
    _disc: Optional[Discretization] = field(default=None, repr=False)

    @property
    def disc(self):
        if self._disc is None:
            self._disc = Discretization(self.u.dim, self.u.n, self.u.extent)
        return self._disc

    @property
    def face_gradient(self):
        return self.disc.D @ self.u.values

    def gradient_field(self):
        """Cell-centered gradient as a vector SampledField."""
        return self.u.with_values(self.disc.cell_gradient(self.u.values))

    def face_modular(self, B=None, truncation=None):
        """sum_faces m_f B(|D_f T_t u|): the face-split gradient modular."""
        B = self.op.B if B is None else B
        vals = self.u.values if truncation is None else np.clip(
            self.u.values, -truncation, truncation)
        Du = self.disc.D @ vals
        return float(np.sum(self.disc.face_measure * B(np.abs(Du))))

    def flux_magnitudes(self, truncation=None):
        """|A| on faces for the truncated state (zero where the face is flat)."""
        vals = self.u.values if truncation is None else np.clip(
            self.u.values, -truncation, truncation)
        Du = self.disc.D @ vals
        mag = np.zeros_like(Du)
        live = Du != 0.0
        mag[live] = self.op.B.derivative(np.abs(Du[live]))
        if self.face_coeff is not None:
            mag = self.face_coeff * mag
        return mag


def _energy(disc, B, mcoeff, Du, eps):
    r = np.sqrt(Du * Du + eps * eps)
    return float(np.sum(mcoeff * (B(r) - B(eps))))


def _trust_step(Du, Ddelta, room):
    """Largest t <= 1 keeping |Du + t Ddelta| <= room on every face."""
    if not np.isfinite(room):
        return 1.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        up = np.where(Ddelta > 0, (room - Du) / Ddelta, np.inf)
        dn = np.where(Ddelta < 0, (-room - Du) / Ddelta, np.inf)
    t = float(min(1.0, np.min(np.minimum(up, dn))))
    return max(t, 0.0)


def _warm_start(disc, B, mcoeff, fvec, eps, room):
    """Laplacian-surrogate shape scaled by a golden search on the true energy."""
    H0 = (disc.DT @ sparse.diags(mcoeff) @ disc.D).tocsc()
    u_lin = spsolve(H0, disc.cell_measure * fvec)
    Du = disc.D @ u_lin
    gmax = float(np.max(np.abs(Du)))
    if gmax == 0.0:
        return np.zeros_like(u_lin)
    s_hi = min(1e3, 0.9 * room / gmax) if np.isfinite(room) else 1e3
    s_lo = 1e-6 * min(1.0, s_hi)
    fint = disc.cell_measure * fvec
    pairing = float(np.dot(fint, u_lin))

    def neg_energy(s):
        return -(_energy(disc, B, mcoeff, s * Du, eps) - s * pairing)

    s_best, _ = roots.golden_max(neg_energy, s_lo, s_hi)
    return float(s_best) * u_lin


def _newton(disc, B, coeff, fvec, u0, eps, tol_res, max_iter):
    """Damped Newton on the frozen-coefficient convex energy.

    Returns (u, energies, iterations, residual, converged); the caller decides
    whether a non-converged exit is an error.
    """
    mcoeff = disc.face_measure * (coeff if coeff is not None else 1.0)
    fint = disc.cell_measure * fvec
    room = TRUST_CAP_FRACTION * B.domain_cap
    u = np.array(u0, dtype=float)
    Du = disc.D @ u
    gmax = float(np.max(np.abs(Du))) if Du.size else 0.0
    if gmax > room:
        u *= 0.5 * room / gmax
        Du = disc.D @ u
    E = _energy(disc, B, mcoeff, Du, eps) - float(np.dot(fint, u))
    energies = [E]
    converged = False
    res = math.inf
    it = 0
    for it in range(max_iter + 1):
        r = np.sqrt(Du * Du + eps * eps)
        Bp = B.derivative(r)
        flux = mcoeff * Bp * Du / r
        G = disc.DT @ flux - fint
        res = float(np.max(np.abs(G))) / disc.cell_measure
        if res <= tol_res:
            converged = True
            break
        if it == max_iter:
            break
        Bpp = B.second_derivative(r)
        w = Bpp * Du * Du / (r * r) + Bp * eps * eps / (r ** 3)
        w = np.maximum(w, 1e-300)
        H = (disc.DT @ sparse.diags(mcoeff * w) @ disc.D).tocsc()
        delta = spsolve(H, -G)
        if not np.all(np.isfinite(delta)):
            break
        Ddelta = disc.D @ delta
        t = _trust_step(Du, Ddelta, room)
        if t <= 0.0:
            break
        gTd = float(np.dot(G, delta))
        noise = ARMIJO_NOISE * (1.0 + abs(E))
        accepted = False
        while t > 1e-14:
            Du_new = Du + t * Ddelta
            E_new = (_energy(disc, B, mcoeff, Du_new, eps)
                     - float(np.dot(fint, u + t * delta)))
            if E_new <= E + ARMIJO_SIGMA * t * gTd + noise:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        u = u + t * delta
        Du = Du_new
        E = E_new
        energies.append(E)
    return u, energies, it, res, converged


def _newton_continuation(disc, B, coeff, fvec, u0, eps, tol_res, max_iter,
                         fmax):
    """Damped Newton with continuation in the flux regularization.

    Kinds whose derivative does not vanish at the origin (t exp t and
    friends) make the regularized flux nearly kinked at the eps scale, so the
    solve walks eps down by decades, warm-starting each stage, and only the
    final stage is held to the target tolerance.
    """
    u = np.array(u0, dtype=float)
    total = 0
    for j in range(6, 0, -1):
        u, _, its, _, _ = _newton(disc, B, coeff, fvec, u, eps * 10.0 ** j,
                                  max(tol_res, 1e-5 * fmax), min(30, max_iter))
        total += its
    u, energies, its, res, ok = _newton(disc, B, coeff, fvec, u, eps,
                                        tol_res, max_iter)
    total += its
    return u, energies, total, res, ok


def solve_approximate(op, f_k, max_iter=60, tol_factor=NEWTON_TOL_FACTOR,
                      outer_max=200):
    """Solve the zero-Dirichlet discrete problem for bounded data f_k.

    Potential form: damped Newton on the convex energy, with continuation in
    the flux regularization for stiff kinds.  Z-perturbed form: outer fixed
    point freezing the face-averaged state with under-relaxation 0.5, Newton
    inside, accepted on the true residual.  Raises NonConvergence (with the
    flagged best iterate attached) when the iteration budget runs out.
    """
    if f_k.is_vector:
        raise ValueError("the datum must be a scalar field")
    if op.form == CUSTOM_FLUX:
        raise ValueError("only the potential and z-perturbed forms are solvable")
    disc = Discretization(f_k.dim, f_k.n, f_k.extent)
    fvec = np.asarray(f_k.values, dtype=float)
    fmax = float(np.max(np.abs(fvec))) if fvec.size else 0.0
    eps = FLUX_EPS_FACTOR * f_k.extent
    if fmax == 0.0:
        return SolveResult(u=disc.template(), f=f_k, op=op, residual=0.0, tol=0.0,
                           converged=True, iterations=0, outer_iterations=0,
                           energy_trace=(0.0,), eps=eps,
                           face_coeff=None, _disc=disc)
    tol_res = tol_factor * fmax
    B = op.B
    room = TRUST_CAP_FRACTION * B.domain_cap

    accept_res = RESIDUAL_ACCEPT * fmax
    u0 = _warm_start(disc, B, disc.face_measure, fvec, eps, room)
    if op.form == POTENTIAL_GRADIENT_FLUX:
        u, energies, its, res, ok = _newton_continuation(
            disc, B, None, fvec, u0, eps, tol_res, max_iter, fmax)
        ok = ok or res <= accept_res
        result = SolveResult(u=disc.template().with_values(u), f=f_k, op=op,
                             residual=res, tol=accept_res, converged=ok,
                             iterations=its, outer_iterations=0,
                             energy_trace=tuple(energies), eps=eps,
                             face_coeff=None, _disc=disc)
        if not ok:
            raise NonConvergence(
                f"Newton stalled at residual {res:.3g} (tolerance {accept_res:.3g})",
                result=result)
        return result

    # z-perturbed: relax the frozen face state toward the solve's own state
    theta = op.theta
    z_frozen = np.zeros(disc.nfaces)
    u = u0
    total_iters = 0
    energies = ()
    res_true = math.inf
    converged = False
    outer = 0
    for outer in range(1, outer_max + 1):
        coeff = 1.0 + theta * np.arctan(z_frozen) / np.pi
        if outer == 1:
            u, tr, its, _, ok = _newton_continuation(disc, B, coeff, fvec, u,
                                                     eps, tol_res, max_iter, fmax)
        else:
            u, tr, its, _, ok = _newton(disc, B, coeff, fvec, u, eps,
                                        tol_res, max_iter)
        total_iters += its
        energies = tuple(tr)
        if not ok:
            break
        z_true = disc.face_average @ u
        coeff_true = 1.0 + theta * np.arctan(z_true) / np.pi
        _, flux_true = _face_flux(disc, B, u, eps, coeff_true)
        G = _residual_vector(disc, flux_true, fvec)
        res_true = float(np.max(np.abs(G))) / disc.cell_measure
        if res_true <= tol_res:
            converged = True
            break
        z_frozen = 0.5 * (z_frozen + z_true)
    converged = converged or res_true <= accept_res
    coeff_final = 1.0 + theta * np.arctan(disc.face_average @ u) / np.pi
    result = SolveResult(u=disc.template().with_values(u), f=f_k, op=op,
                         residual=res_true, tol=accept_res, converged=converged,
                         iterations=total_iters, outer_iterations=outer,
                         energy_trace=energies, eps=eps,
                         face_coeff=coeff_final, _disc=disc)
    if not converged:
        raise NonConvergence(
            f"fixed point stalled at residual {res_true:.3g} "
            f"(tolerance {accept_res:.3g})", result=result)
    return result


# ---------------------------------------------------------------------------
# a priori estimates


def _datum_l1(f):
    if isinstance(f, AtomicMeasure):
        return f.total_mass
    return float(np.sum(np.abs(f.magnitude())) * f.cell_measure)


def _fit_nonnegative_pair(P, ts, ys):
    """Least-squares fit y ~ c1 P(t) + c2 with c1, c2 >= 0, then lift c2 so
    every fitted point is covered (the empirical-constant convention)."""
    Pt = np.array([float(P(t)) for t in ts])
    X = np.stack([Pt, np.ones_like(Pt)], axis=1)
    sol, *_ = np.linalg.lstsq(X, ys, rcond=None)
    c1, c2 = float(sol[0]), float(sol[1])
    if c1 < 0:
        c1 = 0.0
        c2 = float(np.max(ys))
    if c2 < 0:
        c2 = 0.0
        denom = float(np.dot(Pt, Pt))
        c1 = max(0.0, float(np.dot(Pt, ys)) / denom) if denom > 0 else 0.0
    short = np.max(ys - (c1 * Pt + c2))
    if short > 0:
        c2 += float(short)
    return c1, c2


def apriori_report(op, result, f, truncation_levels, slack=1.1):
    """Truncation-level tables for both a priori estimates.

    First estimate: the face-split modular of the truncated gradient against
    c0 t ||f||_1 with c0 = 2/d0.  Second estimate: the conjugate modular of
    the flux (both scaling conventions |A|/d and |A| d) against
    c0 t ||f||_1 + c1 P(t) + c2 with nonnegative constants fitted on the
    even-index levels; violations beyond the discretization slack are flagged.
    """
    levels = tuple(float(t) for t in truncation_levels)
    if not levels:
        raise ValueError("need at least one truncation level")
    l1 = _datum_l1(f)
    c0 = 2.0 / op.d0
    Btilde = conjugate(op.B)
    rows = []
    for t in levels:
        lhs1 = result.face_modular(truncation=t)
        bound1 = c0 * t * l1
        amag = result.flux_magnitudes(truncation=t)
        m = result.disc.face_measure
        lhs2_div = float(np.sum(m * Btilde(amag / op.d)))
        lhs2_mul = float(np.sum(m * Btilde(amag * op.d)))
        rows.append({"t": t, "lhs1": lhs1, "bound1": bound1,
                     "ok1": bool(lhs1 <= slack * bound1 + 1e-300),
                     "lhs2_div": lhs2_div, "lhs2_mul": lhs2_mul})
    ts = np.array(levels)
    base = c0 * ts * l1
    fit = {}
    conventions = {}
    for key in ("div", "mul"):
        ys = np.array([row[f"lhs2_{key}"] for row in rows]) - base
        even = slice(0, None, 2)
        c1, c2 = _fit_nonnegative_pair(op.P, ts[even], ys[even])
        fit[key] = {"c1": c1, "c2": c2}
        ok_all = True
        for i, row in enumerate(rows):
            bound2 = base[i] + c1 * float(op.P(ts[i])) + c2
            row[f"bound2_{key}"] = bound2
            row[f"ok2_{key}"] = bool(row[f"lhs2_{key}"] <= slack * bound2 + 1e-300)
            ok_all = ok_all and row[f"ok2_{key}"]
        conventions[key] = ok_all
    return {"c0": c0, "l1": l1, "d": op.d, "slack": slack, "rows": rows,
            "fit": fit, "conventions": conventions,
            "ok1_all": bool(all(row["ok1"] for row in rows)),
            "K": c0 * l1}


# ---------------------------------------------------------------------------
# approximation studies


def _level_data(problem, k):
    if isinstance(problem.datum, AtomicMeasure):
        return mollify_measure(problem.datum, k, problem.template())
    return approximate_l1_data(problem.datum, k)


def cauchy_in_measure(solutions, taus):
    """d(u_i, u_j) = |{|u_i - u_j| > tau}| for every pair, one matrix per tau."""
    nsol = len(solutions)
    out = {}
    for tau in taus:
        mat = np.zeros((nsol, nsol))
        for i in range(nsol):
            for j in range(i + 1, nsol):
                diff = solutions[i].with_values(
                    solutions[i].values - solutions[j].values)
                mat[i, j] = mat[j, i] = distribution_measure(diff, float(tau))
        out[float(tau)] = mat
    return out


def chebyshev_tail_constant(u, B, n_levels=12):
    """Smallest C with |{|u| >= l}| <= C l / B(l) on a level grid."""
    umax = float(np.max(np.abs(u.magnitude())))
    if umax == 0.0:
        return 0.0, np.zeros(0)
    ls = np.geomspace(0.05 * umax, 0.95 * umax, n_levels)
    mus = distribution_measure(u, ls)
    ratios = mus * B(ls) / ls
    return float(np.max(ratios)), ls


def convergence_study(op, problem, tau_fractions=(1e-4, 1e-3, 1e-2, 1e-1)):
    """Mollifier-level refinement study: solves, Cauchy-in-measure matrices,
    Chebyshev tail constants, and the flux consistency of the finest level."""
    levels = problem.mollifier_levels
    if len(levels) < 3:
        raise ValueError("need at least 3 mollifier levels for a refinement study")
    data = [_level_data(problem, k) for k in levels]
    results = [solve_approximate(op, fk) for fk in data]
    fields = [r.u for r in results]
    umax = float(np.max(np.abs(fields[-1].values)))
    taus = tuple(float(t) * umax for t in tau_fractions)
    cauchy = cauchy_in_measure(fields, taus)
    tails = []
    for r in results:
        C, _ = chebyshev_tail_constant(r.u, op.B)
        tails.append(C)
    finest = results[-1]
    _, flux = _face_flux(finest.disc, op.B, finest.u.values, finest.eps,
                         finest.face_coeff)
    G = _residual_vector(finest.disc, flux, data[-1].values)
    flux_consistency = {
        "max_residual": float(np.max(np.abs(G))) / finest.disc.cell_measure,
        "l1_residual": float(np.sum(np.abs(G))),
    }
    return {"levels": levels, "data": data, "results": results,
            "cauchy": cauchy, "tail_constants": tails,
            "ae_limit": fields[-1], "flux_consistency": flux_consistency}


def data_sequence(f, levels, kind):
    """Approximating data sequence for an integrable datum: smooth mollified
    approximations ("mollifier") or pointwise clamps ("truncation")."""
    if kind == "mollifier":
        return [approximate_l1_data(f, int(k)) for k in levels]
    if kind == "truncation":
        return [truncate(f, float(t)) for t in levels]
    raise ValueError(f"unknown sequence kind {kind!r}")


def uniqueness_experiment(op, f, two_sequences):
    """Discrepancy between the limits of two approximation sequences for the
    same integrable datum (e.g. mollified vs clamped data).

    Requires the declared strict monotonicity — the property that forces both
    sequences to share their limit.  The sequences pair up index-by-index; the
    limits are taken as the finest-level solves.
    """
    if not op.strongly_monotone:
        raise NotStronglyMonotone(
            "the uniqueness experiment needs a strictly monotone flux")
    seq_a, seq_b = two_sequences
    if len(seq_a) != len(seq_b) or not seq_a:
        raise ValueError("the two data sequences must pair up level-by-level")
    for g in (*seq_a, *seq_b):
        f.same_grid(g)
    res_a = [solve_approximate(op, g) for g in seq_a]
    res_b = [solve_approximate(op, g) for g in seq_b]
    per_level = []
    for r1, r2 in zip(res_a, res_b):
        du = float(np.max(np.abs(r1.u.values - r2.u.values)))
        g1, g2 = r1.gradient_field(), r2.gradient_field()
        dg = float(np.max(np.abs(g1.values - g2.values)))
        per_level.append({"u": du, "grad": dg})
    return {"max_discrepancy_u": per_level[-1]["u"],
            "max_discrepancy_grad": per_level[-1]["grad"],
            "per_level": per_level,
            "results": (res_a, res_b)}


# ---------------------------------------------------------------------------
# regularity verdicts


class _TargetAdapter:
    """Wrap a monotone target callable with the inverse/cap protocol the
    Marcinkiewicz estimators expect."""

    def __init__(self, fn, domain_cap):
        self._fn = fn
        self.domain_cap = float(domain_cap)

    def __call__(self, r):
        return self._fn(r)

    def inverse(self, y):
        y = np.asarray(y, dtype=float)
        hi = roots.expand_upper(self._fn, float(np.max(y)), start=1.0,
                                cap=self.domain_cap)
        if hi is None:
            raise DomainCapExceeded("target value outside the trusted range")
        flat = np.atleast_1d(y)
        out = roots.solve_increasing(self._fn, flat, 1e-280, hi)
        return out if y.ndim else float(out[0])


def _probe_cap(fn, start=1.0, limit=1e208):
    r = start
    last = None
    while r < limit:
        try:
            v = fn(r)
        except Exception:
            break
        if not np.isfinite(v):
            break
        last = r
        r *= 10.0
    if last is None:
        raise ValueError("target is not evaluable on the probe range")
    return last


def _weak_norm(fn_or_nf, fld):
    try:
        if hasattr(fn_or_nf, "inverse") and hasattr(fn_or_nf, "domain_cap"):
            phi = fn_or_nf
        else:
            phi = _TargetAdapter(fn_or_nf, _probe_cap(fn_or_nf))
        return float(weak_marcinkiewicz(phi, fld)), None
    except (EmptyTail, DomainCapExceeded, UndeterminedGrowth, ValueError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def regularity_verdict(u, grad_u, targets):
    """Weak Marcinkiewicz quasi-norms of the solution and its gradient against
    the level-set targets; in the fast regime the solution target is
    boundedness itself and the gradient is measured against B."""
    report = {"growth_class": targets.growth_class, "quasi_norms": {}, "notes": []}
    val, note = _weak_norm(targets.Phi1, u)
    report["quasi_norms"]["u_vs_Phi1"] = val
    if note:
        report["notes"].append(f"u_vs_Phi1: {note}")
    val, note = _weak_norm(targets.Psi1, grad_u)
    report["quasi_norms"]["grad_vs_Psi1"] = val
    if note:
        report["notes"].append(f"grad_vs_Psi1: {note}")
    if targets.growth_class == SLOW:
        val, note = _weak_norm(targets.Phi2, u)
        report["quasi_norms"]["u_vs_Phi2"] = val
        if note:
            report["notes"].append(f"u_vs_Phi2: {note}")
        val, note = _weak_norm(targets.Psi2, grad_u)
        report["quasi_norms"]["grad_vs_Psi2"] = val
        if note:
            report["notes"].append(f"grad_vs_Psi2: {note}")
    if targets.l_infinity:
        report["l_infinity"] = float(np.max(np.abs(u.magnitude())))
        val, note = _weak_norm(targets.gradient_target, grad_u)
        report["quasi_norms"]["grad_vs_B"] = val
        if note:
            report["notes"].append(f"grad_vs_B: {note}")
    finite = [v for v in report["quasi_norms"].values()]
    report["verdict"] = ("finite" if all(v is not None and np.isfinite(v)
                                         for v in finite) else "undetermined")
    return report


def refinement_stability(values, window=0.2):
    """Stable iff the spread (max-min)/min across refinements is within the
    window; growing iff the sequence increases beyond it."""
    vals = np.asarray([v for v in values if v is not None], dtype=float)
    if len(vals) < 2 or np.any(~np.isfinite(vals)) or np.min(vals) <= 0:
        return {"verdict": "undetermined", "spread": math.inf}
    spread = float(np.max(vals) / np.min(vals) - 1.0)
    if spread <= window:
        verdict = "stable"
    elif bool(np.all(np.diff(vals) > 0)):
        verdict = "growing"
    else:
        verdict = "irregular"
    return {"verdict": verdict, "spread": spread}
