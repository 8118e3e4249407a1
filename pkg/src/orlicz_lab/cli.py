"""Command-line front end wiring the library into reproducible experiments.

Subcommands
-----------
nfun    growth-function report: evaluation/conjugate tables, doubling
        statistics, Simonenko-type index estimates, domination checks
norm    Luxemburg norm, modulars, rearrangement profile, and Marcinkiewicz
        norms of a sampled field against a chosen growth function
embed   dimensional transform: growth class, transformed functions, knot
        tables, and level-set target functions
solve   end-to-end pipeline: data approximation, Newton solves per level,
        a priori tables, convergence study, regularity verdict, plots
verify  run the acceptance criteria (suites: calculus, norms, embedding,
        solver, all); exit code reflects the outcome

Every command writes a JSON report embedding the configuration hash and the
tolerance set used; with a fixed seed the report bytes are reproducible.
The output directory is ``--out``, else ``$ORLICZ_LAB_OUT``, else
``./orlicz-lab-out``.  Exit codes: 0 success, 1 flagged invariants or failed
criteria, 2 usage/parse errors.
"""

import argparse
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import nfunction as nf
from . import norms
from . import verify as acceptance
from .embedding import embedding_functions, regularity_targets
from .errors import (
    EmptyTail,
    GridMismatch,
    NonConvergence,
    OrliczLabError,
    ParseError,
    UndeterminedGrowth,
)
from .fields import SampledField
from .report import (
    assemble_report,
    line_chart,
    parse_json_file,
    read_field_csv,
    resolve_out_dir,
    write_field_csv,
    write_json,
    write_table_csv,
)
from .solver import (
    NEWTON_TOL_FACTOR,
    RESIDUAL_ACCEPT,
    apriori_report,
    convergence_study,
    load_problem,
    refinement_stability,
    regularity_verdict,
)

DEFAULT_TOLERANCES = {
    "newton_tol_factor": NEWTON_TOL_FACTOR,
    "residual_accept": RESIDUAL_ACCEPT,
    "apriori_slack": 1.1,
    "flux_consistency": 1e-7,
}


@dataclass(frozen=True)
class RunConfig:
    """One command invocation: what ran, on what, with which knobs."""

    command: str
    inputs: dict
    out_dir: str
    seed: int
    tolerances: dict

    def hashable(self):
        """The part of the configuration that determines report content.

        The output directory is deliberately excluded: it says where the
        report goes, not what it contains, so moving the artifacts must not
        change their bytes.
        """
        return {"command": self.command, "inputs": self.inputs,
                "seed": self.seed, "tolerances": self.tolerances}


def _tolerances(args):
    tols = dict(DEFAULT_TOLERANCES)
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise ParseError(f"--tol expects NAME=VALUE, got {item!r}")
        try:
            tols[name] = float(value)
        except ValueError:
            raise ParseError(f"--tol {name}: {value!r} is not a number") from None
    return tols


def _run_config(args, inputs):
    return RunConfig(command=args.command, inputs=inputs,
                     out_dir=resolve_out_dir(args.out), seed=args.seed,
                     tolerances=_tolerances(args))


def _emit(cfg, body, filename):
    payload = assemble_report(cfg.command, cfg.hashable(), cfg.tolerances, body)
    path = os.path.join(cfg.out_dir, filename)
    write_json(path, payload)
    return path


# ---------------------------------------------------------------------------
# growth-function construction shared by nfun / norm / embed


def _add_nfunction_flags(sub):
    sub.add_argument("--spec", metavar="FILE",
                     help="growth-function JSON spec (overrides --kind)")
    sub.add_argument("--kind", choices=["power", "zygmund", "llogl",
                                        "exp_conjugate", "t_exp_t",
                                        "pathological"],
                     help="built-in growth-function family")
    sub.add_argument("--p", type=float, help="primary exponent")
    sub.add_argument("--q", type=float, help="upper exponent (pathological)")
    sub.add_argument("--beta", type=float, help="logarithm exponent (zygmund)")
    sub.add_argument("--scale", type=float, help="multiplicative scale (power)")


def _nfunction_from_args(args):
    if args.spec:
        return nf.from_spec(parse_json_file(args.spec))
    if not args.kind:
        raise ParseError("pass --spec FILE or --kind NAME to choose a "
                         "growth function")
    kind = args.kind
    if kind == "power":
        if args.p is None:
            raise ParseError("--kind power needs --p")
        return nf.power(args.p, scale=args.scale if args.scale else 1.0)
    if kind == "zygmund":
        if args.p is None:
            raise ParseError("--kind zygmund needs --p (and optionally --beta)")
        return nf.zygmund(args.p, args.beta if args.beta is not None else 1.0)
    if kind == "llogl":
        return nf.llogl()
    if kind == "exp_conjugate":
        return nf.exp_conjugate()
    if kind == "t_exp_t":
        return nf.t_exp_t()
    if kind == "pathological":
        if args.p is None or args.q is None:
            raise ParseError("--kind pathological needs --p and --q")
        return nf.pathological_nfunction(args.p, args.q)
    raise ParseError(f"unknown kind {args.kind!r}")


def _eval_window(B, lo=0.01, hi=100.0):
    top = min(hi, 0.5 * B.domain_cap)
    return np.geomspace(lo, max(top, lo * 10), 25)


def _function_table(B, ts):
    return [[float(t), float(B(t)), float(B.derivative(t))] for t in ts]


# ---------------------------------------------------------------------------
# nfun


def cmd_nfun(args):
    B = _nfunction_from_args(args)
    inputs = {"spec": args.spec, "kind": args.kind, "p": args.p, "q": args.q,
              "beta": args.beta, "scale": args.scale,
              "compare": args.compare}
    cfg = _run_config(args, inputs)
    ts = _eval_window(B)
    body = {"kind": B.kind, "spec": nf.to_spec(B), "domain_cap": B.domain_cap,
            "evaluation": {"columns": ["t", "B", "dB"],
                           "rows": _function_table(B, ts)}}
    write_table_csv(os.path.join(cfg.out_dir, "nfun_evaluation.csv"),
                    ["t", "B", "dB"], body["evaluation"]["rows"])
    print(f"growth function {B.kind}; trusted up to t = {B.domain_cap:.3g}")

    if args.conjugate:
        Bt = nf.conjugate(B)
        cts = _eval_window(Bt)
        body["conjugate"] = {"columns": ["s", "Bconj", "dBconj"],
                             "rows": _function_table(Bt, cts)}
        write_table_csv(os.path.join(cfg.out_dir, "nfun_conjugate.csv"),
                        ["s", "Bconj", "dBconj"], body["conjugate"]["rows"])
        print(f"conjugate table written (cap {Bt.domain_cap:.3g})")

    if args.delta2:
        stats = nf.delta2_stats(B)
        doubling = bool(stats["doubling_evidence"])
        body["doubling"] = {
            "ratio_max": stats["ratio_max"],
            "tail_growth": stats["tail_growth"],
            "doubling_evidence": doubling,
            "flag": "doubling" if doubling else "NOT-doubling",
        }
        print("doubling ratio B(2t)/B(t): max "
              f"{stats['ratio_max']:.4g}, tail growth {stats['tail_growth']:.4g}"
              f" -> {'doubling holds' if doubling else 'flagged NOT-doubling'}")

    if args.indices:
        idx = nf.simonenko_indices(B)
        body["simonenko"] = {"lower": idx["lower"], "upper": idx["upper"]}
        print(f"Simonenko index estimates: lower {idx['lower']:.4f}, "
              f"upper {idx['upper']:.4f}")

    if args.compare:
        P = nf.from_spec(parse_json_file(args.compare))
        much_slower, ev1 = nf.dominates_much(P, B)
        much_faster, ev2 = nf.dominates_much(B, P)
        body["domination"] = {
            "other": P.kind,
            "other_essentially_slower": bool(much_slower),
            "self_essentially_slower": bool(much_faster),
            "evidence_other_slower": [
                {"eps": e["eps"], "tail_decreasing": e["tail_decreasing"],
                 "tail_below_tol": e["tail_below_tol"],
                 "final_ratio": float(e["ratio"][-1])} for e in ev1],
            "evidence_self_slower": [
                {"eps": e["eps"], "tail_decreasing": e["tail_decreasing"],
                 "tail_below_tol": e["tail_below_tol"],
                 "final_ratio": float(e["ratio"][-1])} for e in ev2],
        }
        print(f"domination: {P.kind} essentially slower than {B.kind}: "
              f"{much_slower}; converse: {much_faster}")

    path = _emit(cfg, body, "nfun_report.json")
    print(f"report: {path}")
    return 0


# ---------------------------------------------------------------------------
# norm


def cmd_norm(args):
    f = read_field_csv(args.field)
    B = _nfunction_from_args(args)
    cfg = _run_config(args, {"field": args.field, "spec": args.spec,
                             "kind": args.kind, "p": args.p, "q": args.q,
                             "beta": args.beta, "scale": args.scale})
    lux = norms.luxemburg_norm(B, f)
    body = {"kind": B.kind, "field": {"dim": f.dim, "n": f.n,
                                      "extent": f.extent,
                                      "vector": bool(f.is_vector)},
            "luxemburg_norm": lux}
    if lux > 0:
        body["modular_at_multiples"] = {
            str(mult): float(norms.modular(B, f, mult * lux))
            for mult in (0.5, 1.0, 2.0)}
    else:
        body["modular_at_multiples"] = None

    prof = norms.rearrange(f)
    rcsv = os.path.join(cfg.out_dir, "rearrangement.csv")
    prof.to_csv(rcsv)
    body["rearrangement"] = {"csv": os.path.basename(rcsv),
                             "total_measure": prof.total_measure,
                             "integral": prof.integral(),
                             "max_level": float(prof.levels[0])
                             if len(prof.levels) else 0.0}
    try:
        weak = float(norms.weak_marcinkiewicz(B, f))
    except EmptyTail:
        weak = None  # too few distinct levels for the tail estimator
    body["marcinkiewicz"] = {
        "strong": float(norms.marcinkiewicz_norm(B, f)),
        "weak": weak,
    }
    print(f"Luxemburg norm: {lux:.10g}")
    print(f"Marcinkiewicz norms: strong {body['marcinkiewicz']['strong']:.10g}, "
          f"weak {weak if weak is None else format(weak, '.10g')}")
    path = _emit(cfg, body, "norm_report.json")
    print(f"report: {path}")
    return 0


# ---------------------------------------------------------------------------
# embed


def cmd_embed(args):
    B = _nfunction_from_args(args)
    if args.N < 2:
        raise ParseError("--N must be at least 2 (one-dimensional domains "
                         "need no embedding step)")
    cfg = _run_config(args, {"spec": args.spec, "kind": args.kind,
                             "p": args.p, "q": args.q, "beta": args.beta,
                             "scale": args.scale, "N": args.N,
                             "override_class": args.override_class,
                             "K": args.K, "diam": args.diam})
    try:
        data = embedding_functions(B, args.N, override_class=args.override_class)
        targets = regularity_targets(B, args.N, K=args.K, diam_omega=args.diam,
                                     override_class=args.override_class)
    except UndeterminedGrowth as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: rerun with --override-class Slow or --override-class "
              "Fast to force the regime", file=sys.stderr)
        return 2

    hi = min(data.B_N.domain_cap, data.H_N.domain_cap, data.phi_N.domain_cap)
    ts = np.geomspace(1e-2, 0.5 * hi, 40)
    rows = [[float(t), float(data.H_N(t)), float(data.B_N(t)),
             float(data.phi_N(t))] for t in ts]
    write_table_csv(os.path.join(cfg.out_dir, "embedding_functions.csv"),
                    ["t", "H_N", "B_N", "phi_N"], rows)

    def _guarded(fn, t):
        try:
            v = float(fn(t))
        except OrliczLabError:
            return None
        return v if math.isfinite(v) else None

    tts = np.geomspace(1e-2, min(100.0, 0.25 * B.domain_cap), 40)
    target_rows = []
    for t in tts:
        row = [float(t), _guarded(targets.Phi1, t), _guarded(targets.Psi1, t)]
        if targets.growth_class == "Slow":
            row += [_guarded(targets.Phi2, t), _guarded(targets.Psi2, t)]
        target_rows.append(row)
    theader = ["t", "Phi1", "Psi1"] + (["Phi2", "Psi2"]
                                       if targets.growth_class == "Slow" else [])
    write_table_csv(os.path.join(cfg.out_dir, "level_set_targets.csv"),
                    theader, target_rows)

    body = {"kind": B.kind, "N": data.N, "Nprime": data.Nprime,
            "growth_class": data.growth_class,
            "knots": {"s": data.knots_s, "H": data.knots_H},
            "solution_target_is_boundedness": bool(targets.l_infinity),
            "target_constants": targets.constants,
            "tables": {"embedding_functions": "embedding_functions.csv",
                       "level_set_targets": "level_set_targets.csv"}}
    print(f"growth class in dimension {args.N}: {data.growth_class}")
    path = _emit(cfg, body, "embed_report.json")
    print(f"report: {path}")
    return 0


# ---------------------------------------------------------------------------
# solve


def _distribution_curve(field, n_pts=40):
    mag = field.magnitude()
    top = float(np.max(mag))
    if top <= 0:
        return np.array([]), np.array([])
    ts = np.geomspace(top * 1e-3, top * 0.98, n_pts)
    mu = np.array([norms.distribution_measure(field, t) for t in ts])
    keep = mu > 0
    return ts[keep], mu[keep]


def _plot_level_sets(path, field, target_fn, quasi_norm, what):
    ts, mu = _distribution_curve(field)
    if ts.size == 0:
        return False
    total = field.extent ** field.dim
    target = []
    for t in ts:
        try:
            val = float(target_fn(t))
        except OrliczLabError:
            val = float("inf")
        target.append(min(total, quasi_norm / val) if val > 0 else total)
    line_chart(path,
               [("measured level-set measure", ts, mu),
                ("target bound", ts, np.asarray(target), "--")],
               title=f"Level sets of {what} vs decay target",
               xlabel="level t", ylabel="measure of {|.| > t}",
               logx=True, logy=True)
    return True


def _solution_profile_curve(u):
    if u.dim == 1:
        xs = u.centers()[0]
        return xs, u.values
    mid = u.n // 2
    xs = u.centers()[0].reshape(u.n, u.n)[:, mid]
    return xs, u.values.reshape(u.n, u.n)[:, mid]


def cmd_solve(args):
    obj = parse_json_file(args.problem)
    try:
        op, problem = load_problem(obj)
    except (ValueError, KeyError) as exc:
        raise ParseError(f"problem JSON: {exc}") from exc
    cfg = _run_config(args, {"problem": args.problem, "spec_digest": obj})
    tols = cfg.tolerances
    flags = []

    print(f"solving: dim {problem.dim}, n {problem.n}, flux '{op.form}' on "
          f"{op.B.kind}; levels {list(problem.mollifier_levels)}")
    try:
        study = convergence_study(op, problem)
    except NonConvergence as exc:
        flags.append(f"nonconvergent: {exc}")
        body = {"flags": flags, "error": str(exc)}
        path = _emit(cfg, body, "solve_report.json")
        print(f"solver did not converge: {exc}", file=sys.stderr)
        print(f"report: {path}")
        return 1

    results = study["results"]
    finest = results[-1]
    level_rows = []
    for lvl, res in zip(study["levels"], results):
        level_rows.append({"level": float(lvl),
                           "iterations": int(res.iterations),
                           "outer_iterations": int(res.outer_iterations),
                           "residual": float(res.residual),
                           "converged": bool(res.converged)})
        if not res.converged:
            flags.append(f"level {lvl}: not converged "
                         f"(residual {res.residual:.3e})")

    umax = float(np.max(np.abs(finest.u.values)))
    trunc = problem.truncation_levels
    apriori = apriori_report(op, finest, study["data"][-1],
                             truncation_levels=trunc,
                             slack=tols["apriori_slack"])
    if not apriori["ok1_all"]:
        flags.append("a priori gradient-modular bound violated")
    if not (apriori["conventions"]["div"] or apriori["conventions"]["mul"]):
        flags.append("a priori flux-modular bound violated in both "
                     "scaling conventions")
    ap_cols = ["t", "lhs1", "bound1", "ok1", "lhs2_div", "bound2_div",
               "ok2_div", "lhs2_mul", "bound2_mul", "ok2_mul"]
    write_table_csv(os.path.join(cfg.out_dir, "apriori.csv"), ap_cols,
                    [[row[c] for c in ap_cols] for row in apriori["rows"]])

    flux_gap = study["flux_consistency"]["max_residual"]
    if flux_gap > tols["flux_consistency"] * max(1.0, umax):
        flags.append(f"flux consistency residual {flux_gap:.3e} exceeds "
                     f"tolerance")

    grad = finest.gradient_field()
    if problem.dim >= 2:
        targets = regularity_targets(op.B, problem.dim, K=apriori["K"],
                                     diam_omega=problem.extent
                                     * math.sqrt(problem.dim))
        verdict = regularity_verdict(finest.u, grad, targets)
    else:
        weak = float(norms.weak_marcinkiewicz(op.B, grad))
        verdict = {"growth_class": None,
                   "quasi_norms": {"grad_vs_B": weak},
                   "l_infinity": umax,
                   "verdict": "finite" if math.isfinite(weak) else
                   "undetermined",
                   "notes": ["one-dimensional domain: boundedness holds "
                             "whenever the datum is summable"]}

    sol_csv = os.path.join(cfg.out_dir, "solution.csv")
    write_field_csv(sol_csv, finest.u)
    write_field_csv(os.path.join(cfg.out_dir, "gradient.csv"), grad)

    plots = {}
    xs, prof = _solution_profile_curve(finest.u)
    line_chart(os.path.join(cfg.out_dir, "solution_profile.svg"),
               [("u (finest level)", xs, prof)],
               title="Solution profile", xlabel="x",
               ylabel="u" if problem.dim == 1 else "u on the midline")
    plots["solution_profile"] = "solution_profile.svg"

    curves = []
    for tau, M in sorted(study["cauchy"].items()):
        M = np.asarray(M)
        sup = M[np.arange(len(M) - 1), np.arange(1, len(M))]
        curves.append((f"tau = {tau:g}", np.arange(1, len(M)), sup))
    if curves and all(np.all(c[2] > 0) for c in curves):
        line_chart(os.path.join(cfg.out_dir, "convergence.svg"), curves,
                   title="In-measure Cauchy distances between "
                         "consecutive levels",
                   xlabel="level index", ylabel="measure of disagreement",
                   logy=True)
        plots["convergence"] = "convergence.svg"

    if problem.dim >= 2:
        q_u = verdict["quasi_norms"].get("u_vs_Phi1")
        if q_u is not None and _plot_level_sets(
                os.path.join(cfg.out_dir, "level_sets_solution.svg"),
                finest.u, targets.Phi1, q_u, "the solution"):
            plots["level_sets_solution"] = "level_sets_solution.svg"
        q_g = verdict["quasi_norms"].get("grad_vs_Psi1")
        if q_g is not None and _plot_level_sets(
                os.path.join(cfg.out_dir, "level_sets_gradient.svg"),
                grad, targets.Psi1, q_g, "the gradient"):
            plots["level_sets_gradient"] = "level_sets_gradient.svg"
    else:
        q_g = verdict["quasi_norms"].get("grad_vs_B")
        if q_g is not None and math.isfinite(q_g) and _plot_level_sets(
                os.path.join(cfg.out_dir, "level_sets_gradient.svg"),
                grad, op.B, q_g, "the gradient"):
            plots["level_sets_gradient"] = "level_sets_gradient.svg"

    body = {
        "operator": {"form": op.form, "kind": op.B.kind, "d0": op.d0,
                     "d": op.d, "theta": op.theta},
        "problem": {"dim": problem.dim, "n": problem.n,
                    "extent": problem.extent,
                    "mollifier_levels": list(problem.mollifier_levels),
                    "truncation_levels": list(problem.truncation_levels),
                    "mode": problem.approximation_mode},
        "levels": level_rows,
        "solution": {"sup_norm": umax,
                     "energy_trace_final": [float(e) for e in
                                            finest.energy_trace[-5:]],
                     "csv": os.path.basename(sol_csv)},
        "apriori": {"c0": apriori["c0"], "l1": apriori["l1"],
                    "K": apriori["K"], "slack": apriori["slack"],
                    "ok1_all": apriori["ok1_all"],
                    "conventions": apriori["conventions"],
                    "fit": apriori["fit"], "rows": apriori["rows"],
                    "csv": "apriori.csv"},
        "convergence": {"cauchy": {str(k): v for k, v in
                                   study["cauchy"].items()},
                        "tail_constants": study["tail_constants"],
                        "flux_consistency": study["flux_consistency"]},
        "regularity": verdict,
        "plots": plots,
        "flags": flags,
    }
    path = _emit(cfg, body, "solve_report.json")
    print(f"finest level: sup|u| = {umax:.6g}, residual "
          f"{finest.residual:.3e} in {finest.iterations} Newton steps")
    print(f"a priori bound holds: {apriori['ok1_all']}; regularity verdict: "
          f"{verdict['verdict']}")
    if flags:
        print("flagged invariants:", file=sys.stderr)
        for fl in flags:
            print(f"  - {fl}", file=sys.stderr)
    print(f"report: {path}")
    return 1 if flags else 0


# ---------------------------------------------------------------------------
# verify


def cmd_verify(args):
    cfg = _run_config(args, {"suite": args.suite})
    results = acceptance.run_suite(args.suite, seed=args.seed)
    for r in results:
        print(r.line)
    body = {
        "suite": args.suite,
        "criteria": [{"number": r.number, "name": r.name,
                      "passed": bool(r.passed), "detail": r.detail,
                      "runtime_limit_seconds": r.limit} for r in results],
        "all_passed": bool(all(r.passed for r in results)),
    }
    path = _emit(cfg, body, "verify_report.json")
    n_pass = sum(1 for r in results if r.passed)
    print(f"{n_pass}/{len(results)} criteria passed")
    print(f"report: {path}")
    return 0 if body["all_passed"] else 1


# ---------------------------------------------------------------------------
# parser / entry point


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, metavar="DIR",
                        help="output directory (default: $ORLICZ_LAB_OUT or "
                             "./orlicz-lab-out)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized property checks")
    common.add_argument("--tol", action="append", default=[],
                        metavar="NAME=VALUE",
                        help="override a named tolerance (repeatable)")

    parser = argparse.ArgumentParser(
        prog="orlicz-lab",
        description="Growth functions, Orlicz-type norms, dimensional "
                    "embedding transforms, and a finite-volume solver for "
                    "gradient-flux problems with unbounded data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_nfun = sub.add_parser("nfun", parents=[common],
                            help="growth-function tables and diagnostics")
    _add_nfunction_flags(p_nfun)
    p_nfun.add_argument("--conjugate", action="store_true",
                        help="emit the convex-conjugate table")
    p_nfun.add_argument("--delta2", action="store_true",
                        help="doubling statistics B(2t)/B(t)")
    p_nfun.add_argument("--indices", action="store_true",
                        help="Simonenko-type index estimates")
    p_nfun.add_argument("--compare", metavar="FILE",
                        help="second spec: check essential domination "
                             "both ways")
    p_nfun.set_defaults(func=cmd_nfun)

    p_norm = sub.add_parser("norm", parents=[common],
                            help="norms and rearrangement of a sampled field")
    p_norm.add_argument("field", help="field CSV (dim,n,extent header)")
    _add_nfunction_flags(p_norm)
    p_norm.set_defaults(func=cmd_norm)

    p_embed = sub.add_parser("embed", parents=[common],
                             help="dimensional transform and level-set targets")
    _add_nfunction_flags(p_embed)
    p_embed.add_argument("--N", type=int, required=True,
                         help="space dimension (>= 2)")
    p_embed.add_argument("--override-class", choices=["Slow", "Fast"],
                         help="force the growth regime when the automatic "
                              "classification is inconclusive")
    p_embed.add_argument("--K", type=float, default=1.0,
                         help="level-set constant for the targets")
    p_embed.add_argument("--diam", type=float, default=1.0,
                         help="domain diameter for the targets")
    p_embed.set_defaults(func=cmd_embed)

    p_solve = sub.add_parser("solve", parents=[common],
                             help="run the full pipeline on a problem JSON")
    p_solve.add_argument("problem", help="problem JSON "
                                         "(operator + problem sections)")
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser("verify", parents=[common],
                              help="run the acceptance criteria")
    p_verify.add_argument("suite", choices=sorted(acceptance.SUITES),
                          help="criterion suite to run")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GridMismatch as exc:
        print(f"error: grids disagree: {exc}", file=sys.stderr)
        return 2
    except OrliczLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
