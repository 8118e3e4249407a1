"""Command-line surface: artifacts, determinism, exit codes, error paths.

The CLI is driven in-process through ``cli.main(argv)`` so exit codes and
stdout are asserted directly.  Oracles: the conjugate of t^2 is s^2/4; a
constant c on a 1-D domain of measure m has Luxemburg norm c / B^{-1}(1/m);
the quadratic torsion solution has sup-norm 1/8.
"""

import json
import math
import os

import numpy as np
import pytest

from orlicz_lab import cli
from orlicz_lab import nfunction as nf
from orlicz_lab.fields import SampledField
from orlicz_lab.report import read_field_csv


def run(tmp_path, *argv):
    out = tmp_path / "out"
    code = cli.main([*argv, "--out", str(out)])
    return code, out


def load_report(out, name):
    with open(out / name) as fh:
        return json.load(fh)


def write_spec(path, spec):
    with open(path, "w") as fh:
        json.dump(spec, fh)
    return str(path)


# ---------------------------------------------------------------------------
# nfun


def test_nfun_power_conjugate_table(tmp_path, capsys):
    code, out = run(tmp_path, "nfun", "--kind", "power", "--p", "2",
                    "--conjugate")
    assert code == 0
    rep = load_report(out, "nfun_report.json")
    assert {"command", "config", "config_hash", "tolerances", "body"} <= set(rep)
    rows = rep["body"]["conjugate"]["rows"]
    for s, val, _slope in rows:
        assert val == pytest.approx(s * s / 4.0, rel=1e-12)
    assert (out / "nfun_evaluation.csv").exists()
    assert (out / "nfun_conjugate.csv").exists()


def test_nfun_staircase_flagged_not_doubling(tmp_path, capsys):
    code, out = run(tmp_path, "nfun", "--kind", "pathological", "--p", "2",
                    "--q", "3", "--delta2")
    assert code == 0
    doubling = load_report(out, "nfun_report.json")["body"]["doubling"]
    assert doubling["doubling_evidence"] is False
    assert doubling["flag"] == "NOT-doubling"
    assert "NOT-doubling" in capsys.readouterr().out


def test_nfun_loglinear_lower_index_near_one(tmp_path):
    code, out = run(tmp_path, "nfun", "--kind", "llogl", "--indices")
    assert code == 0
    idx = load_report(out, "nfun_report.json")["body"]["simonenko"]
    assert idx["lower"] <= 1.01
    assert idx["upper"] >= idx["lower"]


def test_nfun_domination_check(tmp_path):
    other = write_spec(tmp_path / "llogl.json",
                       {"kind": "llogl", "params": {}})
    code, out = run(tmp_path, "nfun", "--kind", "t_exp_t",
                    "--compare", other)
    assert code == 0
    dom = load_report(out, "nfun_report.json")["body"]["domination"]
    assert dom["other_essentially_slower"] is True
    assert dom["self_essentially_slower"] is False


def test_nfun_spec_file_round_trip(tmp_path):
    spec = write_spec(tmp_path / "z.json",
                      {"kind": "zygmund", "params": {"p": 2.0, "beta": 1.0}})
    code, out = run(tmp_path, "nfun", "--spec", spec)
    assert code == 0
    assert load_report(out, "nfun_report.json")["body"]["kind"] == "zygmund"


def test_nfun_requires_kind_or_spec(tmp_path):
    code, _ = run(tmp_path, "nfun")
    assert code == 2


def test_nfun_missing_exponent_is_usage_error(tmp_path):
    code, _ = run(tmp_path, "nfun", "--kind", "power")
    assert code == 2


# ---------------------------------------------------------------------------
# norm


def test_norm_constant_field_closed_form(tmp_path):
    field = tmp_path / "c.csv"
    SampledField.constant(3.0, dim=1, n=64, extent=2.0).to_csv(str(field))
    code, out = run(tmp_path, "norm", str(field), "--kind", "zygmund",
                    "--p", "2", "--beta", "1")
    assert code == 0
    body = load_report(out, "norm_report.json")["body"]
    exact = 3.0 / nf.zygmund(2.0, 1.0).inverse(0.5)
    assert body["luxemburg_norm"] == pytest.approx(exact, rel=1e-7)
    assert body["modular_at_multiples"]["1.0"] == pytest.approx(1.0, abs=1e-6)
    assert body["modular_at_multiples"]["0.5"] > 1.0
    assert body["modular_at_multiples"]["2.0"] < 1.0
    assert (out / "rearrangement.csv").exists()


def test_norm_zero_field(tmp_path):
    field = tmp_path / "z.csv"
    SampledField.constant(0.0, dim=1, n=16, extent=1.0).to_csv(str(field))
    code, out = run(tmp_path, "norm", str(field), "--kind", "llogl")
    assert code == 0
    body = load_report(out, "norm_report.json")["body"]
    assert body["luxemburg_norm"] == 0.0
    assert body["modular_at_multiples"] is None


def test_norm_bad_csv_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("dim,n,extent\n1,8\n")
    code, _ = run(tmp_path, "norm", str(bad), "--kind", "llogl")
    assert code == 2
    assert "line" in capsys.readouterr().err


def test_norm_missing_file_exits_2(tmp_path):
    code, _ = run(tmp_path, "norm", str(tmp_path / "nosuch.csv"),
                  "--kind", "llogl")
    assert code == 2


# ---------------------------------------------------------------------------
# embed


def test_embed_power_slow_regime(tmp_path):
    code, out = run(tmp_path, "embed", "--kind", "power", "--p", "2",
                    "--N", "3")
    assert code == 0
    body = load_report(out, "embed_report.json")["body"]
    assert body["growth_class"] == "Slow"
    assert body["N"] == 3
    assert (out / "embedding_functions.csv").exists()
    assert (out / "level_set_targets.csv").exists()


def test_embed_exponential_fast_regime(tmp_path):
    code, out = run(tmp_path, "embed", "--kind", "t_exp_t", "--N", "2")
    assert code == 0
    body = load_report(out, "embed_report.json")["body"]
    assert body["growth_class"] == "Fast"
    assert body["solution_target_is_boundedness"] is True


def test_embed_borderline_surfaces_override_hint(tmp_path, capsys):
    code, _ = run(tmp_path, "embed", "--kind", "power", "--p", "3", "--N", "3")
    assert code == 2
    assert "--override-class" in capsys.readouterr().err
    code, out = run(tmp_path, "embed", "--kind", "power", "--p", "3",
                    "--N", "3", "--override-class", "Slow")
    assert code == 0
    assert load_report(out, "embed_report.json")["body"]["growth_class"] == "Slow"


def test_embed_rejects_dimension_one(tmp_path):
    code, _ = run(tmp_path, "embed", "--kind", "power", "--p", "2", "--N", "1")
    assert code == 2


# ---------------------------------------------------------------------------
# solve


def quadratic_problem(tmp_path, n=64):
    return write_spec(tmp_path / "prob.json", {
        "operator": {"nfunction": {"kind": "power",
                                   "params": {"p": 2.0, "scale": 0.5}},
                     "form": "potential"},
        "problem": {"dim": 1, "n": n, "extent": 1.0,
                    "datum": {"type": "constant", "value": 1.0},
                    "mollifier_levels": [4, 8, 16],
                    "truncation_levels": [0.03, 0.06, 0.12, 0.25]},
    })


def test_solve_quadratic_pipeline(tmp_path):
    prob = quadratic_problem(tmp_path)
    code, out = run(tmp_path, "solve", prob)
    assert code == 0
    body = load_report(out, "solve_report.json")["body"]
    assert body["flags"] == []
    assert body["solution"]["sup_norm"] == pytest.approx(0.125, abs=1e-3)
    assert body["apriori"]["ok1_all"] is True
    assert body["regularity"]["verdict"] == "finite"
    assert all(level["converged"] for level in body["levels"])
    u = read_field_csv(str(out / "solution.csv"))
    assert u.n == 64 and u.dim == 1
    assert float(np.max(u.values)) == pytest.approx(0.125, abs=1e-3)
    assert (out / "apriori.csv").exists()
    for svg in ("solution_profile.svg", "level_sets_gradient.svg"):
        text = (out / svg).read_text()
        assert text.startswith("<?xml")
        assert "</svg>" in text


def test_solve_two_dimensional_emits_target_plots(tmp_path):
    prob = write_spec(tmp_path / "p2.json", {
        "operator": {"nfunction": {"kind": "power", "params": {"p": 2.0}},
                     "form": "potential"},
        "problem": {"dim": 2, "n": 33, "extent": 1.0,
                    "datum": {"type": "atomic",
                              "atoms": [{"location": [0.5, 0.5],
                                         "weight": 1.0}]},
                    "mollifier_levels": [4, 8, 16],
                    "truncation_levels": [0.02, 0.04, 0.08, 0.16]},
    })
    code, out = run(tmp_path, "solve", prob)
    assert code == 0
    body = load_report(out, "solve_report.json")["body"]
    assert body["regularity"]["verdict"] == "finite"
    assert "u_vs_Phi1" in body["regularity"]["quasi_norms"]
    assert (out / "level_sets_solution.svg").exists()
    assert (out / "convergence.svg").exists()
    assert (out / "gradient.csv").exists()


def test_solve_reports_are_byte_identical(tmp_path):
    prob = quadratic_problem(tmp_path, n=48)
    out1 = tmp_path / "o1"
    out2 = tmp_path / "o2"
    assert cli.main(["solve", prob, "--out", str(out1)]) == 0
    assert cli.main(["solve", prob, "--out", str(out2)]) == 0
    assert (out1 / "solve_report.json").read_bytes() == \
        (out2 / "solve_report.json").read_bytes()
    assert (out1 / "solution_profile.svg").read_bytes() == \
        (out2 / "solution_profile.svg").read_bytes()


def test_solve_tolerance_override_flags_invariant(tmp_path, capsys):
    prob = quadratic_problem(tmp_path, n=48)
    code, out = run(tmp_path, "solve", prob, "--tol",
                    "flux_consistency=1e-30")
    assert code == 1
    body = load_report(out, "solve_report.json")["body"]
    assert any("flux" in flag for flag in body["flags"])
    assert "flagged" in capsys.readouterr().err


def test_solve_bad_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"operator": \n')
    code, _ = run(tmp_path, "solve", str(bad))
    assert code == 2
    err = capsys.readouterr().err
    assert "line" in err and "column" in err


def test_solve_missing_sections_exit_2(tmp_path):
    bad = write_spec(tmp_path / "empty.json", {"problem": {}})
    code, _ = run(tmp_path, "solve", str(bad))
    assert code == 2


# ---------------------------------------------------------------------------
# verify


def test_verify_embedding_suite_passes(tmp_path, capsys):
    code, out = run(tmp_path, "verify", "embedding")
    assert code == 0
    text = capsys.readouterr().out
    assert "[PASS] criterion  6" in text
    rep = load_report(out, "verify_report.json")
    assert rep["body"]["all_passed"] is True
    assert rep["body"]["criteria"][0]["number"] == 6
    assert rep["body"]["criteria"][0]["passed"] is True


def test_verify_report_bytes_reproducible(tmp_path):
    out1 = tmp_path / "v1"
    out2 = tmp_path / "v2"
    assert cli.main(["verify", "calculus", "--out", str(out1)]) == 0
    assert cli.main(["verify", "calculus", "--out", str(out2)]) == 0
    assert (out1 / "verify_report.json").read_bytes() == \
        (out2 / "verify_report.json").read_bytes()


def test_verify_unknown_suite_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        cli.main(["verify", "nosuchsuite", "--out", str(tmp_path)])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# configuration plumbing


def test_env_var_sets_output_dir(tmp_path, monkeypatch):
    target = tmp_path / "env-out"
    monkeypatch.setenv("ORLICZ_LAB_OUT", str(target))
    code = cli.main(["nfun", "--kind", "llogl"])
    assert code == 0
    assert (target / "nfun_report.json").exists()


def test_out_flag_wins_over_env(tmp_path, monkeypatch):
    monkeypatch.setenv("ORLICZ_LAB_OUT", str(tmp_path / "ignored"))
    chosen = tmp_path / "chosen"
    code = cli.main(["nfun", "--kind", "llogl", "--out", str(chosen)])
    assert code == 0
    assert (chosen / "nfun_report.json").exists()
    assert not (tmp_path / "ignored").exists()


def test_config_hash_tracks_seed(tmp_path):
    _, out1 = run(tmp_path / "a", "verify", "embedding")
    _, out2 = run(tmp_path / "b", "verify", "embedding", "--seed", "7")
    h1 = load_report(out1, "verify_report.json")["config_hash"]
    h2 = load_report(out2, "verify_report.json")["config_hash"]
    assert h1 != h2


def test_config_hash_ignores_output_location(tmp_path):
    _, out1 = run(tmp_path / "a", "nfun", "--kind", "llogl")
    _, out2 = run(tmp_path / "b", "nfun", "--kind", "llogl")
    h1 = load_report(out1, "nfun_report.json")["config_hash"]
    h2 = load_report(out2, "nfun_report.json")["config_hash"]
    assert h1 == h2


def test_bad_tolerance_override_exits_2(tmp_path, capsys):
    code, _ = run(tmp_path, "nfun", "--kind", "llogl", "--tol", "slack")
    assert code == 2
    assert "NAME=VALUE" in capsys.readouterr().err


def test_reports_embed_tolerance_set(tmp_path):
    code, out = run(tmp_path, "nfun", "--kind", "llogl", "--tol",
                    "apriori_slack=1.25")
    assert code == 0
    rep = load_report(out, "nfun_report.json")
    assert rep["tolerances"]["apriori_slack"] == 1.25
    assert "flux_consistency" in rep["tolerances"]
