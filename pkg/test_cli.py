"""Tests for the groupalg command line"""

import json
import os

import pytest

import main
from config import Config
from error_handling import EXIT_OK, EXIT_USAGE, EXIT_VALIDATION
from src.utils.json_validator import REPORT_SCHEMA, validate_json_data


def _report(capsys, argv):
    code = main.run(argv + ["--json"])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_oracle_json_report(capsys, data_file):
    code, report = _report(capsys, ["oracle", "--groupoid", data_file("groupoid_z2.json")])
    assert code == EXIT_OK
    assert report["schema"] == Config.REPORT_SCHEMA
    assert report["command"] == "oracle"
    assert report["checks"] == ["validate", "crosscheck"]
    assert report["verdicts"]["validate"]["ok"]
    assert report["verdicts"]["crosscheck"]["theorem_agrees"]
    assert validate_json_data(report, REPORT_SCHEMA)[0]


def test_reports_are_deterministic_up_to_timing(capsys, data_file):
    argv = ["oracle", "--groupoid", data_file("groupoid_klein.json"), "--cocycle", data_file("cocycle_klein.json"),
            "--check", "norms", "--check", "faithfulness", "--seed", "7"]
    _, first = _report(capsys, argv)
    _, second = _report(capsys, argv)
    first.pop("timing")
    second.pop("timing")
    assert first == second
    _, other_seed = _report(capsys, argv[:-1] + ["8"])
    assert other_seed["input_digest"] != first["input_digest"]


def test_invalid_groupoid_exits_with_validation_code(capsys, data_file):
    code = main.run(["algebra", "--groupoid", data_file("groupoid_broken_inverse.json")])
    assert code == EXIT_VALIDATION
    assert "ValidationFailure" in capsys.readouterr().err


def test_missing_input(capsys, tmp_path):
    assert main.run(["graph", "--in", str(tmp_path / "nowhere.dot")]) == EXIT_VALIDATION


@pytest.mark.parametrize("argv", [
    ["graph", "--in", "{}/graph_bad.dot"],
    ["oracle", "--groupoid", "{}/groupoid_bad.json"],
])
def test_undecodable_input_is_a_validation_failure(capsys, tmp_path, argv):
    (tmp_path / "graph_bad.dot").write_bytes(b"digraph { a -> \xff }")
    (tmp_path / "groupoid_bad.json").write_bytes(b"{\"arrows\": [\"\xff\"]}")
    argv = [arg.format(tmp_path) for arg in argv]
    assert main.run(argv) == EXIT_VALIDATION
    assert "UTF-8" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    ["graph"],
    ["oracle", "--groupoid", "x.json", "--check", "bogus"],
    ["selfsim", "--in", "x.json", "--depth", "0"],
])
def test_usage_errors(capsys, argv):
    assert main.run(argv) == EXIT_USAGE


def test_help_is_not_an_error(capsys):
    assert main.run(["--help"]) == EXIT_OK
    assert "groupalg" in capsys.readouterr().out


def test_algebra_text_output(capsys, data_file):
    code = main.run(["algebra", "--groupoid", data_file("groupoid_pair2.json"), "--check", "simple",
                     "--check", "centre"])
    assert code == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("simple: yes")
    assert lines[1] == 'centre: {"dim": 1}'


def test_graph_verdict_and_oracle(capsys, data_file):
    code, report = _report(capsys, ["graph", "--in", data_file("graph_line.dot"), "--verdict", "--oracle"])
    assert code == EXIT_OK
    assert report["verdicts"]["singular_vertices"] == ["a"]
    assert report["verdicts"]["oracle_simple"]["holds"]
    assert "verdict" in report["checks"]


def test_sgrp_tight_filters(capsys, data_file):
    code, report = _report(capsys, ["sgrp", "--in", data_file("semigroup_sym2.json"), "--check", "tight"])
    assert code == EXIT_OK
    assert report["checks"] == ["validate", "tight"]
    assert report["verdicts"]["tight"]["tight_filters"] == report["verdicts"]["tight"]["ultrafilters"]


def test_broken_semigroup_is_rejected(capsys, data_file):
    assert main.run(["sgrp", "--in", data_file("semigroup_broken.json")]) == EXIT_VALIDATION


def test_paction_emits_groupoid_and_cocycle(capsys, data_file, tmp_path):
    out = tmp_path / "klein.json"
    code = main.run(["paction", "--in", data_file("paction_klein_twisted.json"), "--emit-groupoid", str(out),
                     "--check", "crosscheck"])
    assert code == EXIT_OK
    assert out.exists()
    assert (tmp_path / "klein.cocycle.json").exists()
    capsys.readouterr()
    code, report = _report(capsys, ["oracle", "--groupoid", str(out), "--cocycle",
                                    str(tmp_path / "klein.cocycle.json")])
    assert code == EXIT_OK
    assert report["verdicts"]["crosscheck"]["simple"]


def test_untwisted_paction_emits_no_cocycle(capsys, data_file, tmp_path):
    out = tmp_path / "swap.json"
    assert main.run(["paction", "--in", data_file("paction_swap.json"), "--emit-groupoid", str(out)]) == EXIT_OK
    assert out.exists()
    assert not (tmp_path / "swap.cocycle.json").exists()


def test_selfsim_state_checks(capsys, data_file):
    code, report = _report(capsys, ["selfsim", "--in", data_file("selfsim_odometer.json"), "--state", "g",
                                    "--vertex", "v", "--verdict"])
    assert code == EXIT_OK
    assert report["checks"] == ["identities", "orbits", "strongly_fixed", "slack@v", "verdict"]
    assert report["verdicts"]["slack@v"]["status"] == "refuted"


def test_roe_norm_bounds_default_to_three_exponents(capsys, data_file):
    code, report = _report(capsys, ["roe", "--in", data_file("coarse_full.json"), "--check", "normbound"])
    assert code == EXIT_OK
    assert report["checks"] == ["normbound_1", "normbound_2", "normbound_inf"]
    assert report["verdicts"]["normbound_1"]["exact"] == "4"
    assert report["verdicts"]["normbound_1"]["bound"] == "30"


def test_roe_rejects_bad_exponent(capsys, data_file):
    code = main.run(["roe", "--in", data_file("coarse_full.json"), "--check", "normbound", "--p", "3"])
    assert code == EXIT_VALIDATION


def test_corpus_skips_invalid_fixtures(capsys):
    code, report = _report(capsys, ["corpus", "--dir", Config.DATA_DIR, "--workers", "2", "--random", "2"])
    assert code == EXIT_OK
    verdicts = report["verdicts"]
    assert verdicts["groupoid_broken_inverse.json"] == {"skipped": "invalid fixture"}
    assert verdicts["groupoid_nonhausdorff.json"]["discrete"] is False
    for name in ("groupoid_klein.json", "groupoid_pair2.json", "groupoid_z2.json", "random_0", "random_1"):
        assert verdicts[name]["theorem_agrees"], name
    assert report["checks"][-2:] == ["random_0", "random_1"]


def test_corpus_needs_a_directory(capsys, tmp_path):
    assert main.run(["corpus", "--dir", os.path.join(str(tmp_path), "absent")]) == EXIT_USAGE
