"""Tests for fixture schema validation"""

from config import Config
from src.utils.json_validator import (
    COARSE_SCHEMA,
    GROUPOID_SCHEMA,
    REPORT_SCHEMA,
    SELFSIM_SCHEMA,
    schema_for,
    validate_all_json_files,
    validate_json_data,
    validate_json_file,
)


def test_every_shipped_fixture_matches_its_schema():
    results = validate_all_json_files()
    assert "groupoid_z2.json" in results
    assert "graph_o2.dot" not in results
    failed = {name: msg for name, (ok, msg) in results.items() if not ok}
    assert failed == {}


def test_files_without_a_known_prefix_are_skipped(tmp_path):
    (tmp_path / "notes.json").write_text("{}")
    (tmp_path / "graph_tiny.json").write_text('{"vertices": ["v"], "edges": []}')
    assert validate_all_json_files(str(tmp_path)) == {"graph_tiny.json": (True, None)}


def test_schema_is_picked_by_prefix():
    assert schema_for("data/groupoid_pair2.json") is GROUPOID_SCHEMA
    assert schema_for("/tmp/coarse_x.json") is COARSE_SCHEMA
    assert schema_for("selfsim_odometer.json") is SELFSIM_SCHEMA
    assert schema_for("notes.json") is None


def test_scalars_accept_pairs():
    ok, _ = validate_json_data({"points": ["x"], "generators": [[["x", "x"]]],
                                "matrix": [["x", "x", [1, 2]]]}, COARSE_SCHEMA)
    assert ok
    ok, msg = validate_json_data({"arrows": ["x"], "units": ["x"], "r": {"x": 1}, "d": {},
                                  "compose": [], "inverse": {}}, GROUPOID_SCHEMA)
    assert not ok
    assert msg.startswith("Schema validation error")


def test_broken_json_is_reported(tmp_path):
    bad = tmp_path / "groupoid_bad.json"
    bad.write_text("{not json")
    ok, msg = validate_json_file(str(bad), GROUPOID_SCHEMA)
    assert not ok
    assert msg.startswith("Invalid JSON format")
    results = validate_all_json_files(str(tmp_path))
    assert results == {"groupoid_bad.json": (False, msg)}


def test_missing_file(tmp_path):
    ok, msg = validate_json_file(str(tmp_path / "groupoid_missing.json"), GROUPOID_SCHEMA)
    assert not ok
    assert "groupoid_missing.json" in msg


def test_report_schema_pins_the_version():
    report = {"schema": Config.REPORT_SCHEMA, "input_digest": "abc", "command": "oracle",
              "checks": ["simple"], "verdicts": {}}
    assert validate_json_data(report, REPORT_SCHEMA)[0]
    report["schema"] = "groupalg/0"
    assert not validate_json_data(report, REPORT_SCHEMA)[0]


def test_undecodable_file_is_reported(tmp_path):
    bad = tmp_path / "groupoid_latin1.json"
    bad.write_bytes(b'{"name": "caf\xe9"}')
    ok, msg = validate_json_file(str(bad), GROUPOID_SCHEMA)
    assert not ok
    assert msg.startswith("Not UTF-8 text")
