import json
import os

import pytest

from quantobs.cli import main


def _fixture(fixture_dir, name):
    return os.path.join(fixture_dir, name + ".json")


def _run_json(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_analyze_fixture(capsys, fixture_dir):
    code, doc = _run_json(capsys, [
        "analyze", _fixture(fixture_dir, "e1"), "--no-timestamp"])
    assert code == 0
    assert doc["command"] == "analyze"
    assert doc["result"]["verdict"] == "finite_memory"
    assert doc["result"]["chosen_T"] == 3
    assert "generated_at" not in doc


def test_analyze_all_fixtures(capsys, fixture_dir):
    verdicts = {}
    for name in ("example1", "e1", "e2", "dfm_nzi", "example5"):
        code, doc = _run_json(capsys, [
            "analyze", _fixture(fixture_dir, name), "--no-timestamp"])
        assert code == 0
        verdicts[name] = doc["result"]["verdict"]
    assert verdicts == {
        "example1": "not_finite_memory",
        "e1": "finite_memory",
        "e2": "finite_memory",
        "dfm_nzi": "not_finite_memory",
        "example5": "not_asymptotically_observable",
    }


def test_analyze_timestamp_default(capsys, fixture_dir):
    code, doc = _run_json(capsys, ["analyze", _fixture(fixture_dir, "e2")])
    assert code == 0
    assert "generated_at" in doc and "elapsed_seconds" in doc


def test_analyze_reproducible_output(capsys, fixture_dir):
    code1 = main(["analyze", _fixture(fixture_dir, "e2"), "--no-timestamp"])
    out1 = capsys.readouterr().out
    code2 = main(["analyze", _fixture(fixture_dir, "e2"), "--no-timestamp"])
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2


def test_analyze_out_file(capsys, fixture_dir, tmp_path):
    dest = tmp_path / "report.json"
    code = main(["analyze", _fixture(fixture_dir, "e1"), "--no-timestamp",
                 "--out", str(dest)])
    out = capsys.readouterr().out
    assert code == 0
    assert dest.read_text() == out


def test_analyze_budget_degrades_not_fails(capsys, fixture_dir):
    code, doc = _run_json(capsys, [
        "analyze", _fixture(fixture_dir, "dfm_nzi"), "--budget", "4",
        "--no-timestamp"])
    assert code == 0
    assert doc["result"]["verdict"] == "inconclusive"
    assert doc["result"]["distance"]["kind"] == "inconclusive"


def test_distance_witness(capsys, fixture_dir):
    code, doc = _run_json(capsys, [
        "distance", _fixture(fixture_dir, "dfm_nzi"), "--no-timestamp"])
    assert code == 0
    assert doc["result"]["kind"] == "witness"
    assert doc["result"]["k"] == 2
    assert doc["result"]["input_indices"] == [1, 0, 0]


def test_distance_unstable_exits_3(capsys, fixture_dir):
    code = main(["distance", _fixture(fixture_dir, "example5")])
    err = capsys.readouterr().err
    assert code == 3
    assert "spectral radius" in err


def test_distance_budget_error_exits_3(capsys, fixture_dir):
    # budget below even the first stage's enumeration
    code = main(["distance", _fixture(fixture_dir, "e1"), "--budget", "2"])
    capsys.readouterr()
    assert code == 3


def test_malformed_json_exits_2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    code = main(["analyze", str(path)])
    err = capsys.readouterr().err
    assert code == 2
    assert "bad.json" in err


def test_missing_file_exits_2(capsys):
    assert main(["analyze", "/no/such/file.json"]) == 2
    capsys.readouterr()


def test_observe_auto_window(capsys, fixture_dir):
    code, doc = _run_json(capsys, [
        "observe", _fixture(fixture_dir, "e1"), "--trials", "20",
        "--horizon", "30", "--no-timestamp"])
    assert code == 0
    res = doc["result"]
    assert res["window"] == 3
    assert res["window_source"] == "auto"
    assert res["settled_before_window"] is True
    assert res["summary"]["trials"] == 20


def test_observe_explicit_window(capsys, fixture_dir):
    code, doc = _run_json(capsys, [
        "observe", _fixture(fixture_dir, "e1"), "--T", "5", "--trials", "5",
        "--horizon", "20", "--no-timestamp"])
    assert code == 0
    assert doc["result"]["window"] == 5
    assert doc["result"]["window_source"] == "explicit"


def test_observe_auto_without_certificate_exits_4(capsys, fixture_dir):
    code = main(["observe", _fixture(fixture_dir, "example5"),
                 "--trials", "3", "--horizon", "10"])
    err = capsys.readouterr().err
    assert code == 4
    assert "--T" in err


def test_observe_csv(capsys, fixture_dir, tmp_path):
    dest = tmp_path / "trial.csv"
    code, doc = _run_json(capsys, [
        "observe", _fixture(fixture_dir, "e1"), "--trials", "4",
        "--horizon", "10", "--csv", str(dest), "--no-timestamp"])
    assert code == 0
    lines = dest.read_text().strip().split("\n")
    assert lines[0] == "t,u_index,u,y,yhat,e"
    assert len(lines) == 11


def test_observe_deterministic_across_thread_counts(capsys, fixture_dir):
    args = ["observe", _fixture(fixture_dir, "e1"), "--trials", "12",
            "--horizon", "15", "--no-timestamp"]
    code1 = main(args + ["--threads", "1"])
    out1 = capsys.readouterr().out
    code2 = main(args + ["--threads", "4"])
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2


def test_psi_build(capsys, fixture_dir):
    code, doc = _run_json(capsys, [
        "psi", _fixture(fixture_dir, "example5"), "build", "--depth", "4",
        "--no-timestamp"])
    assert code == 0
    assert doc["result"]["node_count"] == 30
    assert doc["command"] == "psi build"


def test_psi_verify(capsys, fixture_dir):
    code, doc = _run_json(capsys, [
        "psi", _fixture(fixture_dir, "example5"), "verify", "--depth", "4",
        "--no-timestamp"])
    assert code == 0
    assert doc["result"]["ok"] is True


def test_psi_attack(capsys, fixture_dir, tmp_path):
    dest = tmp_path / "attack.csv"
    code, doc = _run_json(capsys, [
        "psi", _fixture(fixture_dir, "example5"), "attack", "--depth", "4",
        "--observer-T", "5", "--csv", str(dest), "--no-timestamp"])
    assert code == 0
    assert doc["result"]["error_times"] == [2, 4, 6, 8]
    assert dest.exists()


def test_psi_inapplicable_exits_4(capsys, fixture_dir):
    code = main(["psi", _fixture(fixture_dir, "e1"), "build"])
    capsys.readouterr()
    assert code == 4


def test_demo(capsys):
    code = main(["demo", "example1"])
    out = capsys.readouterr().out
    assert code == 0
    assert "labels differ" in out
    assert "t = 11" in out


def test_usage_error_returns_2(capsys):
    assert main(["analyze"]) == 2
    capsys.readouterr()
    assert main(["nonsense"]) == 2
    capsys.readouterr()
