import json

import pytest

from scrollar import cli, interpolation
from scrollar.interpolation import ConditionsReport, Method


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_invariants_sections_golden(capsys):
    code, out, _ = run_cli(
        capsys, "invariants", "--m", "4", "--class", "9,4", "--sections", "18,18,10,6,2", "--method", "all"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert payload["scrollar"] == [8, 12, 16, 16, 16, 18, 18, 18]
    assert payload["methods"]["closed"] == [8, 12, 16, 16, 16, 18, 18, 18]
    assert payload["methods"]["oracle"] == [8, 12, 16, 16, 16, 18, 18, 18]
    assert payload["genus"] == 114
    assert payload["polytope"]["member"] is True
    assert payload["closed_form"]["levels"][0]["twist"] == 16
    assert payload["splitting_delta"] is None  # splitting needs general nodes
    assert payload["seed"] == 0 and payload["prime"] == 2147483647


def test_invariants_general_golden(capsys):
    code, out, _ = run_cli(capsys, "invariants", "--m", "1", "--class", "6,0", "--general-nodes", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["scrollar"] == [1, 2, 3, 3, 4]
    assert payload["splitting_delta"] == [-4, -3, -3, -2, -1, 0]
    assert payload["balanced"] is False


def test_invariants_smooth_golden(capsys):
    code, out, _ = run_cli(capsys, "invariants", "--m", "1", "--class", "6,0", "--general-nodes", "0")
    assert code == 0
    assert json.loads(out)["scrollar"] == [1, 2, 3, 4, 5]


def test_invariants_conflicting_config(capsys):
    code, _, err = run_cli(
        capsys, "invariants", "--m", "1", "--class", "6,0", "--general-nodes", "2", "--sections", "2,1"
    )
    assert code == 2
    assert "mutually exclusive" in err


def test_invariants_invalid_instance(capsys):
    code, _, err = run_cli(capsys, "invariants", "--m", "1", "--class", "2,1", "--general-nodes", "99")
    assert code == 2
    assert "error" in err


def test_conditions_replay(tmp_path, capsys):
    replay = {
        "m": 4,
        "k": 7,
        "a": -10,
        "config": {"kind": "on_sections", "multiplicities": [18, 18, 10, 6, 2]},
        "prime": 2147483647,
        "seed": 7,
        "trials": 3,
    }
    path = tmp_path / "replay.json"
    path.write_text(json.dumps(replay))
    code, out, _ = run_cli(capsys, "conditions", "--replay", str(path))
    assert code == 0
    payload = json.loads(out)
    assert payload["agree"] is True
    assert payload["conditions"] == {"mincut": 52, "sigma": 52, "oracle": 52}
    assert payload["h0"] == 55


def test_conditions_flags_general(capsys):
    code, out, _ = run_cli(capsys, "conditions", "--m", "1", "--class", "4,-1", "--general-nodes", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["conditions"]["closed"] == 2
    assert payload["conditions"]["oracle"] == 2


def test_verify_single_instance(capsys):
    code, out, _ = run_cli(capsys, "verify", "--m", "4", "--class", "9,4", "--sections", "18,18,10,6,2")
    assert code == 0
    payload = json.loads(out)
    assert payload["all_agree"] is True
    assert payload["results"][0]["agree"] is True


def test_verify_random_grid(capsys):
    code, out, _ = run_cli(capsys, "verify", "--random", "25", "--seed", "5")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 25
    assert payload["all_agree"] is True
    assert len(payload["results"]) == 25


def test_verify_detects_corrupted_closed_form(capsys, monkeypatch):
    real = interpolation.conditions_on_sections_mincut

    def corrupted(divisor, surface, multiplicities):
        report = real(divisor, surface, multiplicities)
        wrong = max(report.conditions_imposed - 1, 0)
        return ConditionsReport(report.h0_ambient, wrong, report.h0_ambient - wrong, Method.MIN_CUT)

    monkeypatch.setattr(interpolation, "conditions_on_sections_mincut", corrupted)
    code, out, _ = run_cli(capsys, "verify", "--m", "4", "--class", "9,4", "--sections", "18,18,10,6,2")
    assert code == 3
    payload = json.loads(out)
    assert payload["all_agree"] is False
    replay = payload["disagreements"][0]
    assert (replay["m"], replay["k"], replay["a"]) == (4, 9, 4)
    assert replay["config"] == {"kind": "on_sections", "multiplicities": [18, 18, 10, 6, 2]}


def test_verify_byte_identical_reports(capsys):
    code1, out1, _ = run_cli(capsys, "verify", "--random", "10", "--seed", "99")
    code2, out2, _ = run_cli(capsys, "verify", "--random", "10", "--seed", "99")
    assert code1 == code2 == 0
    assert out1 == out2
    _, out3, _ = run_cli(capsys, "verify", "--random", "10", "--seed", "100")
    assert out3 != out1


def test_scan_delta_range_balanced_flags(capsys):
    code, out, _ = run_cli(capsys, "scan", "--m", "1", "--class", "6,0", "--delta-range", "0:10")
    assert code == 0
    payload = json.loads(out)
    flags = {row["config"]["delta"]: row["balanced"] for row in payload["rows"]}
    # classes on the index-1 surface stay near balanced one block early,
    # so the switch happens at the reduced threshold, not at C(5,2)*m
    for delta, balanced in flags.items():
        assert balanced == (delta >= 6), (delta, balanced)
    assert payload["rows"] and payload["skipped"] == 0


def test_scan_sections_grid_and_dedupe(capsys):
    code, out, _ = run_cli(capsys, "scan", "--m", "1", "--class", "5,2", "--sections-grid", "2:3")
    assert code == 0
    payload = json.loads(out)
    normalized = [tuple(r["normalized"]) for r in payload["rows"]]
    assert len(normalized) == len(set(normalized))  # deduped
    assert all(r["polytope_member"] for r in payload["rows"])


def test_scan_monotone_top_invariant(capsys):
    # extra nodes cut the genus, so enlarging a multiplicity never
    # raises the top invariant
    code, out, _ = run_cli(capsys, "scan", "--m", "4", "--class", "9,4", "--sections-grid", "1:14")
    assert code == 0
    payload = json.loads(out)
    tops = {}
    for row in payload["rows"]:
        s = tuple(row["config"]["multiplicities"])
        tops[s] = row["scrollar"][-1]
    singles = sorted(s[0] for s in tops if len(s) == 1)
    values = [tops[(v,)] for v in singles]
    assert len(values) >= 10
    assert all(values[i] >= values[i + 1] for i in range(len(values) - 1))


def test_scan_grid_cap(capsys):
    code, _, err = run_cli(
        capsys, "scan", "--m", "1", "--class", "6,0", "--sections-grid", "6:10", "--max-instances", "50"
    )
    assert code == 4
    assert "cap" in err


def test_scan_requires_a_grid(capsys):
    code, _, err = run_cli(capsys, "scan", "--m", "1", "--class", "6,0")
    assert code == 2


def test_out_file_and_csv(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run_cli(
        capsys, "invariants", "--m", "1", "--class", "6,0", "--general-nodes", "2", "--out", str(path)
    )
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["scrollar"] == [1, 2, 3, 3, 4]

    code2, out2, _ = run_cli(
        capsys, "invariants", "--m", "1", "--class", "6,0", "--general-nodes", "2", "--format", "csv"
    )
    assert code2 == 0
    lines = out2.strip().splitlines()
    assert lines[0].startswith("m,k,a,")
    assert "1 2 3 3 4" in lines[1]


def test_seed_env_default(capsys, monkeypatch):
    monkeypatch.setenv(cli.SEED_ENV_VAR, "321")
    code, out, _ = run_cli(capsys, "invariants", "--m", "1", "--class", "6,0", "--general-nodes", "2")
    assert code == 0
    assert json.loads(out)["seed"] == 321


def test_replay_round_trip_through_verify(tmp_path, capsys):
    # a disagreement replay can be fed straight back into `conditions`
    real = interpolation.conditions_on_sections_sigma
    code, out, _ = run_cli(capsys, "verify", "--m", "2", "--class", "5,3", "--sections", "6,4,1")
    payload = json.loads(out)
    assert payload["all_agree"] is True
    replay = cli._replay_object(
        __import__("scrollar").Surface(2),
        __import__("scrollar").DivisorClass(5, 3),
        __import__("scrollar").NodeConfiguration.on_sections((6, 4, 1)),
        2147483647,
        0,
        3,
    )
    path = tmp_path / "r.json"
    path.write_text(json.dumps(replay))
    code2, out2, _ = run_cli(capsys, "conditions", "--replay", str(path))
    assert code2 == 0
    assert json.loads(out2)["agree"] is True
