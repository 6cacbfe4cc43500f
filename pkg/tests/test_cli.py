import json

import pytest

from scfab.cli import main


def test_simulate_csv(tmp_path, capsys):
    out = tmp_path / "points.csv"
    rc = main(["simulate", "--L", "3", "--p-comp", "0.002", "--trials", "40",
               "--seed", "3", "--workers", "1", "--out", str(out)])
    assert rc == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == ("L,p_comp,p_qubit,p_link,trials,percolated,"
                        "logical_errors,p_log,std_err")
    assert lines[1].startswith("3,0.002,0,0,40,")


def test_simulate_json_stdout(capsys):
    rc = main(["simulate", "--L", "3", "--p-comp", "0.001", "--trials", "5",
               "--seed", "1", "--workers", "1", "--format", "json"])
    assert rc == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["L"] == 3 and rows[0]["trials"] == 5


def test_simulate_fab_file(tmp_path, capsys):
    fab = tmp_path / "pattern.txt"
    fab.write_text("# one dead bulk qubit\nQ 2 2\n")
    rc = main(["simulate", "--L", "5", "--p-comp", "0", "--trials", "3",
               "--seed", "0", "--workers", "1", "--fab-file", str(fab)])
    assert rc == 0
    row = capsys.readouterr().out.strip().split("\n")[1].split(",")
    # trials,percolated,logical_errors,p_log all clean
    assert row[4:8] == ["3", "0", "0", "0"]


def test_fit_subcommand(capsys):
    rc = main(["fit", "--points", "0:0.0071", "0.02:0.00476", "0.04:0.00319",
               "0.06:0.00214"])
    assert rc == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["beta"] == pytest.approx(-20.0, abs=0.2)


def test_fit_rejects_bad_points(capsys):
    rc = main(["fit", "--points", "0:0.7", "0.02:-1", "0.04:0.3"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_percolation_subcommand(capsys):
    rc = main(["percolation", "--kind", "link", "--L", "5", "--p", "0.0",
               "--instances", "20", "--workers", "1", "--seed", "2"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "link,5,0,20,0" in out
    assert "analytic bulk estimate p*: 0.159104" in out


def test_distance_subcommand(capsys):
    rc = main(["distance", "--kind", "qubit", "--L", "5", "--p", "0.0",
               "--instances", "10", "--workers", "1"])
    assert rc == 0
    assert "qubit,5,0,10,5" in capsys.readouterr().out


def test_superchecks_subcommand(capsys):
    rc = main(["superchecks", "--L", "5", "--p-link", "0.0",
               "--instances", "12", "--workers", "1"])
    assert rc == 0
    assert "5,0,4,12" in capsys.readouterr().out


def test_bad_config_is_nonzero_exit(capsys):
    rc = main(["simulate", "--L", "1", "--p-comp", "0.001", "--trials", "1",
               "--workers", "1"])
    assert rc == 1
    assert "error:" in capsys.readouterr().err
