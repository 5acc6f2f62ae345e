import json

import pytest

from micdof.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------- dof


def test_dof_default_scenario(capsys):
    code, out, _ = run(capsys, "dof", "--config", "1,3,3,1")
    assert code == 0
    assert out.strip() == "1"


def test_dof_with_scenario(capsys):
    code, out, _ = run(capsys, "dof", "--config", "1,3,3,1", "--scenario", "0,1,0,0")
    assert code == 0
    assert out.strip() == "3"


def test_dof_cooperation(capsys):
    code, out, _ = run(capsys, "dof", "--config", "2,2,2,2", "--cooperation")
    assert code == 0
    assert "2" in out and "(upper bounds 2, 2)" in out


def test_dof_all_scenarios_table(capsys):
    code, out, _ = run(capsys, "dof", "--config", "2,2,2,2", "--all-scenarios",
                       "--format", "json")
    assert code == 0
    table = json.loads(out)["table"]
    assert len(table) == 16
    by_bits = {tuple(row["scenario"]): row["dof"] for row in table}
    assert by_bits[(0, 0, 0, 0)] == 2
    assert by_bits[(1, 1, 0, 0)] == 4


def test_dof_accepts_json_config(capsys):
    code, out, _ = run(capsys, "dof", "--config", '{"m1":1,"m2":3,"n1":3,"n2":1}')
    assert code == 0
    assert out.strip() == "1"


def test_dof_rejects_bad_config(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["dof", "--config", "0,2,2,2"])
    assert exc.value.code == 2
    assert "m1" in capsys.readouterr().err


# -------------------------------------------------------------------- region


def test_region_text_output(capsys):
    code, out, _ = run(capsys, "region", "--config", "2,2,2,2",
                       "--scenario", "0,0,0,0")
    assert code == 0
    assert "(0,0), (2,0), (0,2)" in out
    assert "inner equals outer: yes" in out


def test_region_json_schema(capsys):
    code, out, _ = run(capsys, "region", "--config", "1,1,1,1",
                       "--scenario", "0,0,0,0", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["equal"] is True
    for key in ("inner", "outer"):
        region = data[key]
        assert region["config"] == {"m1": 1, "m2": 1, "n1": 1, "n2": 1}
        assert region["scenario"] == [0, 0, 0, 0]
        assert {"a1", "a2", "b"} == set(region["halfspaces"][0])
        assert region["sum_dof"] == "1/1"


def test_region_sum_dof(capsys):
    code, out, _ = run(capsys, "region", "--config", "1,3,3,1",
                       "--scenario", "0,1,0,0")
    assert code == 0
    assert "sum dof: 3" in out


def test_region_writes_report(tmp_path, capsys):
    out_file = tmp_path / "region.json"
    code, _, _ = run(capsys, "region", "--config", "2,2,2,2",
                     "--scenario", "0,0,0,0", "--out", str(out_file))
    assert code == 0
    data = json.loads(out_file.read_text())
    assert data["equal"] is True


def test_output_dir_env_var(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("MICDOF_OUTPUT_DIR", str(tmp_path))
    code, _, _ = run(capsys, "region", "--config", "1,1,1,1",
                     "--scenario", "0,0,0,0", "--out", "r.json")
    assert code == 0
    assert (tmp_path / "r.json").exists()


# -------------------------------------------------------------------- verify


def test_verify_small_all(capsys):
    code, out, _ = run(capsys, "verify", "--max-antennas", "2", "--which", "all")
    assert code == 0
    assert "PASS" in out
    assert "regions: 256" in out


def test_verify_lemma5_only(capsys):
    code, out, _ = run(capsys, "verify", "--which", "lemma5")
    assert code == 0
    assert "lemma5: 81" in out


def test_verify_rejects_zero_antennas(capsys):
    code, _, err = run(capsys, "verify", "--max-antennas", "0")
    assert code == 2
    assert "max-antennas" in err


# ------------------------------------------------------------------- achieve


def test_achieve_passes(capsys):
    code, out, _ = run(capsys, "achieve", "--config", "2,2,2,2",
                       "--scenario", "0,1,0,1", "--point", "1,1",
                       "--trials", "50")
    assert code == 0
    assert "50/50" in out


def test_achieve_rejects_unachievable_point(capsys):
    code, _, err = run(capsys, "achieve", "--config", "2,2,2,2",
                       "--scenario", "0,0,0,0", "--point", "2,1")
    assert code == 1
    assert "not in the achievable integer set" in err


def test_achieve_zero_trials(capsys):
    code, out, _ = run(capsys, "achieve", "--config", "2,2,2,2",
                       "--scenario", "0,1,0,1", "--point", "1,1",
                       "--trials", "0")
    assert code == 0
    assert "0/0" in out


# ------------------------------------------------------------------ simulate


def test_simulate_writes_csv_and_sidecar(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code, out, _ = run(capsys, "simulate", "--config", "2,2,2,2",
                       "--scenario", "0,0,0,0", "--point", "1,1",
                       "--trials", "5", "--rho-max", "1e9",
                       "--out", str(out_file))
    assert code == 0
    lines = out_file.read_text().splitlines()
    assert lines[0] == "rho,r1,r2,rsum"
    assert len(lines) == 8
    sidecar = json.loads((tmp_path / "sweep.csv.json").read_text())
    assert sidecar["point"] == [1, 1]
    assert sidecar["slope"] == pytest.approx(2.0, rel=0.03)
    assert "fitted slope" in out


def test_simulate_rejects_unachievable_point(capsys):
    code, _, err = run(capsys, "simulate", "--config", "1,1,1,1",
                       "--scenario", "0,0,0,0", "--point", "1,1")
    assert code == 1
    assert "not in the achievable integer set" in err


# ---------------------------------------------------------------- coop-bound


def test_coop_bound_passes(capsys):
    code, out, _ = run(capsys, "coop-bound", "--config", "2,2,2,2",
                       "--trials", "10")
    assert code == 0
    assert "PASS" in out


def test_coop_bound_guard(capsys):
    code, _, err = run(capsys, "coop-bound", "--config", "3,1,1,2")
    assert code == 2
    assert "n2 >= m1" in err


def test_coop_bound_single_stream(capsys):
    code, out, _ = run(capsys, "coop-bound", "--config", "1,3,3,1",
                       "--trials", "5", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["dof_cooperation"] == 1
    assert data["upper_bounds"] == [1, 3]


# ----------------------------------------------------------- reproducibility


def test_identical_command_lines_are_byte_identical(tmp_path, capsys):
    argv = ["region", "--config", "2,3,3,2", "--scenario", "0,1,0,1",
            "--format", "json"]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second

    csv_a = tmp_path / "a.csv"
    csv_b = tmp_path / "b.csv"
    for path in (csv_a, csv_b):
        run(capsys, "simulate", "--config", "2,2,2,2", "--scenario", "0,0,0,0",
            "--point", "1,1", "--trials", "3", "--seed", "42",
            "--out", str(path))
    assert csv_a.read_bytes() == csv_b.read_bytes()
