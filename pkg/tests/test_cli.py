import json

import numpy as np
import pytest

from sphereproj.cli import main
from sphereproj.quadrature import load_rule, tensor_gl_rule


def read_rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#")
    return lines[1], lines[2:]


def test_nodes_writes_rule_and_csv(tmp_path):
    assert main(["nodes", "--n", "15", "--out", str(tmp_path)]) == 0
    header, rows = read_rows(tmp_path / "nodes_n15.csv")
    assert header == "lon_deg,lat_deg,weight"
    assert len(rows) == 512
    rule = load_rule(tmp_path / "rule_n15.txt")
    assert np.array_equal(rule.nodes, tensor_gl_rule(15).nodes)


def test_nodes_degree_zero(tmp_path):
    assert main(["nodes", "--n", "0", "--out", str(tmp_path)]) == 0
    _, rows = read_rows(tmp_path / "nodes_n0.csv")
    assert len(rows) == 2


def test_output_directory_is_created(tmp_path):
    # every subcommand must work into a directory that does not exist yet
    target = tmp_path / "fresh" / "nested"
    assert main(["nodes", "--n", "2", "--out", str(target)]) == 0
    assert (target / "rule_n2.txt").exists()


def test_meshstats_row_count_and_columns(tmp_path):
    assert main(
        ["meshstats", "--n-start", "5", "--n-stop", "15", "--n-step", "5", "--out", str(tmp_path)]
    ) == 0
    header, rows = read_rows(tmp_path / "meshstats.csv")
    assert header == "n,N,delta,gamma,ratio"
    assert len(rows) == 3
    assert (tmp_path / "meshstats.gp").exists()


def test_meshstats_single_degree(tmp_path):
    assert main(["meshstats", "--n", "10", "--out", str(tmp_path)]) == 0
    _, rows = read_rows(tmp_path / "meshstats.csv")
    assert len(rows) == 1


def test_meshstats_default_range(tmp_path):
    # default scan n = 5, 10, ..., 50; the mesh ratio grows roughly like n
    assert main(["meshstats", "--out", str(tmp_path)]) == 0
    _, rows = read_rows(tmp_path / "meshstats.csv")
    assert len(rows) == 10
    ratios = [float(r.split(",")[4]) for r in rows]
    assert ratios[-1] >= 2.0 * ratios[0]


def test_lebesgue_rows_and_ratio_column(tmp_path):
    code = main(
        [
            "lebesgue",
            "--n-start", "5", "--n-stop", "10", "--n-step", "5",
            "--eval-mult", "2",
            "--out", str(tmp_path),
        ]
    )
    assert code == 0
    header, rows = read_rows(tmp_path / "lebesgue.csv")
    assert header == "operator,n,estimate,estimate_over_sqrt_n,sqrt_n"
    assert len(rows) == 4  # 2 operators x 2 degrees
    for row in rows:
        fields = row.split(",")
        assert fields[0] in ("hyper", "LS")
        assert 0.5 <= float(fields[3]) <= 5.0
    assert (tmp_path / "lebesgue.gp").exists()


def test_lebesgue_degree_zero_estimates_one(tmp_path):
    assert main(["lebesgue", "--n", "0", "--eval-mult", "2", "--out", str(tmp_path)]) == 0
    _, rows = read_rows(tmp_path / "lebesgue.csv")
    for row in rows:
        assert float(row.split(",")[2]) == pytest.approx(1.0, abs=1e-10)


def test_lebesgue_deterministic_output(tmp_path):
    args = [
        "lebesgue",
        "--n-start", "5", "--n-stop", "10", "--n-step", "5",
        "--eval-mult", "2", "--seed", "3",
    ]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    first = (tmp_path / "a" / "lebesgue.csv").read_bytes()
    second = (tmp_path / "b" / "lebesgue.csv").read_bytes()
    assert first == second


def test_lebesgue_guard_refuses_big_ls(tmp_path, capsys):
    code = main(["lebesgue", "--n", "50", "--out", str(tmp_path)])
    assert code == 2
    assert "max-ls-degree" in capsys.readouterr().err


def test_lebesgue_hyper_only_skips_guard(tmp_path):
    assert main(
        ["lebesgue", "--n", "45", "--operators", "hyper", "--eval-mult", "1", "--out", str(tmp_path)]
    ) == 0


def test_max_ls_degree_hard_cap():
    with pytest.raises(SystemExit) as err:
        main(["lebesgue", "--n", "10", "--max-ls-degree", "90"])
    assert err.value.code == 2


def test_json_mirror(tmp_path):
    assert main(["meshstats", "--n", "5", "--format", "json", "--out", str(tmp_path)]) == 0
    payload = json.loads((tmp_path / "meshstats.json").read_text())
    assert payload["columns"] == ["n", "N", "delta", "gamma", "ratio"]
    assert len(payload["rows"]) == 1


def test_verify_passes_on_tensor_rule(tmp_path, capsys):
    assert main(["verify", "--n", "8", "--out", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "PASS exactness" in out
    assert "FAIL" not in out
    assert (tmp_path / "verify_n8.txt").exists()


def test_verify_rule_file_roundtrip(tmp_path):
    assert main(["nodes", "--n", "6", "--out", str(tmp_path)]) == 0
    assert main(["verify", "--rule", str(tmp_path / "rule_n6.txt"), "--out", str(tmp_path)]) == 0


def test_verify_rejects_corrupt_rule(tmp_path, capsys):
    bad = tmp_path / "bad_rule.txt"
    bad.write_text("# q=2 N=1 exactness=0\n0 0 1 -2.0\n")
    code = main(["verify", "--rule", str(bad), "--out", str(tmp_path)])
    assert code == 1
    assert "non-positive weight" in capsys.readouterr().err


def test_usage_errors_exit_two():
    with pytest.raises(SystemExit) as err:
        main(["lebesgue", "--q", "3"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["no-such-command"])
    assert err.value.code == 2
