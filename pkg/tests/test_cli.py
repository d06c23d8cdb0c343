import numpy as np
import pytest

from quditwitness import DensityMatrix, maximally_mixed
from quditwitness.cli import main
from quditwitness.serialize import save_density

BELL = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)


def bell_state():
    return DensityMatrix(2, 2, np.outer(BELL, BELL))


def test_fef_bell(tmp_path, capsys):
    path = tmp_path / "bell.json"
    save_density(bell_state(), path)
    assert main(["fef", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "score=2.000000 fef_w=1.000000 detected=true"


def test_fef_mixed_not_detected(tmp_path, capsys):
    path = tmp_path / "mixed.csv"
    save_density(maximally_mixed(2, 2), path)
    assert main(["fef", str(path)]) == 0
    assert "detected=false" in capsys.readouterr().out


def test_fef_invalid_state_exit_3(tmp_path, capsys):
    path = tmp_path / "bad.json"
    save_density(DensityMatrix(2, 2, np.eye(4, dtype=complex) * 0.9 / 4), path)
    assert main(["fef", str(path)]) == 3
    assert "trace" in capsys.readouterr().err


def test_fef_wrong_dims_exit_3(tmp_path, capsys):
    path = tmp_path / "qutrit.json"
    save_density(maximally_mixed(3, 3), path)
    assert main(["fef", str(path)]) == 3
    assert "two-qubit" in capsys.readouterr().err


def test_fef_malformed_exit_3(tmp_path, capsys):
    path = tmp_path / "garbage.json"
    path.write_text("{nope")
    assert main(["fef", str(path)]) == 3


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["icps-sweep", "--d", "3", "--r", "2", "--samples", "0"])
    assert info.value.code == 2


def test_icps_sweep_deterministic_across_workers(tmp_path):
    base = ["icps-sweep", "--d", "3", "--r", "2", "--mode", "both",
            "--samples", "4000", "--seed", "11"]
    paths = [tmp_path / f"out{i}.csv" for i in range(3)]
    assert main(base + ["--workers", "1", "--out", str(paths[0])]) == 0
    assert main(base + ["--workers", "1", "--out", str(paths[1])]) == 0
    assert main(base + ["--workers", "2", "--out", str(paths[2])]) == 0
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]


def test_sweep_header_and_columns(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["icps-sweep", "--d", "3", "--r", "2", "--mode", "single",
                 "--samples", "2000", "--seed", "5", "--workers", "1",
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# quditwitness ")
    assert lines[1] == "# command: icps-sweep"
    assert "seed=5" in lines[2] and "samples=2000" in lines[2]
    assert lines[3] == ("d,r,alpha,v,strategy,mode,samples,entangled,detected,"
                        "sensitivity,ci95,seed")
    rows = [ln.split(",") for ln in lines[4:]]
    assert len(rows) == 4  # three strategies + combined, single mode
    assert {row[4] for row in rows} == {"identity", "hadamard_b", "hadamard_both", "combined"}


def test_random_sweep(tmp_path):
    out = tmp_path / "rand.csv"
    assert main(["random-sweep", "--d", "3", "--noise", "0.2", "0.6", "--mode", "single",
                 "--samples", "3000", "--seed", "3", "--workers", "1", "--out", str(out)]) == 0
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    rows = [ln.split(",") for ln in lines[1:]]
    assert len(rows) == 2
    sens = float(rows[0][9])
    assert 0.9 <= sens <= 1.0  # 20% noise detects nearly always at d=3


def test_grid_output(tmp_path):
    out = tmp_path / "grid.csv"
    assert main(["grid", "--d", "3", "--r", "2", "--alpha-steps", "3", "--v-steps", "4",
                 "--trials", "200", "--strategy", "identity", "--seed", "2",
                 "--workers", "1", "--out", str(out)]) == 0
    lines = [ln for ln in out.read_text().splitlines() if not ln.startswith("#")]
    header = lines[0].split(",")
    assert header[-1] == "separable"
    rows = [ln.split(",") for ln in lines[1:]]
    assert len(rows) == 12
    for row in rows:
        if row[-1] == "true":
            assert float(row[9]) == 0.0  # no detections on separable cells


def test_grid_deterministic(tmp_path):
    args = ["grid", "--d", "3", "--r", "3", "--alpha-steps", "2", "--v-steps", "2",
            "--trials", "150", "--strategy", "all", "--seed", "8"]
    p1, p2 = tmp_path / "g1.csv", tmp_path / "g2.csv"
    assert main(args + ["--workers", "1", "--out", str(p1)]) == 0
    assert main(args + ["--workers", "2", "--out", str(p2)]) == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_analytic_command(capsys):
    assert main(["analytic", "--d", "3", "--r", "2", "--alpha", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "combined = 1/9" in out
    assert "scenario_ii = 1/9" in out
    assert "scenario_ii_unordered = 1/36" in out
    assert "v_a=" in out and "v_b=" in out


def test_collective_verify(capsys):
    assert main(["collective-verify", "--n", "50", "--seed", "1"]) == 0
    out = capsys.readouterr().out
    assert "settings=10" in out
    dev = float(out.split("=")[-1])
    assert dev < 1e-9


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
