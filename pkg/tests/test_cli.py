import subprocess
import sys

import pytest

from swirlbound.cli import FAILED, OK, USAGE, main

CONFIG = """\
[grid]
r_min = 0.2
r_max = 4.4
z_min = -4
z_max = 4
n_r = 43
n_z = 64
periodic_z = true

[evolution]
gamma0 = Piecewise((sin(pi*z)*(r - 1)*(4 - r), (r >= 1) & (r <= 4)), (0, True))
omega0 = cos(pi*z/4)*exp(-(r - 2.5)**2)
t_end = 0.25

[output]
directory = out
cadence = 0.015625
"""


@pytest.fixture(scope="module")
def run_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    (d / "run.ini").write_text(CONFIG)
    assert main(["simulate", str(d / "run.ini")]) == OK
    return d / "out"


def test_simulate_writes_a_trajectory(run_dir):
    assert (run_dir / "diagnostics.csv").exists()
    assert len(list(run_dir.glob("snap_*.axns"))) == 17


def test_verify_swirl_passes(run_dir, capsys):
    assert main(["verify-swirl", str(run_dir)]) == OK
    assert "PASS  swirl bounds" in capsys.readouterr().out


def test_theorem_check_passes_and_fails_on_ceiling(run_dir, capsys):
    assert main(["verify-thm1", str(run_dir), "--radii", "0.25", "0.5"]) == OK
    assert main(["verify-thm1", str(run_dir), "--part", "ii", "--radii", "0.25", "0.5"]) == OK
    assert main(["verify-thm1", str(run_dir), "--radii", "0.25", "--ceiling", "1e-30"]) == FAILED
    assert "FAIL  R=0.25" in capsys.readouterr().out


def test_window_longer_than_run_is_a_usage_error(run_dir):
    assert main(["verify-thm1", str(run_dir), "--radii", "1.0"]) == USAGE
    assert main(["moser-ladder", str(run_dir)]) == USAGE


def test_missing_inputs(tmp_path):
    assert main(["verify-swirl", str(tmp_path / "nowhere")]) == USAGE
    assert main(["simulate", str(tmp_path / "missing.ini")]) == USAGE


def test_bad_config_is_a_usage_error(tmp_path, capsys):
    path = tmp_path / "bad.ini"
    path.write_text(CONFIG.replace("r_min = 0.2", "r_min = 0"))
    assert main(["simulate", str(path)]) == USAGE
    assert "grid.r_min" in capsys.readouterr().err


def test_scaling_subcommand(capsys):
    assert main(["verify-scaling", "--family", "axial", "--k", "1", "0.5"]) == OK
    out = capsys.readouterr().out
    assert out.count("PASS") == 2


def test_convergence_subcommand(capsys):
    assert main(["convergence", "--levels", "33", "65"]) == OK
    assert main(["convergence", "--levels", "33"]) == USAGE


def test_helmholtz_subcommand(capsys):
    assert main(["helmholtz", "--family-size", "2", "--n-r", "49", "--q", "2"]) == OK
    assert capsys.readouterr().out.count("PASS") == 2


def test_unknown_subcommand_exits_with_usage():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == USAGE


def test_module_entry_point(run_dir):
    proc = subprocess.run([sys.executable, "-m", "swirlbound.cli", "verify-swirl",
                           str(run_dir)], capture_output=True, text=True)
    assert proc.returncode == OK
    assert "PASS" in proc.stdout
