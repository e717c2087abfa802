import struct

import numpy as np
import pytest

from swirlbound import make_grid, reference, simulate
from swirlbound.errors import (BadMagicError, ParseError, ShapeMismatchError,
                               TruncatedFileError, ValidationError, VersionMismatchError)
from swirlbound.io import (dump_config, emit_diagnostics, field_function, load_config,
                           load_trajectory, parse_config, parse_field, read_checkpoint,
                           read_checkpoint_raw, read_diagnostics, save_trajectory,
                           write_checkpoint)

MINIMAL = """\
[grid]
r_min = 1
r_max = 4
z_min = -4
z_max = 4
n_r = 33
n_z = 64
periodic_z = true

[evolution]
gamma0 = sin(pi*z)*(r - 1)*(4 - r)
t_end = 0.05
"""


def test_minimal_config_takes_defaults():
    cfg = parse_config(MINIMAL)
    assert cfg.evolution.omega0 == "0"
    assert cfg.evolution.cfl_safety == 0.5
    assert cfg.evolution.advection == "centered"
    assert cfg.verification.radii == (0.25, 0.5, 1.0)
    assert cfg.output.cadence is None
    assert cfg.make_grid().shape == (33, 64)


def test_dump_is_idempotent():
    cfg = parse_config(MINIMAL)
    text = dump_config(cfg)
    assert parse_config(text) == cfg
    assert dump_config(parse_config(text)) == text


def test_shipped_configs_load(tmp_path):
    from pathlib import Path
    root = Path(__file__).resolve().parents[1] / "configs"
    for name in ("annulus.ini", "extended.ini"):
        cfg = load_config(root / name)
        assert cfg.evolution.cfl_safety == 1.0


def test_axis_is_a_validation_error():
    with pytest.raises(ValidationError) as info:
        parse_config(MINIMAL.replace("r_min = 1", "r_min = 0"))
    assert info.value.key == "grid.r_min"


def test_unknown_key_is_a_parse_error():
    with pytest.raises(ParseError) as info:
        parse_config(MINIMAL + "colour = blue\n")
    assert info.value.key == "evolution.colour"
    assert info.value.line == 13


@pytest.mark.parametrize("bad", ["[grid]\nr_min = one\n", "[physics]\nnu = 1\n",
                                 "stray = 1\n"])
def test_malformed_input(bad):
    with pytest.raises(ParseError):
        parse_config(bad)


def test_missing_required_key():
    with pytest.raises(ValidationError) as info:
        parse_config(MINIMAL.replace("t_end = 0.05\n", ""))
    assert info.value.key == "evolution.t_end"


def test_expression_namespace_is_closed():
    with pytest.raises(ValidationError):
        parse_field("__import__('os')")
    with pytest.raises(ValidationError):
        parse_field("foo(r)")
    assert field_function(parse_field("r*z"))(np.array(2.0), np.array(3.0)) == 6.0


def test_config_matches_python_reference():
    from pathlib import Path
    cfg = load_config(Path(__file__).resolve().parents[1] / "configs" / "annulus.ini")
    a = cfg.evolution_config()
    b = reference.annulus_config()
    g = a.grid
    assert g == b.grid
    assert np.array_equal(g.evaluate(a.gamma0), g.evaluate(b.gamma0))


# -- checkpoints -------------------------------------------------------------------

def _state(small_run, i=-1):
    return small_run.state(len(small_run) - 1 if i < 0 else i)


def test_checkpoint_round_trip_is_bit_exact(tmp_path, small_run):
    s = _state(small_run)
    path = tmp_path / "s.axns"
    write_checkpoint(s, path)
    back = read_checkpoint(path, expected_grid=s.grid)
    assert back.t == s.t
    assert np.array_equal(back.gamma, s.gamma)
    assert np.array_equal(back.omega, s.omega)
    assert np.array_equal(back.psi, s.psi)


def test_checkpoint_size(tmp_path, small_run):
    s = _state(small_run)
    path = tmp_path / "s.axns"
    write_checkpoint(s, path)
    assert path.stat().st_size == struct.calcsize("<4sIQQddddBd") + 16 * 33 * 64


def test_truncated_checkpoint(tmp_path, small_run):
    path = tmp_path / "s.axns"
    write_checkpoint(_state(small_run), path)
    data = path.read_bytes()
    path.write_bytes(data[:-1])
    with pytest.raises(TruncatedFileError):
        read_checkpoint_raw(path)
    path.write_bytes(data[:10])
    with pytest.raises(TruncatedFileError):
        read_checkpoint_raw(path)


def test_bad_magic(tmp_path, small_run):
    path = tmp_path / "s.axns"
    write_checkpoint(_state(small_run), path)
    path.write_bytes(b"NOPE" + path.read_bytes()[4:])
    with pytest.raises(BadMagicError):
        read_checkpoint_raw(path)


def test_version_mismatch(tmp_path, small_run):
    path = tmp_path / "s.axns"
    write_checkpoint(_state(small_run), path)
    data = bytearray(path.read_bytes())
    data[4:8] = struct.pack("<I", 2)
    path.write_bytes(bytes(data))
    with pytest.raises(VersionMismatchError):
        read_checkpoint_raw(path)


def test_grid_mismatch(tmp_path, small_run):
    path = tmp_path / "s.axns"
    write_checkpoint(_state(small_run), path)
    with pytest.raises(ShapeMismatchError):
        read_checkpoint_raw(path, expected_grid=make_grid(1, 4, -4, 4, 33, 64, False))
    path.write_bytes(path.read_bytes() + b"\0")
    with pytest.raises(ShapeMismatchError):
        read_checkpoint_raw(path)


# -- diagnostics and trajectory folders ----------------------------------------------

def test_diagnostics_of_zero_run(tmp_path):
    g = make_grid(1, 4, -4, 4, 17, 32, True)
    traj = simulate(reference.EvolutionConfig(g, lambda r, z: 0 * r, 0.01,
                                              output_interval=0.005))
    path = tmp_path / "d.csv"
    emit_diagnostics(traj.records, path)
    rows = read_diagnostics(path)
    assert [r.t for r in rows] == [0.0, 0.005, 0.01]
    for r in rows:
        assert r.sup_abs_gamma == 0.0 and r.kinetic_energy == 0.0


def test_csv_is_deterministic(tmp_path, small_run):
    again = simulate(small_run_config())
    emit_diagnostics(small_run.records, tmp_path / "a.csv")
    emit_diagnostics(again.records, tmp_path / "b.csv")
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


def small_run_config():
    grid = make_grid(1, 4, -4, 4, 33, 64, True)
    omega0 = lambda r, z: 5 * np.cos(np.pi * z / 4) * ((r - 1) * (4 - r)) ** 2
    return reference.EvolutionConfig(grid, reference.gamma0, 0.05, omega0=omega0,
                                     output_interval=1 / 128)


def test_csv_values_survive_text(tmp_path, small_run):
    path = tmp_path / "d.csv"
    emit_diagnostics(small_run.records, path)
    assert read_diagnostics(path) == small_run.records


def test_sup_gamma_is_monotone_on_reference_run(annulus_run):
    sups = [r.sup_abs_gamma for r in annulus_run.records]
    assert all(b <= a + 1e-8 for a, b in zip(sups, sups[1:]))


def test_trajectory_folder_round_trip(tmp_path, small_run):
    cfg = parse_config(MINIMAL)
    save_trajectory(small_run, tmp_path / "run", cfg)
    back = load_trajectory(tmp_path / "run")
    assert np.array_equal(back.times, small_run.times)
    assert np.array_equal(back.gamma, small_run.gamma)
    assert np.array_equal(back.omega, small_run.omega)
    assert back.t_end == small_run.t_end
    assert back.records == small_run.records
    assert load_config(tmp_path / "run" / "run.ini") == cfg
