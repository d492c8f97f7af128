"""Command-line interface tests: exit codes, formats, determinism."""

import json
import os

import pytest

from nillab.cli import main


def run(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_catalog_listing(capsys):
    code, out, err = run(capsys, ["catalog"])
    assert code == 0
    for name in ("rot_torus", "heisenberg3", "heisenberg4", "z2_skew"):
        assert name in out


def test_structure_report(capsys):
    code, out, err = run(capsys, ["structure", "--system", "heisenberg3"])
    assert code == 0
    assert "ergodic" in out
    assert "tau" in out or "commutator" in out


def test_structure_unknown_system(capsys):
    code, out, err = run(capsys, ["structure", "--system", "not_a_system"])
    assert code == 1
    assert "error:" in err


def test_structure_bad_params(capsys):
    code, out, err = run(
        capsys, ["structure", "--system", "rot_torus", "--params", "gamma=1/3"]
    )
    assert code == 1
    assert "error:" in err


def test_spectrum_requires_seed(capsys):
    code, out, err = run(
        capsys,
        ["spectrum", "--system", "rot_torus", "--observable", "1:1",
         "--samples", "2048", "--lags", "64"],
    )
    assert code == 1
    assert "seed" in err


def test_spectrum_csv_and_determinism(capsys):
    argv = ["spectrum", "--system", "rot_torus", "--observable", "1:1",
            "--samples", "2048", "--lags", "64", "--seed", "7"]
    code, out1, _ = run(capsys, argv)
    assert code == 0
    code, out2, _ = run(capsys, argv)
    assert out1 == out2
    lines = out1.strip().splitlines()
    data = [l for l in lines if not l.startswith("#") and "," in l and "lag" not in l]
    assert len(data) == 129  # lags -64..64
    first = data[0].split(",")
    assert len(first) == 3
    float(first[1]), float(first[2])
    report = [l for l in lines if l.startswith("#")]
    assert any("atom_mass" in l for l in report)
    assert any("verdict" in l for l in report)


def test_spectrum_lag_budget(capsys):
    code, out, err = run(
        capsys,
        ["spectrum", "--system", "rot_torus", "--observable", "1:1",
         "--samples", "2048", "--lags", "5000", "--seed", "7"],
    )
    assert code == 1
    assert "error:" in err


def test_useminorm_rows_per_level_prefix(capsys):
    code, out, _ = run(
        capsys,
        ["useminorm", "--system", "skew_torus_nonergodic", "--observable", "0,1:1",
         "--samples", "2048", "--seed", "3", "--levels", "16", "16"],
    )
    assert code == 0
    data = [l for l in out.strip().splitlines() if not l.startswith("#") and "s," not in l]
    assert len(data) == 2  # one row for U^1, one for U^2
    s_vals = [int(l.split(",")[0]) for l in data]
    assert s_vals == [1, 2]
    u1 = float(data[0].split(",")[1])
    u2 = float(data[1].split(",")[1])
    assert u1 <= 0.05 and u2 >= 0.99


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "system": "rot_torus", "observable": ["1:1"],
        "samples": 2048, "lags": 64, "seed": 7,
    }))
    code, out1, _ = run(capsys, ["spectrum", "--config", str(cfg)])
    assert code == 0
    # flags override the config file
    code, out2, _ = run(capsys, ["spectrum", "--config", str(cfg), "--seed", "8"])
    assert code == 0
    assert out1 != out2


def test_missing_config_file(capsys):
    code, out, err = run(capsys, ["spectrum", "--config", "/tmp/does_not_exist.json"])
    assert code == 1
    assert "error:" in err


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "report.txt"
    code, out, _ = run(
        capsys, ["structure", "--system", "heisenberg4", "--out", str(target)]
    )
    assert code == 0
    assert out == ""
    text = target.read_text()
    assert "ergodic" in text


def test_system_file_path_accepted(capsys, tmp_path):
    from nillab.catalog import catalog_build
    from nillab.serialize import save_system

    path = tmp_path / "h3.json"
    save_system(str(path), catalog_build("heisenberg3"))
    code, out, _ = run(capsys, ["structure", "--system", str(path)])
    assert code == 0
    assert "ergodic" in out
