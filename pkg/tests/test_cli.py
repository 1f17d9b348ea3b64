import csv
import subprocess
import sys

import pytest

from spqc.cli import EXIT_CONFIG, EXIT_OK, build_config, main, parse_seeds
from spqc.errors import ConfigurationError
from spqc.experiments import StarConfig, StepCompareConfig

TINY = ["--epochs", "15", "--seeds", "2", "--num-points", "16"]


def read_csv(path):
    with open(path) as fh:
        return list(csv.reader(fh))


def test_parse_seeds():
    assert parse_seeds("5") == (0, 1, 2, 3, 4)
    assert parse_seeds("3,7,11") == (3, 7, 11)
    for bad in ("0", "x", "1,b"):
        with pytest.raises(ConfigurationError):
            parse_seeds(bad)


def test_config_file_then_flags(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[step-compare]\ndepth = 3\nepochs = 40\nlr = 0.05\n\n[star]\nm = 2\n")
    cfg = build_config(StepCompareConfig, "step-compare", str(ini), {"epochs": "7", "seeds": "2,9"})
    assert cfg.depth == 3
    assert cfg.train.epochs == 7
    assert cfg.train.learning_rate == 0.05
    assert cfg.train.seeds == (2, 9)
    star = build_config(StarConfig, "star", str(ini), {})
    assert star.m == 2 and star.train.loss == "mse_on_labels"


def test_unknown_config_key(tmp_path):
    ini = tmp_path / "run.ini"
    ini.write_text("[step-compare]\nwidth = 3\n")
    with pytest.raises(ConfigurationError):
        build_config(StepCompareConfig, "step-compare", str(ini), {})


def test_missing_config_file_exits_with_config_error(tmp_path, capsys):
    assert main(["step-compare", "--config", str(tmp_path / "nope.ini")]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err


def test_invalid_value_exits_with_config_error():
    assert main(["step-compare", "--epochs", "0"]) == EXIT_CONFIG
    assert main(["ancilla-scan", "--ms", "1,x"]) == EXIT_CONFIG


def test_step_compare_writes_artifacts(tmp_path):
    assert main(["step-compare", *TINY, "--out", str(tmp_path), "--svg"]) == EXIT_OK
    table = read_csv(tmp_path / "table1.csv")
    assert table[0] == ["model", "mse_mean", "mse_std", "mae_mean", "mae_std", "r2_mean", "r2_std"]
    assert [r[0] for r in table[1:]] == ["SPQC", "PQC"]
    fig = read_csv(tmp_path / "fig4.csv")
    assert fig[0] == ["x", "target", "spqc_pred_mean", "pqc_pred_mean"]
    assert len(fig) == 17
    assert len(read_csv(tmp_path / "fig4_loss.csv")) == 16
    assert (tmp_path / "fig4.svg").read_text().startswith("<svg")


def test_ancilla_scan_smoke_has_four_rows(tmp_path):
    assert main(["ancilla-scan", *TINY, "--depth", "2", "--out", str(tmp_path)]) == EXIT_OK
    table = read_csv(tmp_path / "table2.csv")
    assert [r[0] for r in table[1:]] == ["1", "2", "3", "4"]
    assert read_csv(tmp_path / "fig5.csv")[0] == ["x", "target"] + [f"pred_m{m}_mean" for m in (1, 2, 3, 4)]


def test_star_writes_artifacts(tmp_path):
    args = ["star", "--epochs", "5", "--seeds", "1", "--grid-side", "6", "--boundary-side", "5"]
    assert main([*args, "--out", str(tmp_path), "--svg"]) == EXIT_OK
    table = read_csv(tmp_path / "table3.csv")
    assert [r[:2] for r in table[1:]] == [["linear", "5"], ["quadratic", "7"]]
    assert len(read_csv(tmp_path / "fig6_boundary.csv")) == 26
    assert (tmp_path / "fig6.svg").exists()


def test_csv_values_round_trip_exactly(tmp_path):
    main(["step-compare", *TINY, "--out", str(tmp_path)])
    row = read_csv(tmp_path / "fig4.csv")[5]
    assert all(repr(float(v)) == repr(float(f"{float(v):.17g}")) for v in row)


def test_sample_subcommand(capsys):
    assert main(["sample", "--m", "1", "--shots", "500", "--seed", "3"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "retention_rate = " in out and "shots_total = 500" in out


def test_verify_subcommand_via_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "spqc", "verify"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "ALL CHECKS PASSED" in proc.stdout
