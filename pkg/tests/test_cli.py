import csv
import json
from pathlib import Path

import numpy as np
import pytest
import yaml

from ringcascade.cli import OUTPUT_ENV, RunConfig, main, validate
from ringcascade.scenarios import REGISTRY

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
SCENARIOS = {
    "classical-correspondence",
    "fig10-raman-weak",
    "fig11-raman-strong",
    "fig2-populations",
    "fig3-spectra",
    "fig5-two-cavity",
    "fig6-tds",
    "fig8-array",
}


def write_config(tmp_path, **raw):
    path = tmp_path / "cfg.yaml"
    path.write_text(yaml.safe_dump(raw))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


@pytest.fixture(autouse=True)
def no_env_override(monkeypatch):
    monkeypatch.delenv(OUTPUT_ENV, raising=False)


def test_registry_names():
    assert set(REGISTRY) == SCENARIOS


def test_every_scenario_has_a_config():
    names = {yaml.safe_load(p.read_text())["scenario"] for p in CONFIGS.glob("*.yaml")}
    assert names == SCENARIOS


def test_list_scenarios(capsys):
    assert main(["list-scenarios"]) == 0
    listed = {line.split("\t")[0] for line in capsys.readouterr().out.splitlines()}
    assert listed == SCENARIOS


def test_unknown_scenario_exit_code(tmp_path, capsys):
    assert main(["run", str(write_config(tmp_path, scenario="fig99"))]) == 2
    err = capsys.readouterr().err
    assert all(name in err for name in SCENARIOS)


def test_missing_config_file(tmp_path):
    assert main(["run", str(tmp_path / "absent.yaml")]) == 2


def test_valid_config_has_no_findings():
    assert validate(RunConfig.load(CONFIGS / "fig5-two-cavity.yaml")) == []


def test_negative_kappa_is_named(tmp_path, capsys):
    cfg = write_config(
        tmp_path,
        scenario="fig5-two-cavity",
        output_dir=str(tmp_path / "out"),
        params={"cases": [{"label": "bad", "g": 5.0, "delta": 0.5, "kappa": [1.0, -1.0]}]},
    )
    findings = validate(RunConfig.load(cfg))
    assert [f["field"] for f in findings] == ["params.cases[0].kappa[1]"]
    assert main(["run", str(cfg)]) == 1
    assert "kappa[1]" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()


def test_raman_adiabaticity_warning_is_not_fatal(tmp_path):
    params = {
        "g": 0.1, "delta_raman": 1.0, "delta_c": [0.0], "kappa": 1.0, "n_empty": 0,
        "pulse": {"omega0": 1.6, "tau_l": 2.0},
    }
    cfg = write_config(tmp_path, scenario="fig10-raman-weak", params=params)
    findings = validate(RunConfig.load(cfg))
    assert len(findings) == 1
    assert findings[0]["severity"] == "warning"
    assert "omega0_over_2delta=0.8" in findings[0]["message"]
    assert main(["validate", str(cfg)]) == 0


def test_unwritable_output_is_io_failure(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    cfg = write_config(tmp_path, scenario="classical-correspondence", output_dir=str(blocker / "sub"))
    assert main(["run", str(cfg)]) == 1


def test_weak_fig2_fibre_populations(tmp_path):
    cfg = write_config(
        tmp_path,
        scenario="fig2-populations",
        output_dir=str(tmp_path),
        params={"cases": [{"label": "weak", "g": 0.25, "delta": 0.5}]},
    )
    assert main(["run", str(cfg)]) == 0
    header, data = read_csv(tmp_path / "populations_weak.csv")
    assert header == ["t", "P_e", "P_1cc", "P_1c", "P_fiber_right", "P_fiber_left"]
    assert data[-1, -2] == pytest.approx(0.5, abs=1e-3)
    assert data[-1, -1] == pytest.approx(0.5, abs=1e-3)


def test_fig3_separation_in_summary(tmp_path):
    cfg = write_config(
        tmp_path, scenario="fig3-spectra", output_dir=str(tmp_path), params={"g_values": [5.0]}
    )
    assert main(["run", str(cfg)]) == 0
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["g=5"]["peak_separation"] == pytest.approx(2 * np.sqrt(2) * 5, rel=0.05)
    header, _ = read_csv(tmp_path / "spectrum_g5.csv")
    assert header == ["delta_k", "t", "N", "N_S"]


def test_manifest_records_resolved_config(tmp_path):
    cfg = write_config(tmp_path, scenario="classical-correspondence", output_dir=str(tmp_path))
    assert main(["run", str(cfg)]) == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["scenario"] == "classical-correspondence"
    assert "version" in manifest
    assert manifest["resolved"]["params"]["r_values"]
    assert set(manifest["files"]) <= {p.name for p in tmp_path.iterdir()}


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_byte_identical_reruns(tmp_path, fmt):
    outs = []
    for run in ("a", "b"):
        cfg = write_config(
            tmp_path,
            scenario="fig2-populations",
            output_dir=str(tmp_path / run),
            format=fmt,
            seed=5,
            time={"t_end": 10.0},
            params={"mc_trajectories": 20000},
        )
        assert main(["run", str(cfg)]) == 0
        outs.append({p.name: p.read_bytes() for p in (tmp_path / run).iterdir()})
    assert outs[0] == outs[1]


def test_csv_number_format(tmp_path):
    cfg = write_config(tmp_path, scenario="classical-correspondence", output_dir=str(tmp_path))
    main(["run", str(cfg)])
    raw = next(tmp_path.glob("*.csv")).read_bytes()
    assert b"\r" not in raw
    for cell in raw.decode().splitlines()[1].split(","):
        assert len(cell.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 12


def test_env_overrides_output_dir(tmp_path, monkeypatch):
    target = tmp_path / "env"
    monkeypatch.setenv(OUTPUT_ENV, str(target))
    cfg = write_config(tmp_path, scenario="classical-correspondence", output_dir=str(tmp_path / "cfg"))
    assert main(["run", str(cfg)]) == 0
    assert (target / "summary.json").exists()
    assert not (tmp_path / "cfg").exists()


def test_unknown_config_key(tmp_path):
    cfg = write_config(tmp_path, scenario="fig2-populations", colour="red")
    assert main(["validate", str(cfg)]) != 0
