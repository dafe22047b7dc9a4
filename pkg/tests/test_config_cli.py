import json
import math

import jsonschema
import numpy as np
import pytest
from scipy import special

from lrdscat import cli, schemas
from lrdscat.config import RunConfig
from lrdscat.errors import ConfigError
from lrdscat.presets import PRESETS, list_presets

SMALL = ["--set", "campaign.replicates=30", "--set", "campaign.n=4096", "--set", "campaign.j1_grid=[3,4,5]"]


def _json(path):
    with open(path) as fh:
        return json.load(fh)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_round_trip(name):
    cfg = PRESETS[name].run_config()
    again = RunConfig.from_json(cfg.to_json())
    assert again == cfg and again.config_hash() == cfg.config_hash()


def test_catalog_lists_every_preset_with_an_anchor(capsys):
    cat = list_presets()
    jsonschema.validate(cat, schemas.PRESETS)
    assert {p["name"] for p in cat} == set(PRESETS)
    assert all(p["anchor"] for p in cat)
    assert cli.main(["list-presets"]) == 0
    assert "figure4a" in capsys.readouterr().out


def test_bad_beta_names_the_key(tmp_path, capsys):
    code = cli.main(["constants", "--preset", "mexhat-beta05", "--set", "model.beta=1.5", "--out", str(tmp_path)])
    assert code == 2
    assert "model.beta" in capsys.readouterr().err


def test_unknown_key_in_config_file(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"subcommand": "constants", "model": {"beta": 0.5, "cutoff": 3.0, "bogus": 1}}))
    assert cli.main(["constants", "--config", str(p), "--out", str(tmp_path)]) == 2
    assert "model.bogus: unknown key" in capsys.readouterr().err


def test_config_error_carries_path():
    with pytest.raises(ConfigError) as exc:
        RunConfig.from_dict({"subcommand": "validate", "campaign": {"runs": [{"ratio": "x"}]}})
    assert exc.value.key_path == "campaign.runs[0].ratio"


def test_constants_output(tmp_path):
    assert cli.main(["constants", "--preset", "mexhat-beta05", "--out", str(tmp_path)]) == 0
    d = _json(tmp_path / "mexhat-beta05" / "constants.json")
    jsonschema.validate(d, schemas.CONSTANTS)
    assert d["sigma2"] == pytest.approx(special.gamma(2.25), abs=1e-6)
    assert d["coupling_window"] == [1.0, 2.0]


def test_diagrams_output(tmp_path):
    assert cli.main(["diagrams", "--order", "2,2,2", "--out", str(tmp_path)]) == 0
    d = _json(tmp_path / "diagrams" / "diagrams.json")
    jsonschema.validate(d, schemas.DIAGRAMS)
    assert d["total"] == 8 and d["regular"] == 0


def test_simulate_then_fit(tmp_path):
    args = ["--out", str(tmp_path), "--seed", "4"]
    assert cli.main(["simulate", "--set", 'model={"beta": 0.5, "cutoff": 3.14159}', "--n", "4096",
                     "--replicates", "2", *args]) == 0
    meta = _json(tmp_path / "simulate" / "simulate.json")
    jsonschema.validate(meta, schemas.SIMULATE)
    lines = [l for l in (tmp_path / "simulate" / "path_0000.csv").read_text().splitlines() if not l.startswith("#")]
    assert lines[0] == "t,value" and len(lines) == 4097
    assert cli.main(["fit", "--input", str(tmp_path / "simulate" / "path_0000.csv"), "--segment-length", "4096",
                     *args]) == 0
    d = _json(tmp_path / "fit" / "hurst.json")
    jsonschema.validate(d, schemas.HURST)
    assert d["n_segments"] == 1 and 0.2 < d["beta"] < 0.8


def test_validate_is_deterministic_across_workers(tmp_path):
    outs = []
    for w in ("1", "2"):
        out = tmp_path / w
        assert cli.main(["validate", "--preset", "rates", *SMALL, "--workers", w, "--out", str(out)]) in (0, 1)
        outs.append(out / "rates")
    files = sorted(p.name for p in outs[0].iterdir())
    assert files == sorted(p.name for p in outs[1].iterdir())
    for name in files:
        assert (outs[0] / name).read_bytes() == (outs[1] / name).read_bytes(), name
    d = _json(outs[0] / "summary.json")
    jsonschema.validate(d, schemas.VALIDATE)
    assert d["config"]["campaign"]["replicates"] == 30


def test_ratio_outside_window_needs_counterexample(tmp_path, capsys):
    code = cli.main(["validate", "--preset", "thm34", "--set", "campaign.runs[1].counterexample=false",
                     "--out", str(tmp_path)])
    assert code == 2
    err = capsys.readouterr().err
    assert "campaign.runs[1].ratio" in err and "coupling window" in err


def test_usage_errors_exit_2(capsys):
    assert cli.main([]) == 2
    assert cli.main(["constants", "--preset", "figure4a"]) == 2


def test_set_paths_with_indices():
    d = {"campaign": {"runs": [{"dt": 1.0}, {"dt": 0.25}]}}
    cli._set_path(d, "campaign.runs[1].dt", 0.5)
    assert d["campaign"]["runs"][1]["dt"] == 0.5
    with pytest.raises(ConfigError):
        cli._set_path(d, "campaign.runs[4].dt", 1.0)
    with pytest.raises(ConfigError):
        cli._set_path(d, "campaign.runs[0].dt.x", 1.0)
