import numpy as np
import pytest

from soma_sim import cellular, config
from soma_sim.cli import main
from soma_sim.errors import ConfigError
from soma_sim.selfcheck import run_checks

SMALL = ["--set", "run.steps=400", "--set", "run.log_every=100", "--set", "run.eval_size=50",
         "--set", "grid.width=4", "--set", "grid.height=4"]


def write(tmp_path, text, name="cfg.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_defaults_filled():
    eff = config.load()
    assert eff["grid"] == {"width": 10, "height": 10, "link_latency": 1, "router_latency": 1}
    assert eff["pruning"]["w"] == 0.0
    assert eff["learning"]["h_min"] == 0.01
    cfg = config.build(eff)
    assert cfg.steps == 100_000 and cfg.learn.activity_rate == 0.01


def test_minimal_file_and_dump(tmp_path, capsys):
    path = write(tmp_path, "[grid]\nwidth = 6\n")
    assert main(["dump-config", "--config", path]) == 0
    out = capsys.readouterr().out
    assert "width = 6" in out and "[pruning]" in out
    assert config.loads(out) == config.load(path)


def test_round_trip_custom_scenario(tmp_path):
    text = """
[scenario]
preset = "custom"
dim = 2
[[scenario.components]]
shape = "isotropic-gaussian"
center = [0.3, 0.3]
extent = 0.05
end = 50
[[scenario.components]]
center = [0.7, 0.7]
extent = 0.1
[run]
steps = 100
log_every = 10
"""
    eff = config.load(write(tmp_path, text))
    assert config.loads(config.dumps(eff)) == eff
    cfg = config.build(eff)
    assert cfg.scenario.components[0].end == 50 and cfg.scenario.components[1].end is None


def test_negative_rate_is_a_range_error(capsys):
    assert main(["dump-config", "--set", "pruning.w=-1"]) == 2
    assert "pruning.w" in capsys.readouterr().err


def test_override_applies():
    eff = config.load(overrides=["pruning.w=3e-7"])
    assert eff["pruning"]["w"] == 3e-7
    assert config.load(seed=5)["run"]["seed"] == 5


@pytest.mark.parametrize("override, path", [
    ("pruning.rate=1", "pruning.rate"),
    ("nosuch.key=1", "nosuch.key"),
    ("gird.width=3", "gird.width"),
    ("grid.width=zero", "grid.width"),
    ("grid.width=0", "grid.width"),
    ("learning.eps_final=0.9", "learning.eps_final"),
    ("run.log_every=7", "run.log_every"),
    ("run.engine=gpu", "run.engine"),
    ("learning.h_min=1.5", "learning.h_min"),
])
def test_bad_overrides(override, path):
    with pytest.raises(ConfigError) as err:
        config.load(overrides=[override])
    assert path in [p for p, _ in err.value.problems]


def test_unknown_key_in_file(tmp_path, capsys):
    path = write(tmp_path, "[pruning]\nw = 0.0\nwieght = 1\n")
    assert main(["dump-config", "--config", path]) == 2
    assert "pruning.wieght" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["run", "--config", "/nonexistent.toml", "--out", "/tmp/x"]) == 2


def test_all_problems_reported():
    with pytest.raises(ConfigError) as err:
        config.load(overrides=["pruning.w=-1", "grid.height=0"])
    assert {p for p, _ in err.value.problems} == {"pruning.w", "grid.height"}


def test_bad_component(tmp_path):
    text = '[scenario]\npreset = "custom"\n[[scenario.components]]\ncenter = [0.5, 1.5]\n'
    with pytest.raises(ConfigError) as err:
        config.load(write(tmp_path, text))
    paths = {p for p, _ in err.value.problems}
    assert {"scenario.components[0].extent", "scenario.components[0].center"} <= paths


def test_cli_run_layout_and_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["run", "--quiet", "--out", str(a), "--seed", "3", *SMALL]) == 0
    assert main(["run", "--quiet", "--out", str(b), "--seed", "3", *SMALL]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == ["effective-config", "final.topology", "final.weights", "metrics.csv"]
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()
    eff = config.loads((a / "effective-config").read_text())
    assert eff["run"]["seed"] == 3 and eff["grid"]["width"] == 4


def test_cli_sweep(tmp_path, capsys):
    out = tmp_path / "s"
    args = ["sweep", "--out", str(out), *SMALL, "--set", "run.sweep_w=[0.0, 1e-3]",
            "--set", "run.sweep_seeds=[0, 1]"]
    assert main(args) == 0
    assert "w=0.001" in capsys.readouterr().out
    summary = (out / "summary.csv").read_text().splitlines()
    assert summary[0] == "w,final_aqe_mean,final_aqe_std,final_edges_mean,final_components_mean"
    assert len(summary) == 3
    assert len((out / "metrics.csv").read_text().splitlines()) == 1 + 4 * 5


def test_validate_default(capsys):
    assert main(["validate"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 5 and all(ln.startswith("PASS") for ln in lines)


def test_validate_degenerate_grid(capsys):
    assert main(["validate", "--set", "grid.width=1", "--set", "grid.height=1"]) == 0


def test_validate_catches_swapped_tie_break(monkeypatch, capsys):
    monkeypatch.setattr(cellular, "_PREFER_LARGER_ID", True)
    assert main(["validate"]) == 1
    out = capsys.readouterr().out
    assert "FAIL  election-vs-exhaustive-argmin" in out


def test_selfcheck_reports_structure():
    cfg = config.build(config.load(overrides=["grid.width=3", "grid.height=2"]))
    results = run_checks(cfg)
    assert [r.passed for r in results] == [True] * 5


def test_runtime_failure_exit_code(tmp_path, monkeypatch):
    import soma_sim.experiments as ex

    def boom(cfg):
        raise RuntimeError("disk on fire")
    monkeypatch.setattr(ex, "run", boom)
    assert main(["run", "--quiet", "--out", str(tmp_path), *SMALL]) == 1
