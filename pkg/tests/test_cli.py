"""CLI: synth output, replay-check verdicts."""

from click.testing import CliRunner

from viva.cli import main
from viva.configio import ConfigStore, append_logged
from viva.engine import Operation


def test_synth_writes_csvs_and_config(tmp_path):
    runner = CliRunner()
    result = runner.invoke(
        main, ["synth", "--seed", "3", "--months", "1", "--scale", "0.02", "--out", str(tmp_path / "demo")]
    )
    assert result.exit_code == 0, result.output
    names = {p.name for p in (tmp_path / "demo").iterdir()}
    assert {"Encounters.csv", "IntervalOps.csv", "Survey.csv", "CallBack.csv", "schema.cfg"} <= names


def test_replay_check_ok_on_clean_session(tmp_path):
    runner = CliRunner()
    out = tmp_path / "demo"
    runner.invoke(main, ["synth", "--seed", "3", "--months", "1", "--scale", "0.02", "--out", str(out)])

    config = tmp_path / "config"
    config.mkdir()
    (config / "schema.cfg").write_text((out / "schema.cfg").read_text(), encoding="utf-8")
    store = ConfigStore(config_dir=config)
    append_logged(store, Operation(1, "FilterOut", "Encounters", "Encounters.Gender",
                                   {"levels": ["NULL"], "mode": "MakeNew"}))
    append_logged(store, Operation(2, "DuplicateAttribute", "Encounters", "Encounters.RNDisposition", {}))

    result = runner.invoke(main, ["replay-check", "--config-dir", str(config), "--data", str(out)])
    assert result.exit_code == 0, result.output
    assert "replay OK: 2 ops" in result.output


def test_replay_check_fails_on_inconsistent_log(tmp_path):
    runner = CliRunner()
    out = tmp_path / "demo"
    runner.invoke(main, ["synth", "--seed", "3", "--months", "1", "--scale", "0.02", "--out", str(out)])

    config = tmp_path / "config"
    config.mkdir()
    (config / "schema.cfg").write_text((out / "schema.cfg").read_text(), encoding="utf-8")
    store = ConfigStore(config_dir=config)
    append_logged(store, Operation(1, "FilterOut", "Encounters", "Encounters.DoesNotExist",
                                   {"levels": ["x"], "mode": "MakeNew"}))

    result = runner.invoke(main, ["replay-check", "--config-dir", str(config), "--data", str(out)])
    assert result.exit_code == 1
    assert "REPLAY FAILED" in result.output
