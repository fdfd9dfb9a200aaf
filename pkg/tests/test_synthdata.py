"""Synthetic generator: determinism, table shape, planted correlations."""

import csv
import io

import pytest

from viva.configio import load_config
from viva.errors import InvalidSpec
from viva.ingest import parse_csv
from viva.synthdata import DATASET_ORDER, GeneratorSpec, MONTHLY_ROWS, generate

EXPECTED_KINDS = {
    "Encounters": {"categorical": 22, "ordered": 0, "quantitative": 3},
    "IntervalOps": {"categorical": 0, "ordered": 0, "quantitative": 18},
    "Survey": {"categorical": 12, "ordered": 8, "quantitative": 4},
    "CallBack": {"categorical": 7, "ordered": 1, "quantitative": 2},
}


def ingest_bundle(bundle, tmp_path):
    config = tmp_path / "cfg"
    config.mkdir(exist_ok=True)
    (config / "schema.cfg").write_text(bundle.schema_cfg, encoding="utf-8")
    (config / "merges.cfg").write_text(bundle.merges_cfg, encoding="utf-8")
    store, diagnostics = load_config(config)
    assert diagnostics == []
    return {
        name: parse_csv(bundle.csvs[name], name, store.schema, store.merges)
        for name in DATASET_ORDER
    }


def test_identical_spec_identical_bytes():
    a = generate(GeneratorSpec(seed=1, months=2, scale=0.05))
    b = generate(GeneratorSpec(seed=1, months=2, scale=0.05))
    assert a.csvs == b.csvs
    assert a.schema_cfg == b.schema_cfg


def test_different_seed_different_bytes():
    a = generate(GeneratorSpec(seed=1, months=1, scale=0.05))
    b = generate(GeneratorSpec(seed=2, months=1, scale=0.05))
    assert a.csvs["Encounters"] != b.csvs["Encounters"]


def test_monthly_row_counts():
    months = 3
    bundle = generate(GeneratorSpec(seed=4, months=months, scale=0.1))
    for name in DATASET_ORDER:
        reader = csv.reader(io.StringIO(bundle.csvs[name].decode("utf-8")))
        rows = sum(1 for _ in reader) - 1
        assert rows == months * round(MONTHLY_ROWS[name] * 0.1)


def test_attribute_kind_counts_match_paper_shape(tmp_path):
    bundle = generate(GeneratorSpec(seed=1, months=1, scale=0.02))
    datasets = ingest_bundle(bundle, tmp_path)
    for name, expected in EXPECTED_KINDS.items():
        kinds = {"categorical": 0, "ordered": 0, "quantitative": 0, "datetime": 0}
        for attr in datasets[name].attributes:
            kinds[attr.kind] += 1
        assert kinds.pop("datetime") == 1, name
        assert kinds == expected, name


def test_disposition_vocabulary_shared(tmp_path):
    bundle = generate(GeneratorSpec(seed=1, months=1, scale=0.1))
    datasets = ingest_bundle(bundle, tmp_path)
    vocab = {"Red", "Yellow", "Green", "TryHomeTreatment", "NULL"}
    for attr_name in ("RNDisposition", "MDDisposition", "KBDisposition"):
        levels = set(datasets["Encounters"].attribute(f"Encounters.{attr_name}").levels)
        assert levels <= vocab and "Yellow" in levels


def test_planted_downgrade_rate_recovered(tmp_path):
    # P(physician Green | nurse Yellow) is planted at 0.30
    bundle = generate(GeneratorSpec(seed=1, months=3, scale=1.0))
    datasets = ingest_bundle(bundle, tmp_path)
    encounters = datasets["Encounters"]
    rn = encounters.columns["Encounters.RNDisposition"]
    md = encounters.columns["Encounters.MDDisposition"]
    yellow = sum(1 for value in rn if value == "Yellow")
    downgraded = sum(1 for r, m in zip(rn, md) if r == "Yellow" and m == "Green")
    assert yellow >= 10_000 * 0.3  # enough samples for the tolerance
    assert downgraded / yellow == pytest.approx(0.30, abs=0.02)


def test_callback_disposition_deliberately_noisy(tmp_path):
    bundle = generate(GeneratorSpec(seed=1, months=2, scale=1.0))
    datasets = ingest_bundle(bundle, tmp_path)
    levels = set(datasets["CallBack"].attribute("CallBack.VPDisposition").levels)
    assert {"Red", "red", "HIGH"} <= levels


def test_survey_likerts_are_one_to_five(tmp_path):
    bundle = generate(GeneratorSpec(seed=1, months=1, scale=0.5))
    datasets = ingest_bundle(bundle, tmp_path)
    attr = datasets["Survey"].attribute("Survey.SatisfactionOverall")
    assert attr.kind == "ordered"
    assert set(attr.levels) <= {"1", "2", "3", "4", "5", "NULL"}


def test_specified_merge_applied_to_used_video(tmp_path):
    bundle = generate(GeneratorSpec(seed=1, months=1, scale=0.5))
    datasets = ingest_bundle(bundle, tmp_path)
    levels = datasets["Survey"].attribute("Survey.UsedVideo").levels
    assert "Y" not in levels and "Yes" in levels


def test_invalid_specs_rejected():
    with pytest.raises(InvalidSpec):
        generate(GeneratorSpec(seed=1, months=0))
    with pytest.raises(InvalidSpec):
        generate(GeneratorSpec(seed=1, months=1, scale=0.0))


def test_config_files_parse_clean(tmp_path):
    bundle = generate(GeneratorSpec(seed=1, months=1, scale=0.02))
    out = tmp_path / "demo"
    bundle.write_to(out)
    store, diagnostics = load_config(out)
    assert diagnostics == []
    assert len(store.concerns_spec) == 10
    assert store.orderings and store.colors and store.merges
