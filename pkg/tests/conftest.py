"""Shared builders for tests: hand-rolled datasets and config stores."""

from __future__ import annotations

from datetime import date, datetime
from pathlib import Path

import pytest

from viva.configio import ConfigStore
from viva.core import AttributeDef, Dataset


def make_dataset(
    name: str = "D",
    stamps: list | None = None,
    columns: dict | None = None,
) -> Dataset:
    """Build a dataset from {attr_name: (kind, cells)} plus a timestamp list.

    Level lists are computed the same way ingestion does: distinct observed
    values, descending count, alphabetical ties.
    """
    stamps = stamps or []
    columns = columns or {}
    time_id = f"{name}.When"
    attrs = [AttributeDef(id=time_id, name="When", kind="datetime", dataset_id=name)]
    cols = {time_id: [_as_stamp(s) for s in stamps]}
    for attr_name, (kind, cells) in columns.items():
        attr_id = f"{name}.{attr_name}"
        attr = AttributeDef(id=attr_id, name=attr_name, kind=kind, dataset_id=name)
        if attr.leveled:
            attr.levels = observed_levels(cells, kind)
        if kind == "quantitative":
            attr.units = "count"
        attrs.append(attr)
        cols[attr_id] = list(cells)
    lengths = {len(c) for c in cols.values()}
    assert len(lengths) <= 1, f"ragged columns: { {k: len(v) for k, v in cols.items()} }"
    return Dataset(id=name, name=name, attributes=attrs, columns=cols, time_attribute=time_id)


def _as_stamp(value):
    if value is None or isinstance(value, datetime):
        return value
    if isinstance(value, date):
        return datetime(value.year, value.month, value.day)
    raise TypeError(f"bad stamp {value!r}")


def observed_levels(cells: list, kind: str) -> list:
    counts: dict = {}
    for cell in cells:
        if cell is None:
            continue
        if kind == "list":
            for element in cell:
                counts[element] = counts.get(element, 0) + 1
        else:
            counts[cell] = counts.get(cell, 0) + 1
    return sorted(counts, key=lambda level: (-counts[level], level))


@pytest.fixture
def empty_store(tmp_path: Path) -> ConfigStore:
    return ConfigStore(config_dir=tmp_path / "config")


def days(year: int, month: int, first: int, count: int) -> list:
    return [date(year, month, first + offset) for offset in range(count)]
