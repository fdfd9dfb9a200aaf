"""CSV ingestion against the schema configuration.

Uploaded bytes are parsed fully in memory; nothing is written to disk.
Columns named in the schema become typed attributes; unlisted columns come
along as unchartable freeform text. Specified merge rules are applied while
cells are normalized, so the base dataset already shows the merged levels.
"""

from __future__ import annotations

import csv
import io

from .configio import SchemaConfig
from .core import (
    AttributeDef,
    Dataset,
    normalize_level,
    normalize_list,
    normalize_number,
    normalize_timestamp,
)
from .errors import MalformedCsv, MissingColumn, NoTimeAttribute


def attribute_id(dataset_name: str, column_name: str) -> str:
    """Stable id for an original attribute; also the reference syntax used
    by the specified config files."""
    return f"{dataset_name}.{column_name}"


def parse_csv(
    data: bytes,
    dataset_name: str,
    schema: SchemaConfig,
    merges: list | None = None,
) -> Dataset:
    """Build an immutable base dataset from CSV bytes.

    Raises MalformedCsv for undecodable/headerless/ragged input,
    MissingColumn when the schema names a column the CSV lacks, and
    NoTimeAttribute when the schema designates no datetime timeline
    for this dataset.
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise MalformedCsv(f"{dataset_name}: not valid UTF-8: {exc}") from exc

    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise MalformedCsv(f"{dataset_name}: no header row")
    header = [name.strip() for name in rows[0]]
    if len(set(header)) != len(header):
        raise MalformedCsv(f"{dataset_name}: duplicate column names in header")
    for row_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise MalformedCsv(
                f"{dataset_name}: row {row_no} has {len(row)} cells, expected {len(header)}"
            )

    entries = {e.attribute_name: e for e in schema.for_dataset(dataset_name)}
    missing = [name for name in entries if name not in header]
    if missing:
        raise MissingColumn(f"{dataset_name}: schema columns not in CSV: {sorted(missing)}")
    time_entry = schema.time_entry(dataset_name)
    if time_entry is None or entries[time_entry.attribute_name].kind != "datetime":
        raise NoTimeAttribute(f"{dataset_name}: schema designates no datetime time attribute")

    merge_maps = _merge_maps(dataset_name, merges or [])

    attributes: list = []
    columns: dict = {}
    for index, column_name in enumerate(header):
        entry = entries.get(column_name)
        kind = entry.kind if entry else "freeform"
        attr = AttributeDef(
            id=attribute_id(dataset_name, column_name),
            name=column_name,
            kind=kind,
            dataset_id=dataset_name,
            units=entry.units if entry else None,
        )
        raw_cells = [row[index] for row in rows[1:]]
        separator = (entry.list_separator if entry else None) or "|"
        merge_map = merge_maps.get(column_name, {})
        cells = _normalize_column(raw_cells, kind, separator, merge_map)
        if attr.leveled:
            attr.levels = _observed_levels(cells, kind)
        attributes.append(attr)
        columns[attr.id] = cells

    return Dataset(
        id=dataset_name,
        name=dataset_name,
        attributes=attributes,
        columns=columns,
        time_attribute=attribute_id(dataset_name, time_entry.attribute_name),
    )


def _merge_maps(dataset_name: str, merges: list) -> dict:
    maps: dict = {}
    for rule in merges:
        if rule.dataset != dataset_name:
            continue
        mapping = maps.setdefault(rule.attribute, {})
        for constituent in rule.constituent_levels:
            mapping[constituent] = rule.merged_level_name
    return maps


def _normalize_column(raw_cells: list, kind: str, separator: str, merge_map: dict) -> list:
    if kind in ("categorical", "ordered"):
        cells = [normalize_level(raw) for raw in raw_cells]
        if merge_map:
            cells = [merge_map.get(cell, cell) for cell in cells]
        return cells
    if kind == "list":
        cells = [normalize_list(raw, separator) for raw in raw_cells]
        if merge_map:
            cells = [_merge_elements(cell, merge_map) if cell else cell for cell in cells]
        return cells
    if kind == "quantitative":
        return [normalize_number(raw) for raw in raw_cells]
    if kind == "datetime":
        return [normalize_timestamp(raw) for raw in raw_cells]
    return [raw if raw.strip() else None for raw in raw_cells]  # freeform


def _merge_elements(cell: tuple, merge_map: dict) -> tuple:
    merged: list = []
    for element in cell:
        element = merge_map.get(element, element)
        if element not in merged:
            merged.append(element)
    return tuple(merged)


def _observed_levels(cells: list, kind: str) -> list:
    """Distinct observed level names, descending count, alphabetical ties."""
    counts: dict = {}
    if kind == "list":
        for cell in cells:
            if cell is not None:
                for element in cell:
                    counts[element] = counts.get(element, 0) + 1
    else:
        for cell in cells:
            if cell is not None:
                counts[cell] = counts.get(cell, 0) + 1
    return sorted(counts, key=lambda level: (-counts[level], level))
