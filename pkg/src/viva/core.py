"""In-memory tabular data model: typed attributes, datasets, and time ranges.

Cells are plain Python values interpreted through their attribute's kind:

    categorical / ordered  -> str          (level name)
    quantitative           -> float        (always finite)
    datetime               -> datetime     (naive UTC, second precision)
    list                   -> tuple[str]   (no empty strings, no duplicates)
    freeform               -> str
    missing                -> None         (any kind)

Datasets are immutable by convention after construction: the ops engine
produces new datasets instead of mutating, so values can be shared freely.
Nothing in this module touches disk.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timezone

from .errors import InvalidRange, UnknownAttribute

Cell = None | str | float | datetime | tuple

KINDS = ("categorical", "ordered", "quantitative", "datetime", "list", "freeform")
LEVELED_KINDS = ("categorical", "ordered", "list")

#: Reified missing-category sentinel. Missing categorical values become a
#: visible level so analysts can filter it out explicitly instead of it
#: silently vanishing from charts.
NULL_LEVEL = "NULL"

_NULL_TOKENS = {"", "NULL", "null", "N/A"}


def normalize_level(raw: str) -> str:
    """Map raw categorical text to a level name.

    Empty, whitespace-only, "NULL", "null", and "N/A" all collapse to the
    NULL sentinel level; anything else is returned trimmed.
    """
    text = raw.strip()
    if text in _NULL_TOKENS:
        return NULL_LEVEL
    return text


def normalize_number(raw: str) -> float | None:
    """Parse a quantitative cell; unparseable or non-finite input is missing."""
    try:
        value = float(raw.strip())
    except (ValueError, AttributeError):
        return None
    if not math.isfinite(value):
        return None
    return value


_TIMESTAMP_FORMATS = (
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%d %H:%M",
    "%Y-%m-%d",
    "%Y/%m/%d %H:%M:%S",
    "%Y/%m/%d",
)


def normalize_timestamp(raw: str) -> datetime | None:
    """Parse a datetime cell to naive UTC at second precision; None if unparseable."""
    text = raw.strip()
    if not text:
        return None
    if text.endswith("Z"):
        text = text[:-1] + "+00:00"
    parsed = None
    try:
        parsed = datetime.fromisoformat(text)
    except ValueError:
        for fmt in _TIMESTAMP_FORMATS:
            try:
                parsed = datetime.strptime(text, fmt)
                break
            except ValueError:
                continue
    if parsed is None:
        return None
    if parsed.tzinfo is not None:
        parsed = parsed.astimezone(timezone.utc).replace(tzinfo=None)
    return parsed.replace(microsecond=0)


def normalize_list(raw: str, separator: str = "|") -> tuple | None:
    """Split a list cell on its separator; drop empties and within-cell duplicates."""
    elements = []
    for part in raw.split(separator):
        text = part.strip()
        if text and text not in elements:
            elements.append(text)
    if not elements:
        return None
    return tuple(elements)


@dataclass
class AttributeDef:
    """Typed column descriptor.

    ``id`` is the stable identity used by operations and the API; ``name``
    is display text and may be renamed. ``levels`` is present only for
    leveled kinds and is kept in display order (descending count at
    creation, positions maintained by subsequent operations).
    """

    id: str
    name: str
    kind: str
    dataset_id: str
    units: str | None = None
    levels: list[str] | None = None
    origin: str = "original"
    chartable: bool = True

    def __post_init__(self):
        if self.kind == "freeform":
            self.chartable = False
        if self.kind in LEVELED_KINDS and self.levels is None:
            self.levels = []

    @property
    def leveled(self) -> bool:
        return self.kind in LEVELED_KINDS

    def copy(self) -> "AttributeDef":
        return replace(self, levels=list(self.levels) if self.levels is not None else None)


@dataclass(frozen=True)
class TimeRange:
    """Inclusive date range used by every temporal query."""

    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise InvalidRange(f"range start {self.start} after end {self.end}")

    def contains(self, day: date) -> bool:
        return self.start <= day <= self.end


@dataclass
class Dataset:
    """A table: ordered attributes plus one column of cells per attribute.

    Stored column-wise; all columns have equal length. ``time_attribute``
    names the datetime attribute used as this dataset's timeline.
    """

    id: str
    name: str
    attributes: list[AttributeDef]
    columns: dict[str, list]
    time_attribute: str
    _row_dates: list | None = field(default=None, repr=False, compare=False)

    @property
    def num_rows(self) -> int:
        if not self.attributes:
            return 0
        return len(self.columns[self.attributes[0].id])

    def attribute(self, attribute_id: str) -> AttributeDef:
        for attr in self.attributes:
            if attr.id == attribute_id:
                return attr
        raise UnknownAttribute(f"no attribute {attribute_id!r} in dataset {self.id!r}")

    def has_attribute(self, attribute_id: str) -> bool:
        return any(a.id == attribute_id for a in self.attributes)

    def attribute_order(self) -> list[str]:
        return [a.id for a in self.attributes]

    def row_dates(self) -> list:
        """Per-row date of the time attribute (None where the timestamp is missing)."""
        if self._row_dates is None:
            stamps = self.columns[self.time_attribute]
            self._row_dates = [ts.date() if ts is not None else None for ts in stamps]
        return self._row_dates

    def time_extent(self) -> TimeRange | None:
        """Smallest range covering every non-missing timestamp; None if there are none."""
        dates = [d for d in self.row_dates() if d is not None]
        if not dates:
            return None
        return TimeRange(min(dates), max(dates))

    def shallow_copy(self) -> "Dataset":
        """New dataset sharing all column lists; callers replace columns they edit."""
        return Dataset(
            id=self.id,
            name=self.name,
            attributes=[a.copy() for a in self.attributes],
            columns=dict(self.columns),
            time_attribute=self.time_attribute,
            _row_dates=self._row_dates,
        )


def column_values(dataset: Dataset, attribute_id: str, range: TimeRange) -> list:
    """Cells of the attribute for rows whose timestamp date falls inside the range.

    Row order is preserved; rows with a missing timestamp are excluded.
    """
    if not dataset.has_attribute(attribute_id):
        raise UnknownAttribute(f"no attribute {attribute_id!r} in dataset {dataset.id!r}")
    column = dataset.columns[attribute_id]
    start, end = range.start, range.end
    return [
        cell
        for cell, day in zip(column, dataset.row_dates())
        if day is not None and start <= day <= end
    ]


def _cell_token(cell: Cell) -> object:
    if isinstance(cell, datetime):
        return cell.isoformat()
    if isinstance(cell, tuple):
        return list(cell)
    return cell


def dataset_fingerprint(dataset: Dataset) -> str:
    """Byte-level content digest covering schema, levels, ordering, and every cell."""
    doc = {
        "id": dataset.id,
        "name": dataset.name,
        "time_attribute": dataset.time_attribute,
        "attributes": [
            {
                "id": a.id,
                "name": a.name,
                "kind": a.kind,
                "units": a.units,
                "levels": a.levels,
                "origin": a.origin,
                "chartable": a.chartable,
            }
            for a in dataset.attributes
        ],
        "columns": {
            a.id: [_cell_token(c) for c in dataset.columns[a.id]] for a in dataset.attributes
        },
    }
    payload = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()
