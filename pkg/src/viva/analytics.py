"""Chart-data computation for the four action modes.

Every function is a pure read over a snapshot (derived datasets plus the
config store for colors and level ordering) and an inclusive date range.
Counting rules shared by all modes: a row participates only if its
timestamp is present and inside the range; missing cells never count; list
cells count each element once per row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, timedelta

from .configio import ConfigStore, resolve_color, resolve_level_order
from .core import AttributeDef, Dataset, TimeRange
from .errors import (
    CrossDataset,
    InvalidCombination,
    NotChartable,
    UnknownAttribute,
    UnknownDataset,
    WrongArity,
    WrongKind,
)

GRANULARITIES = ("day", "week", "month")
VALUE_MODES = ("absolute", "percentage")


@dataclass(frozen=True)
class Snapshot:
    """Immutable view the analytics functions read from."""

    datasets: dict
    store: ConfigStore

    def dataset(self, dataset_id: str) -> Dataset:
        try:
            return self.datasets[dataset_id]
        except KeyError:
            raise UnknownDataset(f"no dataset {dataset_id!r}")

    def attribute(self, dataset_id: str, attribute_id: str) -> AttributeDef:
        ds = self.dataset(dataset_id)
        if not ds.has_attribute(attribute_id):
            raise UnknownAttribute(f"no attribute {attribute_id!r} in dataset {dataset_id!r}")
        return ds.attribute(attribute_id)


@dataclass
class RollupResult:
    attribute_id: str
    levels: list  # of {level, count, color}
    total: int

    def to_doc(self) -> dict:
        return {"attribute_id": self.attribute_id, "levels": self.levels, "total": self.total}


@dataclass
class HistogramResult:
    attribute_id: str
    bins: list  # of {lo, hi, count}

    def to_doc(self) -> dict:
        return {"attribute_id": self.attribute_id, "bins": self.bins}


@dataclass
class PartitionResult:
    attribute_id: str
    granularity: str
    value_mode: str
    accumulate: bool
    series: list  # of {level, points: [{bucket_start, value, band_min, band_max}]}

    def to_doc(self) -> dict:
        return {
            "attribute_id": self.attribute_id,
            "granularity": self.granularity,
            "value_mode": self.value_mode,
            "accumulate": self.accumulate,
            "series": [
                {
                    "level": series["level"],
                    "points": [
                        {
                            "bucket_start": point["bucket_start"].isoformat(),
                            "value": point["value"],
                            "band_min": point["band_min"],
                            "band_max": point["band_max"],
                        }
                        for point in series["points"]
                    ],
                }
                for series in self.series
            ],
        }


@dataclass
class CrossTabResult:
    bar_attribute_id: str
    segment_attribute_id: str
    bars: list  # of {bar_level, total, segments: [{segment_level, count, percent}]}

    def to_doc(self) -> dict:
        return {
            "bar_attribute_id": self.bar_attribute_id,
            "segment_attribute_id": self.segment_attribute_id,
            "bars": self.bars,
        }


@dataclass
class SankeyResult:
    stages: list  # attribute ids in selection order
    nodes: list  # per stage: [{level, total}]
    links: list  # of {from_stage, from_level, to_level, weight}

    def to_doc(self) -> dict:
        return {"stages": self.stages, "nodes": self.nodes, "links": self.links}


def _require_leveled(attr: AttributeDef, allow_list: bool) -> None:
    if not attr.chartable:
        raise NotChartable(f"attribute {attr.id!r} is not chartable")
    allowed = ("categorical", "ordered", "list") if allow_list else ("categorical", "ordered")
    if attr.kind not in allowed:
        raise WrongKind(f"attribute {attr.id!r} has kind {attr.kind}, expected one of {allowed}")


def _level_counts(ds: Dataset, attr: AttributeDef, range: TimeRange) -> dict:
    counts: dict = {}
    start, end = range.start, range.end
    column = ds.columns[attr.id]
    if attr.kind == "list":
        for cell, day in zip(column, ds.row_dates()):
            if cell is not None and day is not None and start <= day <= end:
                for element in cell:
                    counts[element] = counts.get(element, 0) + 1
    else:
        for cell, day in zip(column, ds.row_dates()):
            if cell is not None and day is not None and start <= day <= end:
                counts[cell] = counts.get(cell, 0) + 1
    return counts


def rollup(state: Snapshot, dataset_id: str, attribute_id: str, range: TimeRange) -> RollupResult:
    """Level counts across the active range, in display order, with colors."""
    ds = state.dataset(dataset_id)
    attr = state.attribute(dataset_id, attribute_id)
    _require_leveled(attr, allow_list=True)
    counts = _level_counts(ds, attr, range)
    levels = [
        {
            "level": level,
            "count": counts.get(level, 0),
            "color": resolve_color(state.store, dataset_id, attribute_id, level),
        }
        for level in resolve_level_order(state.store, attr)
    ]
    return RollupResult(attribute_id=attribute_id, levels=levels, total=sum(l["count"] for l in levels))


def _nice_width(raw: float) -> float:
    """Smallest 1/2/5 x 10^k step that is at least ``raw``."""
    if raw <= 0:
        return 1.0
    exponent = math.floor(math.log10(raw))
    for mantissa in (1.0, 2.0, 5.0, 10.0):
        width = mantissa * (10.0 ** exponent)
        if width >= raw or math.isclose(width, raw):
            return width
    return 10.0 ** (exponent + 1)


def histogram(
    state: Snapshot, dataset_id: str, attribute_id: str, range: TimeRange, bin_count: int = 20
) -> HistogramResult:
    """Equal-width bins with nice boundaries; the maximum lands in the last
    bin (closed upper bound). No data in range yields an empty bins list."""
    ds = state.dataset(dataset_id)
    attr = state.attribute(dataset_id, attribute_id)
    if not attr.chartable:
        raise NotChartable(f"attribute {attr.id!r} is not chartable")
    if attr.kind != "quantitative":
        raise WrongKind(f"attribute {attr.id!r} has kind {attr.kind}, expected quantitative")
    start, end = range.start, range.end
    values = [
        cell
        for cell, day in zip(ds.columns[attr.id], ds.row_dates())
        if cell is not None and day is not None and start <= day <= end
    ]
    if not values:
        return HistogramResult(attribute_id=attribute_id, bins=[])
    lo_value, hi_value = min(values), max(values)
    width = _nice_width((hi_value - lo_value) / max(bin_count, 1))
    lo = math.floor(lo_value / width) * width
    n_bins = max(1, math.ceil((hi_value - lo) / width - 1e-9))
    counts = [0] * n_bins
    for value in values:
        index = int((value - lo) / width)
        if index >= n_bins:
            index = n_bins - 1
        counts[index] += 1
    bins = [
        {"lo": lo + i * width, "hi": lo + (i + 1) * width, "count": count}
        for i, count in enumerate(counts)
    ]
    return HistogramResult(attribute_id=attribute_id, bins=bins)


def _days_between(start: date, end: date) -> list:
    days = []
    day = start
    one = timedelta(days=1)
    while day <= end:
        days.append(day)
        day += one
    return days


def _daily_counts(ds: Dataset, attr: AttributeDef, range: TimeRange) -> dict:
    """{level: {day: count}} over days inside the range."""
    per_level: dict = {}
    start, end = range.start, range.end
    column = ds.columns[attr.id]
    if attr.kind == "list":
        for cell, day in zip(column, ds.row_dates()):
            if cell is not None and day is not None and start <= day <= end:
                for element in cell:
                    bucket = per_level.setdefault(element, {})
                    bucket[day] = bucket.get(day, 0) + 1
    else:
        for cell, day in zip(column, ds.row_dates()):
            if cell is not None and day is not None and start <= day <= end:
                bucket = per_level.setdefault(cell, {})
                bucket[day] = bucket.get(day, 0) + 1
    return per_level


def _bucket_start(day: date, granularity: str) -> date:
    if granularity == "day":
        return day
    if granularity == "week":
        return day - timedelta(days=day.weekday())  # ISO week: Monday start
    return day.replace(day=1)


def partition(
    state: Snapshot,
    dataset_id: str,
    attribute_id: str,
    range: TimeRange,
    granularity: str = "day",
    value_mode: str = "absolute",
    accumulate: bool = False,
) -> PartitionResult:
    """Per-level time series. Daily counts are computed first; week and month
    buckets carry the mean of their daily values with a min/max band. The
    percentage transform applies per day before aggregation; accumulation
    applies to daily absolute counts and collapses the band onto the line."""
    if granularity not in GRANULARITIES:
        raise InvalidCombination(f"unknown granularity {granularity!r}")
    if value_mode not in VALUE_MODES:
        raise InvalidCombination(f"unknown value mode {value_mode!r}")
    if accumulate and value_mode == "percentage":
        raise InvalidCombination("cumulative percentages are not supported")
    ds = state.dataset(dataset_id)
    attr = state.attribute(dataset_id, attribute_id)
    _require_leveled(attr, allow_list=True)

    per_level = _daily_counts(ds, attr, range)
    days = _days_between(range.start, range.end)
    levels = resolve_level_order(state.store, attr)

    day_totals = {day: 0 for day in days}
    if value_mode == "percentage":
        for counts in per_level.values():
            for day, count in counts.items():
                day_totals[day] += count

    series = []
    for level in levels:
        counts = per_level.get(level, {})
        if accumulate:
            daily = []
            running = 0
            for day in days:
                running += counts.get(day, 0)
                daily.append(float(running))
        elif value_mode == "percentage":
            daily = [
                100.0 * counts.get(day, 0) / day_totals[day] if day_totals[day] else 0.0
                for day in days
            ]
        else:
            daily = [float(counts.get(day, 0)) for day in days]

        points = []
        if granularity == "day":
            for day, value in zip(days, daily):
                points.append(
                    {"bucket_start": day, "value": value, "band_min": value, "band_max": value}
                )
        else:
            buckets: dict = {}
            for day, value in zip(days, daily):
                buckets.setdefault(_bucket_start(day, granularity), []).append(value)
            for bucket_start in sorted(buckets):
                values = buckets[bucket_start]
                value = sum(values) / len(values)
                if accumulate:
                    band_lo = band_hi = value
                else:
                    band_lo, band_hi = min(values), max(values)
                points.append(
                    {
                        "bucket_start": bucket_start,
                        "value": value,
                        "band_min": band_lo,
                        "band_max": band_hi,
                    }
                )
        series.append({"level": level, "points": points})

    return PartitionResult(
        attribute_id=attribute_id,
        granularity=granularity,
        value_mode=value_mode,
        accumulate=accumulate,
        series=series,
    )


def item_counts(
    state: Snapshot,
    dataset_id: str,
    range: TimeRange,
    granularity: str = "day",
) -> PartitionResult:
    """Row counts over time as a single-series partition (the dataset-header
    thumbnail in the multiples grid). Rows without a timestamp are excluded."""
    if granularity not in GRANULARITIES:
        raise InvalidCombination(f"unknown granularity {granularity!r}")
    ds = state.dataset(dataset_id)
    start, end = range.start, range.end
    counts: dict = {}
    for day in ds.row_dates():
        if day is not None and start <= day <= end:
            counts[day] = counts.get(day, 0) + 1
    days = _days_between(range.start, range.end)
    daily = [float(counts.get(day, 0)) for day in days]
    points = []
    if granularity == "day":
        for day, value in zip(days, daily):
            points.append({"bucket_start": day, "value": value, "band_min": value, "band_max": value})
    else:
        buckets: dict = {}
        for day, value in zip(days, daily):
            buckets.setdefault(_bucket_start(day, granularity), []).append(value)
        for bucket_start in sorted(buckets):
            values = buckets[bucket_start]
            points.append(
                {
                    "bucket_start": bucket_start,
                    "value": sum(values) / len(values),
                    "band_min": min(values),
                    "band_max": max(values),
                }
            )
    return PartitionResult(
        attribute_id=ds.time_attribute,
        granularity=granularity,
        value_mode="absolute",
        accumulate=False,
        series=[{"level": "items", "points": points}],
    )


def _pair_counts(ds: Dataset, attr_a: AttributeDef, attr_b: AttributeDef, range: TimeRange) -> dict:
    """{(a_level, b_level): count} over rows non-missing in both attributes."""
    counts: dict = {}
    start, end = range.start, range.end
    col_a = ds.columns[attr_a.id]
    col_b = ds.columns[attr_b.id]
    for a, b, day in zip(col_a, col_b, ds.row_dates()):
        if a is not None and b is not None and day is not None and start <= day <= end:
            key = (a, b)
            counts[key] = counts.get(key, 0) + 1
    return counts


def cross_tab(
    state: Snapshot, dataset_id: str, attr_bar: str, attr_seg: str, range: TimeRange
) -> CrossTabResult:
    """Two-attribute cross-tabulation over rows non-missing in both; the
    first attribute makes the bars, the second the segments within them."""
    ds = state.dataset(dataset_id)
    bar_attr = state.attribute(dataset_id, attr_bar)
    seg_attr = state.attribute(dataset_id, attr_seg)
    for attr in (bar_attr, seg_attr):
        _require_leveled(attr, allow_list=False)
        if attr.dataset_id != dataset_id:
            raise CrossDataset(f"attribute {attr.id!r} belongs to {attr.dataset_id!r}")
    counts = _pair_counts(ds, bar_attr, seg_attr, range)
    seg_levels = resolve_level_order(state.store, seg_attr)
    bars = []
    for bar_level in resolve_level_order(state.store, bar_attr):
        total = sum(counts.get((bar_level, seg), 0) for seg in seg_levels)
        segments = [
            {
                "segment_level": seg,
                "count": counts.get((bar_level, seg), 0),
                "percent": 100.0 * counts.get((bar_level, seg), 0) / total if total else 0.0,
            }
            for seg in seg_levels
        ]
        bars.append({"bar_level": bar_level, "total": total, "segments": segments})
    return CrossTabResult(bar_attribute_id=attr_bar, segment_attribute_id=attr_seg, bars=bars)


def sankey(state: Snapshot, dataset_id: str, attrs: list, range: TimeRange) -> SankeyResult:
    """Flow between 2 or 3 attributes in selection order: link weights are
    the pairwise cross-tab counts of each adjacent stage pair."""
    if len(attrs) not in (2, 3):
        raise WrongArity(f"flow takes 2 or 3 attributes, got {len(attrs)}")
    if len(set(attrs)) != len(attrs):
        raise WrongArity("flow attributes must be distinct")
    ds = state.dataset(dataset_id)
    defs = []
    for attribute_id in attrs:
        attr = state.attribute(dataset_id, attribute_id)
        _require_leveled(attr, allow_list=False)
        if attr.dataset_id != dataset_id:
            raise CrossDataset(f"attribute {attr.id!r} belongs to {attr.dataset_id!r}")
        defs.append(attr)

    nodes = []
    for attr in defs:
        level_counts = _level_counts(ds, attr, range)
        order = resolve_level_order(state.store, attr)
        nodes.append([{"level": level, "total": level_counts.get(level, 0)} for level in order])

    links = []
    for stage, (attr_a, attr_b) in enumerate(zip(defs, defs[1:])):
        counts = _pair_counts(ds, attr_a, attr_b, range)
        order_a = resolve_level_order(state.store, attr_a)
        order_b = resolve_level_order(state.store, attr_b)
        for a in order_a:
            for b in order_b:
                weight = counts.get((a, b), 0)
                if weight:
                    links.append(
                        {"from_stage": stage, "from_level": a, "to_level": b, "weight": weight}
                    )
    return SankeyResult(stages=list(attrs), nodes=nodes, links=links)
