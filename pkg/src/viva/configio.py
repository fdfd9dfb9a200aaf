"""Configuration store: specified files plus logged interaction records.

Specified sections are human-edited, line-oriented text with full-line `#`
comments (see docs/config-formats.md for the exact grammar):

    schema.cfg      Encounters.Gender = categorical
                    Encounters.AvgCallSeconds = quantitative units=seconds
                    Encounters.Symptoms = list sep=|
                    Encounters.CallStart = datetime time
    merges.cfg      Encounters.Gender: F,Female -> Female
    concerns.cfg    Patient Satisfaction: Survey.Overall, Survey.WouldRecommend
    colors.cfg      Encounters.MDD.HLBCYellow = #E8C547
    orderings.cfg   Survey.Overall: 1, 2, 3, 4, 5

Logged sections (ops.log, concerns.log) hold one JSON record per line and
are append-only; the single permitted rewrite is operation deletion, done
atomically via write-temp-then-rename. Malformed lines anywhere yield a
LineDiagnostic and are skipped, never fatal: config must stay editable on
the fly without taking the tool down.

Config files carry metadata only. Level names may appear in rules and
logged params; row data never does.
"""

from __future__ import annotations

import hashlib
import json
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

from .concerns import ConcernEdit, edit_from_record, edit_to_record
from .core import KINDS, AttributeDef
from .engine import Operation, op_from_record, op_to_record
from .errors import IoError

SPECIFIED_FILES = ("schema.cfg", "merges.cfg", "concerns.cfg", "colors.cfg", "orderings.cfg")
OPS_LOG = "ops.log"
CONCERNS_LOG = "concerns.log"


@dataclass
class LineDiagnostic:
    file: str
    line_no: int
    message: str


@dataclass
class SchemaEntry:
    dataset_name: str
    attribute_name: str
    kind: str
    units: str | None = None
    list_separator: str | None = None
    time_designation: bool = False


@dataclass
class SchemaConfig:
    entries: list = field(default_factory=list)

    def for_dataset(self, dataset_name: str) -> list:
        return [e for e in self.entries if e.dataset_name == dataset_name]

    def time_entry(self, dataset_name: str):
        for entry in self.for_dataset(dataset_name):
            if entry.time_designation:
                return entry
        return None


@dataclass
class MergeRule:
    dataset: str
    attribute: str
    merged_level_name: str
    constituent_levels: list


@dataclass
class ConcernSpec:
    name: str
    attributes: list  # "Dataset.Attribute" references


@dataclass
class ColorRule:
    dataset: str
    attribute: str
    level: str
    color: str


@dataclass
class OrderingRule:
    dataset: str
    attribute: str
    levels: list


@dataclass
class ConfigStore:
    config_dir: Path
    schema: SchemaConfig = field(default_factory=SchemaConfig)
    merges: list = field(default_factory=list)
    concerns_spec: list = field(default_factory=list)
    colors: list = field(default_factory=list)
    orderings: list = field(default_factory=list)
    logged_ops: list = field(default_factory=list)
    logged_concern_edits: list = field(default_factory=list)

    def color_for(self, attribute_id: str, level: str) -> str | None:
        for rule in self.colors:
            if f"{rule.dataset}.{rule.attribute}" == attribute_id and rule.level == level:
                return rule.color
        return None

    def ordering_for(self, attribute_id: str):
        for rule in self.orderings:
            if f"{rule.dataset}.{rule.attribute}" == attribute_id:
                return rule
        return None

    def merges_for(self, dataset_name: str) -> list:
        return [m for m in self.merges if m.dataset == dataset_name]

    def next_seq(self) -> int:
        last = 0
        if self.logged_ops:
            last = max(last, self.logged_ops[-1].seq)
        if self.logged_concern_edits:
            last = max(last, self.logged_concern_edits[-1].seq)
        return last + 1


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _config_lines(path: Path):
    """Yield (line_no, stripped_line) for content lines; comments and blanks skipped."""
    text = path.read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield line_no, line


def _split_ref(ref: str, parts: int):
    """Split 'Dataset.Attribute[.Level]' into exactly `parts` dot-separated pieces."""
    pieces = ref.split(".", parts - 1)
    if len(pieces) != parts or not all(p.strip() for p in pieces):
        return None
    return [p.strip() for p in pieces]


def parse_schema_line(line: str) -> SchemaEntry | None:
    if "=" not in line:
        return None
    ref, _, spec = line.partition("=")
    parts = _split_ref(ref.strip(), 2)
    if parts is None:
        return None
    tokens = spec.split()
    # "percent" is accepted as a source kind and ingested as quantitative.
    if not tokens or (tokens[0] not in KINDS and tokens[0] != "percent"):
        return None
    entry = SchemaEntry(dataset_name=parts[0], attribute_name=parts[1], kind=tokens[0])
    if entry.kind == "percent":
        entry.kind = "quantitative"
        entry.units = "percent"
    for token in tokens[1:]:
        if token == "time":
            entry.time_designation = True
        elif token.startswith("units="):
            entry.units = token[len("units=") :]
        elif token.startswith("sep="):
            entry.list_separator = token[len("sep=") :]
        else:
            return None
    if entry.kind == "quantitative" and not entry.units:
        return None
    return entry


def parse_merge_line(line: str) -> MergeRule | None:
    if ":" not in line or "->" not in line:
        return None
    ref, _, rest = line.partition(":")
    parts = _split_ref(ref.strip(), 2)
    if parts is None:
        return None
    constituents_text, _, merged = rest.partition("->")
    constituents = [c.strip() for c in constituents_text.split(",") if c.strip()]
    merged = merged.strip()
    if len(constituents) < 2 or not merged:
        return None
    return MergeRule(parts[0], parts[1], merged, constituents)


def parse_concern_line(line: str) -> ConcernSpec | None:
    if ":" not in line:
        return None
    name, _, rest = line.partition(":")
    name = name.strip()
    refs = [r.strip() for r in rest.split(",") if r.strip()]
    if not name or not refs or any(_split_ref(r, 2) is None for r in refs):
        return None
    return ConcernSpec(name, refs)


_HEX_COLOR = re.compile(r"^#[0-9A-Fa-f]{6}$")


def parse_color_line(line: str) -> ColorRule | None:
    if "=" not in line:
        return None
    ref, _, color = line.partition("=")
    color = color.strip()
    parts = _split_ref(ref.strip(), 3)
    if parts is None or not _HEX_COLOR.match(color):
        return None
    return ColorRule(parts[0], parts[1], parts[2], color.upper())


def parse_ordering_line(line: str) -> OrderingRule | None:
    if ":" not in line:
        return None
    ref, _, rest = line.partition(":")
    parts = _split_ref(ref.strip(), 2)
    levels = [l.strip() for l in rest.split(",") if l.strip()]
    if parts is None or not levels or len(set(levels)) != len(levels):
        return None
    return OrderingRule(parts[0], parts[1], levels)


def _parse_specified(path: Path, parser, sink: list, diagnostics: list) -> None:
    if not path.exists():
        return
    for line_no, line in _config_lines(path):
        parsed = parser(line)
        if parsed is None:
            diagnostics.append(LineDiagnostic(path.name, line_no, f"unparseable line: {line!r}"))
        else:
            sink.append(parsed)


def _parse_logged(path: Path, from_record, sink: list, diagnostics: list) -> None:
    if not path.exists():
        return
    for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            sink.append(from_record(json.loads(line)))
        except (ValueError, KeyError, TypeError) as exc:
            diagnostics.append(LineDiagnostic(path.name, line_no, f"bad record: {exc}"))


def load_config(config_dir: str | Path) -> tuple:
    """Load every config section from the directory; absent files are empty
    sections. Returns (store, diagnostics); never raises on content."""
    config_dir = Path(config_dir)
    store = ConfigStore(config_dir=config_dir)
    diagnostics: list = []

    schema_entries: list = []
    _parse_specified(config_dir / "schema.cfg", parse_schema_line, schema_entries, diagnostics)
    seen = set()
    for entry in schema_entries:
        key = (entry.dataset_name, entry.attribute_name)
        if key in seen:
            diagnostics.append(
                LineDiagnostic("schema.cfg", 0, f"duplicate entry for {key[0]}.{key[1]}")
            )
            continue
        seen.add(key)
        if entry.time_designation and store.schema.time_entry(entry.dataset_name):
            diagnostics.append(
                LineDiagnostic("schema.cfg", 0, f"second time designation in {entry.dataset_name}")
            )
            entry.time_designation = False
        store.schema.entries.append(entry)

    _parse_specified(config_dir / "merges.cfg", parse_merge_line, store.merges, diagnostics)
    _parse_specified(config_dir / "concerns.cfg", parse_concern_line, store.concerns_spec, diagnostics)
    _parse_specified(config_dir / "colors.cfg", parse_color_line, store.colors, diagnostics)
    _parse_specified(config_dir / "orderings.cfg", parse_ordering_line, store.orderings, diagnostics)
    _parse_logged(config_dir / OPS_LOG, op_from_record, store.logged_ops, diagnostics)
    _parse_logged(config_dir / CONCERNS_LOG, edit_from_record, store.logged_concern_edits, diagnostics)
    return store, diagnostics


# ---------------------------------------------------------------------------
# serialization (canonical form; parse -> serialize -> parse round-trips)
# ---------------------------------------------------------------------------


def serialize_schema(schema: SchemaConfig) -> str:
    lines = []
    for e in schema.entries:
        spec = e.kind
        if e.units:
            spec += f" units={e.units}"
        if e.list_separator:
            spec += f" sep={e.list_separator}"
        if e.time_designation:
            spec += " time"
        lines.append(f"{e.dataset_name}.{e.attribute_name} = {spec}")
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_merges(merges: list) -> str:
    lines = [
        f"{m.dataset}.{m.attribute}: {','.join(m.constituent_levels)} -> {m.merged_level_name}"
        for m in merges
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_concerns(specs: list) -> str:
    lines = [f"{s.name}: {', '.join(s.attributes)}" for s in specs]
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_colors(colors: list) -> str:
    lines = [f"{c.dataset}.{c.attribute}.{c.level} = {c.color}" for c in colors]
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_orderings(orderings: list) -> str:
    lines = [f"{o.dataset}.{o.attribute}: {', '.join(o.levels)}" for o in orderings]
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# logged sections
# ---------------------------------------------------------------------------


def _record_line(record: dict) -> str:
    return json.dumps(record, sort_keys=True, ensure_ascii=False, separators=(",", ":")) + "\n"


def append_logged(store: ConfigStore, record: Operation | ConcernEdit) -> None:
    """Append one validated record to its log file, durably, then extend the
    in-memory section. An IoError here means the triggering action must be
    rolled back by the caller."""
    if isinstance(record, Operation):
        path = store.config_dir / OPS_LOG
        line = _record_line(op_to_record(record))
    else:
        path = store.config_dir / CONCERNS_LOG
        line = _record_line(edit_to_record(record))
    try:
        store.config_dir.mkdir(parents=True, exist_ok=True)
        with open(path, "a", encoding="utf-8") as handle:
            handle.write(line)
            handle.flush()
            os.fsync(handle.fileno())
    except OSError as exc:
        raise IoError(f"could not append to {path.name}: {exc}") from exc
    if isinstance(record, Operation):
        store.logged_ops.append(record)
    else:
        store.logged_concern_edits.append(record)


def rewrite_ops_log(store: ConfigStore, ops: list) -> None:
    """Replace ops.log with the filtered log (operation deletion). This is the
    only non-append write; done atomically via temp file + rename."""
    path = store.config_dir / OPS_LOG
    tmp = path.with_suffix(".log.tmp")
    try:
        store.config_dir.mkdir(parents=True, exist_ok=True)
        with open(tmp, "w", encoding="utf-8") as handle:
            for op in ops:
                handle.write(_record_line(op_to_record(op)))
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp, path)
    except OSError as exc:
        raise IoError(f"could not rewrite {path.name}: {exc}") from exc
    store.logged_ops = list(ops)


# ---------------------------------------------------------------------------
# color resolution
# ---------------------------------------------------------------------------

CANONICAL_COLORS = {
    "red": "#D62728",
    "yellow": "#E8C547",
    "green": "#2CA02C",
    "orange": "#FF7F0E",
    "blue": "#1F77B4",
    "purple": "#9467BD",
    "grey": "#7F7F7F",
    "gray": "#7F7F7F",
    "black": "#000000",
}

#: Fallback categorical palette; a level hashes to a stable slot.
PALETTE = (
    "#4E79A7",
    "#F28E2B",
    "#59A14F",
    "#E15759",
    "#B07AA1",
    "#76B7B2",
    "#FF9DA7",
    "#9C755F",
    "#EDC948",
    "#BAB0AC",
    "#86BCB6",
    "#D37295",
)

_NAME_TOKENS = re.compile(r"[A-Z]+(?=[A-Z][a-z])|[A-Z][a-z]+|[A-Z]+|[a-z]+|\d+")


def _color_word(level: str) -> str | None:
    for token in _NAME_TOKENS.findall(level):
        hex_color = CANONICAL_COLORS.get(token.lower())
        if hex_color:
            return hex_color
    return None


def resolve_color(store: ConfigStore, dataset_id: str, attribute_id: str, level: str) -> str:
    """Pick the level's color: explicit rule, else a color word embedded in
    the level name (avoids label/color mismatches), else a stable palette
    slot hashed from (attribute, level)."""
    explicit = store.color_for(attribute_id, level)
    if explicit:
        return explicit
    worded = _color_word(level)
    if worded:
        return worded
    digest = hashlib.sha1(f"{attribute_id}|{level}".encode("utf-8")).hexdigest()
    return PALETTE[int(digest, 16) % len(PALETTE)]


# ---------------------------------------------------------------------------
# level ordering
# ---------------------------------------------------------------------------

_DIGITS = re.compile(r"(\d+)")


def natural_key(text: str):
    """Sort key treating digit runs numerically, so '2' sorts before '10'."""
    return tuple(
        (0, int(part)) if part.isdigit() else (1, part)
        for part in _DIGITS.split(text)
        if part != ""
    )


def resolve_level_order(store: ConfigStore, attribute: AttributeDef) -> list:
    """Display order for an attribute's levels.

    An ordering rule wins (levels it omits keep their stored relative order
    afterward); ordered attributes sort numerically-aware by name; everything
    else keeps the stored list, which is built descending-count with
    alphabetical ties at creation time.
    """
    levels = list(attribute.levels or [])
    rule = store.ordering_for(attribute.id)
    if rule is not None:
        ruled = [l for l in rule.levels if l in levels]
        rest = [l for l in levels if l not in set(ruled)]
        return ruled + rest
    if attribute.kind == "ordered":
        return sorted(levels, key=natural_key)
    return levels
