"""Operation algebra over immutable base datasets.

The engine holds two full copies of every dataset: the untouched base and a
derived copy equal to the base with the operation log applied. Operations
never mutate columns in place; they replace whole column lists on a shallow
dataset copy, so base data and older snapshots stay intact and queries can
run against a snapshot while a mutation is in flight.

Undo and deletion are filtered replay: drop operations from the log, rebuild
the derived state from base. Persistence of the log is the config layer's
job; the engine is pure in-memory.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

from .core import Dataset, AttributeDef
from .errors import (
    DependencyViolation,
    EmptyLog,
    EmptyResult,
    InconsistentLog,
    InvalidOperation,
    NameCollision,
    NotChartable,
    TooManyLevels,
    UnknownAttribute,
    UnknownDataset,
    UnknownLevel,
    UnknownSeq,
    VivaError,
)

OP_KINDS = (
    "FilterOut",
    "KeepOnly",
    "MergeLevels",
    "RenameLevel",
    "RenameAttribute",
    "DuplicateAttribute",
    "Explode",
)

#: Level-wise customization kinds; these take a MakeNew/ModifyCurrent mode.
LEVEL_OP_KINDS = ("FilterOut", "KeepOnly", "MergeLevels", "RenameLevel")

MODES = ("MakeNew", "ModifyCurrent")

EXPLODE_MAX_LEVELS = 50


@dataclass
class Operation:
    """One logged customization/derivation action; the unit of replay and undo."""

    seq: int
    kind: str
    dataset_id: str
    target_attribute_id: str
    params: dict
    created_attribute_ids: list = field(default_factory=list)
    timestamp: str = ""
    session_id: str = ""

    def copy(self) -> "Operation":
        return replace(
            self,
            params=dict(self.params),
            created_attribute_ids=list(self.created_attribute_ids),
        )


@dataclass
class ApplyResult:
    created_attribute_ids: list


def op_to_record(op: Operation) -> dict:
    return {
        "seq": op.seq,
        "timestamp": op.timestamp,
        "session_id": op.session_id,
        "kind": op.kind,
        "dataset_id": op.dataset_id,
        "target_attribute_id": op.target_attribute_id,
        "params": op.params,
        "created_attribute_ids": op.created_attribute_ids,
    }


def op_from_record(record: dict) -> Operation:
    return Operation(
        seq=int(record["seq"]),
        kind=str(record["kind"]),
        dataset_id=str(record["dataset_id"]),
        target_attribute_id=str(record["target_attribute_id"]),
        params=dict(record.get("params", {})),
        created_attribute_ids=list(record.get("created_attribute_ids", [])),
        timestamp=str(record.get("timestamp", "")),
        session_id=str(record.get("session_id", "")),
    )


def derived_attribute_id(seq: int, index: int | None = None) -> str:
    """Deterministic id for attributes created by the op with this seq."""
    if index is None:
        return f"d{seq}"
    return f"d{seq}.{index}"


class Engine:
    """Mutable holder of (base, derived, log) for one session.

    ``level_order`` supplies the display order of an attribute's levels,
    used by Explode to enumerate bars; it defaults to the stored level
    list. Inject the config-aware resolver to honor ordering rules.
    """

    def __init__(self, base: dict[str, Dataset], level_order: Callable[[AttributeDef], list] | None = None):
        self.base = base
        self.derived: dict[str, Dataset] = {k: ds.shallow_copy() for k, ds in base.items()}
        self.log: list[Operation] = []
        self.level_order = level_order or (lambda attr: list(attr.levels or []))

    # ---- lookups ----

    def dataset(self, dataset_id: str) -> Dataset:
        try:
            return self.derived[dataset_id]
        except KeyError:
            raise UnknownDataset(f"no dataset {dataset_id!r}")

    def find_attribute(self, attribute_id: str) -> tuple[Dataset, AttributeDef]:
        for ds in self.derived.values():
            if ds.has_attribute(attribute_id):
                return ds, ds.attribute(attribute_id)
        raise UnknownAttribute(f"no attribute {attribute_id!r}")

    def next_seq(self) -> int:
        return (self.log[-1].seq + 1) if self.log else 1

    # ---- application ----

    def apply(self, op: Operation) -> ApplyResult:
        """Validate, execute, and log one operation (interactive path)."""
        op = self._normalize(op, strict=True)
        result = self._execute(op)
        self.log.append(op)
        return result

    def _apply_replayed(self, op: Operation) -> ApplyResult:
        op = self._normalize(op, strict=False)
        result = self._execute(op)
        self.log.append(op)
        return result

    def _normalize(self, op: Operation, strict: bool) -> Operation:
        """Validate an operation against current derived state.

        ``strict`` adds the interactive-quality checks (empty results, name
        collisions, the explode level guard). Replay keeps only structural
        checks so that filtered logs stay appliable: display-name collisions
        and emptied attributes are odd but harmless, and refusing them would
        make dependency-closed deletions fail.

        Returns the operation to log; a RenameLevel onto an existing level
        is rewritten into the equivalent MergeLevels here.
        """
        if op.kind not in OP_KINDS:
            raise InvalidOperation(f"unknown operation kind {op.kind!r}")
        if self.log and op.seq <= self.log[-1].seq:
            raise InvalidOperation(f"seq {op.seq} not greater than last logged {self.log[-1].seq}")
        ds = self.dataset(op.dataset_id)
        if not ds.has_attribute(op.target_attribute_id):
            raise UnknownAttribute(
                f"no attribute {op.target_attribute_id!r} in dataset {op.dataset_id!r}"
            )
        attr = ds.attribute(op.target_attribute_id)
        if not attr.chartable:
            raise NotChartable(f"attribute {attr.id!r} is not chartable")
        params = op.params

        if op.kind in LEVEL_OP_KINDS:
            mode = params.get("mode")
            if mode not in MODES:
                raise InvalidOperation(f"{op.kind} requires mode MakeNew or ModifyCurrent")
            levels = params.get("levels")
            if not isinstance(levels, list) or not levels or not all(isinstance(l, str) for l in levels):
                raise InvalidOperation(f"{op.kind} requires a non-empty list of level names")
            existing = attr.levels or []
            missing = [l for l in levels if l not in existing]
            if missing:
                raise UnknownLevel(f"levels not present on {attr.id!r}: {missing}")

        if op.kind == "FilterOut":
            if strict and set(params["levels"]) >= set(attr.levels or []):
                raise EmptyResult("filtering out every level would empty the attribute")
        elif op.kind == "KeepOnly":
            pass  # non-empty list already enforced
        elif op.kind == "MergeLevels":
            new_name = params.get("new_name")
            if not isinstance(new_name, str) or not new_name:
                raise InvalidOperation("MergeLevels requires a non-empty new_name")
            if len(set(params["levels"])) < 2:
                raise InvalidOperation("MergeLevels requires at least 2 distinct levels")
        elif op.kind == "RenameLevel":
            new_name = params.get("new_name")
            if not isinstance(new_name, str) or not new_name:
                raise InvalidOperation("RenameLevel requires a non-empty new_name")
            if len(params["levels"]) != 1:
                raise InvalidOperation("RenameLevel takes exactly one level")
            old = params["levels"][0]
            if new_name != old and new_name in (attr.levels or []):
                # Renaming onto an existing level is a merge; record it as one
                # so dependency tracking sees a single introduction rule.
                op = op.copy()
                op.kind = "MergeLevels"
                op.params = {"levels": [old, new_name], "new_name": new_name, "mode": params["mode"]}
        elif op.kind == "RenameAttribute":
            new_name = params.get("new_name")
            if not isinstance(new_name, str) or not new_name:
                raise InvalidOperation("RenameAttribute requires a non-empty new_name")
            if strict:
                for other in ds.attributes:
                    if other.id != attr.id and other.name == new_name:
                        raise NameCollision(f"attribute named {new_name!r} already exists")
        elif op.kind == "DuplicateAttribute":
            pass
        elif op.kind == "Explode":
            second_id = params.get("second_attribute_id")
            if not isinstance(second_id, str):
                raise InvalidOperation("Explode requires second_attribute_id")
            if second_id == attr.id:
                raise InvalidOperation("Explode requires two distinct attributes")
            if not ds.has_attribute(second_id):
                raise UnknownAttribute(f"no attribute {second_id!r} in dataset {op.dataset_id!r}")
            second = ds.attribute(second_id)
            for a in (attr, second):
                if a.kind not in ("categorical", "ordered"):
                    raise InvalidOperation(f"Explode requires categorical/ordered attributes, got {a.kind}")
                if not a.chartable:
                    raise NotChartable(f"attribute {a.id!r} is not chartable")
            if strict:
                n_levels = len(attr.levels or [])
                if n_levels == 0:
                    raise EmptyResult("cannot explode an attribute with no levels")
                if n_levels > EXPLODE_MAX_LEVELS:
                    raise TooManyLevels(
                        f"{attr.id!r} has {n_levels} levels (limit {EXPLODE_MAX_LEVELS})"
                    )
        return op

    def _execute(self, op: Operation) -> ApplyResult:
        ds = self.derived[op.dataset_id]
        new_ds = ds.shallow_copy()
        created: list = []

        if op.kind in LEVEL_OP_KINDS:
            target_id = op.target_attribute_id
            if op.params["mode"] == "MakeNew":
                target_id = self._duplicate_into(new_ds, op.target_attribute_id, derived_attribute_id(op.seq))
                created.append(target_id)
            self._edit_levels(new_ds, target_id, op)
        elif op.kind == "RenameAttribute":
            new_ds.attribute(op.target_attribute_id).name = op.params["new_name"]
        elif op.kind == "DuplicateAttribute":
            created.append(
                self._duplicate_into(new_ds, op.target_attribute_id, derived_attribute_id(op.seq))
            )
        elif op.kind == "Explode":
            created.extend(self._explode_into(new_ds, op))

        self.derived[op.dataset_id] = new_ds
        op.created_attribute_ids = created
        return ApplyResult(created_attribute_ids=created)

    def _duplicate_into(self, ds: Dataset, source_id: str, new_id: str) -> str:
        source = ds.attribute(source_id)
        dup = source.copy()
        dup.id = new_id
        dup.name = f"{source.name} (copy)"
        dup.origin = "derived"
        ds.columns[new_id] = list(ds.columns[source_id])
        position = ds.attribute_order().index(source_id) + 1
        ds.attributes.insert(position, dup)
        return new_id

    def _edit_levels(self, ds: Dataset, attribute_id: str, op: Operation) -> None:
        attr = ds.attribute(attribute_id)
        levels = list(attr.levels or [])
        column = ds.columns[attribute_id]
        is_list = attr.kind == "list"

        if op.kind in ("FilterOut", "KeepOnly"):
            if op.kind == "FilterOut":
                drop = set(op.params["levels"])
            else:
                drop = set(levels) - set(op.params["levels"])
            attr.levels = [l for l in levels if l not in drop]
            if is_list:
                ds.columns[attribute_id] = [
                    _strip_list_cell(cell, drop) if cell is not None else None for cell in column
                ]
            else:
                ds.columns[attribute_id] = [None if cell in drop else cell for cell in column]
        elif op.kind in ("MergeLevels", "RenameLevel"):
            constituents = set(op.params["levels"])
            new_name = op.params["new_name"]
            attr.levels = _merged_level_list(levels, op.params["levels"], new_name)
            if constituents == {new_name}:
                return  # identity rename
            if is_list:
                ds.columns[attribute_id] = [
                    _merge_list_cell(cell, constituents, new_name) if cell is not None else None
                    for cell in column
                ]
            else:
                ds.columns[attribute_id] = [
                    new_name if cell in constituents else cell for cell in column
                ]

    def _explode_into(self, ds: Dataset, op: Operation) -> list:
        attr_a = ds.attribute(op.target_attribute_id)
        attr_b = ds.attribute(op.params["second_attribute_id"])
        col_a = ds.columns[attr_a.id]
        col_b = ds.columns[attr_b.id]
        created = []
        position = ds.attribute_order().index(attr_b.id) + 1
        for index, level_a in enumerate(self.level_order(attr_a)):
            new_id = derived_attribute_id(op.seq, index)
            new_col = [b if a == level_a else None for a, b in zip(col_a, col_b)]
            observed = {cell for cell in new_col if cell is not None}
            derived = AttributeDef(
                id=new_id,
                name=f"{attr_b.name} | {attr_a.name}={level_a}",
                kind=attr_b.kind,
                dataset_id=ds.id,
                units=attr_b.units,
                levels=[l for l in (attr_b.levels or []) if l in observed],
                origin="derived",
            )
            ds.columns[new_id] = new_col
            ds.attributes.insert(position, derived)
            position += 1
            created.append(new_id)
        return created

    # ---- replay / undo ----

    def replay_from(self, log: list) -> None:
        """Rebuild derived state from base by applying ``log`` in order."""
        self.derived = {k: ds.shallow_copy() for k, ds in self.base.items()}
        self.log = []
        for op in log:
            try:
                self._apply_replayed(op.copy())
            except VivaError as exc:
                raise InconsistentLog(
                    f"operation seq {op.seq} failed during replay: {exc.message}",
                    details={"seq": op.seq, "cause": exc.code},
                ) from exc

    def dependents(self, seq: int) -> set:
        """Transitive closure of operations that depend on the op with this seq.

        B depends on A when (i) B targets an attribute A created, (ii) B
        references a level name A introduced on the same attribute family
        (copies inherit level lists, so introductions follow the duplicate /
        make-new / explode lineage), or (iii) B is an Explode whose second
        attribute A created, or whose first attribute had its level list
        shaped by A (explode derives one positional attribute per level, so
        its identity depends on that list). Removing an op together with its
        closure always leaves a replayable log.
        """
        by_seq = {op.seq: op for op in self.log}
        if seq not in by_seq:
            raise UnknownSeq(f"no operation with seq {seq}")

        source_of: dict = {}
        creation_seq: dict = {}
        for op in self.log:
            source = (
                op.params.get("second_attribute_id")
                if op.kind == "Explode"
                else op.target_attribute_id
            )
            for created in op.created_attribute_ids:
                source_of[created] = source
                creation_seq[created] = op.seq

        def family(attribute_id: str) -> str:
            seen = set()
            while attribute_id in source_of and attribute_id not in seen:
                seen.add(attribute_id)
                attribute_id = source_of[attribute_id]
            return attribute_id

        edges: dict[int, set] = {op.seq: set() for op in self.log}
        for i, a in enumerate(self.log):
            introduced = _introduced_levels(a)
            a_created = set(a.created_attribute_ids)
            a_family = family(a.target_attribute_id) if introduced else None
            for b in self.log[i + 1 :]:
                depends = (
                    b.target_attribute_id in a_created
                    or (b.kind == "Explode" and b.params.get("second_attribute_id") in a_created)
                )
                if not depends and introduced and _referenced_levels(b) & introduced:
                    target = b.target_attribute_id
                    if target == a.target_attribute_id:
                        depends = True
                    elif family(target) == a_family and creation_seq.get(target, -1) > a.seq:
                        depends = True
                if not depends and b.kind == "Explode" and a.kind in LEVEL_OP_KINDS:
                    edited = (
                        a.created_attribute_ids[0]
                        if a.params.get("mode") == "MakeNew" and a.created_attribute_ids
                        else a.target_attribute_id
                    )
                    target = b.target_attribute_id
                    if target == edited or (
                        family(target) == family(edited)
                        and creation_seq.get(target, -1) > a.seq
                    ):
                        depends = True
                if depends:
                    edges[a.seq].add(b.seq)

        closure: set = set()
        frontier = [seq]
        while frontier:
            current = frontier.pop()
            for nxt in edges[current]:
                if nxt not in closure:
                    closure.add(nxt)
                    frontier.append(nxt)
        closure.discard(seq)
        return closure

    def remove_ops(self, seqs: set) -> list:
        """Drop the given ops (must be closed under dependents) and replay.

        Returns the surviving log; raises DependencyViolation listing any
        dependents the caller failed to include.
        """
        known = {op.seq for op in self.log}
        unknown = set(seqs) - known
        if unknown:
            raise UnknownSeq(f"no operation with seq {sorted(unknown)}")
        missing: set = set()
        for seq in seqs:
            missing |= self.dependents(seq) - set(seqs)
        if missing:
            raise DependencyViolation(
                f"operations {sorted(missing)} depend on the removed set",
                details={"missing": sorted(missing)},
            )
        kept = [op for op in self.log if op.seq not in seqs]
        self.replay_from(kept)
        return self.log

    def undo_last(self) -> Operation:
        if not self.log:
            raise EmptyLog("operation log is empty")
        last = self.log[-1]
        self.remove_ops({last.seq})
        return last


def replay(base: dict[str, Dataset], log: list, level_order=None) -> Engine:
    """Pure rebuild: a fresh engine whose derived state is base + log."""
    engine = Engine(base, level_order)
    engine.replay_from(log)
    return engine


def _strip_list_cell(cell: tuple, drop: set) -> tuple | None:
    kept = tuple(el for el in cell if el not in drop)
    return kept or None


def _merge_list_cell(cell: tuple, constituents: set, new_name: str) -> tuple:
    merged = []
    for el in cell:
        el = new_name if el in constituents else el
        if el not in merged:
            merged.append(el)
    return tuple(merged)


def _merged_level_list(levels: list, constituents: list, new_name: str) -> list:
    """New level list: new_name at the first constituent's position, other
    constituents and any pre-existing occurrence of new_name dropped."""
    drop = set(constituents) | {new_name}
    first_position = min(levels.index(l) for l in constituents if l in levels)
    merged = []
    for index, level in enumerate(levels):
        if index == first_position:
            merged.append(new_name)
        elif level not in drop:
            merged.append(level)
    return merged


def _introduced_levels(op: Operation) -> set:
    if op.kind in ("MergeLevels", "RenameLevel"):
        return {op.params["new_name"]}
    return set()


def _referenced_levels(op: Operation) -> set:
    levels = op.params.get("levels")
    return set(levels) if isinstance(levels, list) else set()
