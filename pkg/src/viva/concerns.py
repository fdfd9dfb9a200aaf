"""Curation of attribute groups (Concerns).

The concern set is always reconstructible from three inputs: the specified
concern config, the concern-edit log, and the operation log (operations
insert derived attributes and Explode spawns whole concerns). The default
concern is a live view of every chartable attribute and is never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .engine import Engine, Operation
from .errors import (
    DuplicateName,
    InvalidOperation,
    ProtectedConcern,
    UnknownConcern,
    UnknownMember,
    VivaError,
)

DEFAULT_CONCERN = "All"

EDIT_KINDS = (
    "Create",
    "Copy",
    "Rename",
    "Delete",
    "AddMember",
    "RemoveMember",
    "MoveMember",
    "SetActive",
)


@dataclass
class Concern:
    name: str
    members: list = field(default_factory=list)
    origin: str = "logged"


@dataclass
class ConcernEdit:
    seq: int
    kind: str
    params: dict
    timestamp: str = ""
    session_id: str = ""

    def copy(self) -> "ConcernEdit":
        return replace(self, params=dict(self.params))


def edit_to_record(edit: ConcernEdit) -> dict:
    return {
        "seq": edit.seq,
        "timestamp": edit.timestamp,
        "session_id": edit.session_id,
        "kind": edit.kind,
        "params": edit.params,
    }


def edit_from_record(record: dict) -> ConcernEdit:
    return ConcernEdit(
        seq=int(record["seq"]),
        kind=str(record["kind"]),
        params=dict(record.get("params", {})),
        timestamp=str(record.get("timestamp", "")),
        session_id=str(record.get("session_id", "")),
    )


class ConcernManager:
    """Live concern set for one session, backed by an engine for membership."""

    def __init__(self, engine: Engine):
        self.engine = engine
        self.concerns: list[Concern] = []
        self.active: str = DEFAULT_CONCERN

    # ---- views ----

    def default_members(self) -> list:
        return [
            attr.id
            for ds in self.engine.derived.values()
            for attr in ds.attributes
            if attr.chartable
        ]

    def all_concerns(self) -> list:
        return [Concern(DEFAULT_CONCERN, self.default_members(), "default")] + self.concerns

    def names(self) -> list:
        return [c.name for c in self.all_concerns()]

    def get(self, name: str) -> Concern:
        for concern in self.all_concerns():
            if concern.name == name:
                return concern
        raise UnknownConcern(f"no concern named {name!r}")

    def active_name(self) -> str:
        """Current active concern name, falling back to the default when the
        stored name no longer resolves. Read-only: queries must not mutate."""
        names = {c.name for c in self.all_concerns()}
        return self.active if self.active in names else DEFAULT_CONCERN

    def active_concern(self) -> Concern:
        return self.get(self.active_name())

    def _user_concern(self, name: str) -> Concern:
        for concern in self.concerns:
            if concern.name == name:
                return concern
        if name == DEFAULT_CONCERN:
            raise ProtectedConcern(f"the {DEFAULT_CONCERN!r} concern cannot be modified")
        raise UnknownConcern(f"no concern named {name!r}")

    # ---- specified config ----

    def load_specified(self, specs: list) -> None:
        """Install specified concerns; members that do not resolve to a known
        attribute are dropped silently (datasets may not all be uploaded)."""
        known = {
            attr.id for ds in self.engine.derived.values() for attr in ds.attributes
        }
        for spec in specs:
            members = [ref for ref in spec.attributes if ref in known]
            if spec.name not in self.names():
                self.concerns.append(Concern(spec.name, members, "specified"))

    # ---- edits ----

    def apply_edit(self, edit: ConcernEdit, strict: bool = True) -> None:
        """Apply one edit. Non-strict mode (log rebuild) skips edits that no
        longer resolve, e.g. edits to a concern whose creating Explode was
        deleted, so replays of pruned logs always succeed."""
        try:
            self._apply_edit(edit)
        except (UnknownConcern, UnknownMember, DuplicateName, ProtectedConcern, InvalidOperation):
            if strict:
                raise

    def _apply_edit(self, edit: ConcernEdit) -> None:
        kind, params = edit.kind, edit.params
        if kind not in EDIT_KINDS:
            raise InvalidOperation(f"unknown concern edit kind {kind!r}")
        if kind == "Create":
            name = self._require_name(params, "name")
            if name in self.names():
                raise DuplicateName(f"concern {name!r} already exists")
            self.concerns.append(Concern(name, [], "logged"))
        elif kind == "Copy":
            source = self.get(self._require_name(params, "source"))
            name = self._require_name(params, "name")
            if name in self.names():
                raise DuplicateName(f"concern {name!r} already exists")
            self.concerns.append(Concern(name, list(source.members), "logged"))
        elif kind == "Rename":
            concern = self._user_concern(self._require_name(params, "name"))
            new_name = self._require_name(params, "new_name")
            if new_name != concern.name and new_name in self.names():
                raise DuplicateName(f"concern {new_name!r} already exists")
            concern.name = new_name
            if self.active == params["name"]:
                self.active = new_name
        elif kind == "Delete":
            concern = self._user_concern(self._require_name(params, "name"))
            self.concerns.remove(concern)
            if self.active == concern.name:
                self.active = DEFAULT_CONCERN
        elif kind == "AddMember":
            concern = self._user_concern(self._require_name(params, "name"))
            attribute_id = self._require_name(params, "attribute_id")
            try:
                self.engine.find_attribute(attribute_id)
            except VivaError as exc:
                raise UnknownMember(f"no attribute {attribute_id!r} to add") from exc
            if attribute_id in concern.members:
                raise DuplicateName(f"{attribute_id!r} already in {concern.name!r}")
            position = params.get("position")
            if position is None:
                concern.members.append(attribute_id)
            else:
                concern.members.insert(self._check_index(concern, int(position), insert=True), attribute_id)
        elif kind == "RemoveMember":
            concern = self._user_concern(self._require_name(params, "name"))
            attribute_id = self._require_name(params, "attribute_id")
            if attribute_id not in concern.members:
                raise UnknownMember(f"{attribute_id!r} not in {concern.name!r}")
            concern.members.remove(attribute_id)
        elif kind == "MoveMember":
            concern = self._user_concern(self._require_name(params, "name"))
            attribute_id = self._require_name(params, "attribute_id")
            if attribute_id not in concern.members:
                raise UnknownMember(f"{attribute_id!r} not in {concern.name!r}")
            to_index = self._check_index(concern, int(params.get("to_index", 0)))
            concern.members.remove(attribute_id)
            concern.members.insert(to_index, attribute_id)
        elif kind == "SetActive":
            name = self._require_name(params, "name")
            self.get(name)
            self.active = name

    @staticmethod
    def _require_name(params: dict, key: str) -> str:
        value = params.get(key)
        if not isinstance(value, str) or not value:
            raise InvalidOperation(f"concern edit requires {key!r}")
        return value

    @staticmethod
    def _check_index(concern: Concern, index: int, insert: bool = False) -> int:
        limit = len(concern.members) + (1 if insert else 0)
        if not 0 <= index < max(limit, 1):
            raise UnknownMember(f"index {index} out of range for {concern.name!r}")
        return index

    # ---- operation side effects ----

    def on_operation(self, op: Operation) -> str | None:
        """Concern side effects of an applied/replayed engine operation.

        Returns the name of a concern created by an Explode, if any.
        """
        if not op.created_attribute_ids:
            return None
        if op.kind == "Explode":
            return self._on_explode(op)
        self.on_attribute_created(op.target_attribute_id, op.created_attribute_ids)
        return None

    def on_attribute_created(self, source_attribute_id: str, new_ids: list) -> None:
        """Insert new derived attributes right after their source in the active
        concern; append at the end when the source is not a member. The default
        concern picks them up automatically from attribute order."""
        concern = self.active_concern()
        if concern.origin == "default":
            return
        missing = [a for a in new_ids if a not in concern.members]
        if source_attribute_id in concern.members:
            at = concern.members.index(source_attribute_id) + 1
            concern.members[at:at] = missing
        else:
            concern.members.extend(missing)

    def _on_explode(self, op: Operation) -> str:
        # The name is frozen into the op record on first apply so that log
        # replays reproduce it even if the source attributes get renamed later.
        base_name = op.params.get("concern_name") or self._explode_concern_name(op)
        name = base_name
        suffix = 2
        while name in self.names():
            name = f"{base_name} ({suffix})"
            suffix += 1
        op.params["concern_name"] = name
        members = [op.target_attribute_id, op.params["second_attribute_id"], *op.created_attribute_ids]
        self.concerns.append(Concern(name, members, "exploded"))
        self.active = name
        return name

    def _explode_concern_name(self, op: Operation) -> str:
        _, attr_a = self.engine.find_attribute(op.target_attribute_id)
        _, attr_b = self.engine.find_attribute(op.params["second_attribute_id"])
        return f"{attr_a.name} × {attr_b.name}"

    # ---- rebuild ----

    def rebuild(self, specs: list, edits: list, log: list) -> None:
        """Reconstruct the concern set from scratch.

        Operations and concern edits share one seq counter, so interleaving
        them by seq reproduces the session history; edits that no longer
        resolve (their target pruned by an op deletion) are skipped.
        """
        self.concerns = []
        self.active = DEFAULT_CONCERN
        self.load_specified(specs)
        stream: list = [(op.seq, 0, op) for op in log] + [(e.seq, 1, e) for e in edits]
        stream.sort(key=lambda item: (item[0], item[1]))
        for _, tag, event in stream:
            if tag == 0:
                self.on_operation(event)
            else:
                self.apply_edit(event, strict=False)
        self.prune_members()

    def prune_members(self) -> None:
        """Drop members that no longer exist (e.g. after op deletion)."""
        known = {attr.id for ds in self.engine.derived.values() for attr in ds.attributes}
        for concern in self.concerns:
            concern.members = [m for m in concern.members if m in known]
