"""Concern curation: default view, edits, explode side effects, rebuild."""

from datetime import date

import pytest

from conftest import make_dataset
from viva.concerns import DEFAULT_CONCERN, ConcernEdit, ConcernManager
from viva.configio import ConcernSpec
from viva.engine import Engine, Operation
from viva.errors import DuplicateName, ProtectedConcern, UnknownConcern, UnknownMember


def build_engine():
    ds = make_dataset(
        name="E",
        stamps=[date(2021, 1, d) for d in (1, 2, 3, 4)],
        columns={
            "A": ("categorical", ["x", "x", "y", "y"]),
            "B": ("categorical", ["p", "q", "p", "q"]),
            "Notes": ("freeform", ["n1", "n2", "n3", "n4"]),
        },
    )
    return Engine({"E": ds})


def edit(seq, kind, **params):
    return ConcernEdit(seq=seq, kind=kind, params=params)


class TestDefaultConcern:
    def test_contains_every_chartable_attribute(self):
        manager = ConcernManager(build_engine())
        default = manager.get(DEFAULT_CONCERN)
        assert default.members == ["E.When", "E.A", "E.B"]  # freeform excluded
        assert default.origin == "default"

    def test_tracks_derived_attribute_positions(self):
        engine = build_engine()
        manager = ConcernManager(engine)
        engine.apply(Operation(1, "DuplicateAttribute", "E", "E.A", {}))
        default = manager.get(DEFAULT_CONCERN)
        assert default.members.index("d1") == default.members.index("E.A") + 1

    def test_protected_from_rename_delete(self):
        manager = ConcernManager(build_engine())
        with pytest.raises(ProtectedConcern):
            manager.apply_edit(edit(1, "Rename", name=DEFAULT_CONCERN, new_name="Mine"))
        with pytest.raises(ProtectedConcern):
            manager.apply_edit(edit(1, "Delete", name=DEFAULT_CONCERN))
        with pytest.raises(ProtectedConcern):
            manager.apply_edit(edit(1, "RemoveMember", name=DEFAULT_CONCERN, attribute_id="E.A"))


class TestEdits:
    def test_copy_default_is_independent(self):
        engine = build_engine()
        manager = ConcernManager(engine)
        manager.apply_edit(edit(1, "Copy", source=DEFAULT_CONCERN, name="My View"))
        copy = manager.get("My View")
        assert copy.members == manager.get(DEFAULT_CONCERN).members
        manager.apply_edit(edit(2, "RemoveMember", name="My View", attribute_id="E.A"))
        assert "E.A" not in manager.get("My View").members
        assert "E.A" in manager.get(DEFAULT_CONCERN).members

    def test_move_member_to_front_stable(self):
        manager = ConcernManager(build_engine())
        manager.apply_edit(edit(1, "Copy", source=DEFAULT_CONCERN, name="V"))
        manager.apply_edit(edit(2, "MoveMember", name="V", attribute_id="E.B", to_index=0))
        assert manager.get("V").members == ["E.B", "E.When", "E.A"]

    def test_duplicate_names_rejected(self):
        manager = ConcernManager(build_engine())
        manager.apply_edit(edit(1, "Create", name="V"))
        with pytest.raises(DuplicateName):
            manager.apply_edit(edit(2, "Create", name="V"))
        with pytest.raises(DuplicateName):
            manager.apply_edit(edit(3, "Copy", source="V", name=DEFAULT_CONCERN))

    def test_unknown_targets_rejected(self):
        manager = ConcernManager(build_engine())
        with pytest.raises(UnknownConcern):
            manager.apply_edit(edit(1, "Delete", name="nope"))
        manager.apply_edit(edit(2, "Create", name="V"))
        with pytest.raises(UnknownMember):
            manager.apply_edit(edit(3, "RemoveMember", name="V", attribute_id="E.A"))

    def test_set_active_and_delete_falls_back(self):
        manager = ConcernManager(build_engine())
        manager.apply_edit(edit(1, "Create", name="V"))
        manager.apply_edit(edit(2, "SetActive", name="V"))
        assert manager.active_name() == "V"
        manager.apply_edit(edit(3, "Delete", name="V"))
        assert manager.active_name() == DEFAULT_CONCERN


class TestOperationSideEffects:
    def test_new_attribute_inserted_after_source_in_active(self):
        engine = build_engine()
        manager = ConcernManager(engine)
        manager.apply_edit(edit(1, "Copy", source=DEFAULT_CONCERN, name="V"))
        manager.apply_edit(edit(2, "SetActive", name="V"))
        engine.apply(Operation(3, "FilterOut", "E", "E.A", {"levels": ["x"], "mode": "MakeNew"}))
        manager.on_operation(engine.log[-1])
        members = manager.get("V").members
        assert members.index("d3") == members.index("E.A") + 1

    def test_source_absent_appends_at_end(self):
        engine = build_engine()
        manager = ConcernManager(engine)
        manager.apply_edit(edit(1, "Create", name="V"))
        manager.apply_edit(edit(2, "AddMember", name="V", attribute_id="E.B"))
        manager.apply_edit(edit(3, "SetActive", name="V"))
        engine.apply(Operation(4, "DuplicateAttribute", "E", "E.A", {}))
        manager.on_operation(engine.log[-1])
        assert manager.get("V").members == ["E.B", "d4"]

    def test_explode_creates_concern_and_activates(self):
        engine = build_engine()
        manager = ConcernManager(engine)
        result = engine.apply(Operation(1, "Explode", "E", "E.A", {"second_attribute_id": "E.B"}))
        name = manager.on_operation(engine.log[-1])
        assert name == "A × B"
        assert manager.active_name() == name
        concern = manager.get(name)
        assert concern.origin == "exploded"
        assert concern.members == ["E.A", "E.B"] + result.created_attribute_ids

    def test_second_explode_of_same_pair_gets_unique_name(self):
        engine = build_engine()
        manager = ConcernManager(engine)
        engine.apply(Operation(1, "Explode", "E", "E.A", {"second_attribute_id": "E.B"}))
        manager.on_operation(engine.log[-1])
        engine.apply(Operation(2, "Explode", "E", "E.A", {"second_attribute_id": "E.B"}))
        name = manager.on_operation(engine.log[-1])
        assert name == "A × B (2)"


class TestRebuild:
    def test_session_edits_replay_identically(self):
        engine = build_engine()
        live = ConcernManager(engine)
        edits = [
            edit(1, "Create", name="V"),
            edit(2, "AddMember", name="V", attribute_id="E.A"),
            edit(3, "AddMember", name="V", attribute_id="E.B"),
            edit(4, "AddMember", name="V", attribute_id="E.When"),
            edit(5, "RemoveMember", name="V", attribute_id="E.B"),
            edit(6, "SetActive", name="V"),
        ]
        for e in edits:
            live.apply_edit(e)
        rebuilt = ConcernManager(engine)
        rebuilt.rebuild([], edits, engine.log)
        assert [(c.name, c.members) for c in rebuilt.all_concerns()] == [
            (c.name, c.members) for c in live.all_concerns()
        ]
        assert rebuilt.active_name() == live.active_name()

    def test_interleaves_ops_and_edits_by_seq(self):
        engine = build_engine()
        live = ConcernManager(engine)
        live.apply_edit(edit(1, "Copy", source=DEFAULT_CONCERN, name="V"))
        live.apply_edit(edit(2, "SetActive", name="V"))
        engine.apply(Operation(3, "DuplicateAttribute", "E", "E.A", {}))
        live.on_operation(engine.log[-1])
        live.apply_edit(edit(4, "RemoveMember", name="V", attribute_id="d3"))

        rebuilt = ConcernManager(engine)
        rebuilt.rebuild([], [e for e in (edit(1, "Copy", source=DEFAULT_CONCERN, name="V"),
                                         edit(2, "SetActive", name="V"),
                                         edit(4, "RemoveMember", name="V", attribute_id="d3"))],
                        engine.log)
        assert [(c.name, c.members) for c in rebuilt.all_concerns()] == [
            (c.name, c.members) for c in live.all_concerns()
        ]

    def test_edits_to_pruned_concern_skipped(self):
        engine = build_engine()
        manager = ConcernManager(engine)
        # concerns.log references a concern created by an explode that later got deleted
        edits = [edit(2, "AddMember", name="A × B", attribute_id="E.When")]
        manager.rebuild([], edits, [])  # ops log no longer has the explode
        assert [c.name for c in manager.all_concerns()] == [DEFAULT_CONCERN]

    def test_specified_concerns_load_and_skip_unknown_members(self):
        engine = build_engine()
        manager = ConcernManager(engine)
        specs = [ConcernSpec("View", ["E.A", "Other.Nope"])]
        manager.rebuild(specs, [], [])
        assert manager.get("View").members == ["E.A"]
        assert manager.get("View").origin == "specified"

    def test_dangling_members_pruned_after_op_removal(self):
        engine = build_engine()
        manager = ConcernManager(engine)
        engine.apply(Operation(1, "DuplicateAttribute", "E", "E.A", {}))
        manager.on_operation(engine.log[-1])
        manager.apply_edit(edit(2, "Create", name="V"))
        manager.apply_edit(edit(3, "AddMember", name="V", attribute_id="d1"))
        engine.remove_ops({1})
        manager.rebuild([], [edit(2, "Create", name="V"), edit(3, "AddMember", name="V", attribute_id="d1")], engine.log)
        assert manager.get("V").members == []
