"""Config store: grammar, diagnostics, round trips, colors, orderings, logs."""

import random
from datetime import date

from conftest import make_dataset
from viva.concerns import ConcernEdit
from viva.configio import (
    ConfigStore,
    append_logged,
    load_config,
    natural_key,
    parse_color_line,
    parse_concern_line,
    parse_merge_line,
    parse_ordering_line,
    parse_schema_line,
    resolve_color,
    resolve_level_order,
    rewrite_ops_log,
    serialize_colors,
    serialize_concerns,
    serialize_merges,
    serialize_orderings,
    serialize_schema,
    CANONICAL_COLORS,
)
from viva.core import AttributeDef, dataset_fingerprint
from viva.engine import Engine, Operation, replay


class TestSchemaLines:
    def test_basic_categorical(self):
        entry = parse_schema_line("Encounters.Gender = categorical")
        assert (entry.dataset_name, entry.attribute_name, entry.kind) == ("Encounters", "Gender", "categorical")
        assert not entry.time_designation

    def test_quantitative_requires_units(self):
        assert parse_schema_line("E.X = quantitative") is None
        entry = parse_schema_line("E.X = quantitative units=seconds")
        assert entry.units == "seconds"

    def test_time_designation(self):
        entry = parse_schema_line("E.When = datetime time")
        assert entry.time_designation

    def test_list_separator(self):
        entry = parse_schema_line("E.Tags = list sep=;")
        assert entry.list_separator == ";"

    def test_percent_becomes_quantitative(self):
        entry = parse_schema_line("E.Rate = percent")
        assert entry.kind == "quantitative" and entry.units == "percent"

    def test_garbage_rejected(self):
        assert parse_schema_line("not a schema line") is None
        assert parse_schema_line("E.X = nonsense") is None


class TestOtherLines:
    def test_merge_line(self):
        rule = parse_merge_line("Encounters.Gender: F,Female -> Female")
        assert rule.constituent_levels == ["F", "Female"]
        assert rule.merged_level_name == "Female"

    def test_merge_line_requires_two_constituents(self):
        assert parse_merge_line("E.G: OnlyOne -> X") is None

    def test_color_line(self):
        rule = parse_color_line("Encounters.MDD.HLBCYellow = #E8C547")
        assert (rule.dataset, rule.attribute, rule.level, rule.color) == (
            "Encounters", "MDD", "HLBCYellow", "#E8C547",
        )

    def test_color_line_bad_hex(self):
        assert parse_color_line("E.A.L = #XYZ") is None

    def test_concern_line(self):
        spec = parse_concern_line("Patient Journey: E.KBD, E.RND, E.MDD")
        assert spec.name == "Patient Journey"
        assert spec.attributes == ["E.KBD", "E.RND", "E.MDD"]

    def test_ordering_line(self):
        rule = parse_ordering_line("Survey.Overall: 1, 2, 3, 4, 5")
        assert rule.levels == ["1", "2", "3", "4", "5"]


class TestLoadConfig:
    def test_empty_directory(self, tmp_path):
        store, diagnostics = load_config(tmp_path)
        assert diagnostics == []
        assert store.schema.entries == [] and store.merges == [] and store.logged_ops == []

    def test_malformed_lines_reported_not_fatal(self, tmp_path):
        (tmp_path / "merges.cfg").write_text(
            "# comment\nEncounters.Gender: F,Female -> Female\ngarbage line\n", encoding="utf-8"
        )
        store, diagnostics = load_config(tmp_path)
        assert len(store.merges) == 1
        assert len(diagnostics) == 1
        assert diagnostics[0].file == "merges.cfg" and diagnostics[0].line_no == 3

    def test_duplicate_time_designation_diagnosed(self, tmp_path):
        (tmp_path / "schema.cfg").write_text(
            "E.A = datetime time\nE.B = datetime time\n", encoding="utf-8"
        )
        store, diagnostics = load_config(tmp_path)
        assert len([e for e in store.schema.entries if e.time_designation]) == 1
        assert any("time designation" in d.message for d in diagnostics)

    def test_round_trip_specified_sections(self, tmp_path):
        (tmp_path / "schema.cfg").write_text(
            "E.When = datetime time\nE.G = categorical\nE.S = quantitative units=seconds\n"
            "E.T = list sep=|\n",
            encoding="utf-8",
        )
        (tmp_path / "merges.cfg").write_text("E.G: a,b -> ab\n", encoding="utf-8")
        (tmp_path / "concerns.cfg").write_text("View: E.G, E.S\n", encoding="utf-8")
        (tmp_path / "colors.cfg").write_text("E.G.ab = #112233\n", encoding="utf-8")
        (tmp_path / "orderings.cfg").write_text("E.G: b, a\n", encoding="utf-8")
        store, diagnostics = load_config(tmp_path)
        assert diagnostics == []

        second = tmp_path / "again"
        second.mkdir()
        (second / "schema.cfg").write_text(serialize_schema(store.schema), encoding="utf-8")
        (second / "merges.cfg").write_text(serialize_merges(store.merges), encoding="utf-8")
        (second / "concerns.cfg").write_text(serialize_concerns(store.concerns_spec), encoding="utf-8")
        (second / "colors.cfg").write_text(serialize_colors(store.colors), encoding="utf-8")
        (second / "orderings.cfg").write_text(serialize_orderings(store.orderings), encoding="utf-8")
        roundtripped, diagnostics2 = load_config(second)
        assert diagnostics2 == []
        assert roundtripped.schema == store.schema
        assert roundtripped.merges == store.merges
        assert roundtripped.concerns_spec == store.concerns_spec
        assert roundtripped.colors == store.colors
        assert roundtripped.orderings == store.orderings


class TestLoggedSections:
    def test_append_and_reload_single_op(self, tmp_path):
        store = ConfigStore(config_dir=tmp_path)
        op = Operation(1, "FilterOut", "E", "E.G", {"levels": ["NULL"], "mode": "MakeNew"},
                       created_attribute_ids=["d1"], timestamp="2021-01-01T00:00:00+00:00", session_id="s")
        append_logged(store, op)
        reloaded, _ = load_config(tmp_path)
        assert len(reloaded.logged_ops) == 1
        assert reloaded.logged_ops[0] == op

    def test_append_preserves_order(self, tmp_path):
        store = ConfigStore(config_dir=tmp_path)
        a = Operation(1, "DuplicateAttribute", "E", "E.G", {})
        b = Operation(2, "RenameAttribute", "E", "E.G", {"new_name": "x"})
        append_logged(store, a)
        append_logged(store, b)
        reloaded, _ = load_config(tmp_path)
        assert [o.seq for o in reloaded.logged_ops] == [1, 2]

    def test_concern_edit_round_trip(self, tmp_path):
        store = ConfigStore(config_dir=tmp_path)
        edit = ConcernEdit(3, "Create", {"name": "My View"}, timestamp="t", session_id="s")
        append_logged(store, edit)
        reloaded, _ = load_config(tmp_path)
        assert reloaded.logged_concern_edits == [edit]

    def test_append_only_previous_content_is_prefix(self, tmp_path):
        store = ConfigStore(config_dir=tmp_path)
        append_logged(store, Operation(1, "DuplicateAttribute", "E", "E.G", {}))
        before = (tmp_path / "ops.log").read_bytes()
        append_logged(store, Operation(2, "DuplicateAttribute", "E", "E.G", {}))
        after = (tmp_path / "ops.log").read_bytes()
        assert after.startswith(before)

    def test_rewrite_ops_log_atomic_content(self, tmp_path):
        store = ConfigStore(config_dir=tmp_path)
        ops = [Operation(i, "DuplicateAttribute", "E", "E.G", {}) for i in (1, 2, 3)]
        for op in ops:
            append_logged(store, op)
        rewrite_ops_log(store, [ops[0], ops[2]])
        reloaded, _ = load_config(tmp_path)
        assert [o.seq for o in reloaded.logged_ops] == [1, 3]

    def test_hundred_random_ops_replay_identically_after_reload(self, tmp_path):
        from oracles import random_dataset, run_random_session

        rng = random.Random(5)
        ds = random_dataset(rng, max_rows=150)
        store = ConfigStore(config_dir=tmp_path)
        engine = Engine({ds.id: ds})
        run_random_session(rng, engine, 100, on_op=lambda op: append_logged(store, op))
        reloaded, diagnostics = load_config(tmp_path)
        assert diagnostics == []
        replayed = replay(engine.base, reloaded.logged_ops)
        assert dataset_fingerprint(replayed.derived[ds.id]) == dataset_fingerprint(
            engine.derived[ds.id]
        )


class TestResolveColor:
    def test_explicit_rule_wins(self, tmp_path):
        (tmp_path / "colors.cfg").write_text("E.G.HLBCYellow = #123456\n", encoding="utf-8")
        store, _ = load_config(tmp_path)
        assert resolve_color(store, "E", "E.G", "HLBCYellow") == "#123456"

    def test_color_word_in_camel_case(self, empty_store):
        assert resolve_color(empty_store, "E", "E.G", "HLBCYellow") == CANONICAL_COLORS["yellow"]

    def test_color_word_upper_token(self, empty_store):
        assert resolve_color(empty_store, "E", "E.G", "MD RED") == CANONICAL_COLORS["red"]

    def test_grey_and_gray(self, empty_store):
        assert resolve_color(empty_store, "E", "E.G", "light-gray") == CANONICAL_COLORS["grey"]
        assert resolve_color(empty_store, "E", "E.G", "Grey zone") == CANONICAL_COLORS["grey"]

    def test_no_false_positive_substring(self, empty_store):
        # "Credible" contains "red" but not as a word or camel token
        assert resolve_color(empty_store, "E", "E.G", "Credible") != CANONICAL_COLORS["red"]

    def test_palette_deterministic(self, empty_store):
        first = resolve_color(empty_store, "E", "E.G", "Fraser")
        second = resolve_color(empty_store, "E", "E.G", "Fraser")
        assert first == second
        assert first.startswith("#")


class TestResolveLevelOrder:
    def attr(self, levels, kind="categorical"):
        return AttributeDef(id="E.G", name="G", kind=kind, dataset_id="E", levels=levels)

    def test_ordering_rule_applies(self, tmp_path):
        (tmp_path / "orderings.cfg").write_text("E.G: 1, 2, 3, 4, 5\n", encoding="utf-8")
        store, _ = load_config(tmp_path)
        attr = self.attr(["3", "5", "1", "2", "4"], kind="ordered")
        assert resolve_level_order(store, attr) == ["1", "2", "3", "4", "5"]

    def test_rule_omitted_levels_appended_in_stored_order(self, tmp_path):
        (tmp_path / "orderings.cfg").write_text("E.G: b, a\n", encoding="utf-8")
        store, _ = load_config(tmp_path)
        attr = self.attr(["c", "a", "b", "d"])
        assert resolve_level_order(store, attr) == ["b", "a", "c", "d"]

    def test_ordered_kind_natural_sort(self, empty_store):
        attr = self.attr(["10", "2", "1"], kind="ordered")
        assert resolve_level_order(empty_store, attr) == ["1", "2", "10"]

    def test_categorical_keeps_stored_descending_count_order(self, empty_store):
        # stored order is built descending-count at creation: counts {A:5,B:9} -> [B,A]
        ds = make_dataset(stamps=[date(2021, 1, 1)] * 14,
                          columns={"G": ("categorical", ["A"] * 5 + ["B"] * 9)})
        attr = ds.attribute("D.G")
        assert resolve_level_order(empty_store, attr) == ["B", "A"]

    def test_tie_broken_alphabetically_at_creation(self, empty_store):
        ds = make_dataset(stamps=[date(2021, 1, 1)] * 10,
                          columns={"G": ("categorical", ["A"] * 5 + ["B"] * 5)})
        attr = ds.attribute("D.G")
        assert resolve_level_order(empty_store, attr) == ["A", "B"]


class TestNaturalKey:
    def test_numeric_runs_compare_numerically(self):
        assert sorted(["10", "9", "1"], key=natural_key) == ["1", "9", "10"]

    def test_mixed_text(self):
        assert sorted(["v10", "v2"], key=natural_key) == ["v2", "v10"]
