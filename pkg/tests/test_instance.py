"""
Test suite for instance.py.

Covers fact parsing, blocks, repair enumeration, the pandas views and
fact/CSV file loading.
"""

import sys
from pathlib import Path

import pandas as pd
import pytest

# Add the parent directory to the path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from errors import FactParseError, InconsistentInstanceError, RepairCapExceeded
from instance import (
    Fact,
    Instance,
    dump_facts,
    facts_from_frame,
    instance_of,
    load_instance,
    parse_fact,
    parse_facts,
    save_instance,
)


class TestFact:
    """Test cases for Fact and parse_fact."""

    def test_parse_fact(self):
        assert parse_fact("R(a,b)") == Fact("R", "a", "b")

    def test_parse_fact_allows_spaces(self):
        assert parse_fact("  Emp( 1 , 2 )") == Fact("Emp", "1", "2")

    def test_str_round_trip(self):
        assert str(Fact("R", "0", "1")) == "R(0,1)"

    def test_invalid_fact_text(self):
        with pytest.raises(FactParseError):
            parse_fact("R(a b)")

    def test_invalid_constant_rejected(self):
        with pytest.raises(ValueError):
            Fact("R", "a-b", "c")

    def test_key_equal(self):
        assert Fact("R", "a", "b").key_equal(Fact("R", "a", "c"))
        assert not Fact("R", "a", "b").key_equal(Fact("S", "a", "b"))


class TestParseFacts:
    """Test cases for the fact-file grammar."""

    def test_comments_and_blank_lines_skipped(self):
        db = parse_facts("# header\n\nR(a,b)\n  \nS(b,c)\n")
        assert len(db) == 2

    def test_duplicates_collapse(self):
        assert len(parse_facts("R(a,b)\nR(a,b)\n")) == 1

    def test_error_reports_line_number(self):
        with pytest.raises(FactParseError) as exc:
            parse_facts("R(a,b)\nR(a b)\n")
        assert exc.value.line_number == 2
        assert "line 2" in str(exc.value)

    def test_dump_is_sorted(self):
        db = instance_of("S(a,b)", "R(b,c)", "R(a,c)")
        assert dump_facts(db) == "R(a,c)\nR(b,c)\nS(a,b)\n"


class TestInstance:
    """Test cases for Instance queries and blocks."""

    def test_adom_and_relations(self, two_repair_db):
        assert two_repair_db.adom == frozenset({"0", "1", "2", "3", "4"})
        assert two_repair_db.relations == frozenset({"R", "X"})

    def test_blocks_sorted(self, two_repair_db):
        blocks = two_repair_db.blocks()
        assert [(b.relation, b.key, len(b)) for b in blocks] == [
            ("R", "0", 1), ("R", "1", 2), ("R", "2", 1), ("X", "3", 1),
        ]

    def test_block_of(self, two_repair_db):
        assert set(two_repair_db.block_of("R", "1")) == {Fact("R", "1", "2"), Fact("R", "1", "3")}
        assert two_repair_db.block_of("R", "9") == ()

    def test_successors_and_predecessors(self, two_repair_db):
        assert set(two_repair_db.successors("R", "1")) == {"2", "3"}
        assert set(two_repair_db.predecessors("R", "3")) == {"1", "2"}

    def test_consistency(self, two_repair_db, rxry_yes_db):
        assert not two_repair_db.is_consistent()
        assert rxry_yes_db.is_consistent()
        with pytest.raises(InconsistentInstanceError):
            two_repair_db.require_consistent()

    def test_with_and_without(self, two_repair_db):
        extra = Fact("S", "4", "5")
        grown = two_repair_db.with_facts(extra)
        assert extra in grown and extra not in two_repair_db
        assert grown.without(extra) == two_repair_db

    def test_equality_ignores_order(self):
        assert instance_of("R(a,b)", "S(b,c)") == instance_of("S(b,c)", "R(a,b)")

    def test_empty_instance(self):
        db = Instance()
        assert len(db) == 0
        assert db.is_consistent()
        assert db.adom == frozenset()


class TestRepairs:
    """Test cases for repair enumeration."""

    def test_repair_count(self, grid_db, two_repair_db):
        assert grid_db.repair_count() == 16
        assert two_repair_db.repair_count() == 2

    def test_repairs_are_consistent_and_distinct(self, grid_db):
        repairs = list(grid_db.repairs())
        assert len(repairs) == 16
        assert len(set(repairs)) == 16
        assert all(r.is_consistent() for r in repairs)
        assert all(len(r) == 4 for r in repairs)

    def test_repairs_keep_one_fact_per_block(self, two_repair_db):
        for repair in two_repair_db.repairs():
            assert Fact("R", "0", "1") in repair
            assert len(repair.block_of("R", "1")) == 1

    def test_consistent_instance_is_its_own_repair(self, rxry_yes_db):
        assert list(rxry_yes_db.repairs()) == [rxry_yes_db]

    def test_empty_instance_has_one_repair(self):
        assert list(Instance().repairs()) == [Instance()]

    def test_cap_exceeded(self, grid_db):
        with pytest.raises(RepairCapExceeded) as exc:
            list(grid_db.repairs(max_repairs=10))
        assert exc.value.count == 16
        assert exc.value.cap == 10

    def test_cap_disabled(self, grid_db):
        assert len(list(grid_db.repairs(max_repairs=None))) == 16


class TestFrames:
    """Test cases for the pandas views."""

    def test_frame_columns_and_order(self, two_repair_db):
        frame = two_repair_db.frame()
        assert list(frame.columns) == ["relation", "key", "value"]
        assert frame.iloc[0].tolist() == ["R", "0", "1"]
        assert len(frame) == 5

    def test_block_summary(self, two_repair_db):
        summary = two_repair_db.block_summary().set_index("relation")
        assert summary.loc["R", "blocks"] == 3
        assert summary.loc["R", "max_block"] == 2
        assert summary.loc["R", "conflicts"] == 1
        assert summary.loc["X", "conflicts"] == 0

    def test_block_summary_empty(self):
        assert Instance().block_summary().empty

    def test_facts_from_frame(self):
        frame = pd.DataFrame({"relation": ["R"], "key": ["a"], "value": ["b"]})
        assert facts_from_frame(frame) == instance_of("R(a,b)")

    def test_facts_from_frame_missing_column(self):
        frame = pd.DataFrame({"relation": ["R"], "key": ["a"]})
        with pytest.raises(FactParseError, match="value"):
            facts_from_frame(frame)


class TestFiles:
    """Test cases for loading and saving instances."""

    def test_load_fact_file(self, temp_fact_files, two_repair_db):
        assert load_instance(temp_fact_files["two_repair"]) == two_repair_db

    def test_load_csv_file(self, temp_fact_files, two_repair_db):
        assert load_instance(temp_fact_files["two_repair_csv"]) == two_repair_db

    def test_load_file_with_comment(self, temp_fact_files):
        assert load_instance(temp_fact_files["rr"]) == instance_of("R(a,b)", "R(a,c)")

    def test_load_malformed_file(self, temp_fact_files):
        with pytest.raises(FactParseError) as exc:
            load_instance(temp_fact_files["malformed"])
        assert exc.value.line_number == 2

    def test_load_missing_file(self, temp_fact_files):
        with pytest.raises(FileNotFoundError):
            load_instance(temp_fact_files["nonexistent"])

    def test_save_and_load(self, temp_fact_files, arrx_db):
        path = Path(temp_fact_files["temp_dir"]) / "copy.facts"
        save_instance(arrx_db, path)
        assert load_instance(path) == arrx_db
