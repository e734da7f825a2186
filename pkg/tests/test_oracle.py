"""
Test suite for oracle.py.

Covers BCQ parsing and evaluation, brute-force certain answers, states sets
and the minimal repair.
"""

import sys
from pathlib import Path

import pytest

# Add the parent directory to the path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from automata import start_set
from errors import PreconditionError, QueryParseError, RepairCapExceeded
from generators import sample_pairs
from instance import Fact, instance_of
from oracle import (
    all_min_states_sets,
    build_minimal_repair,
    certain_bruteforce,
    common_start_set,
    const,
    find_falsifying_repair,
    fixed_head_bcq,
    min_states_set,
    parse_bcq,
    path_bcq,
    path_heads,
    satisfies_bcq,
    satisfies_word,
    states_set,
    var,
)
from words import Tier, parse_word


def w(text):
    return parse_word(text)


class TestParseBcq:
    """Test cases for the BCQ syntax."""

    def test_variables_and_constants(self):
        q = parse_bcq('R(x,y), S(y,"a")')
        assert len(q.atoms) == 2
        assert q.atoms[1].right == const("a")
        assert q.variables == frozenset({"x", "y"})

    def test_single_quotes(self):
        assert parse_bcq("R(x,'0')").atoms[0].right == const("0")

    def test_str_round_trip(self):
        text = 'R(x,y),S(y,"a")'
        assert str(parse_bcq(text)) == text

    def test_uppercase_term_rejected(self):
        with pytest.raises(QueryParseError):
            parse_bcq("R(X,y)")

    def test_missing_parenthesis(self):
        with pytest.raises(QueryParseError):
            parse_bcq("R(x,y")

    def test_empty_text(self):
        with pytest.raises(QueryParseError):
            parse_bcq("  ")

    def test_bad_character_offset(self):
        with pytest.raises(QueryParseError) as exc:
            parse_bcq("R(x,y) ; S(y,z)")
        assert exc.value.offset == 7

    def test_path_bcq(self):
        assert str(path_bcq(w("RX"))) == "R(x1,x2),X(x2,x3)"

    def test_fixed_head_bcq(self):
        q = fixed_head_bcq(w("RX"), "c")
        assert q.atoms[0].left == const("c")
        assert q.atoms[1].left == var("x2")


class TestSatisfaction:
    """Test cases for query evaluation on a single instance."""

    def test_path_heads(self, rxry_yes_db):
        assert path_heads(rxry_yes_db, w("RXRY")) == frozenset({"a"})
        assert path_heads(rxry_yes_db, w("RY")) == frozenset({"c"})

    def test_satisfies_word_with_head(self, rxry_yes_db):
        assert satisfies_word(rxry_yes_db, w("RXRY"))
        assert satisfies_word(rxry_yes_db, w("RXRY"), head="a")
        assert not satisfies_word(rxry_yes_db, w("RXRY"), head="c")

    def test_bcq_with_join_back(self):
        db = instance_of("R(a,b)", "S(b,a)")
        assert satisfies_bcq(db, parse_bcq("R(x,y),S(y,x)"))
        assert not satisfies_bcq(db, parse_bcq("R(x,y),S(y,y)"))

    def test_bcq_with_constant(self, rxry_yes_db):
        assert satisfies_bcq(rxry_yes_db, parse_bcq('R(x,y),X(y,"c")'))
        assert not satisfies_bcq(rxry_yes_db, parse_bcq('R(x,y),X(y,"e")'))

    def test_bcq_agrees_with_word(self, rxry_yes_db):
        for text in ["RX", "RXRY", "XRY", "YR"]:
            assert satisfies_bcq(rxry_yes_db, path_bcq(w(text))) == satisfies_word(rxry_yes_db, w(text))


class TestCertainBruteforce:
    """Test cases for certain_bruteforce."""

    def test_two_repair_rrx_certain(self, two_repair_db):
        result = certain_bruteforce(two_repair_db, w("RRX"))
        assert result.certain
        assert result.repairs_checked == 2
        assert result.counterexample is None

    def test_arrx_counterexample(self, arrx_db):
        result = certain_bruteforce(arrx_db, w("ARRX"))
        assert not result.certain
        assert Fact("R", "2", "5") in result.counterexample
        assert result.counterexample.is_consistent()

    def test_rxry_instances(self, rxry_yes_db, rxry_no_db):
        assert certain_bruteforce(rxry_yes_db, w("RXRY")).certain
        assert not certain_bruteforce(rxry_no_db, w("RXRY")).certain

    def test_grid_rr_certain(self, grid_db):
        assert certain_bruteforce(grid_db, w("RR")).certain

    def test_bcq_query(self, two_repair_db):
        assert certain_bruteforce(two_repair_db, parse_bcq('R(x,y),X(y,"4")')).certain
        assert not certain_bruteforce(two_repair_db, parse_bcq('R("1",y),X(y,"4")')).certain

    def test_cap(self, grid_db):
        with pytest.raises(RepairCapExceeded):
            certain_bruteforce(grid_db, w("RS"), max_repairs=4)

    def test_find_falsifying_repair(self, arrx_db, two_repair_db):
        assert find_falsifying_repair(arrx_db, w("ARRX")) is not None
        assert find_falsifying_repair(two_repair_db, w("RRX")) is None


class TestStatesSets:
    """Test cases for states sets and the minimal repair."""

    def test_states_set_on_repair(self):
        repair = instance_of("R(0,1)", "R(1,2)", "R(2,3)", "X(3,4)")
        result = states_set(Fact("R", "0", "1"), repair, w("RRX"))
        assert result.states == frozenset({w("R"), w("RR")})
        assert result.shortest() == w("R")

    def test_states_set_requires_member(self):
        repair = instance_of("R(0,1)")
        with pytest.raises(PreconditionError):
            states_set(Fact("R", "5", "6"), repair, w("RR"))

    def test_min_states_set_two_repair(self, two_repair_db):
        assert min_states_set(Fact("R", "0", "1"), two_repair_db, w("RRX")).states == frozenset({w("R"), w("RR")})

    def test_min_states_sets_of_conflicting_block(self, two_repair_db):
        cs = all_min_states_sets(two_repair_db, w("RRX"))
        assert cs[Fact("R", "1", "2")] == frozenset({w("R"), w("RR")})
        assert cs[Fact("R", "1", "3")] == frozenset({w("RR")})

    def test_minimal_repair_two_repair(self, two_repair_db):
        minimal = build_minimal_repair(two_repair_db, w("RRX"))
        assert minimal == instance_of("R(0,1)", "R(1,3)", "R(2,3)", "X(3,4)")
        assert start_set(w("RRX"), minimal) == frozenset({"0"})

    def test_common_start_set(self, two_repair_db):
        assert common_start_set(two_repair_db, w("RRX")) == frozenset({"0"})

    def test_minimal_repair_start_is_contained_in_every_start(self, two_repair_db):
        minimal_start = start_set(w("RRX"), build_minimal_repair(two_repair_db, w("RRX")))
        for repair in two_repair_db.repairs():
            assert minimal_start <= start_set(w("RRX"), repair)

    @pytest.mark.parametrize("tier", [Tier.FO, Tier.NL_COMPLETE, Tier.PTIME_COMPLETE])
    def test_minimal_repair_on_generated_instances(self, rng, tier):
        for q, db in sample_pairs(rng, tier, 100, max_len=6, constants=5, max_blocks=8, max_block_size=3):
            minimal = build_minimal_repair(db, q)
            assert minimal.is_consistent()
            assert len(minimal) == len(db.blocks())
            assert minimal.facts <= db.facts
            common = common_start_set(db, q)
            assert start_set(q, minimal) == common, (q, db)
            # a C3 word is certain iff some constant starts an accepted path in every repair
            assert certain_bruteforce(db, q).certain == bool(common), (q, db)
