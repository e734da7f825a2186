"""
Test suite for nl_solver.py.

Covers the alignment q = s·t^m·z, terminal constants, the P and O
predicates and the decision on the worked instances.
"""

import sys
from pathlib import Path

import pytest

# Add the parent directory to the path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from errors import EmptyQueryError, FallbackRequired, PreconditionError
from instance import instance_of
from nl_solver import (
    consistent_path_ends,
    is_terminal,
    nl_run,
    nl_solve,
    path_ends,
    select_nl_witness,
    terminal_constants,
)
from oracle import certain_bruteforce
from words import Tier, parse_word


def w(text):
    return parse_word(text)


class TestAlignment:
    """Test cases for select_nl_witness."""

    def test_rrx(self):
        aligned = select_nl_witness(w("RRX"))
        assert (aligned.s, aligned.t, aligned.m, aligned.z) == ((), ("R",), 2, ("X",))
        assert aligned.stem == w("RR")

    @pytest.mark.parametrize("text", ["RRX", "RXRY", "UVUVWV"])
    def test_alignment_rebuilds_query(self, text):
        aligned = select_nl_witness(w(text))
        assert aligned is not None
        assert aligned.stem + aligned.z == w(text)
        assert len(aligned.stem) > len(aligned.t)
        assert len(set(aligned.t)) == len(aligned.t)

    def test_str(self):
        assert str(select_nl_witness(w("RRX"))) == "B2A s=ε t=R m=2 z=X"


class TestTerminal:
    """Test cases for terminal constants."""

    def test_dead_ends_are_terminal(self):
        db = instance_of("R(a,b)")
        assert terminal_constants(db, w("RR")) == frozenset({"a", "b"})

    def test_cycle_is_not_terminal(self):
        db = instance_of("R(a,b)", "R(b,c)", "R(c,c)")
        assert terminal_constants(db, w("RR")) == frozenset()

    def test_conflicting_block_makes_terminal(self):
        db = instance_of("R(a,b)", "R(a,c)", "X(b,d)")
        assert is_terminal(db, w("RX"), "a")
        assert not is_terminal(db.without(*instance_of("R(a,c)")), w("RX"), "a")

    def test_empty_word_has_no_terminals(self, two_repair_db):
        assert terminal_constants(two_repair_db, ()) == frozenset()


class TestPaths:
    """Test cases for path_ends and consistent_path_ends."""

    def test_path_ends(self, two_repair_db):
        assert path_ends(two_repair_db, "0", w("RR")) == {"2", "3"}
        assert path_ends(two_repair_db, "0", w("X")) == set()

    def test_consistent_paths_reuse_block_choice(self):
        db = instance_of("R(a,a)", "R(a,b)")
        assert path_ends(db, "a", w("RR")) == {"a", "b"}
        assert consistent_path_ends(db, "a", w("RR")) == {"a"}
        assert consistent_path_ends(db, "a", w("R")) == {"a", "b"}

    def test_consistent_path_cannot_switch_fact(self):
        db = instance_of("R(a,b)", "R(a,c)", "X(b,a)", "X(c,a)")
        assert path_ends(db, "a", w("RXR")) == {"b", "c"}
        assert consistent_path_ends(db, "a", w("RXR")) == {"b", "c"}
        assert consistent_path_ends(db, "a", w("RXRX")) == {"a"}


class TestNlSolve:
    """Test cases for nl_run and nl_solve."""

    def test_two_repair_instance(self, two_repair_db):
        assert nl_solve(two_repair_db, w("RRX"))

    def test_rxry_yes_and_no(self, rxry_yes_db, rxry_no_db):
        assert nl_solve(rxry_yes_db, w("RXRY"))
        assert not nl_solve(rxry_no_db, w("RXRY"))

    def test_witness_is_certain_head(self, two_repair_db):
        result = nl_run(two_repair_db, w("RRX"))
        assert result.witness is not None
        assert result.witness not in result.o_constants
        assert result.alignment is not None

    def test_c1_word_uses_rewriting(self, grid_db):
        result = nl_run(grid_db, w("RR"))
        assert result.answer
        assert result.alignment is None

    def test_rejects_non_c2(self, ladder_db):
        with pytest.raises(PreconditionError):
            nl_run(ladder_db, w("RXRYRY"))

    def test_empty_query(self, two_repair_db):
        with pytest.raises(EmptyQueryError):
            nl_run(two_repair_db, ())

    def test_no_alignment_requests_fallback(self, two_repair_db, mocker):
        mocker.patch("nl_solver.select_nl_witness", return_value=None)
        with pytest.raises(FallbackRequired):
            nl_run(two_repair_db, w("RRX"))

    @pytest.mark.parametrize("text", ["RRX", "RXRY"])
    def test_agrees_with_oracle_on_perturbations(self, text, rxry_no_db, two_repair_db):
        q = w(text)
        for db in (two_repair_db, rxry_no_db, two_repair_db.union(rxry_no_db)):
            if set(q) & db.relations:
                assert nl_solve(db, q) == certain_bruteforce(db, q).certain

    def test_generated_nl_pairs_agree_with_oracle(self, agreement_pairs):
        for q, db in agreement_pairs(Tier.NL_COMPLETE):
            result = nl_run(db, q)
            assert result.alignment is not None, q
            assert result.answer == certain_bruteforce(db, q).certain, (q, db)
