"""
Test suite for fo_rewriting.py.
"""

import sys
from pathlib import Path

import pytest

# Add the parent directory to the path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from errors import EmptyQueryError, UnboundVariableError
from fo_rewriting import (
    build_fixed_head_rewriting,
    build_fo_rewriting,
    build_unary_rewriting,
    eval_fo,
    free_variables,
    quantifier_depth,
    render,
    satisfying_constants,
)
from instance import instance_of
from oracle import certain_bruteforce
from words import Tier, parse_word

RR_REWRITING = "E x1.((E x2.(R(x1,x2)) & A x2.((R(x1,x2) -> E x3.(R(x2,x3))))))"


def w(text):
    return parse_word(text)


class TestBuild:
    """Test cases for building and rendering rewritings."""

    def test_render_rr(self):
        assert render(build_fo_rewriting(w("RR"))) == RR_REWRITING

    def test_render_single_atom(self):
        assert render(build_fo_rewriting(w("R"))) == "E x1.(E x2.(R(x1,x2)))"

    def test_fixed_head_render(self):
        text = render(build_fixed_head_rewriting(w("R"), "c"))
        assert text == 'E x1.((x1 = "c" & E x2.(R(x1,x2))))'

    def test_unary_has_one_free_variable(self):
        assert free_variables(build_unary_rewriting(w("RXRX"))) == frozenset({"x1"})

    def test_sentence_has_no_free_variables(self):
        assert free_variables(build_fo_rewriting(w("RXRX"))) == frozenset()

    def test_quantifier_depth_grows_with_length(self):
        assert quantifier_depth(build_fo_rewriting(w("RR"))) == 3
        assert quantifier_depth(build_fo_rewriting(w("RRR"))) == 4

    def test_empty_query_rejected(self):
        with pytest.raises(EmptyQueryError):
            build_unary_rewriting(())


class TestEvaluate:
    """Test cases for eval_fo and satisfying_constants."""

    def test_rr_on_full_grid(self, grid_db):
        assert eval_fo(build_fo_rewriting(w("RR")), grid_db)
        assert satisfying_constants(build_unary_rewriting(w("RR")), grid_db) == frozenset({"a", "b"})

    def test_rr_false_when_a_branch_dies(self):
        db = instance_of("R(a,b)", "R(a,c)", "R(b,d)")
        assert not eval_fo(build_fo_rewriting(w("RR")), db)
        assert satisfying_constants(build_unary_rewriting(w("RR")), db) == frozenset()

    def test_fixed_head(self):
        db = instance_of("R(a,b)", "R(b,c)", "R(d,e)")
        formula = build_fixed_head_rewriting(w("RR"), "a")
        assert eval_fo(formula, db)
        assert not eval_fo(build_fixed_head_rewriting(w("RR"), "d"), db)

    def test_unbound_variable(self, grid_db):
        with pytest.raises(UnboundVariableError) as exc:
            eval_fo(build_unary_rewriting(w("RR")), grid_db)
        assert exc.value.variable == "x1"

    def test_empty_instance(self):
        assert not eval_fo(build_fo_rewriting(w("R")), instance_of())

    def test_rewriting_agrees_with_oracle(self, agreement_pairs):
        for q, db in agreement_pairs(Tier.FO):
            expected = certain_bruteforce(db, q).certain
            assert eval_fo(build_fo_rewriting(q), db) == expected, (q, db)
