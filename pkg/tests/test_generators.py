"""
Test suite for generators.py.
"""

import sys
from pathlib import Path

import networkx as nx
import pytest

# Add the parent directory to the path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from errors import PreconditionError
from generators import (
    all_cnfs,
    all_dags,
    make_rng,
    random_c_word,
    random_circuit,
    random_cnf,
    random_dag,
    random_generalized_query,
    random_instance,
    random_word,
    sample_pairs,
)
from words import Tier, classify


class TestWords:
    """Test cases for word sampling."""

    def test_same_seed_same_words(self):
        a, b = make_rng(7), make_rng(7)
        assert [random_word(a, "RSX", 5) for _ in range(10)] == [random_word(b, "RSX", 5) for _ in range(10)]

    def test_lengths_in_range(self, rng):
        for _ in range(50):
            q = random_word(rng, ("R", "S"), 4, min_len=2)
            assert 2 <= len(q) <= 4
            assert set(q) <= {"R", "S"}

    @pytest.mark.parametrize("tier", list(Tier))
    def test_c_word_has_requested_tier(self, rng, tier):
        assert classify(random_c_word(rng, tier)).tier is tier

    def test_c_word_gives_up(self, rng):
        with pytest.raises(PreconditionError):
            random_c_word(rng, Tier.CONP_COMPLETE, alphabet=("R",), max_len=3, attempts=20)


class TestInstances:
    """Test cases for random_instance."""

    def test_blocks_bounded_and_values_distinct(self, rng):
        for _ in range(30):
            db = random_instance(rng, ["R", "X"], constants=4, max_blocks=6, max_block_size=2)
            blocks = db.blocks()
            assert 1 <= len(blocks) <= 6
            for block in blocks:
                assert 1 <= len(block) <= 2
                assert len({f.value for f in block.members}) == len(block)
            assert db.relations <= {"R", "X"}
            assert db.adom <= {f"c{i}" for i in range(4)}


class TestGeneralizedQueries:
    """Test cases for random_generalized_query."""

    def test_constants_not_repeated(self, rng):
        for _ in range(50):
            q = random_generalized_query(rng)
            assert len(q.constants) == len(set(q.constants))
            assert len(q.junctions) == len(q.relations) + 1


class TestReductionInputs:
    """Test cases for graph, formula and circuit generators."""

    def test_random_dag_is_acyclic(self, rng):
        for _ in range(20):
            g = random_dag(rng, vertices=6, edge_probability=0.5)
            graph = nx.DiGraph(list(g.edges))
            graph.add_nodes_from(g.vertices)
            assert nx.is_directed_acyclic_graph(graph)
            assert g.s in g.vertices and g.t in g.vertices

    def test_all_dags_count(self):
        # one possible edge, two masks, four (s, t) choices
        assert len(list(all_dags(2))) == 8

    def test_all_cnfs_count(self):
        # 26 possible clauses over three variables
        formulas = list(all_cnfs(3, 2))
        assert len(formulas) == 26 + 26 * 25 // 2
        assert all(len(set(f.clauses)) == len(f.clauses) for f in formulas)

    def test_random_cnf_shape(self, rng):
        f = random_cnf(rng, variables=4, clauses=5, max_width=2)
        assert f.variables == ("1", "2", "3", "4")
        assert len(f.clauses) == 5
        for clause in f.clauses:
            assert 1 <= len(clause) <= 2
            assert len({lit.variable for lit in clause}) == len(clause)

    def test_random_circuit_output_is_last_gate(self, rng):
        c = random_circuit(rng, inputs=2, gates=4)
        assert c.output == c.gates[-1].name
        assert len(c.gates) == 4

    def test_random_circuit_needs_gate(self, rng):
        with pytest.raises(PreconditionError):
            random_circuit(rng, gates=0)


class TestSamplePairs:
    """Test cases for sample_pairs."""

    def test_instances_use_word_relations(self, rng):
        pairs = list(sample_pairs(rng, Tier.NL_COMPLETE, 5, constants=3, max_blocks=4, max_block_size=2))
        assert len(pairs) == 5
        for q, db in pairs:
            assert classify(q).tier is Tier.NL_COMPLETE
            assert db.relations <= set(q)
