"""
Pytest configuration and shared fixtures for the test suite.

This file contains the worked instances used across test modules, temporary
fact files, a seeded random generator and the marker hooks.
"""

import os
import shutil
import sys
import tempfile
from pathlib import Path

import pytest

# Add the parent directory to the path to import modules
sys.path.insert(0, str(Path(__file__).parent.parent))

from generators import make_rng, sample_pairs
from instance import instance_of, save_instance

AGREEMENT_PAIRS = 500


@pytest.fixture
def grid_db():
    """R and S each over {a,b} x {a,b}: four blocks of two facts."""
    return instance_of(
        "R(a,a)", "R(a,b)", "R(b,a)", "R(b,b)",
        "S(a,a)", "S(a,b)", "S(b,a)", "S(b,b)",
    )


@pytest.fixture
def two_repair_db():
    """Instance with two repairs, both satisfying RRX."""
    return instance_of("R(0,1)", "R(1,2)", "R(1,3)", "R(2,3)", "X(3,4)")


@pytest.fixture
def ladder_db():
    """R-ladder over 0..4 ending in X(4,5); every repair satisfies RRX."""
    return instance_of("R(0,1)", "R(1,2)", "R(2,3)", "R(1,4)", "R(2,4)", "R(3,4)", "X(4,5)")


@pytest.fixture
def arrx_db():
    """Certain-false for ARRX: the repair with R(2,5) has no ARRX path."""
    return instance_of("A(0,1)", "R(1,2)", "R(2,3)", "X(3,4)", "R(2,5)", "R(5,6)", "X(6,7)")


@pytest.fixture
def rxry_yes_db():
    return instance_of("R(a,b)", "X(b,c)", "R(c,d)", "Y(d,e)")


@pytest.fixture
def rxry_no_db():
    return instance_of("R(a,b)", "X(b,c)", "R(c,d)", "R(c,e)", "Y(d,f)")


@pytest.fixture
def rng():
    """Fixture providing a seeded numpy Generator."""
    return make_rng(0)


@pytest.fixture
def agreement_pairs(rng):
    """
    Factory for the oracle agreement workloads.

    Words up to length 6, instances with at most 10 blocks of at most 3 facts.
    """
    def sample(tier, count=AGREEMENT_PAIRS, alphabet=("R", "S", "X")):
        return sample_pairs(rng, tier, count, alphabet=alphabet, max_len=6,
                            constants=5, max_blocks=10, max_block_size=3)
    return sample


@pytest.fixture
def temp_fact_files(two_repair_db, arrx_db):
    """Fixture providing temporary fact, CSV and reduction input files."""
    temp_dir = tempfile.mkdtemp()

    two_repair_path = os.path.join(temp_dir, "two_repair.facts")
    save_instance(two_repair_db, two_repair_path)

    arrx_path = os.path.join(temp_dir, "arrx.facts")
    save_instance(arrx_db, arrx_path)

    csv_path = os.path.join(temp_dir, "two_repair.csv")
    save_instance(two_repair_db, csv_path)

    rr_path = os.path.join(temp_dir, "rr.facts")
    with open(rr_path, "w") as f:
        f.write("# two conflicting R-facts\nR(a,b)\nR(a,c)\n")

    malformed_path = os.path.join(temp_dir, "malformed.facts")
    with open(malformed_path, "w") as f:
        f.write("R(a,b)\nR(a b)\n")

    graph_path = os.path.join(temp_dir, "graph.txt")
    with open(graph_path, "w") as f:
        f.write("s=s t=t\ns a\na t\n")

    cnf_path = os.path.join(temp_dir, "formula.cnf")
    with open(cnf_path, "w") as f:
        f.write("c (x1 or not x2) and (x2 or not x3)\np cnf 3 2\n1 -2 0\n2 -3 0\n")

    circuit_path = os.path.join(temp_dir, "circuit.txt")
    with open(circuit_path, "w") as f:
        f.write("x1 INPUT 1\nx2 INPUT 0\no OR x1 x2\nOUTPUT o\n")

    yield {
        "temp_dir": temp_dir,
        "two_repair": two_repair_path,
        "arrx": arrx_path,
        "two_repair_csv": csv_path,
        "rr": rr_path,
        "malformed": malformed_path,
        "graph": graph_path,
        "cnf": cnf_path,
        "circuit": circuit_path,
        "nonexistent": os.path.join(temp_dir, "does_not_exist.facts"),
    }

    # Cleanup
    shutil.rmtree(temp_dir)


# Pytest configuration hooks
def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line(
        "markers", "unit: mark test as a unit test"
    )
    config.addinivalue_line(
        "markers", "integration: mark test as an integration test"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow running"
    )
    config.addinivalue_line(
        "markers", "oracle: mark test as an agreement check against the brute-force oracle"
    )
    config.addinivalue_line(
        "markers", "reductions: mark test as a hardness reduction check"
    )


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers based on test names."""
    for item in items:
        name = item.name.lower()
        if "oracle" in name or "agree" in name:
            item.add_marker(pytest.mark.oracle)
        if "reduction" in name:
            item.add_marker(pytest.mark.reductions)
        if "integration" in name or "cli" in item.nodeid.lower():
            item.add_marker(pytest.mark.integration)
        if "exhaustive" in name:
            item.add_marker(pytest.mark.slow)

        # Default to unit test if no other marker
        if not any(marker.name in ["integration", "slow"] for marker in item.iter_markers()):
            item.add_marker(pytest.mark.unit)
