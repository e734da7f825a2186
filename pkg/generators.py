"""
Random Generators Module

Seeded workloads for the agreement suites and the `gen` command: words,
inconsistent instances, generalized queries, and inputs for the three
reductions. Every function takes a numpy Generator so runs are reproducible.
"""

import itertools
import logging
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_SEED
from errors import PreconditionError
from genqueries import GeneralizedPathQuery
from instance import Fact, Instance
from reductions import Cnf, Digraph, Gate, Literal, MonotoneCircuit
from words import Tier, Word, classify, format_word

logger = logging.getLogger(__name__)


def make_rng(seed: Optional[int] = None) -> np.random.Generator:
    return np.random.default_rng(DEFAULT_SEED if seed is None else seed)


def _pick(rng: np.random.Generator, items: Sequence[str]) -> str:
    return str(items[int(rng.integers(len(items)))])


def random_word(rng: np.random.Generator, alphabet: Sequence[str], max_len: int, min_len: int = 1) -> Word:
    length = int(rng.integers(min_len, max_len + 1))
    return tuple(_pick(rng, alphabet) for _ in range(length))


def random_c_word(
    rng: np.random.Generator,
    tier: Tier,
    alphabet: Sequence[str] = ("R", "S", "X"),
    max_len: int = 6,
    attempts: int = 2000,
) -> Word:
    """Rejection-sample a word of the given tier."""
    tier = Tier(tier)
    for _ in range(attempts):
        q = random_word(rng, alphabet, max_len)
        if classify(q).tier is tier:
            return q
    raise PreconditionError(f"no {tier.value} word found in {attempts} attempts")


def random_instance(
    rng: np.random.Generator,
    relations: Sequence[str],
    constants: int = 5,
    max_blocks: int = 10,
    max_block_size: int = 3,
) -> Instance:
    """
    Up to `max_blocks` blocks over `relations` and constants c0..c{n-1}.

    Block sizes are drawn from 1..max_block_size; values inside a block are
    distinct.
    """
    pool = [f"c{i}" for i in range(constants)]
    facts: List[Fact] = []
    seen = set()
    for _ in range(int(rng.integers(1, max_blocks + 1))):
        relation, key = _pick(rng, relations), _pick(rng, pool)
        if (relation, key) in seen:
            continue
        seen.add((relation, key))
        size = int(rng.integers(1, min(max_block_size, len(pool)) + 1))
        values = rng.choice(len(pool), size=size, replace=False)
        facts += [Fact(relation, key, pool[int(v)]) for v in values]
    return Instance(facts)


def random_generalized_query(
    rng: np.random.Generator,
    alphabet: Sequence[str] = ("R", "S", "T"),
    max_len: int = 4,
    constants: Sequence[str] = ("c0", "c1", "c2"),
    constant_probability: float = 0.3,
) -> GeneralizedPathQuery:
    relations = random_word(rng, alphabet, max_len)
    unused = list(constants)
    junctions: List[Optional[str]] = []
    for _ in range(len(relations) + 1):
        if unused and rng.random() < constant_probability:
            junctions.append(unused.pop(int(rng.integers(len(unused)))))
        else:
            junctions.append(None)
    return GeneralizedPathQuery(relations, tuple(junctions))


def random_dag(rng: np.random.Generator, vertices: int = 5, edge_probability: float = 0.4) -> Digraph:
    """Edges only go from lower to higher index, so the graph is acyclic."""
    names = [f"v{i}" for i in range(vertices)]
    edges = frozenset(
        (names[i], names[j])
        for i, j in itertools.combinations(range(vertices), 2)
        if rng.random() < edge_probability
    )
    return Digraph(frozenset(names), edges, _pick(rng, names), _pick(rng, names))


def all_dags(vertices: int) -> Iterator[Digraph]:
    """Every forward-edge graph on v0..v{n-1} with every choice of s and t."""
    names = [f"v{i}" for i in range(vertices)]
    pairs = list(itertools.combinations(names, 2))
    for mask in range(1 << len(pairs)):
        edges = frozenset(p for bit, p in enumerate(pairs) if mask >> bit & 1)
        for s, t in itertools.product(names, repeat=2):
            yield Digraph(frozenset(names), edges, s, t)


def random_cnf(rng: np.random.Generator, variables: int = 3, clauses: int = 3, max_width: int = 3) -> Cnf:
    names = tuple(str(i) for i in range(1, variables + 1))
    result = []
    for _ in range(clauses):
        width = int(rng.integers(1, min(max_width, variables) + 1))
        chosen = rng.choice(variables, size=width, replace=False)
        result.append(tuple(Literal(names[int(v)], bool(rng.random() < 0.5)) for v in chosen))
    return Cnf(names, tuple(result))


def all_cnfs(variables: int, max_clauses: int) -> Iterator[Cnf]:
    """Every formula of 1..max_clauses distinct clauses, each mentioning a variable at most once."""
    names = tuple(str(i) for i in range(1, variables + 1))
    clauses = []
    for signs in itertools.product((None, True, False), repeat=variables):
        clause = tuple(Literal(name, sign) for name, sign in zip(names, signs) if sign is not None)
        if clause:
            clauses.append(clause)
    for count in range(1, max_clauses + 1):
        for chosen in itertools.combinations(clauses, count):
            yield Cnf(names, chosen)


def random_circuit(rng: np.random.Generator, inputs: int = 3, gates: int = 3) -> MonotoneCircuit:
    """Random gates over earlier nodes; the last gate is the output."""
    if gates < 1:
        raise PreconditionError("a circuit needs at least one gate")
    names = [f"x{i + 1}" for i in range(inputs)]
    assignment = tuple((name, bool(rng.random() < 0.5)) for name in names)
    built: List[Gate] = []
    nodes = list(names)
    for index in range(gates):
        name = f"g{index + 1}"
        op = "AND" if rng.random() < 0.5 else "OR"
        built.append(Gate(name, op, _pick(rng, nodes), _pick(rng, nodes)))
        nodes.append(name)
    return MonotoneCircuit(assignment, tuple(built), built[-1].name)


def sample_pairs(
    rng: np.random.Generator,
    tier: Tier,
    count: int,
    alphabet: Sequence[str] = ("R", "S", "X"),
    max_len: int = 6,
    **instance_options,
) -> Iterator[Tuple[Word, Instance]]:
    """(word, instance) pairs with the word drawn from `tier` and the instance over its relations."""
    for _ in range(count):
        q = random_c_word(rng, tier, alphabet, max_len)
        db = random_instance(rng, sorted(set(q)), **instance_options)
        logger.debug("sampled %s with %d facts", format_word(q), len(db))
        yield q, db
