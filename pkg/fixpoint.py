"""
Fixpoint Solver Module

Polynomial-time algorithm for words satisfying C3. The relation N holds
pairs (c, u) with u a prefix of q, meaning every repair has a path from c
accepted by NFA(q) started in state u. Stored as (constant, len(u)).
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Sequence, Set, Tuple

from automata import QueryNfa
from errors import EmptyQueryError, PreconditionError
from instance import Instance
from words import Word, format_word, satisfies_c3

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FixpointTable:
    query: Word
    pairs: FrozenSet[Tuple[str, int]]

    def entries(self) -> Set[Tuple[str, Word]]:
        return {(c, self.query[:i]) for c, i in self.pairs}

    def constants_at(self, prefix_length: int) -> FrozenSet[str]:
        return frozenset(c for c, i in self.pairs if i == prefix_length)

    def __contains__(self, item: Tuple[str, Sequence[str]]) -> bool:
        c, prefix = item
        prefix = tuple(prefix)
        return self.query[:len(prefix)] == prefix and (c, len(prefix)) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)


def fixpoint_run(db: Instance, q: Sequence[str]) -> FixpointTable:
    """
    Least fixpoint of the iterative rule, evaluated with a worklist.

    If every fact of a non-empty block R(c,*) leads to a constant y with
    (y, uR) in N, then (c, u) is added, together with (c, w) for every
    backward ε-transition w -> u of NFA(q).
    """
    q = tuple(q)
    if not q:
        raise EmptyQueryError("fixpoint_run")
    nfa = QueryNfa(q)
    n = len(q)
    table: Set[Tuple[str, int]] = set()
    work = deque()

    def add(pair: Tuple[str, int]) -> None:
        if pair not in table:
            table.add(pair)
            work.append(pair)

    for c in sorted(db.adom):
        add((c, n))

    while work:
        y, i = work.popleft()
        if i == 0:
            continue
        relation = q[i - 1]
        for c in db.predecessors(relation, y):
            if (c, i - 1) in table:
                continue
            if all((value, i) in table for value in db.successors(relation, c)):
                add((c, i - 1))
                for j in nfa.epsilon_sources(i - 1):
                    add((c, j))

    logger.debug("fixpoint for %s: %d pairs over %d constants",
                 format_word(q), len(table), len(db.adom))
    return FixpointTable(q, frozenset(table))


def fixpoint_solve(db: Instance, q: Sequence[str]) -> bool:
    """Certain answer for a C3 word: true iff some (c, ε) is derived."""
    q = tuple(q)
    if not q:
        raise EmptyQueryError("fixpoint_solve")
    if not satisfies_c3(q):
        raise PreconditionError(f"{format_word(q)} violates C3; the fixpoint is not exact")
    return bool(fixpoint_run(db, q).constants_at(0))
