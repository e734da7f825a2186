"""
NL Solver Module

Certain answers for words satisfying C2. The word is aligned as

    q = s · t^m · z

where t is self-join-free, s is a proper suffix of t, the stem s·t^m is
longer than t and z is the non-periodic tail. Then db is a yes-instance
iff some constant c has ¬O(c), where

    O(c) :  c is terminal for the stem, or a consistent stem-path leads
            from c to some d with P(d)
    P(d) :  a walk of t-steps d = d0, d1, ..., dl over constants that are
            terminal for z ends in a constant terminal for t or revisits
            one of the di
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Optional, Sequence, Set, Tuple

import networkx as nx

from errors import EmptyQueryError, FallbackRequired, PreconditionError
from fo_rewriting import build_unary_rewriting, satisfying_constants
from instance import Instance
from search import fixed_head_certain
from words import BWitness, Form, Word, decompose, format_word, satisfies_c1, satisfies_c2

logger = logging.getLogger(__name__)

_SINK = ("__sink__",)


@dataclass(frozen=True)
class NlWitness:
    """A B2A/B2B witness together with the alignment q = s·t^m·z it induces."""

    witness: BWitness
    s: Word
    t: Word
    m: int
    z: Word

    @property
    def stem(self) -> Word:
        return self.s + self.t * self.m

    def __str__(self) -> str:
        return (f"{self.witness.form.value} s={format_word(self.s)} t={format_word(self.t)} "
                f"m={self.m} z={format_word(self.z)}")


def _alignment(q: Word, witness: BWitness) -> Optional[NlWitness]:
    n = len(q)
    if witness.form is Form.B2A:
        t = witness.u
        region = witness.j * len(t)
    elif witness.form is Form.B2B:
        t = witness.u + witness.v
        region = witness.k * len(t)
    else:
        return None
    if not t:
        return None
    stem_len = max(0, min(n, region - witness.offset))
    if stem_len <= len(t) or stem_len == n:
        return None
    m, rest = divmod(stem_len, len(t))
    aligned = NlWitness(witness, q[:rest], t, m, q[stem_len:])
    if aligned.stem + aligned.z != q:
        return None
    return aligned


def select_nl_witness(q: Sequence[str]) -> Optional[NlWitness]:
    """Usable alignment with the smallest repetition counts, or None."""
    q = tuple(q)
    witnesses = sorted(
        decompose(q, (Form.B2A, Form.B2B)),
        key=lambda w: (w.k, w.j, w.form is not Form.B2A, w.u, w.v, w.w, w.offset),
    )
    for witness in witnesses:
        aligned = _alignment(q, witness)
        if aligned is not None:
            return aligned
    return None


# ---------------------------------------------------------------------------
# Terminal constants
# ---------------------------------------------------------------------------

def is_terminal(db: Instance, q: Sequence[str], c: str) -> bool:
    """
    Whether some consistent path from c with a proper prefix of q as trace
    cannot be right-extended to a consistent path with trace q.

    Equivalent to q with head c not being certain.
    """
    return not fixed_head_certain(db, q, c)


def terminal_constants(db: Instance, q: Sequence[str]) -> FrozenSet[str]:
    q = tuple(q)
    if not q:
        return frozenset()
    if satisfies_c1(q):
        return frozenset(db.adom) - satisfying_constants(build_unary_rewriting(q), db)
    return frozenset(c for c in db.adom if is_terminal(db, q, c))


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------

def path_ends(db: Instance, start: str, trace: Sequence[str]) -> Set[str]:
    """Constants reachable from `start` by some path with the given trace."""
    current = {start}
    for symbol in trace:
        current = {d for c in current for d in db.successors(symbol, c)}
        if not current:
            break
    return current


def consistent_path_ends(db: Instance, start: str, trace: Sequence[str]) -> Set[str]:
    """Endpoints of consistent paths (no two distinct key-equal facts) from `start`."""
    trace = tuple(trace)
    ends: Set[str] = set()

    def walk(constant: str, position: int, chosen: Dict[Tuple[str, str], str]) -> None:
        if position == len(trace):
            ends.add(constant)
            return
        relation = trace[position]
        fixed = chosen.get((relation, constant))
        options = [fixed] if fixed is not None else db.successors(relation, constant)
        for value in options:
            if fixed is None:
                walk(value, position + 1, {**chosen, (relation, constant): value})
            else:
                walk(value, position + 1, chosen)

    walk(start, 0, {})
    return ends


# ---------------------------------------------------------------------------
# Predicates P and O
# ---------------------------------------------------------------------------

def p_graph(db: Instance, aligned: NlWitness) -> nx.DiGraph:
    """t-steps between constants terminal for z."""
    z_terminal = terminal_constants(db, aligned.z)
    graph = nx.DiGraph()
    graph.add_nodes_from(sorted(z_terminal))
    for d in z_terminal:
        for e in path_ends(db, d, aligned.t):
            if e in z_terminal:
                graph.add_edge(d, e)
    return graph


def p_constants(db: Instance, aligned: NlWitness) -> FrozenSet[str]:
    graph = p_graph(db, aligned)
    t_terminal = terminal_constants(db, aligned.t)
    good = {d for d in graph.nodes if d in t_terminal}
    good.update(nx.nodes_with_selfloops(graph))
    for component in nx.strongly_connected_components(graph):
        if len(component) > 1:
            good.update(component)
    graph.add_node(_SINK)
    graph.add_edges_from((d, _SINK) for d in good)
    return frozenset(nx.ancestors(graph, _SINK))


@dataclass(frozen=True)
class NlResult:
    answer: bool
    witness: Optional[str]
    alignment: Optional[NlWitness]
    o_constants: FrozenSet[str]


def o_constants(db: Instance, aligned: NlWitness) -> FrozenSet[str]:
    stem_terminal = terminal_constants(db, aligned.stem)
    p_holds = p_constants(db, aligned)
    result = set(stem_terminal)
    for c in db.adom:
        if c in result:
            continue
        if consistent_path_ends(db, c, aligned.stem) & p_holds:
            result.add(c)
    return frozenset(result)


def nl_run(db: Instance, q: Sequence[str]) -> NlResult:
    """
    Run the NL procedure and report the alignment and the O-constants.

    Raises:
        PreconditionError: q violates C2
        FallbackRequired: no B2A/B2B witness yields a usable alignment
    """
    q = tuple(q)
    if not q:
        raise EmptyQueryError("nl_solve")
    if not satisfies_c2(q):
        raise PreconditionError(f"{format_word(q)} violates C2; the NL procedure does not apply")

    if satisfies_c1(q):
        heads = satisfying_constants(build_unary_rewriting(q), db)
        witness = min(heads) if heads else None
        return NlResult(bool(heads), witness, None, frozenset(db.adom) - heads)

    aligned = select_nl_witness(q)
    if aligned is None:
        raise FallbackRequired(f"no usable B2A/B2B alignment for {format_word(q)}")
    logger.debug("nl alignment for %s: %s", format_word(q), aligned)

    blocked = o_constants(db, aligned)
    free = sorted(set(db.adom) - blocked)
    return NlResult(bool(free), free[0] if free else None, aligned, blocked)


def nl_solve(db: Instance, q: Sequence[str]) -> bool:
    return nl_run(db, q).answer
