"""
Query Automaton Module

NFA(q) has one state per prefix of q, represented by the prefix length.
Forward transitions read q[i] from state i to i+1. Backward ε-transitions
lead from every prefix to every shorter non-empty prefix ending in the same
relation name.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import FrozenSet, Iterable, List, Sequence, Set, Tuple

from errors import InconsistentInstanceError, PreconditionError
from instance import Instance
from words import Word, format_word, is_prefix, rewind_all

logger = logging.getLogger(__name__)

State = int


@dataclass(frozen=True)
class QueryNfa:
    """NFA(q), optionally started at a prefix of q other than ε."""

    query: Word
    start: State = 0
    forward: Tuple[Tuple[State, str, State], ...] = field(init=False, repr=False)
    backward: Tuple[Tuple[State, State], ...] = field(init=False, repr=False)

    def __post_init__(self):
        q = self.query
        forward = tuple((i, q[i], i + 1) for i in range(len(q)))
        backward = tuple(
            (j, i)
            for j in range(2, len(q) + 1)
            for i in range(1, j)
            if q[j - 1] == q[i - 1]
        )
        object.__setattr__(self, "forward", forward)
        object.__setattr__(self, "backward", backward)

    @property
    def states(self) -> range:
        return range(len(self.query) + 1)

    @property
    def accepting(self) -> State:
        return len(self.query)

    def state_word(self, state: State) -> Word:
        return self.query[:state]

    def epsilon_targets(self, state: State) -> List[State]:
        """Shorter states reachable by one backward ε-transition."""
        if state == 0:
            return []
        last = self.query[state - 1]
        return [i for i in range(1, state) if self.query[i - 1] == last]

    def epsilon_sources(self, state: State) -> List[State]:
        """Longer states with a backward ε-transition into `state`."""
        if state == 0:
            return []
        last = self.query[state - 1]
        return [j for j in range(state + 1, len(self.query) + 1) if self.query[j - 1] == last]

    def closure(self, states: Iterable[State]) -> FrozenSet[State]:
        # A backward target of a backward target is itself a direct target.
        result = set(states)
        for state in list(result):
            result.update(self.epsilon_targets(state))
        return frozenset(result)

    def step(self, states: Iterable[State], symbol: str) -> FrozenSet[State]:
        moved = [s + 1 for s in states if s < len(self.query) and self.query[s] == symbol]
        return self.closure(moved)

    def initial_states(self) -> FrozenSet[State]:
        return self.closure([self.start])


def build_nfa(q: Sequence[str], start: Sequence[str] = ()) -> QueryNfa:
    """
    Build NFA(q) with initial state `start`.

    Args:
        q (Sequence[str]): The query word
        start (Sequence[str]): A prefix of q; ε gives NFA(q) itself

    Returns:
        QueryNfa: The automaton
    """
    q, start = tuple(q), tuple(start)
    if not is_prefix(start, q):
        raise PreconditionError(
            f"start state {format_word(start)} is not a prefix of {format_word(q)}"
        )
    return QueryNfa(q, len(start))


def accepts(nfa: QueryNfa, trace: Sequence[str]) -> bool:
    current = nfa.initial_states()
    for symbol in trace:
        current = nfa.step(current, symbol)
        if not current:
            return False
    return nfa.accepting in current


def accepts_min(nfa: QueryNfa, trace: Sequence[str]) -> bool:
    """Acceptance by NFA_min: accepted, with no proper prefix accepted."""
    current = nfa.initial_states()
    if nfa.accepting in current:
        return len(trace) == 0
    for index, symbol in enumerate(trace):
        current = nfa.step(current, symbol)
        if nfa.accepting in current:
            return index == len(trace) - 1
        if not current:
            return False
    return False


def closure_upto(q: Sequence[str], max_len: int) -> Set[Word]:
    """Words of the rewind closure of q with length at most max_len."""
    q = tuple(q)
    if max_len < len(q):
        raise PreconditionError(f"max_len {max_len} is shorter than the query")
    seen = {q}
    frontier = deque([q])
    while frontier:
        word = frontier.popleft()
        for rewound in rewind_all(word):
            if len(rewound) <= max_len and rewound not in seen:
                seen.add(rewound)
                frontier.append(rewound)
    return seen


def language_upto(nfa: QueryNfa, max_len: int) -> Set[Word]:
    """All traces of length at most max_len accepted by `nfa`."""
    alphabet = sorted(set(nfa.query))
    accepted: Set[Word] = set()
    stack: List[Tuple[Word, FrozenSet[State]]] = [((), nfa.initial_states())]
    while stack:
        word, current = stack.pop()
        if nfa.accepting in current:
            accepted.add(word)
        if len(word) == max_len:
            continue
        for symbol in alphabet:
            following = nfa.step(current, symbol)
            if following:
                stack.append((word + (symbol,), following))
    return accepted


def dump_edges(nfa: QueryNfa) -> str:
    """One `state label state` line per transition; ε-edges use the label ε."""
    lines = []
    for source, label, target in nfa.forward:
        lines.append(f"{format_word(nfa.state_word(source))} {label} "
                     f"{format_word(nfa.state_word(target))}")
    for source, target in nfa.backward:
        lines.append(f"{format_word(nfa.state_word(source))} ε "
                     f"{format_word(nfa.state_word(target))}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Automata on instances
# ---------------------------------------------------------------------------

def good_pairs(q: Word, r: Instance) -> Set[Tuple[str, State]]:
    """
    Pairs (c, i) such that a path in r from c is accepted by SNFA(q, q[:i]).

    Computed backwards from the accepting pairs (c, |q|).
    """
    n = len(q)
    good: Set[Tuple[str, State]] = set()
    work = deque()

    def add(pair):
        if pair not in good:
            good.add(pair)
            work.append(pair)

    for c in r.adom:
        add((c, n))
    nfa = QueryNfa(q)
    while work:
        d, j = work.popleft()
        if j > 0:
            for c in r.predecessors(q[j - 1], d):
                add((c, j - 1))
        # a path read from state i may take the ε-edge i -> j first
        for i in nfa.epsilon_sources(j) if j > 0 else ():
            add((d, i))
    return good


def _min_accepted_from(nfa: QueryNfa, r: Instance, c: str) -> bool:
    """Search (constant, state set) configurations, stopping at the first acceptance."""
    q = nfa.query
    seen = set()
    stack = [(c, nfa.initial_states())]
    while stack:
        constant, current = stack.pop()
        if nfa.accepting in current:
            return True
        config = (constant, current)
        if config in seen:
            continue
        seen.add(config)
        for symbol in {q[s] for s in current if s < len(q)}:
            following = nfa.step(current, symbol)
            if not following:
                continue
            for value in r.successors(symbol, constant):
                stack.append((value, following))
    return False


def start_set(q: Sequence[str], r: Instance, use_min: bool = False) -> FrozenSet[str]:
    """
    Start(q, r): constants from which some path in r is accepted by NFA(q).

    With use_min, acceptance is by NFA_min, which stops at the first
    accepting position.
    """
    q = tuple(q)
    if not r.is_consistent():
        raise InconsistentInstanceError("start_set requires a consistent instance")
    if not q:
        return frozenset(r.adom)
    if use_min:
        return frozenset(c for c in r.adom if _min_accepted_from(QueryNfa(q), r, c))
    return frozenset(c for c, i in good_pairs(q, r) if i == 0)
