"""
Brute-Force Oracle Module

Ground truth for every solver: Boolean conjunctive query satisfaction,
certain answers by repair enumeration, states sets and the minimal repair.
Only meant for small instances; every enumeration is capped.
"""

import logging
import re
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from automata import good_pairs, start_set
from config import DEFAULT_MAX_REPAIRS
from errors import MinimalRepairError, PreconditionError, QueryParseError
from instance import Fact, Instance
from words import Word, format_word

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Boolean conjunctive queries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    name: str
    is_variable: bool

    def __str__(self) -> str:
        return self.name if self.is_variable else f'"{self.name}"'


def var(name: str) -> Term:
    return Term(name, True)


def const(name: str) -> Term:
    return Term(name, False)


@dataclass(frozen=True)
class BcqAtom:
    relation: str
    left: Term
    right: Term

    def __str__(self) -> str:
        return f"{self.relation}({self.left},{self.right})"


@dataclass(frozen=True)
class Bcq:
    atoms: Tuple[BcqAtom, ...]

    def __str__(self) -> str:
        return ",".join(str(a) for a in self.atoms)

    @property
    def variables(self) -> FrozenSet[str]:
        return frozenset(t.name for a in self.atoms for t in (a.left, a.right) if t.is_variable)


_BCQ_TOKEN = re.compile(
    r"""\s*(?:
        (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<quoted>"[A-Za-z0-9_]+"|'[A-Za-z0-9_]+')
      | (?P<punct>[(),])
    )""",
    re.VERBOSE,
)
_VARIABLE = re.compile(r"[a-z][a-z0-9_]*\Z")


def _tokenize_bcq(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _BCQ_TOKEN.match(text, position)
        if not match:
            offset = position + (len(text[position:]) - len(text[position:].lstrip()))
            raise QueryParseError(f"unexpected character {text[offset]!r}", text, offset)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        position = match.end()
    return tokens


def parse_bcq(text: str) -> Bcq:
    """
    Parse `R(x,y),S(y,"a")`: lowercase names are variables, quoted tokens constants.

    Args:
        text (str): Query text

    Returns:
        Bcq: The parsed query
    """
    tokens = _tokenize_bcq(text)
    if not tokens:
        raise QueryParseError("empty query", text, 0)
    atoms = []
    index = 0

    def expect(kind: str, value: Optional[str] = None) -> Tuple[str, str, int]:
        nonlocal index
        if index >= len(tokens):
            raise QueryParseError("unexpected end of query", text, len(text))
        token = tokens[index]
        if token[0] != kind or (value is not None and token[1] != value):
            raise QueryParseError(f"unexpected token {token[1]!r}", text, token[2])
        index += 1
        return token

    def term() -> Term:
        nonlocal index
        if index >= len(tokens):
            raise QueryParseError("unexpected end of query", text, len(text))
        kind, value, offset = tokens[index]
        index += 1
        if kind == "quoted":
            return const(value[1:-1])
        if kind == "name" and _VARIABLE.match(value):
            return var(value)
        raise QueryParseError(f"expected a variable or quoted constant, got {value!r}", text, offset)

    while True:
        relation = expect("name")[1]
        expect("punct", "(")
        left = term()
        expect("punct", ",")
        right = term()
        expect("punct", ")")
        atoms.append(BcqAtom(relation, left, right))
        if index == len(tokens):
            break
        expect("punct", ",")
    return Bcq(tuple(atoms))


def path_bcq(q: Sequence[str]) -> Bcq:
    """R1(x1,x2), ..., Rn(xn,xn+1) for the word R1...Rn."""
    return Bcq(tuple(
        BcqAtom(symbol, var(f"x{i + 1}"), var(f"x{i + 2}")) for i, symbol in enumerate(q)
    ))


def fixed_head_bcq(q: Sequence[str], c: str) -> Bcq:
    """The path query with its first key position replaced by the constant c."""
    atoms = list(path_bcq(q).atoms)
    if atoms:
        first = atoms[0]
        atoms[0] = BcqAtom(first.relation, const(c), first.right)
    return Bcq(tuple(atoms))


def _candidates(r: Instance, atom: BcqAtom, binding: Dict[str, str]) -> Iterable[Fact]:
    def resolve(t: Term) -> Optional[str]:
        return binding.get(t.name) if t.is_variable else t.name

    key, value = resolve(atom.left), resolve(atom.right)
    if key is not None:
        facts = r.block_of(atom.relation, key)
    elif value is not None:
        facts = [Fact(atom.relation, k, value) for k in r.predecessors(atom.relation, value)]
    else:
        facts = r.facts_of(atom.relation)
    for fact in facts:
        if value is None or fact.value == value:
            yield fact


def satisfies_bcq(r: Instance, q: Bcq) -> bool:
    """Backtracking search for a valuation mapping every atom into r."""
    atoms = list(q.atoms)

    def bound_score(atom: BcqAtom, binding: Dict[str, str]) -> int:
        return sum(1 for t in (atom.left, atom.right) if not t.is_variable or t.name in binding)

    def search(remaining: List[BcqAtom], binding: Dict[str, str]) -> bool:
        if not remaining:
            return True
        atom = max(remaining, key=lambda a: bound_score(a, binding))
        rest = [a for a in remaining if a is not atom]
        for fact in _candidates(r, atom, binding):
            extended = dict(binding)
            consistent = True
            for t, c in ((atom.left, fact.key), (atom.right, fact.value)):
                if t.is_variable:
                    if extended.setdefault(t.name, c) != c:
                        consistent = False
            if consistent and search(rest, extended):
                return True
        return False

    return search(atoms, {})


def path_heads(r: Instance, q: Sequence[str]) -> FrozenSet[str]:
    """Constants c from which r has a path with trace q."""
    current = set(r.adom)
    for symbol in reversed(tuple(q)):
        current = {c for d in current for c in r.predecessors(symbol, d)}
    return frozenset(current)


def satisfies_word(r: Instance, q: Sequence[str], head: Optional[str] = None) -> bool:
    heads = path_heads(r, q)
    return head in heads if head is not None else bool(heads)


QueryLike = Union[Sequence[str], Bcq]


def _satisfies(r: Instance, q: QueryLike) -> bool:
    if isinstance(q, Bcq):
        return satisfies_bcq(r, q)
    return satisfies_word(r, q)


# ---------------------------------------------------------------------------
# Certain answers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    certain: bool
    repairs_checked: int
    counterexample: Optional[Instance] = None


def certain_bruteforce(db: Instance, q: QueryLike, max_repairs: Optional[int] = DEFAULT_MAX_REPAIRS) -> OracleResult:
    """
    Decide whether every repair of db satisfies q.

    Args:
        db (Instance): Possibly inconsistent instance
        q (QueryLike): A word (path query) or a general Bcq
        max_repairs (Optional[int]): Enumeration cap

    Returns:
        OracleResult: Answer, repairs inspected and the first falsifying repair
    """
    checked = 0
    for repair in db.repairs(max_repairs):
        checked += 1
        if not _satisfies(repair, q):
            logger.debug("falsifying repair found after %d repairs", checked)
            return OracleResult(False, checked, repair)
    return OracleResult(True, checked, None)


def find_falsifying_repair(db: Instance, q: QueryLike, max_repairs: Optional[int] = DEFAULT_MAX_REPAIRS) -> Optional[Instance]:
    return certain_bruteforce(db, q, max_repairs).counterexample


# ---------------------------------------------------------------------------
# States sets and the minimal repair
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StatesSet:
    fact: Fact
    states: FrozenSet[Word]

    def shortest(self) -> Optional[Word]:
        return min(self.states, key=len) if self.states else None

    def __str__(self) -> str:
        return "{" + ", ".join(format_word(s) for s in sorted(self.states, key=len)) + "}"


def _states_from_pairs(f: Fact, q: Word, good) -> FrozenSet[Word]:
    return frozenset(
        q[:i + 1] for i, symbol in enumerate(q)
        if symbol == f.relation and (f.value, i + 1) in good
    )


def states_set(f: Fact, r: Instance, q: Sequence[str]) -> StatesSet:
    """SS(f, r): prefixes uR of q such that SNFA(q, u) accepts a path in r starting with f."""
    q = tuple(q)
    r.require_consistent()
    if f not in r:
        raise PreconditionError(f"{f} is not a fact of the instance")
    return StatesSet(f, _states_from_pairs(f, q, good_pairs(q, r)))


def _repairs_containing(f: Fact, db: Instance) -> Instance:
    rivals = [g for g in db.block_of(f.relation, f.key) if g != f]
    return db.without(*rivals)


def min_states_set(f: Fact, db: Instance, q: Sequence[str], max_repairs: Optional[int] = DEFAULT_MAX_REPAIRS) -> StatesSet:
    """CS(f, db): intersection of SS(f, r) over the repairs r that contain f."""
    q = tuple(q)
    if f not in db:
        raise PreconditionError(f"{f} is not a fact of the instance")
    states = None
    for repair in _repairs_containing(f, db).repairs(max_repairs):
        current = _states_from_pairs(f, q, good_pairs(q, repair))
        states = current if states is None else states & current
        if not states:
            break
    return StatesSet(f, states or frozenset())


def all_min_states_sets(db: Instance, q: Sequence[str], max_repairs: Optional[int] = DEFAULT_MAX_REPAIRS) -> Dict[Fact, FrozenSet[Word]]:
    """CS(f, db) for every fact, from a single enumeration of the repairs."""
    q = tuple(q)
    result: Dict[Fact, FrozenSet[Word]] = {}
    for repair in db.repairs(max_repairs):
        good = good_pairs(q, repair)
        for f in repair.facts:
            current = _states_from_pairs(f, q, good)
            result[f] = current if f not in result else result[f] & current
    return result


def build_minimal_repair(db: Instance, q: Sequence[str], max_repairs: Optional[int] = DEFAULT_MAX_REPAIRS) -> Instance:
    """
    Pick, per block, a fact whose CS equals the intersection of CS over the block.

    The resulting repair has a ⊆-minimal Start set among all repairs.
    """
    q = tuple(q)
    cs = all_min_states_sets(db, q, max_repairs)
    chosen = []
    for block in db.blocks():
        target = frozenset.intersection(*(cs[g] for g in block.members))
        match = next((g for g in block.members if cs[g] == target), None)
        if match is None:
            raise MinimalRepairError(
                f"no fact of block {block.relation}({block.key},*) attains {sorted(target)}"
            )
        chosen.append(match)
    return Instance(chosen)


def common_start_set(db: Instance, q: Sequence[str], max_repairs: Optional[int] = DEFAULT_MAX_REPAIRS) -> FrozenSet[str]:
    """Intersection of Start(q, r) over all repairs r."""
    common: Optional[FrozenSet[str]] = None
    for repair in db.repairs(max_repairs):
        current = start_set(q, repair)
        common = current if common is None else common & current
        if not common:
            return frozenset()
    return common if common is not None else frozenset()
