"""
Generalized Path Queries Module

Path queries whose junctions may be constants, e.g.

    R(x,y), S(y,0), T(0,1), R(1,w)    written    _ R _ S :0 T :1 R _

The characteristic prefix chr(q) is the longest prefix whose key positions
are all variables. Classification depends on chr(q) only; solving splits q
at its constants and answers the pieces separately.
"""

import logging
import re
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from config import DEFAULT_MAX_REPAIRS, EXTENSION_CONSTANT, EXTENSION_RELATION
from errors import PreconditionError, QueryParseError
from instance import CONSTANT_PATTERN, Fact, Instance
from oracle import Bcq, BcqAtom, const, var
from search import fixed_head_certain
from solvers import SolveReport, solve
from words import (
    Classification,
    Word,
    _rewind_splits,
    classify,
    consecutive_triples,
    parse_word,
)

logger = logging.getLogger(__name__)

# Junction value for a fresh variable; also the end marker ⊤.
TOP = None

_RELATION_TOKEN = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_CONSTANT_TOKEN = re.compile(rf":({CONSTANT_PATTERN})\Z")


@dataclass(frozen=True)
class GeneralizedPathQuery:
    """
    relations R1..Rk and junctions s1..s(k+1); a junction is a constant or
    None for a variable. Atom i is Ri(s_i, s_(i+1)), so a constant junction
    occupies one non-key position and the following key position.
    """

    relations: Word
    junctions: Tuple[Optional[str], ...]

    def __post_init__(self):
        if len(self.junctions) != len(self.relations) + 1:
            raise ValueError("a query with k relations needs k+1 junctions")
        constants = [s for s in self.junctions if s is not None]
        if len(set(constants)) != len(constants):
            raise ValueError("a constant may occur at one junction only")

    @classmethod
    def from_word(cls, q: Sequence[str], end: Optional[str] = TOP) -> "GeneralizedPathQuery":
        """The path query q with its last non-key position set to `end` (q^γ)."""
        q = tuple(q)
        return cls(q, (None,) * len(q) + (end,))

    def __len__(self) -> int:
        return len(self.relations)

    @property
    def constants(self) -> Tuple[str, ...]:
        return tuple(s for s in self.junctions if s is not None)

    @property
    def is_constant_free(self) -> bool:
        return not self.constants

    @property
    def end(self) -> Optional[str]:
        return self.junctions[-1]

    def segment(self, start: int, stop: int) -> "GeneralizedPathQuery":
        return GeneralizedPathQuery(self.relations[start:stop], self.junctions[start:stop + 1])


# ---------------------------------------------------------------------------
# Text syntax
# ---------------------------------------------------------------------------

def parse_generalized(text: str) -> GeneralizedPathQuery:
    """
    Parse `_ R _ S :0 T :1 R _`; plain word syntax stands for all-variable junctions.

    Args:
        text (str): Query text

    Returns:
        GeneralizedPathQuery: The parsed query
    """
    tokens = [(m.group(), m.start()) for m in re.finditer(r"\S+", text)]
    if not any(t == "_" or t.startswith(":") for t, _ in tokens):
        return GeneralizedPathQuery.from_word(parse_word(text))

    if len(tokens) < 3 or len(tokens) % 2 == 0:
        offset = tokens[-1][1] + len(tokens[-1][0]) if tokens else 0
        raise QueryParseError("expected junction, relation, junction, ...", text, offset)

    relations: List[str] = []
    junctions: List[Optional[str]] = []
    for index, (token, offset) in enumerate(tokens):
        if index % 2 == 0:
            if token == "_":
                junctions.append(None)
                continue
            match = _CONSTANT_TOKEN.match(token)
            if not match:
                raise QueryParseError(f"expected '_' or ':constant', got {token!r}", text, offset)
            if match.group(1) in junctions:
                raise QueryParseError(f"constant {match.group(1)!r} repeated", text, offset)
            junctions.append(match.group(1))
        else:
            if not _RELATION_TOKEN.match(token):
                raise QueryParseError(f"invalid relation name {token!r}", text, offset)
            relations.append(token)
    return GeneralizedPathQuery(tuple(relations), tuple(junctions))


def format_generalized(q: GeneralizedPathQuery) -> str:
    parts = ["_" if q.junctions[0] is None else f":{q.junctions[0]}"]
    for relation, junction in zip(q.relations, q.junctions[1:]):
        parts.append(relation)
        parts.append("_" if junction is None else f":{junction}")
    return " ".join(parts)


def to_bcq(q: GeneralizedPathQuery) -> Bcq:
    """The query as a Boolean conjunctive query; variable junctions become x1, x2, ..."""
    terms = [var(f"x{i + 1}") if s is None else const(s) for i, s in enumerate(q.junctions)]
    return Bcq(tuple(
        BcqAtom(relation, terms[i], terms[i + 1]) for i, relation in enumerate(q.relations)
    ))


# ---------------------------------------------------------------------------
# Characteristic prefix and extension
# ---------------------------------------------------------------------------

def characteristic_prefix(q: GeneralizedPathQuery) -> GeneralizedPathQuery:
    length = len(q)
    for i in range(len(q)):
        if q.junctions[i] is not None:
            length = i
            break
    return q.segment(0, length)


def extend(q: GeneralizedPathQuery) -> Word:
    """chr(q)'s word followed by a fresh relation; q's word if q is constant-free."""
    if q.is_constant_free:
        return q.relations
    return characteristic_prefix(q).relations + (EXTENSION_RELATION,)


def homomorphism_exists(a: GeneralizedPathQuery, b: GeneralizedPathQuery, prefix_only: bool = False) -> bool:
    """
    Whether some homomorphism maps a into b.

    Variables of a are pairwise distinct, so a homomorphism is fixed by the
    offset at which a's atoms land in b; constants of a must meet the same
    constant in b.
    """
    offsets = [0] if prefix_only else range(len(b) - len(a) + 1)
    for offset in offsets:
        if b.relations[offset:offset + len(a)] != a.relations:
            continue
        if all(s is None or b.junctions[offset + i] == s for i, s in enumerate(a.junctions)):
            return True
    return False


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def _rewound(prefix: GeneralizedPathQuery) -> List[GeneralizedPathQuery]:
    return [
        GeneralizedPathQuery.from_word(word, prefix.end)
        for _, _, word in _rewind_splits(prefix.relations)
    ]


def satisfies_d1(q: GeneralizedPathQuery) -> bool:
    prefix = characteristic_prefix(q)
    return all(homomorphism_exists(prefix, p, prefix_only=True) for p in _rewound(prefix))


def satisfies_d3(q: GeneralizedPathQuery) -> bool:
    prefix = characteristic_prefix(q)
    return all(homomorphism_exists(prefix, p) for p in _rewound(prefix))


def satisfies_d2(q: GeneralizedPathQuery) -> bool:
    if not satisfies_d3(q):
        return False
    prefix = characteristic_prefix(q)
    word, end = prefix.relations, prefix.end
    for i, j, k in consecutive_triples(word):
        v1, v2 = word[i + 1:j], word[j + 1:k]
        if v1 == v2:
            continue
        tail = GeneralizedPathQuery.from_word(word[k:], end)
        head = GeneralizedPathQuery.from_word(word[i:j], end)
        if not homomorphism_exists(tail, head, prefix_only=True):
            return False
    return True


def classify_generalized(q: GeneralizedPathQuery) -> Classification:
    """
    Tier of CQA(q); the flags of the result are D1, D2 and D3.

    Constant-free queries classify exactly as their word does.
    """
    if q.is_constant_free:
        return classify(q.relations)
    d3 = satisfies_d3(q)
    d2 = d3 and satisfies_d2(q)
    d1 = d2 and satisfies_d1(q)
    result = Classification.from_flags(d1, d2, d3)
    logger.debug("classified %s as %s", format_generalized(q), result.tier.value)
    return result


# ---------------------------------------------------------------------------
# Solving
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralizedSolveReport:
    """Answer plus the answer of each piece q was split into."""

    answer: bool
    classification: Classification
    components: Tuple[Tuple[str, bool], ...] = ()
    prefix_report: Optional[SolveReport] = field(default=None, compare=False)


def _require_fresh(db: Instance, q: GeneralizedPathQuery) -> None:
    if EXTENSION_RELATION in db.relations or EXTENSION_RELATION in q.relations:
        raise PreconditionError(f"relation name {EXTENSION_RELATION} is reserved")
    if EXTENSION_CONSTANT in db.adom or EXTENSION_CONSTANT in q.constants:
        raise PreconditionError(f"constant {EXTENSION_CONSTANT} is reserved")


def _tail_certain(db: Instance, piece: GeneralizedPathQuery) -> bool:
    """Constant-headed piece without interior constants."""
    head, end = piece.junctions[0], piece.end
    if end is None:
        return fixed_head_certain(db, piece.relations, head)
    marked = db.with_facts(Fact(EXTENSION_RELATION, end, EXTENSION_CONSTANT))
    return fixed_head_certain(marked, piece.relations + (EXTENSION_RELATION,), head)


def solve_generalized(
    db: Instance,
    q: GeneralizedPathQuery,
    max_repairs: Optional[int] = DEFAULT_MAX_REPAIRS,
) -> GeneralizedSolveReport:
    """
    Certain answer of a generalized path query.

    chr(q) ending in a constant c is answered through the extended word on
    db ∪ {N(c, d)}; every constant-headed piece of the remainder is answered
    with a fixed head. The pieces share no variables, so q is certain iff
    each piece is.
    """
    _require_fresh(db, q)
    cls = classify_generalized(q)
    prefix = characteristic_prefix(q)
    components: List[Tuple[str, bool]] = []
    prefix_report = None

    if len(prefix):
        if prefix.end is None:
            prefix_report = solve(db, prefix.relations, max_repairs=max_repairs)
        else:
            marked = db.with_facts(Fact(EXTENSION_RELATION, prefix.end, EXTENSION_CONSTANT))
            prefix_report = solve(marked, extend(q), max_repairs=max_repairs)
        components.append((format_generalized(prefix), prefix_report.answer))

    cuts = [i for i in range(len(prefix), len(q)) if q.junctions[i] is not None] + [len(q)]
    for start, stop in zip(cuts, cuts[1:]):
        piece = q.segment(start, stop)
        components.append((format_generalized(piece), _tail_certain(db, piece)))

    answer = all(value for _, value in components)
    logger.debug("generalized %s: %s", format_generalized(q), components)
    return GeneralizedSolveReport(answer, cls, tuple(components), prefix_report)

