"""
Word Combinatorics Module

Path queries are handled as words over relation names. This module provides
parsing, rewinding, the syntactic conditions C1/C2/C3, the B-form
decompositions, episodes, and the complexity classification built on them.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from errors import EmptyQueryError, QueryParseError

logger = logging.getLogger(__name__)

Word = Tuple[str, ...]

EMPTY: Word = ()

_IDENTIFIER = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


class Tier(str, Enum):
    """Complexity tier of CQA(q)."""

    FO = "FO"
    NL_COMPLETE = "NL_COMPLETE"
    PTIME_COMPLETE = "PTIME_COMPLETE"
    CONP_COMPLETE = "CONP_COMPLETE"


class Form(str, Enum):
    B1 = "B1"
    B2A = "B2A"
    B2B = "B2B"
    B3 = "B3"


@dataclass(frozen=True)
class Classification:
    """Tier plus the three condition flags it was derived from."""

    tier: Tier
    c1: bool
    c2: bool
    c3: bool

    @classmethod
    def from_flags(cls, c1: bool, c2: bool, c3: bool) -> "Classification":
        if c1:
            tier = Tier.FO
        elif c2:
            tier = Tier.NL_COMPLETE
        elif c3:
            tier = Tier.PTIME_COMPLETE
        else:
            tier = Tier.CONP_COMPLETE
        return cls(tier=tier, c1=c1, c2=c2, c3=c3)


@dataclass(frozen=True)
class BWitness:
    """
    One way of embedding q into a B-form pattern.

    q equals pattern()[offset:offset + len(q)].
    """

    form: Form
    u: Word
    v: Word
    w: Word
    j: int
    k: int
    offset: int

    def pattern(self) -> Word:
        if self.form is Form.B1:
            return self.w + self.v * self.k
        if self.form is Form.B2A:
            return self.u * self.j + self.w + self.v * self.k
        if self.form is Form.B2B:
            return (self.u + self.v) * self.k + self.w + self.v
        return self.u + self.w + (self.u + self.v) * self.k

    def embeds(self, q: Word) -> bool:
        return self.pattern()[self.offset:self.offset + len(q)] == tuple(q)


@dataclass(frozen=True)
class Episode:
    """A factor RuR of q, with R absent from u, starting at `offset`."""

    offset: int
    episode: Word
    left_repeating: bool
    right_repeating: bool


# ---------------------------------------------------------------------------
# Parsing and formatting
# ---------------------------------------------------------------------------

def parse_word(text: str) -> Word:
    """
    Parse the word syntax: "RXRY" (single uppercase letters) or "Emp-Mgr-Emp".

    Args:
        text (str): Query text

    Returns:
        Word: Tuple of relation names
    """
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    if not stripped:
        raise QueryParseError("empty query", text, 0)

    if "-" in stripped:
        symbols = []
        position = lead
        for part in stripped.split("-"):
            if not _IDENTIFIER.match(part):
                raise QueryParseError(f"invalid relation name {part!r}", text, position)
            symbols.append(part)
            position += len(part) + 1
        return tuple(symbols)

    if all("A" <= ch <= "Z" for ch in stripped):
        return tuple(stripped)

    if _IDENTIFIER.match(stripped):
        return (stripped,)

    for index, ch in enumerate(stripped):
        if not (ch.isalnum() or ch == "_") or (index == 0 and not ch.isalpha()):
            raise QueryParseError(f"unexpected character {ch!r}", text, lead + index)
    raise QueryParseError("invalid query", text, lead)


def format_word(q: Sequence[str]) -> str:
    if not q:
        return "ε"
    if all(len(s) == 1 and "A" <= s <= "Z" for s in q):
        return "".join(q)
    return "-".join(q)


def is_self_join_free(q: Sequence[str]) -> bool:
    return len(set(q)) == len(q)


def is_prefix(p: Sequence[str], q: Sequence[str]) -> bool:
    return len(p) <= len(q) and tuple(q[:len(p)]) == tuple(p)


def is_suffix(p: Sequence[str], q: Sequence[str]) -> bool:
    return len(p) <= len(q) and (not p or tuple(q[len(q) - len(p):]) == tuple(p))


def is_factor(p: Sequence[str], q: Sequence[str]) -> bool:
    return factor_offset(p, q) is not None


def factor_offset(p: Sequence[str], q: Sequence[str], start: int = 0) -> Optional[int]:
    p, q = tuple(p), tuple(q)
    for i in range(start, len(q) - len(p) + 1):
        if q[i:i + len(p)] == p:
            return i
    return None


def enumerate_words(alphabet: Sequence[str], max_len: int, min_len: int = 1) -> Iterator[Word]:
    """Yield every word over `alphabet` with min_len <= length <= max_len."""
    for length in range(min_len, max_len + 1):
        for word in itertools.product(alphabet, repeat=length):
            yield word


# ---------------------------------------------------------------------------
# Rewinding and the C-conditions
# ---------------------------------------------------------------------------

def _rewind_splits(q: Word) -> Iterator[Tuple[int, int, Word]]:
    """Yield (i, j, uRvRvRw) for every pair i < j with q[i] == q[j]."""
    for i in range(len(q)):
        for j in range(i + 1, len(q)):
            if q[i] == q[j]:
                yield i, j, q[:j + 1] + q[i + 1:j + 1] + q[j + 1:]


def rewind_all(q: Sequence[str]) -> Set[Word]:
    """All words obtained from q by exactly one rewind."""
    return {rewound for _, _, rewound in _rewind_splits(tuple(q))}


def _require_non_empty(q: Sequence[str], operation: str) -> Word:
    if not q:
        raise EmptyQueryError(operation)
    return tuple(q)


def satisfies_c1(q: Sequence[str]) -> bool:
    q = _require_non_empty(q, "satisfies_c1")
    return all(is_prefix(q, p) for _, _, p in _rewind_splits(q))


def satisfies_c3(q: Sequence[str]) -> bool:
    q = _require_non_empty(q, "satisfies_c3")
    return all(is_factor(q, p) for _, _, p in _rewind_splits(q))


def consecutive_triples(q: Word) -> Iterator[Tuple[int, int, int]]:
    """Positions i < j < k of three consecutive occurrences of one symbol."""
    positions: Dict[str, List[int]] = {}
    for index, symbol in enumerate(q):
        positions.setdefault(symbol, []).append(index)
    for occurrences in positions.values():
        for a, b, c in zip(occurrences, occurrences[1:], occurrences[2:]):
            yield a, b, c


def satisfies_c2(q: Sequence[str]) -> bool:
    q = _require_non_empty(q, "satisfies_c2")
    if not satisfies_c3(q):
        return False
    for i, j, k in consecutive_triples(q):
        v1, v2, w = q[i + 1:j], q[j + 1:k], q[k + 1:]
        if v1 != v2 and not is_prefix(w, v1):
            return False
    return True


def classify(q: Sequence[str]) -> Classification:
    q = _require_non_empty(q, "classify")
    c3 = satisfies_c3(q)
    c2 = c3 and satisfies_c2(q)
    c1 = c2 and satisfies_c1(q)
    result = Classification.from_flags(c1, c2, c3)
    logger.debug("classified %s as %s", format_word(q), result.tier.value)
    return result


# ---------------------------------------------------------------------------
# B-form decomposition
# ---------------------------------------------------------------------------

def sjf_triples(alphabet: Sequence[str]) -> Iterator[Tuple[Word, Word, Word]]:
    """Every (u, v, w) with uvw self-join-free over `alphabet`."""
    symbols = sorted(set(alphabet))
    for length in range(len(symbols) + 1):
        for perm in itertools.permutations(symbols, length):
            for a in range(length + 1):
                for b in range(a, length + 1):
                    yield perm[:a], perm[a:b], perm[b:]


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _occurrences(q: Word, pattern: Word) -> Iterator[int]:
    offset = factor_offset(q, pattern)
    while offset is not None:
        yield offset
        offset = factor_offset(q, pattern, offset + 1)


def _b1(q: Word, u: Word, v: Word, w: Word) -> Iterator[BWitness]:
    if u or not set(q) <= set(v + w):
        return
    n = len(q)
    k = _ceil_div(max(0, n - len(w)), len(v)) if v else 0
    candidate = BWitness(Form.B1, (), v, w, 0, k, 0)
    if candidate.embeds(q):
        yield candidate


def _b2a(q: Word, u: Word, v: Word, w: Word) -> Iterator[BWitness]:
    n = len(q)
    big = n + 1
    pattern = u * big + w + v * big
    for o in _occurrences(q, pattern):
        if u:
            j = max(0, big - o // len(u))
            offset = o - (big - j) * len(u)
        else:
            j, offset = 0, o
        base = j * len(u) + len(w)
        k = _ceil_div(max(0, offset + n - base), len(v)) if v else 0
        yield BWitness(Form.B2A, u, v, w, j, k, offset)


def _b2b(q: Word, u: Word, v: Word, w: Word) -> Iterator[BWitness]:
    n = len(q)
    t = u + v
    big = n + 1
    pattern = t * big + w + v
    for o in _occurrences(q, pattern):
        if t:
            k = max(0, big - o // len(t))
            offset = o - (big - k) * len(t)
        else:
            k, offset = 0, o
        yield BWitness(Form.B2B, u, v, w, 0, k, offset)


def _b3(q: Word, u: Word, v: Word, w: Word) -> Iterator[BWitness]:
    n = len(q)
    t = u + v
    pattern = u + w + t * (n + 1)
    for o in _occurrences(q, pattern):
        k = _ceil_div(max(0, o + n - len(u) - len(w)), len(t)) if t else 0
        yield BWitness(Form.B3, u, v, w, 0, k, o)


_FORM_BUILDERS = {
    Form.B1: _b1,
    Form.B2A: _b2a,
    Form.B2B: _b2b,
    Form.B3: _b3,
}


def decompose(q: Sequence[str], forms: Sequence[Form] = tuple(Form)) -> Set[BWitness]:
    """
    Find every B-form witness for q with minimal repetition counts.

    Args:
        q (Sequence[str]): Non-empty word
        forms (Sequence[Form]): Restrict the search to these forms

    Returns:
        Set[BWitness]: Witnesses, each verified against q
    """
    q = _require_non_empty(q, "decompose")
    needed = set(q)
    found: Set[BWitness] = set()
    for u, v, w in sjf_triples(needed):
        if not needed <= set(u + v + w):
            continue
        for form in forms:
            for witness in _FORM_BUILDERS[form](q, u, v, w):
                if witness.embeds(q):
                    found.add(witness)
    return found


def has_form(q: Sequence[str], *forms: Form) -> bool:
    return bool(decompose(q, forms))


def find_c2_obstruction(q: Sequence[str]) -> Optional[Tuple[str, Word, Word, Word, int]]:
    """
    Look for a factor of q that rules out C2 on a C3 word.

    Returns:
        Optional[Tuple]: ("a" or "b", u, v, w, offset of the factor) or None
    """
    q = _require_non_empty(q, "find_c2_obstruction")
    for u, v, w in sjf_triples(set(q)):
        if not u:
            continue
        if v:
            factor = (u[-1],) + w + u + v + u + (v[0],)
            kind = "a"
        elif w:
            factor = (u[-1],) + w + u + u + (u[0],)
            kind = "b"
        else:
            continue
        offset = factor_offset(factor, q)
        if offset is not None:
            return kind, u, v, w, offset
    return None


# ---------------------------------------------------------------------------
# Episodes
# ---------------------------------------------------------------------------

def find_episodes(q: Sequence[str]) -> List[Episode]:
    q = tuple(q)
    episodes = []
    for i in range(len(q)):
        for j in range(i + 1, len(q)):
            if q[j] != q[i]:
                continue
            symbol, inner = q[i], q[i + 1:j]
            left, right = q[:i], q[j + 1:]
            right_repeating = is_prefix(right, (inner + (symbol,)) * len(right))
            left_repeating = is_suffix(left, ((symbol,) + inner) * len(left))
            episodes.append(Episode(i, q[i:j + 1], left_repeating, right_repeating))
            break
    return episodes
