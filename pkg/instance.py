"""
Database Instance Module

Binary facts under primary keys: the first position of every fact is its
key. Provides blocks, repairs, parsing and serialization, plus pandas views
for inspection.
"""

import itertools
import logging
import math
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

import pandas as pd

from config import DEFAULT_MAX_REPAIRS
from errors import FactParseError, InconsistentInstanceError, RepairCapExceeded

logger = logging.getLogger(__name__)

RELATION_PATTERN = r"[A-Za-z_][A-Za-z0-9_]*"
CONSTANT_PATTERN = r"[A-Za-z0-9_]+"

_FACT_LINE = re.compile(
    rf"\s*({RELATION_PATTERN})\s*\(\s*({CONSTANT_PATTERN})\s*,\s*({CONSTANT_PATTERN})\s*\)\s*\Z"
)
_RELATION = re.compile(rf"{RELATION_PATTERN}\Z")
_CONSTANT = re.compile(rf"{CONSTANT_PATTERN}\Z")

FRAME_COLUMNS = ["relation", "key", "value"]


@dataclass(frozen=True, order=True)
class Fact:
    relation: str
    key: str
    value: str

    def __post_init__(self):
        if not _RELATION.match(self.relation):
            raise ValueError(f"invalid relation name: {self.relation!r}")
        for constant in (self.key, self.value):
            if not _CONSTANT.match(constant):
                raise ValueError(f"invalid constant: {constant!r}")

    def __str__(self) -> str:
        return f"{self.relation}({self.key},{self.value})"

    def key_equal(self, other: "Fact") -> bool:
        return self.relation == other.relation and self.key == other.key


@dataclass(frozen=True)
class Block:
    """Maximal set of key-equal facts."""

    relation: str
    key: str
    members: Tuple[Fact, ...]

    def __len__(self) -> int:
        return len(self.members)


class Instance:
    """
    Immutable finite set of facts.

    Derived structures (blocks, indexes, active domain) are computed lazily
    and cached.
    """

    def __init__(self, facts: Iterable[Fact] = ()):
        self._facts: FrozenSet[Fact] = frozenset(facts)

    # -- set behaviour ----------------------------------------------------

    @property
    def facts(self) -> FrozenSet[Fact]:
        return self._facts

    def __iter__(self) -> Iterator[Fact]:
        return iter(sorted(self._facts))

    def __len__(self) -> int:
        return len(self._facts)

    def __contains__(self, fact: object) -> bool:
        return fact in self._facts

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Instance):
            return self._facts == other._facts
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._facts)

    def __repr__(self) -> str:
        return "Instance({" + ", ".join(str(f) for f in self) + "})"

    def union(self, other: Iterable[Fact]) -> "Instance":
        return Instance(self._facts | frozenset(other))

    def with_facts(self, *facts: Fact) -> "Instance":
        return self.union(facts)

    def without(self, *facts: Fact) -> "Instance":
        return Instance(self._facts - frozenset(facts))

    # -- derived structures ------------------------------------------------

    @cached_property
    def adom(self) -> FrozenSet[str]:
        return frozenset(c for f in self._facts for c in (f.key, f.value))

    @cached_property
    def relations(self) -> FrozenSet[str]:
        return frozenset(f.relation for f in self._facts)

    @cached_property
    def _by_key(self) -> Dict[Tuple[str, str], Tuple[Fact, ...]]:
        index: Dict[Tuple[str, str], List[Fact]] = {}
        for fact in sorted(self._facts):
            index.setdefault((fact.relation, fact.key), []).append(fact)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def _by_value(self) -> Dict[Tuple[str, str], Tuple[str, ...]]:
        index: Dict[Tuple[str, str], List[str]] = {}
        for fact in sorted(self._facts):
            index.setdefault((fact.relation, fact.value), []).append(fact.key)
        return {k: tuple(v) for k, v in index.items()}

    @cached_property
    def _by_relation(self) -> Dict[str, Tuple[Fact, ...]]:
        index: Dict[str, List[Fact]] = {}
        for fact in sorted(self._facts):
            index.setdefault(fact.relation, []).append(fact)
        return {k: tuple(v) for k, v in index.items()}

    def facts_of(self, relation: str) -> Tuple[Fact, ...]:
        return self._by_relation.get(relation, ())

    def block_of(self, relation: str, key: str) -> Tuple[Fact, ...]:
        """Facts R(key, *) in sorted order; empty if the block does not exist."""
        return self._by_key.get((relation, key), ())

    def successors(self, relation: str, key: str) -> Tuple[str, ...]:
        return tuple(f.value for f in self.block_of(relation, key))

    def predecessors(self, relation: str, value: str) -> Tuple[str, ...]:
        """Keys c such that R(c, value) is a fact."""
        return self._by_value.get((relation, value), ())

    def blocks(self) -> List[Block]:
        return [
            Block(relation, key, members)
            for (relation, key), members in sorted(self._by_key.items())
        ]

    def is_consistent(self) -> bool:
        return all(len(members) == 1 for members in self._by_key.values())

    def require_consistent(self) -> None:
        if not self.is_consistent():
            raise InconsistentInstanceError("operation requires a consistent instance")

    # -- repairs -------------------------------------------------------------

    def repair_count(self) -> int:
        return math.prod(len(members) for members in self._by_key.values())

    def repairs(self, max_repairs: Optional[int] = DEFAULT_MAX_REPAIRS) -> Iterator["Instance"]:
        """
        Enumerate every repair in mixed-radix order over the sorted blocks.

        Args:
            max_repairs (Optional[int]): Refuse when the count exceeds this; None disables the cap

        Returns:
            Iterator[Instance]: One consistent instance per block choice
        """
        count = self.repair_count()
        if max_repairs is not None and count > max_repairs:
            raise RepairCapExceeded(count, max_repairs)
        logger.debug("enumerating %d repairs over %d blocks", count, len(self._by_key))
        choices = [block.members for block in self.blocks()]
        for selection in itertools.product(*choices):
            yield Instance(selection)

    # -- pandas views --------------------------------------------------------

    def frame(self) -> pd.DataFrame:
        """Facts as a DataFrame with columns relation, key, value, sorted."""
        rows = [(f.relation, f.key, f.value) for f in sorted(self._facts)]
        return pd.DataFrame(rows, columns=FRAME_COLUMNS)

    def block_summary(self) -> pd.DataFrame:
        """Per relation: number of blocks, largest block and number of conflicting blocks."""
        frame = self.frame()
        if frame.empty:
            return pd.DataFrame(columns=["relation", "blocks", "max_block", "conflicts"])
        sizes = frame.groupby(["relation", "key"]).size().rename("size").reset_index()
        summary = sizes.groupby("relation")["size"].agg(
            blocks="count",
            max_block="max",
            conflicts=lambda s: int((s > 1).sum()),
        )
        return summary.reset_index()


# ---------------------------------------------------------------------------
# Text and file formats
# ---------------------------------------------------------------------------

def parse_fact(text: str, line_number: Optional[int] = None) -> Fact:
    match = _FACT_LINE.match(text)
    if not match:
        raise FactParseError(f"expected Rel(key,value), got {text.strip()!r}", line_number)
    return Fact(*match.groups())


def parse_facts(text: str) -> Instance:
    """
    Parse the fact-file grammar: one `Rel(key,value)` per line.

    Blank lines and lines starting with `#` are skipped; duplicates collapse.
    """
    facts = []
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        facts.append(parse_fact(stripped, number))
    return Instance(facts)


def dump_facts(db: Union[Instance, Iterable[Fact]]) -> str:
    return "".join(f"{fact}\n" for fact in sorted(db))


def facts_from_frame(frame: pd.DataFrame) -> Instance:
    missing = [c for c in FRAME_COLUMNS if c not in frame.columns]
    if missing:
        raise FactParseError(f"missing columns: {', '.join(missing)}")
    facts = []
    for number, row in enumerate(frame[FRAME_COLUMNS].astype(str).itertuples(index=False), start=2):
        try:
            facts.append(Fact(row.relation.strip(), row.key.strip(), row.value.strip()))
        except ValueError as e:
            raise FactParseError(str(e), number) from e
    return Instance(facts)


def load_instance(path: Union[str, Path]) -> Instance:
    """
    Load an instance from a fact file, or from a CSV with columns relation,key,value.

    Args:
        path (Union[str, Path]): File path

    Returns:
        Instance: The loaded instance
    """
    path = Path(path)
    if path.suffix.lower() == ".csv":
        try:
            frame = pd.read_csv(path, dtype=str, keep_default_na=False)
        except pd.errors.EmptyDataError:
            return Instance()
        db = facts_from_frame(frame)
    else:
        db = parse_facts(path.read_text(encoding="utf-8"))
    logger.info("loaded %d facts from %s", len(db), path)
    return db


def save_instance(db: Instance, path: Union[str, Path]) -> None:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        db.frame().to_csv(path, index=False)
    else:
        path.write_text(dump_facts(db), encoding="utf-8")


def instance_of(*specs: str) -> Instance:
    """Build an instance from fact strings such as "R(a,b)"."""
    return Instance(parse_fact(spec) for spec in specs)
