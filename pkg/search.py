"""
Exact repair search for path queries.

Depth-first search over block choices for a repair without a q-path. It
answers the coNP tier and the fixed-head questions on words outside C1.
"""

import logging
from collections import deque
from typing import List, Optional, Sequence, Set

from config import DEFAULT_SEARCH_NODE_CAP
from errors import RepairCapExceeded
from fo_rewriting import build_unary_rewriting, eval_fo
from instance import Fact, Instance
from oracle import satisfies_word
from words import satisfies_c1

logger = logging.getLogger(__name__)


def relevant_instance(db: Instance, q: Sequence[str], head: Optional[str] = None) -> Instance:
    """
    Union of the blocks a q-path (from `head`, if given) can touch.

    Every block is kept whole, so repairs of the result are exactly the
    restrictions of repairs of db.
    """
    q = tuple(q)
    if head is None:
        wanted = set(q)
        return Instance(f for f in db.facts if f.relation in wanted)

    kept: Set[Fact] = set()
    seen = {(head, 0)}
    work = deque([(head, 0)])
    while work:
        constant, position = work.popleft()
        if position == len(q):
            continue
        block = db.block_of(q[position], constant)
        kept.update(block)
        for fact in block:
            following = (fact.value, position + 1)
            if following not in seen:
                seen.add(following)
                work.append(following)
    return Instance(kept)


def find_falsifying_repair_search(
    db: Instance,
    q: Sequence[str],
    head: Optional[str] = None,
    node_cap: int = DEFAULT_SEARCH_NODE_CAP,
) -> Optional[Instance]:
    """
    Search for a repair of db with no q-path (starting in `head`, if given).

    Blocks of size one are fixed first, then larger blocks. A branch is cut
    as soon as its chosen facts already contain a q-path, and closed as soon
    as the chosen facts plus every undecided block cannot form one.

    Args:
        db (Instance): The instance
        q (Sequence[str]): Path query word
        head (Optional[str]): Required start constant
        node_cap (int): Maximum number of search nodes

    Returns:
        Optional[Instance]: A falsifying repair of db, or None if q is certain
    """
    q = tuple(q)
    relevant = relevant_instance(db, q, head)
    blocks = sorted(relevant.blocks(), key=lambda b: (len(b), b.relation, b.key))
    rest = [block.members[0] for block in db.blocks() if block.members[0] not in relevant]
    nodes = 0

    def complete(chosen: List[Fact], depth: int) -> Instance:
        return Instance(chosen + [b.members[0] for b in blocks[depth:]] + rest)

    def visit(chosen: List[Fact], depth: int) -> Optional[Instance]:
        nonlocal nodes
        nodes += 1
        if nodes > node_cap:
            raise RepairCapExceeded(nodes, node_cap)
        decided = Instance(chosen)
        if satisfies_word(decided, q, head):
            return None
        optimistic = decided.union(f for b in blocks[depth:] for f in b.members)
        if not satisfies_word(optimistic, q, head):
            return complete(chosen, depth)
        for fact in blocks[depth].members:
            found = visit(chosen + [fact], depth + 1)
            if found is not None:
                return found
        return None

    result = visit([], 0)
    logger.debug("repair search visited %d nodes (%s)", nodes,
                 "falsified" if result is not None else "certain")
    return result


def fixed_head_certain(db: Instance, q: Sequence[str], c: str, node_cap: int = DEFAULT_SEARCH_NODE_CAP) -> bool:
    """
    Whether every repair of db has a q-path starting in c.

    C1 words use the fixed-head rewriting. For other words that rewriting
    can answer false on certain inputs, so the exact search decides.
    """
    q = tuple(q)
    if not q:
        return True
    if satisfies_c1(q):
        return eval_fo(build_unary_rewriting(q), db, {"x1": c})
    return find_falsifying_repair_search(db, q, c, node_cap) is None
