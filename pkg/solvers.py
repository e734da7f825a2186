"""
Solver Dispatch Module

Picks the strongest algorithm that is exact for the query's class and
returns the certain answer together with a report:

    C1        -> first-order rewriting
    C2        -> NL procedure, fixpoint when no alignment is usable
    C3        -> fixpoint
    otherwise -> falsifying-repair search

The individual tiers live in fo_rewriting, nl_solver, datalog, fixpoint and
search; their entry points are re-exported here.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from config import DEFAULT_MAX_REPAIRS, DEFAULT_SEARCH_NODE_CAP
from datalog import emit_datalog
from errors import EmptyQueryError, FallbackRequired, MethodNotApplicable
from fixpoint import FixpointTable, fixpoint_run, fixpoint_solve
from fo_rewriting import (
    build_fixed_head_rewriting,
    build_fo_rewriting,
    build_unary_rewriting,
    eval_fo,
    render,
    satisfying_constants,
)
from instance import Instance
from nl_solver import NlWitness, is_terminal, nl_run, nl_solve, terminal_constants
from oracle import certain_bruteforce
from search import find_falsifying_repair_search, fixed_head_certain
from words import Classification, Word, classify, format_word

logger = logging.getLogger(__name__)

__all__ = [
    "FixpointTable", "Method", "NlWitness", "SolveReport",
    "build_fixed_head_rewriting", "build_fo_rewriting", "emit_datalog", "eval_fo",
    "find_falsifying_repair_search", "fixed_head_certain", "fixpoint_run",
    "fixpoint_solve", "is_terminal", "nl_solve", "render", "solve",
    "terminal_constants",
]


class Method(str, Enum):
    AUTO = "auto"
    FO = "fo"
    NL = "nl"
    FIXPOINT = "fixpoint"
    SEARCH = "search"
    BRUTEFORCE = "bruteforce"


@dataclass(frozen=True)
class SolveReport:
    """
    Outcome of one solve call.

    `witness` is a constant from which q is certain (yes-answers, when the
    method exposes one); `counterexample` is a repair falsifying q (no-answers
    from the search or brute force). `fallback` is set when the NL procedure
    handed over to the fixpoint.
    """

    answer: bool
    method: Method
    classification: Classification
    witness: Optional[str] = None
    counterexample: Optional[Instance] = None
    fallback: bool = False
    repairs_checked: Optional[int] = None


def _smallest(constants) -> Optional[str]:
    return min(constants) if constants else None


def _solve_fo(db: Instance, q: Word, cls: Classification) -> SolveReport:
    heads = satisfying_constants(build_unary_rewriting(q), db)
    return SolveReport(bool(heads), Method.FO, cls, witness=_smallest(heads))


def _solve_fixpoint(db: Instance, q: Word, cls: Classification, fallback: bool = False) -> SolveReport:
    heads = fixpoint_run(db, q).constants_at(0)
    return SolveReport(bool(heads), Method.FIXPOINT, cls, witness=_smallest(heads), fallback=fallback)


def _solve_nl(db: Instance, q: Word, cls: Classification) -> SolveReport:
    try:
        result = nl_run(db, q)
    except FallbackRequired as e:
        logger.warning("%s; falling back to the fixpoint", e)
        return _solve_fixpoint(db, q, cls, fallback=True)
    return SolveReport(result.answer, Method.NL, cls, witness=result.witness)


def _solve_search(db: Instance, q: Word, cls: Classification, node_cap: int) -> SolveReport:
    repair = find_falsifying_repair_search(db, q, node_cap=node_cap)
    return SolveReport(repair is None, Method.SEARCH, cls, counterexample=repair)


def _solve_bruteforce(db: Instance, q: Word, cls: Classification, max_repairs: Optional[int]) -> SolveReport:
    result = certain_bruteforce(db, q, max_repairs)
    return SolveReport(
        result.certain, Method.BRUTEFORCE, cls,
        counterexample=result.counterexample,
        repairs_checked=result.repairs_checked,
    )


def _auto_method(cls: Classification) -> Method:
    if cls.c1:
        return Method.FO
    if cls.c2:
        return Method.NL
    if cls.c3:
        return Method.FIXPOINT
    return Method.SEARCH


def solve(
    db: Instance,
    q: Sequence[str],
    method: Method = Method.AUTO,
    max_repairs: Optional[int] = DEFAULT_MAX_REPAIRS,
    node_cap: int = DEFAULT_SEARCH_NODE_CAP,
) -> SolveReport:
    """
    Compute the certain answer of the path query q on db.

    Args:
        db (Instance): Possibly inconsistent instance
        q (Sequence[str]): Non-empty word
        method (Method): Algorithm to use; AUTO picks the strongest exact one
        max_repairs (Optional[int]): Cap for brute-force enumeration
        node_cap (int): Cap for the falsifying-repair search

    Returns:
        SolveReport: Answer, method used and supporting evidence

    Raises:
        MethodNotApplicable: the requested method is not exact for q
        RepairCapExceeded: brute force or search exceeded its cap
    """
    q = tuple(q)
    if not q:
        raise EmptyQueryError("solve")
    method = Method(method)
    cls = classify(q)

    if method is Method.AUTO:
        method = _auto_method(cls)
        logger.info("%s is %s; dispatching to %s", format_word(q), cls.tier.value, method.value)

    required = {Method.FO: cls.c1, Method.NL: cls.c2, Method.FIXPOINT: cls.c3}
    if not required.get(method, True):
        raise MethodNotApplicable(
            f"method {method.value} is not exact for {format_word(q)} ({cls.tier.value})"
        )

    if method is Method.FO:
        report = _solve_fo(db, q, cls)
    elif method is Method.NL:
        report = _solve_nl(db, q, cls)
    elif method is Method.FIXPOINT:
        report = _solve_fixpoint(db, q, cls)
    elif method is Method.SEARCH:
        report = _solve_search(db, q, cls, node_cap)
    else:
        report = _solve_bruteforce(db, q, cls, max_repairs)

    logger.debug("solve %s via %s: %s", format_word(q), report.method.value, report.answer)
    return report
