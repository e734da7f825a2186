#!/usr/bin/env python3
"""
Command-line front end.

Usage:
    python cli.py classify RXRYRY
    python cli.py solve RRX db.facts [--method auto|fo|nl|fixpoint|search|bruteforce]
    python cli.py rewrite RR [--head c]
    python cli.py datalog UVUVWV
    python cli.py gen sat formula.cnf ARRX [--output gen.facts]
    python cli.py --seed 7 gen random - RXRY
    python cli.py oracle ARRX gen.facts

Reports are key=value lines on stdout. Exit codes: 0 certain true (or
success), 1 certain false, 2 usage or input error, 3 resource cap exceeded.
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Iterable, List, Optional, Tuple

from config import DEFAULT_MAX_REPAIRS, DEFAULT_SEED, configure_logging
from errors import CqaError, MethodNotApplicable, RepairCapExceeded
from fo_rewriting import build_fixed_head_rewriting, build_fo_rewriting, render
from generators import make_rng, random_instance
from genqueries import (
    GeneralizedPathQuery,
    classify_generalized,
    characteristic_prefix,
    extend,
    parse_generalized,
    solve_generalized,
    to_bcq,
)
from instance import Instance, dump_facts, load_instance, save_instance
from oracle import certain_bruteforce, parse_bcq
from reductions import (
    parse_circuit,
    parse_digraph,
    parse_dimacs,
    reduce_mcvp,
    reduce_reachability,
    reduce_sat,
)
from datalog import emit_datalog
from solvers import Method, solve
from words import classify, format_word

logger = logging.getLogger(__name__)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_ERROR = 2
EXIT_CAP = 3


def _flag(value: bool) -> str:
    return "true" if value else "false"


def _emit(lines: Iterable[Tuple[str, object]], started: float) -> None:
    for key, value in lines:
        if isinstance(value, bool):
            value = _flag(value)
        print(f"{key}={value}")
    print(f"elapsed_ms={int((time.perf_counter() - started) * 1000)}")


def _chr_text(query: GeneralizedPathQuery) -> str:
    prefix = characteristic_prefix(query)
    marker = "⊤" if prefix.end is None else prefix.end
    return f"{format_word(prefix.relations)}^{marker}"


def _repair_listing(repair: Instance) -> str:
    return " ".join(str(fact) for fact in repair)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_classify(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    query = parse_generalized(args.query)
    lines: List[Tuple[str, object]] = []
    if query.is_constant_free:
        cls = classify(query.relations)
        lines += [("query", format_word(query.relations)), ("classification", cls.tier.value),
                  ("c1", cls.c1), ("c2", cls.c2), ("c3", cls.c3)]
    else:
        cls = classify_generalized(query)
        lines += [("query", args.query.strip()), ("classification", cls.tier.value),
                  ("d1", cls.c1), ("d2", cls.c2), ("d3", cls.c3),
                  ("chr", _chr_text(query)), ("ext", format_word(extend(query)))]
    _emit(lines, started)
    return EXIT_TRUE


def cmd_solve(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    query = parse_generalized(args.query)
    db = load_instance(args.db)

    if not query.is_constant_free:
        if Method(args.method) is not Method.AUTO:
            raise MethodNotApplicable("queries with constants are solved with --method auto")
        report = solve_generalized(db, query, max_repairs=args.max_repairs)
        components = ";".join(f"{text}:{_flag(value)}" for text, value in report.components)
        _emit([("query", args.query.strip()), ("classification", report.classification.tier.value),
               ("method", "generalized"), ("answer", report.answer), ("components", components)],
              started)
        return EXIT_TRUE if report.answer else EXIT_FALSE

    report = solve(db, query.relations, Method(args.method), max_repairs=args.max_repairs)
    lines: List[Tuple[str, object]] = [
        ("query", format_word(query.relations)),
        ("classification", report.classification.tier.value),
        ("method", report.method.value),
        ("fallback", report.fallback),
        ("answer", report.answer),
    ]
    if report.witness is not None:
        lines.append(("witness", report.witness))
    if report.counterexample is not None:
        lines.append(("counterexample", _repair_listing(report.counterexample)))
    if report.repairs_checked is not None:
        lines.append(("repairs_checked", report.repairs_checked))
    _emit(lines, started)
    return EXIT_TRUE if report.answer else EXIT_FALSE


def cmd_rewrite(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    q = parse_generalized(args.query)
    if not q.is_constant_free:
        raise MethodNotApplicable("rewrite takes a word without constants")
    word = q.relations
    cls = classify(word)
    if args.head is not None:
        formula = build_fixed_head_rewriting(word, args.head)
    else:
        formula = build_fo_rewriting(word)
    _emit([("query", format_word(word)), ("classification", cls.tier.value),
           ("exact", cls.c1), ("rewriting", render(formula))], started)
    return EXIT_TRUE


def cmd_datalog(args: argparse.Namespace) -> int:
    q = parse_generalized(args.query)
    if not q.is_constant_free:
        raise MethodNotApplicable("datalog takes a word without constants")
    sys.stdout.write(emit_datalog(q.relations))
    return EXIT_TRUE


def cmd_gen(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    q = parse_generalized(args.query)
    if not q.is_constant_free:
        raise MethodNotApplicable("gen takes a word without constants")
    word = q.relations

    if args.kind == "random":
        db = random_instance(make_rng(args.seed), sorted(set(word)))
    else:
        text = Path(args.input).read_text(encoding="utf-8")
        if args.kind == "reach":
            db = reduce_reachability(parse_digraph(text), word)
        elif args.kind == "sat":
            db = reduce_sat(parse_dimacs(text), word)
        else:
            db = reduce_mcvp(parse_circuit(text), word)

    if args.output:
        save_instance(db, args.output)
        _emit([("query", format_word(word)), ("facts", len(db)), ("output", args.output)], started)
    else:
        sys.stdout.write(dump_facts(db))
    return EXIT_TRUE


def cmd_oracle(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    db = load_instance(args.db)
    if "(" in args.query:
        query, label = parse_bcq(args.query), args.query.strip()
        result = certain_bruteforce(db, query, args.max_repairs)
    else:
        parsed = parse_generalized(args.query)
        if parsed.is_constant_free:
            query, label = parsed.relations, format_word(parsed.relations)
        else:
            query, label = to_bcq(parsed), args.query.strip()
        result = certain_bruteforce(db, query, args.max_repairs)

    lines: List[Tuple[str, object]] = [
        ("query", label),
        ("method", Method.BRUTEFORCE.value),
        ("answer", result.certain),
        ("repairs_checked", result.repairs_checked),
    ]
    if result.counterexample is not None:
        lines.append(("counterexample", _repair_listing(result.counterexample)))
    _emit(lines, started)
    return EXIT_TRUE if result.certain else EXIT_FALSE


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqa", description="Consistent query answering for path queries under primary keys"
    )
    parser.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR (default: CQA_LOG_LEVEL or WARNING)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Seed for random generation")
    parser.add_argument("--max-repairs", type=int, default=DEFAULT_MAX_REPAIRS, help="Cap for repair enumeration")
    commands = parser.add_subparsers(dest="command", required=True)

    classify_parser = commands.add_parser("classify", help="Complexity tier of a query")
    classify_parser.add_argument("query")
    classify_parser.set_defaults(handler=cmd_classify)

    solve_parser = commands.add_parser("solve", help="Certain answer on a fact file")
    solve_parser.add_argument("query")
    solve_parser.add_argument("db")
    solve_parser.add_argument("--method", choices=[m.value for m in Method], default=Method.AUTO.value)
    solve_parser.set_defaults(handler=cmd_solve)

    rewrite_parser = commands.add_parser("rewrite", help="First-order rewriting of a word")
    rewrite_parser.add_argument("query")
    rewrite_parser.add_argument("--head", default=None, help="Fix the first key to this constant")
    rewrite_parser.set_defaults(handler=cmd_rewrite)

    datalog_parser = commands.add_parser("datalog", help="Datalog program for the NL tier")
    datalog_parser.add_argument("query")
    datalog_parser.set_defaults(handler=cmd_datalog)

    gen_parser = commands.add_parser("gen", help="Generate an instance")
    gen_parser.add_argument("kind", choices=["reach", "sat", "mcvp", "random"])
    gen_parser.add_argument("input", help="Graph, DIMACS or circuit file; '-' for random")
    gen_parser.add_argument("query")
    gen_parser.add_argument("--output", default=None, help="Write the facts here instead of stdout")
    gen_parser.set_defaults(handler=cmd_gen)

    oracle_parser = commands.add_parser("oracle", help="Certain answer by repair enumeration")
    oracle_parser.add_argument("query")
    oracle_parser.add_argument("db")
    oracle_parser.set_defaults(handler=cmd_oracle)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        configure_logging(args.log_level)
    except ValueError as e:
        parser.error(str(e))

    try:
        return args.handler(args)
    except RepairCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (CqaError, OSError, ValueError) as e:
        logger.debug("command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
