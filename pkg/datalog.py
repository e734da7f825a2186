"""
Datalog Emitter Module

Renders the NL-tier decision procedure for a word with a B2B alignment as
a linear Datalog program with stratified negation. Relation atoms use the
lowercased relation names; `c(X)` ranges over the active domain,
`<rel>key(X)` states that X is the key of some fact of that relation and
`consistent(X1,X2,X3,X4)` holds when X1 != X3 or X2 = X4.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from errors import EmptyQueryError, PreconditionError
from nl_solver import NlWitness, _alignment
from words import Form, Word, decompose, format_word, satisfies_c2

logger = logging.getLogger(__name__)

RESERVED = frozenset({"c", "p", "o", "consistent", "uvterminal", "wvterminal", "sterminal", "uvpath"})


@dataclass(frozen=True)
class Literal:
    predicate: str
    args: Tuple[int, ...]
    negated: bool = False


@dataclass(frozen=True)
class Rule:
    head: Literal
    body: Tuple[Literal, ...]

    def render(self) -> str:
        order: List[int] = []
        for literal in (self.head,) + self.body:
            for arg in literal.args:
                if arg not in order:
                    order.append(arg)
        if len(order) <= 2:
            names = dict(zip(order, ("X", "Y")))
        else:
            names = {arg: f"X{arg}" for arg in order}

        def show(literal: Literal) -> str:
            text = f"{literal.predicate}({','.join(names[a] for a in literal.args)})"
            return f"not {text}" if literal.negated else text

        return f"{show(self.head)} :- {', '.join(show(l) for l in self.body)}."


class _Names:
    """Predicate names for relations, avoiding reserved and colliding names."""

    def __init__(self, relations: Sequence[str]):
        self._map: Dict[str, str] = {}
        taken = set(RESERVED)
        for relation in sorted(set(relations)):
            name = relation.lower()
            if name in taken or name.endswith("key") or name.endswith("terminal"):
                name = f"r_{name}"
            while name in taken:
                name = f"r_{name}"
            taken.add(name)
            taken.add(f"{name}key")
            self._map[relation] = name

    def rel(self, relation: str) -> str:
        return self._map[relation]

    def key(self, relation: str) -> str:
        return f"{self._map[relation]}key"


def _chain(names: _Names, word: Word, start: int) -> Tuple[List[Literal], int]:
    """Atoms for a path with trace `word` from variable `start`; returns the end variable."""
    atoms = []
    current = start
    for symbol in word:
        atoms.append(Literal(names.rel(symbol), (current, current + 1)))
        current += 1
    return atoms, current


def _terminal_rules(names: _Names, predicate: str, word: Word) -> List[Rule]:
    """X is terminal for the self-join-free `word`: some prefix path ends where the next block is empty."""
    rules = []
    for i, symbol in enumerate(word):
        atoms, end = _chain(names, word[:i], 1)
        if i == 0:
            atoms = [Literal("c", (1,))]
        rules.append(Rule(
            Literal(predicate, (1,)),
            tuple(atoms) + (Literal(names.key(symbol), (end,), negated=True),),
        ))
    return rules


def _stem_rules(names: _Names, aligned: NlWitness, stem_name: str, start_name: Optional[str]) -> List[Rule]:
    rules = []
    for j in range(aligned.m):
        atoms: List[Literal] = []
        end = 1
        if start_name is not None:
            if j == 0:
                rules.append(Rule(Literal(stem_name, (1,)), (Literal(start_name, (1,)),)))
            atoms, end = _chain(names, aligned.s, 1)
        chain, end = _chain(names, aligned.t * j, end)
        atoms += chain
        rules.append(Rule(Literal(stem_name, (1,)), tuple(atoms) + (Literal("uvterminal", (end,)),)))
    return rules


def _consistency(names: _Names, word: Word, start: int) -> List[Literal]:
    checks = []
    for i in range(len(word)):
        for j in range(i + 1, len(word)):
            if word[i] == word[j]:
                a, b = start + i, start + j
                checks.append(Literal("consistent", (a, a + 1, b, b + 1)))
    return checks


def select_b2b_alignment(q: Sequence[str]) -> Optional[NlWitness]:
    q = tuple(q)
    witnesses = sorted(
        decompose(q, (Form.B2B,)),
        key=lambda w: (w.k, w.u, w.v, w.w, w.offset),
    )
    for witness in witnesses:
        aligned = _alignment(q, witness)
        if aligned is not None:
            return aligned
    return None


def build_program(q: Sequence[str]) -> List[List[Rule]]:
    """Rules of the program, grouped as they are printed."""
    q = tuple(q)
    if not q:
        raise EmptyQueryError("emit_datalog")
    if not satisfies_c2(q):
        raise PreconditionError(f"{format_word(q)} violates C2")
    aligned = select_b2b_alignment(q)
    if aligned is None:
        raise PreconditionError("B2B witness required")
    logger.debug("datalog alignment for %s: %s", format_word(q), aligned)

    names = _Names(q)
    t, z, stem = aligned.t, aligned.z, aligned.stem

    terminal = _terminal_rules(names, "uvterminal", t) + _terminal_rules(names, "wvterminal", z)
    start_name = None
    if aligned.s:
        start_name = "sterminal"
        terminal += _terminal_rules(names, "sterminal", aligned.s)

    if not aligned.s and aligned.m == 1:
        stem_name, stem_group = "uvterminal", []
    else:
        prefix = "s" if aligned.s else ""
        stem_name = f"{prefix}uv{aligned.m}terminal"
        stem_group = _stem_rules(names, aligned, stem_name, start_name)

    base_atoms, end = _chain(names, t, 1)
    base = Rule(
        Literal("uvpath", (1, end)),
        tuple(base_atoms) + tuple(Literal("wvterminal", (v,)) for v in range(1, end + 1)),
    )
    step_atoms, step_end = _chain(names, t, 2)
    recursive = Rule(
        Literal("uvpath", (1, step_end)),
        (Literal("uvpath", (1, 2)),) + tuple(step_atoms)
        + tuple(Literal("wvterminal", (v,)) for v in range(3, step_end + 1)),
    )

    p_rules = [
        Rule(Literal("p", (1,)), (Literal("uvterminal", (1,)), Literal("wvterminal", (1,)))),
        Rule(Literal("p", (1,)), (Literal("uvpath", (1, 2)), Literal("uvterminal", (2,)))),
        Rule(Literal("p", (1,)), (Literal("uvpath", (1, 2)), Literal("uvpath", (2, 2)))),
    ]

    stem_atoms, stem_end = _chain(names, stem, 1)
    o_rules = [
        Rule(Literal("o", (1,)), (Literal(stem_name, (1,)),)),
        Rule(
            Literal("o", (1,)),
            tuple(stem_atoms) + tuple(_consistency(names, stem, 1)) + (Literal("p", (stem_end,)),),
        ),
    ]

    groups = [terminal, stem_group, [base, recursive], p_rules, o_rules]
    return [group for group in groups if group]


def emit_datalog(q: Sequence[str]) -> str:
    """Program text; groups of rules are separated by blank lines."""
    groups = build_program(q)
    return "\n\n".join("\n".join(rule.render() for rule in group) for group in groups) + "\n"
