"""
First-Order Rewriting Module

Builds the consistent first-order rewriting of a path query as a small
formula AST, renders it as text and evaluates it under active-domain
semantics.

    ψ_R(x)    = ∃y R(x,y)
    ψ_Rq'(x)  = ∃y R(x,y) ∧ ∀y (R(x,y) → ψ_q'(y))
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, Optional, Sequence, Union

from errors import EmptyQueryError, UnboundVariableError
from instance import Instance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Atom:
    relation: str
    left: str
    right: str


@dataclass(frozen=True)
class EqConst:
    variable: str
    constant: str


@dataclass(frozen=True)
class And:
    left: "FoFormula"
    right: "FoFormula"


@dataclass(frozen=True)
class Implies:
    left: "FoFormula"
    right: "FoFormula"


@dataclass(frozen=True)
class Exists:
    variable: str
    body: "FoFormula"


@dataclass(frozen=True)
class Forall:
    variable: str
    body: "FoFormula"


FoFormula = Union[Atom, EqConst, And, Implies, Exists, Forall]


def _variable(index: int) -> str:
    return f"x{index}"


def build_unary_rewriting(q: Sequence[str]) -> FoFormula:
    """ψ(x1) such that a constant c satisfies it iff every repair has a q-path from c (C1 words)."""
    q = tuple(q)
    if not q:
        raise EmptyQueryError("build_unary_rewriting")
    formula: Optional[FoFormula] = None
    for i in range(len(q), 0, -1):
        here, there = _variable(i), _variable(i + 1)
        atom = Atom(q[i - 1], here, there)
        if formula is None:
            formula = Exists(there, atom)
        else:
            formula = And(Exists(there, atom), Forall(there, Implies(atom, formula)))
    return formula


def build_fo_rewriting(q: Sequence[str]) -> FoFormula:
    return Exists(_variable(1), build_unary_rewriting(q))


def build_fixed_head_rewriting(q: Sequence[str], c: str) -> FoFormula:
    return Exists(_variable(1), And(EqConst(_variable(1), c), build_unary_rewriting(q)))


def render(formula: FoFormula) -> str:
    if isinstance(formula, Atom):
        return f"{formula.relation}({formula.left},{formula.right})"
    if isinstance(formula, EqConst):
        return f'{formula.variable} = "{formula.constant}"'
    if isinstance(formula, And):
        return f"({render(formula.left)} & {render(formula.right)})"
    if isinstance(formula, Implies):
        return f"({render(formula.left)} -> {render(formula.right)})"
    if isinstance(formula, Exists):
        return f"E {formula.variable}.({render(formula.body)})"
    if isinstance(formula, Forall):
        return f"A {formula.variable}.({render(formula.body)})"
    raise TypeError(f"not a formula: {formula!r}")


@lru_cache(maxsize=None)
def free_variables(formula: FoFormula) -> FrozenSet[str]:
    if isinstance(formula, Atom):
        return frozenset((formula.left, formula.right))
    if isinstance(formula, EqConst):
        return frozenset((formula.variable,))
    if isinstance(formula, (And, Implies)):
        return free_variables(formula.left) | free_variables(formula.right)
    return free_variables(formula.body) - {formula.variable}


def quantifier_depth(formula: FoFormula) -> int:
    if isinstance(formula, (Atom, EqConst)):
        return 0
    if isinstance(formula, (And, Implies)):
        return max(quantifier_depth(formula.left), quantifier_depth(formula.right))
    return 1 + quantifier_depth(formula.body)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------

def _support(formula: FoFormula, variable: str, db: Instance, env: Dict[str, str]) -> Optional[Iterable[str]]:
    """Values of `variable` outside which `formula` is false; None if unknown."""
    if isinstance(formula, Atom):
        left_bound = formula.left != variable and formula.left in env
        right_bound = formula.right != variable and formula.right in env
        if formula.left == variable and formula.right == variable:
            return [f.key for f in db.facts_of(formula.relation) if f.key == f.value]
        if formula.left == variable:
            if right_bound:
                return db.predecessors(formula.relation, env[formula.right])
            return {f.key for f in db.facts_of(formula.relation)}
        if formula.right == variable:
            if left_bound:
                return db.successors(formula.relation, env[formula.left])
            return {f.value for f in db.facts_of(formula.relation)}
        return None
    if isinstance(formula, EqConst):
        return [formula.constant] if formula.variable == variable else None
    if isinstance(formula, And):
        support = _support(formula.left, variable, db, env)
        return support if support is not None else _support(formula.right, variable, db, env)
    if isinstance(formula, Exists) and formula.variable != variable:
        inner = {k: v for k, v in env.items() if k != formula.variable}
        return _support(formula.body, variable, db, inner)
    return None


def eval_fo(formula: FoFormula, db: Instance, env: Optional[Dict[str, str]] = None) -> bool:
    """
    Evaluate `formula` over db; quantifiers range over adom(db).

    Args:
        formula (FoFormula): Formula whose free variables are bound by env
        db (Instance): The instance
        env (Optional[Dict[str, str]]): Bindings for free variables

    Returns:
        bool: Truth value
    """
    memo: Dict[tuple, bool] = {}
    adom = sorted(db.adom)

    def evaluate(node: FoFormula, binding: Dict[str, str]) -> bool:
        key = (id(node), tuple(sorted((v, binding[v]) for v in free_variables(node) if v in binding)))
        if key in memo:
            return memo[key]

        if isinstance(node, Atom):
            for name in (node.left, node.right):
                if name not in binding:
                    raise UnboundVariableError(name)
            result = binding[node.right] in db.successors(node.relation, binding[node.left])
        elif isinstance(node, EqConst):
            if node.variable not in binding:
                raise UnboundVariableError(node.variable)
            result = binding[node.variable] == node.constant
        elif isinstance(node, And):
            result = evaluate(node.left, binding) and evaluate(node.right, binding)
        elif isinstance(node, Implies):
            result = (not evaluate(node.left, binding)) or evaluate(node.right, binding)
        elif isinstance(node, Exists):
            candidates = _support(node.body, node.variable, db, binding)
            values = adom if candidates is None else sorted(set(candidates))
            result = any(evaluate(node.body, {**binding, node.variable: c}) for c in values)
        elif isinstance(node, Forall):
            guard = node.body.left if isinstance(node.body, Implies) else None
            candidates = _support(guard, node.variable, db, binding) if guard is not None else None
            values = adom if candidates is None else sorted(set(candidates))
            result = all(evaluate(node.body, {**binding, node.variable: c}) for c in values)
        else:
            raise TypeError(f"not a formula: {node!r}")

        memo[key] = result
        return result

    return evaluate(formula, dict(env or {}))


def satisfying_constants(formula: FoFormula, db: Instance, variable: str = "x1") -> FrozenSet[str]:
    return frozenset(c for c in db.adom if eval_fo(formula, db, {variable: c}))
