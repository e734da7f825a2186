"""
Hardness Reductions Module

Instance generators for the three lower-bound constructions:

    reduce_reachability   s reaches t in an acyclic graph  <=>  q is not certain
    reduce_sat            a CNF is satisfiable             <=>  q is not certain
    reduce_mcvp           a monotone circuit outputs 1     <=>  q is certain

Each construction glues canonical paths ("gadgets") for factors of q.
Interior constants of a gadget are fresh (`__g<n>`), so distinct gadgets
only meet at the named endpoints.

Also provides the text formats of the source problems and reference
evaluators for them.
"""

import itertools
import logging
import re
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from config import FRESH_PREFIX
from errors import FactParseError, PreconditionError
from instance import CONSTANT_PATTERN, Fact, Instance
from words import (
    Word,
    _rewind_splits,
    consecutive_triples,
    format_word,
    is_factor,
    is_prefix,
    satisfies_c2,
    satisfies_c3,
)

logger = logging.getLogger(__name__)

_NAME = re.compile(rf"{CONSTANT_PATTERN}\Z")


# ---------------------------------------------------------------------------
# Gadgets
# ---------------------------------------------------------------------------

class GadgetFactory:
    """Source of fresh constants; one factory per generated instance."""

    def __init__(self, start: int = 0):
        self._counter = itertools.count(start)

    def fresh(self) -> str:
        return f"{FRESH_PREFIX}{next(self._counter)}"

    def gadget(self, q: Sequence[str], a: Optional[str] = None, b: Optional[str] = None) -> List[Fact]:
        """
        The canonical path with trace q from a to b; None stands for a fresh endpoint.

        Args:
            q (Sequence[str]): Trace of the path
            a (Optional[str]): Start constant, or None
            b (Optional[str]): End constant, or None

        Returns:
            List[Fact]: The path's facts in order
        """
        q = tuple(q)
        if not q:
            if a is None and b is None:
                raise PreconditionError("a gadget for the empty word needs an endpoint")
            if a is not None and b is not None and a != b:
                raise PreconditionError(f"empty gadget cannot join {a} and {b}")
            return []
        constants = [a if a is not None else self.fresh()]
        constants += [self.fresh() for _ in range(len(q) - 1)]
        constants.append(b if b is not None else self.fresh())
        return [Fact(symbol, constants[i], constants[i + 1]) for i, symbol in enumerate(q)]


_shared_factory = GadgetFactory()


def gadget(q: Sequence[str], a: Optional[str] = None, b: Optional[str] = None,
           factory: Optional[GadgetFactory] = None) -> List[Fact]:
    return (factory or _shared_factory).gadget(q, a, b)


def _check_names(names, what: str) -> None:
    for name in names:
        if not _NAME.match(name):
            raise PreconditionError(f"invalid {what} name: {name!r}")
        if name.startswith(FRESH_PREFIX):
            raise PreconditionError(f"{what} name {name!r} uses the reserved prefix {FRESH_PREFIX}")


# ---------------------------------------------------------------------------
# Source problems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Digraph:
    vertices: frozenset
    edges: frozenset
    s: str
    t: str

    def __post_init__(self):
        if self.s not in self.vertices or self.t not in self.vertices:
            raise ValueError("s and t must be vertices")
        for x, y in self.edges:
            if x not in self.vertices or y not in self.vertices:
                raise ValueError(f"edge ({x}, {y}) leaves the vertex set")

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(sorted(self.vertices))
        graph.add_edges_from(sorted(self.edges))
        return graph

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.to_networkx())


@dataclass(frozen=True)
class Literal:
    variable: str
    positive: bool = True

    def __str__(self) -> str:
        return self.variable if self.positive else f"-{self.variable}"


@dataclass(frozen=True)
class Cnf:
    variables: Tuple[str, ...]
    clauses: Tuple[Tuple[Literal, ...], ...]

    def __post_init__(self):
        known = set(self.variables)
        for clause in self.clauses:
            if not clause:
                raise ValueError("clauses must be non-empty")
            for literal in clause:
                if literal.variable not in known:
                    raise ValueError(f"unknown variable {literal.variable}")


@dataclass(frozen=True)
class Gate:
    name: str
    op: str
    left: str
    right: str


@dataclass(frozen=True)
class MonotoneCircuit:
    """Inputs with their assignment, AND/OR gates in topological order, output node."""

    inputs: Tuple[Tuple[str, bool], ...]
    gates: Tuple[Gate, ...]
    output: str

    def __post_init__(self):
        defined = set()
        for name, _ in self.inputs:
            if name in defined:
                raise ValueError(f"node {name} defined twice")
            defined.add(name)
        for gate in self.gates:
            if gate.op not in ("AND", "OR"):
                raise ValueError(f"unknown gate type {gate.op}")
            if gate.name in defined:
                raise ValueError(f"node {gate.name} defined twice")
            for operand in (gate.left, gate.right):
                if operand not in defined:
                    raise ValueError(f"gate {gate.name} uses {operand} before its definition")
            defined.add(gate.name)
        if self.output not in defined:
            raise ValueError(f"output {self.output} is not a node")

    @property
    def assignment(self) -> Dict[str, bool]:
        return dict(self.inputs)

    def to_networkx(self) -> nx.DiGraph:
        """Wires point from operands to gates."""
        graph = nx.DiGraph()
        for name, value in self.inputs:
            graph.add_node(name, op="INPUT", value=value)
        for gate in self.gates:
            graph.add_node(gate.name, op=gate.op)
            graph.add_edge(gate.left, gate.name)
            graph.add_edge(gate.right, gate.name)
        return graph


# ---------------------------------------------------------------------------
# Text formats
# ---------------------------------------------------------------------------

def _content_lines(text: str, comment: str = "#") -> Iterator[Tuple[int, str]]:
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped and not stripped.startswith(comment):
            yield number, stripped


def parse_digraph(text: str) -> Digraph:
    """
    Header `s=<v> t=<v>`, then one edge `a b` per line; a single name declares
    an isolated vertex.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise FactParseError("missing header s=<v> t=<v>", 1)
    number, header = lines[0]
    fields = dict(part.split("=", 1) for part in header.split() if "=" in part)
    if set(fields) != {"s", "t"} or len(header.split()) != 2:
        raise FactParseError(f"expected header s=<v> t=<v>, got {header!r}", number)

    vertices = {fields["s"], fields["t"]}
    edges = set()
    for number, line in lines[1:]:
        parts = line.split()
        if len(parts) == 1:
            vertices.add(parts[0])
        elif len(parts) == 2:
            vertices.update(parts)
            edges.add((parts[0], parts[1]))
        else:
            raise FactParseError(f"expected an edge 'a b', got {line!r}", number)
    return Digraph(frozenset(vertices), frozenset(edges), fields["s"], fields["t"])


def parse_dimacs(text: str) -> Cnf:
    """DIMACS CNF; variables are named by their number."""
    variable_count = None
    clauses: List[Tuple[Literal, ...]] = []
    current: List[Literal] = []
    for number, line in _content_lines(text, comment="c"):
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FactParseError(f"bad problem line {line!r}", number)
            try:
                variable_count = int(parts[2])
            except ValueError:
                raise FactParseError(f"bad variable count in {line!r}", number) from None
            continue
        if line.startswith("%"):
            break
        for token in line.split():
            try:
                value = int(token)
            except ValueError:
                raise FactParseError(f"bad literal {token!r}", number) from None
            if value == 0:
                if not current:
                    raise FactParseError("empty clause", number)
                clauses.append(tuple(current))
                current = []
            else:
                current.append(Literal(str(abs(value)), value > 0))
    if current:
        clauses.append(tuple(current))
    if variable_count is None:
        raise FactParseError("missing problem line 'p cnf <vars> <clauses>'")

    used = {int(l.variable) for clause in clauses for l in clause}
    count = max([variable_count] + list(used))
    return Cnf(tuple(str(i) for i in range(1, count + 1)), tuple(clauses))


def parse_circuit(text: str) -> MonotoneCircuit:
    inputs: List[Tuple[str, bool]] = []
    gates: List[Gate] = []
    output = None
    for number, line in _content_lines(text):
        parts = line.split()
        if output is not None:
            raise FactParseError("OUTPUT must be the last line", number)
        if len(parts) == 2 and parts[0] == "OUTPUT":
            output = parts[1]
        elif len(parts) == 3 and parts[1] == "INPUT" and parts[2] in ("0", "1"):
            inputs.append((parts[0], parts[2] == "1"))
        elif len(parts) == 4 and parts[1] in ("AND", "OR"):
            gates.append(Gate(parts[0], parts[1], parts[2], parts[3]))
        else:
            raise FactParseError(f"expected INPUT, AND, OR or OUTPUT line, got {line!r}", number)
    if output is None:
        raise FactParseError("missing OUTPUT line")
    try:
        return MonotoneCircuit(tuple(inputs), tuple(gates), output)
    except ValueError as e:
        raise FactParseError(str(e)) from e


def format_digraph(g: Digraph) -> str:
    lines = [f"s={g.s} t={g.t}"]
    connected = {x for edge in g.edges for x in edge}
    lines += sorted(v for v in g.vertices if v not in connected and v not in (g.s, g.t))
    lines += [f"{x} {y}" for x, y in sorted(g.edges)]
    return "\n".join(lines) + "\n"


def format_dimacs(f: Cnf) -> str:
    index = {name: i for i, name in enumerate(f.variables, start=1)}
    lines = [f"p cnf {len(f.variables)} {len(f.clauses)}"]
    for clause in f.clauses:
        literals = [str(index[l.variable] if l.positive else -index[l.variable]) for l in clause]
        lines.append(" ".join(literals + ["0"]))
    return "\n".join(lines) + "\n"


def format_circuit(c: MonotoneCircuit) -> str:
    lines = [f"{name} INPUT {int(value)}" for name, value in c.inputs]
    lines += [f"{g.name} {g.op} {g.left} {g.right}" for g in c.gates]
    lines.append(f"OUTPUT {c.output}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Reference evaluators
# ---------------------------------------------------------------------------

def reaches(g: Digraph) -> bool:
    return nx.has_path(g.to_networkx(), g.s, g.t)


def is_satisfiable(f: Cnf) -> bool:
    """Exhaustive over all assignments."""
    for values in itertools.product((False, True), repeat=len(f.variables)):
        sigma = dict(zip(f.variables, values))
        if all(any(sigma[l.variable] == l.positive for l in clause) for clause in f.clauses):
            return True
    return False


def evaluate_circuit(c: MonotoneCircuit) -> bool:
    graph = c.to_networkx()
    gates = {g.name: g for g in c.gates}
    value: Dict[str, bool] = {}
    for node in nx.topological_sort(graph):
        if node in gates:
            gate = gates[node]
            left, right = value[gate.left], value[gate.right]
            value[node] = (left and right) if gate.op == "AND" else (left or right)
        else:
            value[node] = graph.nodes[node]["value"]
    return value[c.output]


# ---------------------------------------------------------------------------
# Witness splits
# ---------------------------------------------------------------------------

def nl_split(q: Sequence[str]) -> Tuple[Word, Word, Word]:
    """(u, Rv, Rw) with q = uRvRw and q not a prefix of uRvRvRw."""
    q = tuple(q)
    for i, j, rewound in _rewind_splits(q):
        if not is_prefix(q, rewound):
            return q[:i], q[i:j], q[j:]
    raise PreconditionError(f"{format_word(q)} satisfies C1; no NL-hardness split")


def sat_split(q: Sequence[str]) -> Tuple[Word, Word, Word]:
    """(u, Rv, Rw) with q = uRvRw and q not a factor of uRvRvRw."""
    q = tuple(q)
    for i, j, rewound in _rewind_splits(q):
        if not is_factor(q, rewound):
            return q[:i], q[i:j], q[j:]
    raise PreconditionError(f"{format_word(q)} satisfies C3; no coNP-hardness split")


@dataclass(frozen=True)
class CircuitSplit:
    """q = u·R·v1·R·v2·R·w with v1 = v·v1p and v2 = v·v2p."""

    u: Word
    relation: str
    v1: Word
    v2: Word
    w: Word
    v: Word
    v1p: Word
    v2p: Word


def mcvp_split(q: Sequence[str]) -> CircuitSplit:
    q = tuple(q)
    if not satisfies_c3(q) or satisfies_c2(q):
        raise PreconditionError(f"{format_word(q)} must satisfy C3 and violate C2")
    for i, j, k in sorted(consecutive_triples(q)):
        v1, v2, w = q[i + 1:j], q[j + 1:k], q[k + 1:]
        if v1 != v2 and not is_prefix(w, v1):
            common = 0
            while common < min(len(v1), len(v2)) and v1[common] == v2[common]:
                common += 1
            return CircuitSplit(q[:i], q[i], v1, v2, w, v1[:common], v1[common:], v2[common:])
    raise PreconditionError(f"no PTIME-hardness split for {format_word(q)}")


# ---------------------------------------------------------------------------
# Reductions
# ---------------------------------------------------------------------------

def reduce_reachability(g: Digraph, q: Sequence[str], start: int = 0) -> Instance:
    """
    Instance whose repairs all satisfy q iff t is unreachable from s.

    Args:
        g (Digraph): Acyclic graph with designated s and t
        q (Sequence[str]): Word violating C1
        start (int): First fresh-constant index

    Returns:
        Instance: The generated instance
    """
    q = tuple(q)
    u, rv, rw = nl_split(q)
    if not g.is_acyclic():
        raise PreconditionError("the reachability reduction needs an acyclic graph")
    _check_names(g.vertices, "vertex")

    factory = GadgetFactory(start)
    s_prime, t_prime = factory.fresh(), factory.fresh()
    facts: List[Fact] = []
    for x in sorted(g.vertices) + [s_prime]:
        facts += factory.gadget(u, None, x)
    for x, y in sorted(g.edges) + [(s_prime, g.s), (g.t, t_prime)]:
        facts += factory.gadget(rv, x, y)
    for x in sorted(g.vertices):
        facts += factory.gadget(rw, x, None)

    logger.debug("reachability reduction for %s: u=%s Rv=%s Rw=%s, %d facts",
                 format_word(q), format_word(u), format_word(rv), format_word(rw), len(facts))
    return Instance(facts)


def reduce_sat(f: Cnf, q: Sequence[str], start: int = 0) -> Instance:
    """Instance with a falsifying repair iff f is satisfiable."""
    q = tuple(q)
    u, rv, rw = sat_split(q)
    _check_names(f.variables, "variable")

    factory = GadgetFactory(start)
    facts: List[Fact] = []
    for z in f.variables:
        facts += factory.gadget(rw, z, None)
        facts += factory.gadget(rv + rw, z, None)
    for clause in f.clauses:
        c = factory.fresh()
        for literal in clause:
            trace = u if literal.positive else u + rv
            facts += factory.gadget(trace, c, literal.variable)

    logger.debug("sat reduction for %s: %d variables, %d clauses, %d facts",
                 format_word(q), len(f.variables), len(f.clauses), len(facts))
    return Instance(facts)


def reduce_mcvp(c: MonotoneCircuit, q: Sequence[str], start: int = 0) -> Instance:
    """Instance whose repairs all satisfy q iff c outputs 1."""
    q = tuple(q)
    split = mcvp_split(q)
    _check_names([name for name, _ in c.inputs] + [g.name for g in c.gates], "node")

    r = (split.relation,)
    rv1 = r + split.v1
    tail = r + split.v2 + r + split.w
    factory = GadgetFactory(start)
    facts: List[Fact] = []
    facts += factory.gadget(split.u + rv1, None, c.output)
    for name, value in c.inputs:
        if value:
            facts += factory.gadget(tail, name, None)
    for gate in c.gates:
        g = gate.name
        facts += factory.gadget(split.u, None, g)
        facts += factory.gadget(tail, g, None)
        if gate.op == "AND":
            facts += factory.gadget(rv1, g, gate.left)
            facts += factory.gadget(rv1, g, gate.right)
        else:
            # v1p or v2p may be empty; an empty gadget identifies its endpoints
            c1 = factory.fresh() if split.v1p else gate.left
            c2 = factory.fresh() if split.v2p else c1
            facts += factory.gadget(r + split.v, g, c1)
            facts += factory.gadget(split.v1p, c1, gate.left)
            facts += factory.gadget(split.v2p, c1, c2)
            facts += factory.gadget(split.u, None, c2)
            facts += factory.gadget(rv1, c2, gate.right)
            facts += factory.gadget(r + split.w, c2, None)

    logger.debug("mcvp reduction for %s: %d gates, %d facts", format_word(q), len(c.gates), len(facts))
    return Instance(facts)
