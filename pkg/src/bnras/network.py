"""Discrete belief-network model.

A :class:`BeliefNetwork` is a DAG of discrete nodes, each carrying a
conditional probability table (CPT) over its outcomes given its parents'
outcomes. Table rows are ordered with the *last* declared parent varying
fastest, which fixes a bit-exact file layout.

Construction is permissive: a structurally broken network can be built and
then inspected with :func:`validate_network`, which reports problems instead
of raising. All downstream machinery (samplers, enumeration) assumes a
network whose report says ``ok``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import CycleError, NetworkValidationError

#: CPT rows whose sum deviates from 1 by more than this are invalid.
ROW_SUM_TOL = 1e-9

#: Deviations at or below this are attributed to float round-off and left
#: untouched by :func:`normalize_rows`; renormalizing them would make the
#: operation non-idempotent.
_ROUNDOFF_TOL = 1e-13

JointState = Sequence[int]


@dataclass(frozen=True)
class Cpt:
    """Conditional probability table: one row per parent-outcome combination,
    rows ordered with the last declared parent varying fastest."""

    rows: tuple[tuple[float, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[float]]) -> "Cpt":
        return cls(tuple(tuple(float(p) for p in row) for row in rows))

    @property
    def positive(self) -> bool:
        """True iff every entry lies strictly inside (0, 1)."""
        return all(0.0 < p < 1.0 for row in self.rows for p in row)

    @property
    def min_entry(self) -> float:
        return min(p for row in self.rows for p in row)

    @property
    def max_entry(self) -> float:
        return max(p for row in self.rows for p in row)


@dataclass(frozen=True)
class Node:
    name: str
    outcomes: tuple[str, ...]
    parents: tuple[str, ...]
    cpt: Cpt

    def outcome_index(self, label: str) -> int:
        try:
            return self.outcomes.index(label)
        except ValueError:
            raise KeyError(f"node {self.name} has no outcome {label!r}") from None


@dataclass(frozen=True)
class Evidence:
    """Partial assignment clamping observed nodes to outcome indices."""

    assignments: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def empty(cls) -> "Evidence":
        return cls({})

    def __contains__(self, name: str) -> bool:
        return name in self.assignments

    def __len__(self) -> int:
        return len(self.assignments)

    def get(self, name: str) -> int | None:
        return self.assignments.get(name)

    def items(self):
        return self.assignments.items()


class _Tables:
    """Index-based lookup structure compiled once per network.

    Everything the samplers and the enumeration oracle touch per step lives
    here as flat Python lists, keyed by node index.
    """

    __slots__ = ("n", "k", "parents", "strides", "flat", "children", "child_strides")

    def __init__(self, net: "BeliefNetwork"):
        index = net.node_index
        nodes = net.nodes
        self.n = len(nodes)
        self.k = [len(nd.outcomes) for nd in nodes]
        self.parents: list[tuple[int, ...]] = []
        self.strides: list[tuple[int, ...]] = []
        self.flat: list[list[float]] = []
        for nd in nodes:
            try:
                pix = tuple(index[p] for p in nd.parents)
            except KeyError as exc:
                raise NetworkValidationError(
                    f"node {nd.name}: unknown parent {exc.args[0]!r}"
                ) from None
            sizes = [self.k[p] for p in pix]
            strides = [0] * len(pix)
            acc = 1
            for j in range(len(pix) - 1, -1, -1):  # last parent varies fastest
                strides[j] = acc
                acc *= sizes[j]
            if len(nd.cpt.rows) != acc:
                raise NetworkValidationError(
                    f"node {nd.name}: {len(nd.cpt.rows)} CPT rows, expected {acc}"
                )
            self.parents.append(pix)
            self.strides.append(tuple(strides))
            self.flat.append([p for row in nd.cpt.rows for p in row])
        children: list[list[int]] = [[] for _ in nodes]
        child_strides: list[list[int]] = [[] for _ in nodes]
        for c, nd in enumerate(nodes):
            for pos, p in enumerate(self.parents[c]):
                children[p].append(c)
                child_strides[p].append(self.strides[c][pos])
        self.children = [tuple(cs) for cs in children]
        self.child_strides = [tuple(cs) for cs in child_strides]

    def row_index(self, node: int, state: JointState) -> int:
        row = 0
        for p, s in zip(self.parents[node], self.strides[node]):
            row += state[p] * s
        return row


@dataclass(frozen=True)
class BeliefNetwork:
    name: str
    nodes: tuple[Node, ...]

    @cached_property
    def node_index(self) -> dict[str, int]:
        return {nd.name: i for i, nd in enumerate(self.nodes)}

    def node(self, name: str) -> Node:
        try:
            return self.nodes[self.node_index[name]]
        except KeyError:
            raise KeyError(f"no node named {name!r} in network {self.name}") from None

    @cached_property
    def tables(self) -> _Tables:
        """Compiled lookup tables; raises if the structure is broken."""
        return _Tables(self)

    def __repr__(self) -> str:
        return f"BeliefNetwork({self.name!r}, {len(self.nodes)} nodes)"


@dataclass(frozen=True)
class ValidationReport:
    acyclic: bool
    resolved: bool
    normalized: bool
    positive: bool
    issues: tuple[str, ...]

    @property
    def ok(self) -> bool:
        """True iff the network is usable downstream. Positivity is a flag,
        not a requirement; zero/one entries only void the bounds analysis."""
        return not self.issues


def normalize_rows(
    rows: Iterable[Iterable[float]], tol: float = ROW_SUM_TOL
) -> tuple[tuple[float, ...], ...]:
    """Return rows rescaled to unit sum, for use when loading tables.

    Rows whose sum is within float round-off of 1 are returned unchanged,
    which makes the operation idempotent and keeps serialize/parse round
    trips bit-exact. A row off by more than ``tol`` raises ValueError.
    """
    out = []
    for r, row in enumerate(rows):
        row = tuple(float(p) for p in row)
        s = math.fsum(row)
        if abs(s - 1.0) > tol:
            raise ValueError(f"row {r} sums to {s!r}, beyond the {tol} tolerance")
        if abs(s - 1.0) > _ROUNDOFF_TOL:
            row = tuple(p / s for p in row)
        out.append(row)
    return tuple(out)


def validate_network(net: BeliefNetwork) -> ValidationReport:
    """Check structure and tables; failures are reported, never raised."""
    issues: list[str] = []
    resolved = True
    normalized = True

    seen: set[str] = set()
    for nd in net.nodes:
        if nd.name in seen:
            issues.append(f"duplicate node name {nd.name}")
            resolved = False
        seen.add(nd.name)

    for nd in net.nodes:
        if len(nd.outcomes) < 2:
            issues.append(f"node {nd.name}: fewer than 2 outcomes")
            resolved = False
        if len(set(nd.outcomes)) != len(nd.outcomes):
            issues.append(f"node {nd.name}: duplicate outcome labels")
            resolved = False
        unknown = [p for p in nd.parents if p not in net.node_index]
        for p in unknown:
            issues.append(f"node {nd.name}: unknown parent {p}")
            resolved = False
        if len(set(nd.parents)) != len(nd.parents):
            issues.append(f"node {nd.name}: repeated parent reference")
            resolved = False
        if not unknown:
            expected = 1
            for p in nd.parents:
                expected *= len(net.node(p).outcomes)
            if len(nd.cpt.rows) != expected:
                issues.append(
                    f"node {nd.name}: {len(nd.cpt.rows)} CPT rows, expected {expected}"
                )
                normalized = False
        for r, row in enumerate(nd.cpt.rows):
            if len(row) != len(nd.outcomes):
                issues.append(f"node {nd.name}: CPT row {r} has {len(row)} entries")
                normalized = False
                continue
            if any(not (0.0 <= p <= 1.0) for p in row):
                issues.append(f"node {nd.name}: CPT row {r} has entries outside [0, 1]")
                normalized = False
            s = math.fsum(row)
            if abs(s - 1.0) > ROW_SUM_TOL:
                issues.append(f"node {nd.name}: CPT row {r} sums to {s:.12g}")
                normalized = False

    acyclic = True
    try:
        topological_order(net)
    except (CycleError, NetworkValidationError):
        acyclic = False
        issues.append("parent relation contains a cycle")

    positive = all(nd.cpt.positive for nd in net.nodes)
    return ValidationReport(
        acyclic=acyclic,
        resolved=resolved,
        normalized=normalized,
        positive=positive,
        issues=tuple(issues),
    )


def topological_order(net: BeliefNetwork) -> tuple[str, ...]:
    """Node names ordered so every node follows all its parents.

    Deterministic: among ready nodes, declaration order wins.
    """
    index = net.node_index
    remaining = list(range(len(net.nodes)))
    placed: set[int] = set()
    order: list[str] = []
    while remaining:
        progressed = False
        for i in list(remaining):
            nd = net.nodes[i]
            if all(index[p] in placed for p in nd.parents if p in index):
                # unknown parents are ignored here; validate_network reports them
                order.append(nd.name)
                placed.add(i)
                remaining.remove(i)
                progressed = True
                break
        if not progressed:
            names = ", ".join(net.nodes[i].name for i in remaining)
            raise CycleError(f"parent relation contains a cycle among: {names}")
    return tuple(order)


def conditional_probability(
    net: BeliefNetwork, node: str, value: int, state: JointState
) -> float:
    """P(node = value | parents as assigned in state), a plain table lookup."""
    tab = net.tables
    i = net.node_index[node]
    k = tab.k[i]
    return tab.flat[i][tab.row_index(i, state) * k + value]


def joint_probability(net: BeliefNetwork, state: JointState) -> float:
    """Product over all nodes of their conditional probability in state."""
    tab = net.tables
    p = 1.0
    for i in range(tab.n):
        p *= tab.flat[i][tab.row_index(i, state) * tab.k[i] + state[i]]
    return p


def markov_blanket(net: BeliefNetwork, node: str) -> set[str]:
    """Parents, children, and children's other parents of the node."""
    i = net.node_index[node]
    tab = net.tables
    blanket: set[int] = set(tab.parents[i])
    for c in tab.children[i]:
        blanket.add(c)
        blanket.update(tab.parents[c])
    blanket.discard(i)
    return {net.nodes[j].name for j in blanket}


def free_nodes(net: BeliefNetwork, ev: Evidence) -> tuple[str, ...]:
    """Names of the nodes not clamped by evidence, in declaration order."""
    return tuple(nd.name for nd in net.nodes if nd.name not in ev)


def check_evidence(net: BeliefNetwork, ev: Evidence) -> None:
    """Raise ValueError unless every evidence entry names a real node and a
    valid outcome index for it."""
    for name, value in ev.items():
        if name not in net.node_index:
            raise ValueError(f"evidence names unknown node {name!r}")
        k = len(net.node(name).outcomes)
        if not isinstance(value, int) or not 0 <= value < k:
            raise ValueError(f"evidence for node {name}: outcome index {value!r} invalid")


def check_state(net: BeliefNetwork, state: JointState) -> None:
    """Raise ValueError unless state assigns a valid outcome to every node."""
    if len(state) != len(net.nodes):
        raise ValueError(f"state has {len(state)} entries for {len(net.nodes)} nodes")
    for i, nd in enumerate(net.nodes):
        if not 0 <= state[i] < len(nd.outcomes):
            raise ValueError(f"state[{i}] = {state[i]} invalid for node {nd.name}")
