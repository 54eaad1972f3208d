"""Brute-force gold standard: exact posteriors by enumeration, the explicit
one-step transition matrix of the lazy random-scan chain, and the mixing
quantities (minimum stationary probability, minimum transition probability,
relative pointwise distance) computed from it.

Everything here is exact up to 64-bit float rounding and is only meant for
networks small enough to enumerate; the caps below are refusals, not
truncations. Summations run in a fixed order (free-node assignments
enumerated with the last free node varying fastest), so results are
reproducible to the bit.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ImpossibleEvidenceError
from .network import BeliefNetwork, Evidence
from .chain import _conditional_weights, _prepare

#: Largest number of free joint states enumerate_posteriors will visit.
DEFAULT_ENUM_CAP = 1 << 22

#: Largest state count for which the explicit transition matrix is built.
DEFAULT_MATRIX_CAP = 4096


@dataclass(frozen=True)
class PosteriorTable:
    """Exact per-node posterior rows plus the evidence probability."""

    nodes: tuple[str, ...]
    outcome_labels: tuple[tuple[str, ...], ...]
    probs: tuple[tuple[float, ...], ...]
    evidence_probability: float

    def marginal(self, node: str) -> tuple[float, ...]:
        return self.probs[self.nodes.index(node)]


@dataclass(eq=False)
class TransitionMatrix:
    """Explicit one-step matrix of the lazy random-scan chain over the
    evidence-consistent joint states of the free nodes."""

    free_nodes: tuple[str, ...]
    states: tuple[tuple[int, ...], ...]  # free-node assignments, enumeration order
    matrix: np.ndarray  # (M, M) row-stochastic
    stationary: np.ndarray  # exact posterior over states

    @property
    def size(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class MixingReport:
    pi_min: float
    p0: float
    rpd: dict[int, float]  # transition count -> relative pointwise distance


def _state_space_size(net: BeliefNetwork, free: tuple[int, ...]) -> int:
    m = 1
    for i in free:
        m *= len(net.nodes[i].outcomes)
    return m


def _iter_joint(net, ev):
    """Yield (free_assignment, joint_probability) over evidence-consistent
    states, last free node fastest. The state buffer is reused internally."""
    tab, free, template = _prepare(net, ev)
    state = template.copy()
    flat, k, parents, strides = tab.flat, tab.k, tab.parents, tab.strides
    n = tab.n
    for assignment in itertools.product(*(range(k[i]) for i in free)):
        for slot, i in enumerate(free):
            state[i] = assignment[slot]
        p = 1.0
        for i in range(n):
            row = 0
            for q, s in zip(parents[i], strides[i]):
                row += state[q] * s
            p *= flat[i][row * k[i] + state[i]]
        yield assignment, p


def enumerate_posteriors(
    net: BeliefNetwork, ev: Evidence, cap: int = DEFAULT_ENUM_CAP
) -> PosteriorTable:
    """Exact posterior of every free node outcome given the evidence, by
    summation over all evidence-consistent joint states; also returns the
    evidence probability."""
    tab, free, _ = _prepare(net, ev)
    m = _state_space_size(net, free)
    if m > cap:
        raise CapacityError(f"{m} free joint states exceed the enumeration cap {cap}")
    sums = [[0.0] * tab.k[i] for i in free]
    total = 0.0
    for assignment, p in _iter_joint(net, ev):
        total += p
        for slot, v in enumerate(assignment):
            sums[slot][v] += p
    if total <= 0.0:
        raise ImpossibleEvidenceError("evidence has probability zero")
    names = tuple(net.nodes[i].name for i in free)
    labels = tuple(net.nodes[i].outcomes for i in free)
    probs = tuple(tuple(s / total for s in row) for row in sums)
    return PosteriorTable(names, labels, probs, total)


def min_joint_posterior(
    net: BeliefNetwork, ev: Evidence, cap: int = DEFAULT_ENUM_CAP
) -> float:
    """The smallest posterior probability of any evidence-consistent joint
    state of the free nodes."""
    tab, free, _ = _prepare(net, ev)
    m = _state_space_size(net, free)
    if m > cap:
        raise CapacityError(f"{m} free joint states exceed the enumeration cap {cap}")
    total = 0.0
    smallest = None
    for _, p in _iter_joint(net, ev):
        total += p
        if smallest is None or p < smallest:
            smallest = p
    if total <= 0.0 or smallest is None:
        raise ImpossibleEvidenceError("evidence has probability zero")
    return smallest / total


def build_transition_matrix(
    net: BeliefNetwork, ev: Evidence, cap: int = DEFAULT_MATRIX_CAP
) -> TransitionMatrix:
    """The lazy random-scan kernel written out as an M-by-M matrix.

    Off-diagonal mass only connects states differing at exactly one free
    node i, with value (1/(2n)) q_i(new value | state) for n free nodes and
    q the full conditional; the diagonal keeps the remaining mass, which is
    at least 1/2. The stationary vector is the exact posterior over states,
    taken from the same joint sums as :func:`enumerate_posteriors`.
    """
    tab, free, template = _prepare(net, ev)
    if not free:
        raise ValueError("no free nodes: every node is clamped by evidence")
    m = _state_space_size(net, free)
    if m > cap:
        raise CapacityError(f"{m} chain states exceed the matrix cap {cap}")

    states = []
    joint = np.empty(m)
    for idx, (assignment, p) in enumerate(_iter_joint(net, ev)):
        states.append(assignment)
        joint[idx] = p
    total = float(joint.sum())
    if total <= 0.0:
        raise ImpossibleEvidenceError("evidence has probability zero")
    stationary = joint / total

    # mixed-radix strides of each free slot in the enumeration order
    sizes = [tab.k[i] for i in free]
    place = [0] * len(free)
    acc = 1
    for slot in range(len(free) - 1, -1, -1):
        place[slot] = acc
        acc *= sizes[slot]

    n = len(free)
    half_over_n = 0.5 / n
    matrix = np.zeros((m, m))
    state = template.copy()
    for idx, assignment in enumerate(states):
        for slot, i in enumerate(free):
            state[i] = assignment[slot]
        diagonal = 0.5
        for slot, i in enumerate(free):
            weights, wtotal = _conditional_weights(tab, state, i)
            cur = assignment[slot]
            base = idx - cur * place[slot]
            for v, w in enumerate(weights):
                q = w / wtotal
                if v == cur:
                    diagonal += half_over_n * q
                else:
                    matrix[idx, base + v * place[slot]] = half_over_n * q
        matrix[idx, idx] = diagonal
    return TransitionMatrix(
        free_nodes=tuple(net.nodes[i].name for i in free),
        states=tuple(states),
        matrix=matrix,
        stationary=stationary,
    )


def min_transition_probability(tm: TransitionMatrix) -> float:
    """Smallest strictly positive off-diagonal one-step probability."""
    off = tm.matrix.copy()
    np.fill_diagonal(off, 0.0)
    positive = off[off > 0.0]
    if positive.size == 0:
        raise ValueError("chain has no positive off-diagonal transitions")
    return float(positive.min())


def relative_pointwise_distance(tm: TransitionMatrix, t: int) -> float:
    """max over (i, j) of |P^t[i, j] - pi[j]| / pi[j]."""
    if t < 0:
        raise ValueError("transition count must be >= 0")
    pt = np.linalg.matrix_power(tm.matrix, t)
    pi = tm.stationary
    return float(np.max(np.abs(pt - pi[None, :]) / pi[None, :]))


def mixing_report(
    net: BeliefNetwork,
    ev: Evidence,
    t_values: tuple[int, ...] = (),
    cap: int = DEFAULT_MATRIX_CAP,
) -> MixingReport:
    """Bundle the exactly computed mixing quantities for small chains."""
    tm = build_transition_matrix(net, ev, cap=cap)
    return MixingReport(
        pi_min=float(tm.stationary.min()),
        p0=min_transition_probability(tm),
        rpd={t: relative_pointwise_distance(tm, t) for t in t_values},
    )
