"""End-to-end posterior estimation and scoring.

``bnras_estimate`` runs N independent trials (random restart, t lazy
transitions each) and tallies the final state of every free node, so the
estimate for a node outcome is the exact rational tally/N. Trial j consumes
a stream seeded with ``derive_stream_seed(rng.seed_value, j)``, exactly the
stream ``rng.spawn(j)`` produces, which makes the merged tallies independent
of any parallel scheduling of trials; the caller's stream state is unused.

``straight_estimate`` runs one cyclic-scan chain without restarts and
scores the full state after every transition.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass

from .chain import _prepare, _resample, _trial
from .exact import PosteriorTable
from .network import BeliefNetwork, Evidence
from .rng import RandomStream, derive_stream_seed


@dataclass(frozen=True)
class Checkpoint:
    """Running estimate snapshot after a given number of transitions."""

    transitions: int
    scored: int
    probs: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class PosteriorEstimate:
    nodes: tuple[str, ...]
    outcome_labels: tuple[tuple[str, ...], ...]
    probs: tuple[tuple[float, ...], ...]
    tallies: tuple[tuple[int, ...], ...]
    trials: int
    transitions_per_trial: int | None
    total_transitions: int
    cpu_seconds: float
    wall_seconds: float
    checkpoints: tuple[Checkpoint, ...] = ()

    def marginal(self, node: str) -> tuple[float, ...]:
        return self.probs[self.nodes.index(node)]


@dataclass(frozen=True)
class ErrorReport:
    avg_error: float
    max_error: float
    worst_node: str


def _labels(net: BeliefNetwork, free: tuple[int, ...]):
    names = tuple(net.nodes[i].name for i in free)
    labels = tuple(net.nodes[i].outcomes for i in free)
    return names, labels


def _snapshot(tally, scored):
    return tuple(tuple(c / scored for c in row) for row in tally)


def bnras_estimate(
    net: BeliefNetwork,
    ev: Evidence,
    trials: int,
    transitions: int,
    rng: RandomStream,
    checkpoint_stride: int = 0,
) -> PosteriorEstimate:
    """Randomized-restart estimate from `trials` trials of `transitions`
    lazy transitions each.

    With checkpoint_stride > 0, a running snapshot is recorded each time the
    cumulative transition count crosses a multiple of the stride.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if transitions < 0:
        raise ValueError("transitions must be >= 0")
    tab, free, template = _prepare(net, ev)
    names, labels = _labels(net, free)
    tally = [[0] * tab.k[i] for i in free]
    checkpoints: list[Checkpoint] = []
    mark = checkpoint_stride
    cum = 0
    master = rng.seed_value
    child = random.Random()  # reseeded per trial; same draws as rng.spawn(j)
    cpu0, wall0 = time.process_time(), time.perf_counter()
    for j in range(trials):
        child.seed(derive_stream_seed(master, j))
        state = _trial(tab, free, template, transitions, child)
        for slot, i in enumerate(free):
            tally[slot][state[i]] += 1
        if checkpoint_stride > 0 and transitions > 0:
            cum += transitions
            while mark <= cum:
                checkpoints.append(Checkpoint(mark, j + 1, _snapshot(tally, j + 1)))
                mark += checkpoint_stride
    cpu1, wall1 = time.process_time(), time.perf_counter()
    return PosteriorEstimate(
        nodes=names,
        outcome_labels=labels,
        probs=_snapshot(tally, trials),
        tallies=tuple(tuple(row) for row in tally),
        trials=trials,
        transitions_per_trial=transitions,
        total_transitions=trials * transitions,
        cpu_seconds=cpu1 - cpu0,
        wall_seconds=wall1 - wall0,
        checkpoints=tuple(checkpoints),
    )


def straight_estimate(
    net: BeliefNetwork,
    ev: Evidence,
    total_transitions: int,
    rng: RandomStream,
    checkpoint_stride: int = 0,
    burn_in: int = 0,
) -> PosteriorEstimate:
    """Single-chain cyclic-scan estimate over `total_transitions` steps.

    One uniform random initialization, never re-initialized; the full state
    is scored after every step (after the first `burn_in` steps, default 0).
    """
    if total_transitions < 1:
        raise ValueError("total_transitions must be >= 1")
    if not 0 <= burn_in < total_transitions:
        raise ValueError("burn_in must be in [0, total_transitions)")
    tab, free, template = _prepare(net, ev)
    if not free:
        raise ValueError("no free nodes: every node is clamped by evidence")
    names, labels = _labels(net, free)
    tally = [[0] * tab.k[i] for i in free]
    checkpoints: list[Checkpoint] = []
    rand = rng.random
    cpu0, wall0 = time.process_time(), time.perf_counter()
    state = template.copy()
    for i in free:
        state[i] = int(rand() * tab.k[i])
    cursor = 0
    nfree = len(free)
    scored = 0
    for step in range(1, total_transitions + 1):
        _resample(tab, state, free[cursor], rand)
        cursor += 1
        if cursor == nfree:
            cursor = 0
        if step > burn_in:
            scored += 1
            for slot, i in enumerate(free):
                tally[slot][state[i]] += 1
        if checkpoint_stride > 0 and scored > 0 and step % checkpoint_stride == 0:
            checkpoints.append(Checkpoint(step, scored, _snapshot(tally, scored)))
    cpu1, wall1 = time.process_time(), time.perf_counter()
    return PosteriorEstimate(
        nodes=names,
        outcome_labels=labels,
        probs=_snapshot(tally, scored),
        tallies=tuple(tuple(row) for row in tally),
        trials=scored,
        transitions_per_trial=None,
        total_transitions=total_transitions,
        cpu_seconds=cpu1 - cpu0,
        wall_seconds=wall1 - wall0,
        checkpoints=tuple(checkpoints),
    )


def error_metrics(est: PosteriorEstimate, oracle: PosteriorTable) -> ErrorReport:
    """Average and maximum absolute deviation from the exact posteriors,
    taken over every free (node, outcome) pair."""
    if est.nodes != oracle.nodes:
        raise ValueError(
            f"estimate covers nodes {est.nodes}, oracle covers {oracle.nodes}"
        )
    total = 0.0
    count = 0
    max_err = -1.0
    worst = est.nodes[0] if est.nodes else ""
    for name, est_row, exact_row in zip(est.nodes, est.probs, oracle.probs):
        if len(est_row) != len(exact_row):
            raise ValueError(f"node {name}: estimate and oracle row widths differ")
        for a, b in zip(est_row, exact_row):
            d = abs(a - b)
            total += d
            count += 1
            if d > max_err:
                max_err = d
                worst = name
    if count == 0:
        return ErrorReport(0.0, 0.0, worst)
    return ErrorReport(total / count, max_err, worst)


def rank_outcomes(est: PosteriorEstimate, label: str) -> list[str]:
    """Free nodes sorted by descending estimated probability of carrying
    `label`; ties keep declaration order."""
    probs = []
    for name, labels, row in zip(est.nodes, est.outcome_labels, est.probs):
        if label not in labels:
            raise KeyError(f"node {name} has no outcome {label!r}")
        probs.append((name, row[labels.index(label)]))
    return [name for name, _ in sorted(probs, key=lambda item: -item[1])]


def check_interval(true_p: float, est: float, gamma: float, alpha: float) -> bool:
    """Whether an estimate lies inside the two-sided tolerance interval
    [true/(1+gamma) - alpha, (1+gamma)*true + alpha]."""
    if gamma < 0 or alpha < 0:
        raise ValueError("gamma and alpha must be >= 0")
    return true_p / (1.0 + gamma) - alpha <= est <= (1.0 + gamma) * true_p + alpha
