"""Markov-chain trial generation over a belief network.

Two kernels share the same single-node resampling primitive:

* the lazy random-scan kernel (:func:`do_transition`): with probability 1/2
  hold the state (guarantees aperiodicity), otherwise pick one free node
  uniformly at random and redraw it from its full conditional;
* the cyclic-scan kernel (:func:`straight_step`): resample the free nodes in
  fixed rotation, one per step, with no holding and no restarts.

Draw discipline (relied on by deterministic tests): a lazy hold consumes
exactly one uniform draw; a resampling transition consumes three, in order
(hold coin, node choice, outcome threshold); a cyclic step consumes one.
Outcomes are selected by inverse CDF over the unnormalized conditional
weights in outcome-declaration order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DeterministicConflictError
from .network import (
    BeliefNetwork,
    Evidence,
    JointState,
    check_evidence,
    check_state,
    _Tables,
)
from .rng import RandomStream


@dataclass
class ChainState:
    """One walker: a full joint assignment plus clamping and scan metadata.

    Owned by a single worker; the transition functions mutate ``state`` in
    place. ``cursor`` is only advanced by the cyclic-scan kernel.
    """

    state: list[int]
    evidence: Evidence
    free: tuple[int, ...]
    cursor: int = 0


def _prepare(net: BeliefNetwork, ev: Evidence) -> tuple[_Tables, tuple[int, ...], list[int]]:
    """Compile lookups and build the clamped state template (free nodes 0)."""
    check_evidence(net, ev)
    tab = net.tables
    template = [0] * tab.n
    free = []
    for i, nd in enumerate(net.nodes):
        v = ev.get(nd.name)
        if v is None:
            free.append(i)
        else:
            template[i] = v
    return tab, tuple(free), template


def _conditional_weights(tab: _Tables, state: JointState, i: int) -> tuple[list[float], float]:
    """Unnormalized full-conditional weights of node i given the rest.

    weight(v) = P(i=v | parents) * prod over children c of P(c's value | c's
    parents with i=v); only the Markov blanket of i is ever read.
    """
    k = tab.k[i]
    row = 0
    for p, s in zip(tab.parents[i], tab.strides[i]):
        row += state[p] * s
    base = row * k
    weights = tab.flat[i][base : base + k]
    for c, stride_i in zip(tab.children[i], tab.child_strides[i]):
        kc = tab.k[c]
        rowc = 0
        for p, s in zip(tab.parents[c], tab.strides[c]):
            if p != i:
                rowc += state[p] * s
        flat_c = tab.flat[c]
        idx = rowc * kc + state[c]
        step = stride_i * kc
        for v in range(k):
            weights[v] *= flat_c[idx]
            idx += step
    total = 0.0
    for w in weights:
        total += w
    return weights, total


def _resample(tab: _Tables, state: list[int], i: int, rand) -> None:
    """Redraw node i from its full conditional using one uniform draw."""
    weights, total = _conditional_weights(tab, state, i)
    if total <= 0.0:
        raise DeterministicConflictError(
            f"all conditional weights of node index {i} are zero; "
            "the 0/1 table entries conflict with the current state"
        )
    r = rand() * total
    acc = 0.0
    chosen = -1
    for v, w in enumerate(weights):
        if w > 0.0:
            acc += w
            chosen = v
            if r < acc:
                break
    state[i] = chosen


def _run_lazy(tab: _Tables, free: tuple[int, ...], state: list[int], steps: int, rand) -> None:
    nfree = len(free)
    for _ in range(steps):
        if rand() <= 0.5:
            continue
        _resample(tab, state, free[int(rand() * nfree)], rand)


def full_conditional(net: BeliefNetwork, state: JointState, node: str) -> list[float]:
    """Normalized distribution of one node given all the others.

    Proportional to the node's own table entry times each child's entry,
    evaluated with the candidate value substituted; depends only on the
    node's Markov blanket.
    """
    check_state(net, state)
    tab = net.tables
    i = net.node_index[node]
    weights, total = _conditional_weights(tab, state, i)
    if total <= 0.0:
        raise DeterministicConflictError(
            f"all conditional weights of node {node} are zero"
        )
    return [w / total for w in weights]


def init_random_state(net: BeliefNetwork, ev: Evidence, rng: RandomStream) -> ChainState:
    """Fresh walker: evidence clamped, each free node independently uniform
    over its outcomes (one draw per free node, in declaration order)."""
    tab, free, template = _prepare(net, ev)
    state = template.copy()
    rand = rng.random
    for i in free:
        state[i] = int(rand() * tab.k[i])
    return ChainState(state=state, evidence=ev, free=free, cursor=0)


def do_transition(net: BeliefNetwork, cs: ChainState, rng: RandomStream) -> ChainState:
    """One lazy random-scan transition, mutating and returning ``cs``."""
    if not cs.free:
        raise ValueError("no free nodes: every node is clamped by evidence")
    _run_lazy(net.tables, cs.free, cs.state, 1, rng.random)
    return cs


def next_trial(net: BeliefNetwork, ev: Evidence, t: int, rng: RandomStream) -> tuple[int, ...]:
    """One trial: initialize uniformly at random, run t lazy transitions,
    return the resulting joint state."""
    if t < 0:
        raise ValueError("transition count must be >= 0")
    tab, free, template = _prepare(net, ev)
    return tuple(_trial(tab, free, template, t, rng))


def _trial(tab: _Tables, free: tuple[int, ...], template: list[int], t: int, rng) -> list[int]:
    state = template.copy()
    rand = rng.random
    for i in free:
        state[i] = int(rand() * tab.k[i])
    if t:
        _run_lazy(tab, free, state, t, rand)
    return state


def straight_step(net: BeliefNetwork, cs: ChainState, rng: RandomStream) -> ChainState:
    """One cyclic-scan step: resample the cursor's node from its full
    conditional and advance the cursor over the free nodes."""
    if not cs.free:
        raise ValueError("no free nodes: every node is clamped by evidence")
    _resample(net.tables, cs.state, cs.free[cs.cursor], rng.random)
    cs.cursor = (cs.cursor + 1) % len(cs.free)
    return cs
