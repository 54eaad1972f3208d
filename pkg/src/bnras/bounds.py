"""A-priori convergence requirements for the randomized sampler.

Three closed-form requirements, all ceiled to integers:

* trial count       N(alpha, delta)            = ceil(1 / (4 delta alpha^2))
* mixing transitions t_mix(gamma, Pi, p0)      = ceil((ln gamma + ln Pi) / ln(1 - p0^2/8))
* transitions/trial t(alpha, delta, gamma, Pi, p0)
      = ceil( ceil(4 (1+gamma)^3 / (3 alpha^2))
              * (12 ceil(-ln delta) + 1)
              * (ln gamma + ln Pi) / ln(1 - p0^2/8) )

Pi is the smallest stationary (posterior joint) probability of the chain and
p0 its smallest positive transition probability; both can come from the
exact oracle or from the factored lower bounds computed here without any
enumeration. Feeding lower bounds for Pi and p0 can only increase the
transition requirements, never understate them.

The mixing ratio is invariant to the logarithm base; the ceil(-log delta)
factor is not, and this module fixes the natural logarithm for it. All
formulas require probabilities strictly inside (0, 1): zero or one table
entries make the chain reducible in the worst case, so the bound functions
refuse them instead of returning infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MixingOverflowError, PositivityError
from .exact import (
    DEFAULT_ENUM_CAP,
    DEFAULT_MATRIX_CAP,
    build_transition_matrix,
    min_joint_posterior,
    min_transition_probability,
)
from .network import BeliefNetwork, Evidence, check_evidence


@dataclass(frozen=True)
class ErrorTolerances:
    """Convergence targets: interval error alpha, failure probability delta,
    pointwise-distance target gamma, and relative error epsilon (epsilon is
    carried for reporting only; no trial formula for it is implemented)."""

    alpha: float
    delta: float
    gamma: float
    epsilon: float = 0.1

    def __post_init__(self):
        for field_name in ("alpha", "delta", "gamma", "epsilon"):
            value = getattr(self, field_name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{field_name} must lie in (0, 1), got {value!r}")


@dataclass(frozen=True)
class BoundsReport:
    trials: int
    t_mix: int
    t_per_trial: int
    pi_min: float
    p0: float
    tolerances: ErrorTolerances
    mode: str  # "exact" | "factored"

    @property
    def exact_inputs(self) -> bool:
        return self.mode == "exact"


def _check_unit_interval(**values: float) -> None:
    for name, value in values.items():
        if not 0.0 < value < 1.0:
            raise ValueError(f"{name} must lie in (0, 1), got {value!r}")


def trials_bound(alpha: float, delta: float) -> int:
    """Trials needed for interval error alpha with failure probability
    delta, from the Chebyshev scoring argument."""
    _check_unit_interval(alpha=alpha, delta=delta)
    return math.ceil(1.0 / (4.0 * delta * alpha * alpha))


def _mixing_ratio(gamma: float, pi_min: float, p0: float) -> float:
    numerator = math.log(gamma) + math.log(pi_min)
    base = 1.0 - p0 * p0 / 8.0
    denominator = math.log(base)
    if denominator == 0.0:
        raise MixingOverflowError(
            f"p0 = {p0!r} is too small: 1 - p0^2/8 rounds to 1, the "
            "transition requirement overflows any finite count"
        )
    return numerator / denominator


def mixing_bound(gamma: float, pi_min: float, p0: float) -> int:
    """Transitions after which the chain's relative pointwise distance from
    stationarity is guaranteed to be at most gamma (conductance bound)."""
    _check_unit_interval(gamma=gamma, pi_min=pi_min, p0=p0)
    return math.ceil(_mixing_ratio(gamma, pi_min, p0))


def transitions_per_trial(tol: ErrorTolerances, pi_min: float, p0: float) -> int:
    """Worst-case transitions per trial for the full (alpha, delta, gamma)
    guarantee. The first factor carries its own ceiling; -log delta uses the
    natural logarithm."""
    _check_unit_interval(pi_min=pi_min, p0=p0)
    first = math.ceil(4.0 * (1.0 + tol.gamma) ** 3 / (3.0 * tol.alpha * tol.alpha))
    second = 12 * math.ceil(-math.log(tol.delta)) + 1
    return math.ceil(first * second * _mixing_ratio(tol.gamma, pi_min, p0))


def factored_lower_bounds(net: BeliefNetwork, ev: Evidence) -> tuple[float, float]:
    """Certified lower bounds (Pi_lb, p0_lb) computed from table entries
    alone, with no enumeration.

    Pi_lb multiplies each node's smallest table entry: any posterior joint
    probability is at least the full joint, which is at least this product.
    p0_lb bounds each full conditional from below by m/(k*M), where m and M
    multiply the smallest and largest entries over the node and its
    children and k is the node's outcome count, then applies the 1/(2n)
    selection factor of the lazy kernel.
    """
    check_evidence(net, ev)
    if not all(nd.cpt.positive for nd in net.nodes):
        raise PositivityError(
            "factored bounds require every table entry strictly inside (0, 1); "
            "0/1 entries (deterministic relationships) void the mixing analysis"
        )
    free = [nd for nd in net.nodes if nd.name not in ev]
    if not free:
        raise ValueError("no free nodes: every node is clamped by evidence")

    pi_lb = 1.0
    for nd in net.nodes:
        pi_lb *= nd.cpt.min_entry

    children: dict[str, list[str]] = {nd.name: [] for nd in net.nodes}
    for nd in net.nodes:
        for p in nd.parents:
            children[p].append(nd.name)

    worst = None
    for nd in free:
        group = [nd] + [net.node(c) for c in children[nd.name]]
        m = 1.0
        big = 1.0
        for member in group:
            m *= member.cpt.min_entry
            big *= member.cpt.max_entry
        ratio = m / (len(nd.outcomes) * big)
        if worst is None or ratio < worst:
            worst = ratio
    p0_lb = worst / (2.0 * len(free))
    return pi_lb, p0_lb


def report_bounds(
    net: BeliefNetwork,
    ev: Evidence,
    tol: ErrorTolerances,
    mode: str = "exact",
    enum_cap: int = DEFAULT_ENUM_CAP,
    matrix_cap: int = DEFAULT_MATRIX_CAP,
) -> BoundsReport:
    """Assemble the full requirement table for a network and evidence.

    ``exact`` mode reads Pi and p0 off the enumeration oracle (subject to
    its caps); ``factored`` mode uses the certified lower bounds, which can
    only make the transition requirements larger.
    """
    if mode == "exact":
        if not all(nd.cpt.positive for nd in net.nodes):
            raise PositivityError(
                "bounds require every table entry strictly inside (0, 1); "
                "0/1 entries (deterministic relationships) void the mixing analysis"
            )
        pi_min = min_joint_posterior(net, ev, cap=enum_cap)
        p0 = min_transition_probability(build_transition_matrix(net, ev, cap=matrix_cap))
    elif mode == "factored":
        pi_min, p0 = factored_lower_bounds(net, ev)
    else:
        raise ValueError(f"mode must be 'exact' or 'factored', got {mode!r}")
    return BoundsReport(
        trials=trials_bound(tol.alpha, tol.delta),
        t_mix=mixing_bound(tol.gamma, pi_min, p0),
        t_per_trial=transitions_per_trial(tol, pi_min, p0),
        pi_min=pi_min,
        p0=p0,
        tolerances=tol,
        mode=mode,
    )
