import itertools

import pytest

import bnras


@pytest.fixture(scope="session")
def nets():
    return bnras.builtin_networks()


@pytest.fixture(scope="session")
def ab(nets):
    return nets["AB"]


@pytest.fixture(scope="session")
def path2(nets):
    return nets["PATH2"]


@pytest.fixture(scope="session")
def chain5(nets):
    return nets["CHAIN5"]


@pytest.fixture(scope="session")
def minialarm(nets):
    return nets["MINIALARM"]


@pytest.fixture(scope="session")
def uninode():
    """Single free binary node with a uniform table: the smallest chain."""
    node = bnras.Node("X", ("t", "f"), (), bnras.Cpt.from_rows([(0.5, 0.5)]))
    return bnras.BeliefNetwork("UNI", (node,))


@pytest.fixture
def empty():
    return bnras.Evidence.empty()


def brute_posteriors(net, ev):
    """Test-side oracle, written independently of the package internals.

    Sums the product of raw table entries over every full joint assignment
    (including evidence nodes, skipping inconsistent ones), with row indices
    accumulated Horner-style over the parent list. Returns
    ({node: [posterior per outcome]}, evidence probability).
    """
    names = [nd.name for nd in net.nodes]
    domains = [range(len(nd.outcomes)) for nd in net.nodes]
    free = [nd.name for nd in net.nodes if nd.name not in ev]
    sums = {name: [0.0] * len(net.node(name).outcomes) for name in free}
    total = 0.0
    for combo in itertools.product(*domains):
        assignment = dict(zip(names, combo))
        if any(assignment[name] != v for name, v in ev.items()):
            continue
        p = 1.0
        for nd in net.nodes:
            row = 0
            for parent in nd.parents:
                row = row * len(net.node(parent).outcomes) + assignment[parent]
            p *= nd.cpt.rows[row][assignment[nd.name]]
        total += p
        for name in free:
            sums[name][assignment[name]] += p
    return {name: [s / total for s in sums[name]] for name in free}, total
