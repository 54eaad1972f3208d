import itertools
import math

import pytest

import bnras
from bnras import Cpt, Evidence, Node


def build(name, specs):
    """specs: list of (name, outcomes, parents, rows)."""
    nodes = tuple(
        Node(n, tuple(o), tuple(p), Cpt.from_rows(rows)) for n, o, p, rows in specs
    )
    return bnras.BeliefNetwork(name, nodes)


def test_ab_validates_positive(ab):
    report = bnras.validate_network(ab)
    assert report.ok
    assert report.acyclic and report.resolved and report.normalized
    assert report.positive
    assert report.issues == ()


def test_two_cycle_fails_acyclicity():
    net = build(
        "LOOP",
        [
            ("A", "tf", ["B"], [(0.5, 0.5), (0.5, 0.5)]),
            ("B", "tf", ["A"], [(0.5, 0.5), (0.5, 0.5)]),
        ],
    )
    report = bnras.validate_network(net)
    assert not report.ok
    assert not report.acyclic


def test_bad_row_sum_reported():
    net = build("BAD", [("A", "tf", [], [(0.6, 0.5)])])
    report = bnras.validate_network(net)
    assert not report.ok
    assert not report.normalized
    assert any("sums to" in issue for issue in report.issues)


def test_unknown_parent_reported():
    net = build("MISS", [("A", "tf", ["Q"], [(0.5, 0.5), (0.5, 0.5)])])
    report = bnras.validate_network(net)
    assert not report.ok and not report.resolved


def test_wrong_row_count_reported():
    net = build(
        "ROWS",
        [
            ("A", "tf", [], [(0.5, 0.5)]),
            ("B", "tf", ["A"], [(0.5, 0.5)]),  # needs 2 rows
        ],
    )
    report = bnras.validate_network(net)
    assert not report.ok


def test_repeated_parent_reported():
    net = build(
        "DUP",
        [
            ("A", "tf", [], [(0.5, 0.5)]),
            ("B", "tf", ["A", "A"], [(0.5, 0.5)] * 4),
        ],
    )
    report = bnras.validate_network(net)
    assert not report.ok
    assert any("repeated parent" in issue for issue in report.issues)


def test_zero_one_entries_flagged_not_failed():
    net = build("DET", [("A", "tf", [], [(1.0, 0.0)])])
    report = bnras.validate_network(net)
    assert report.ok
    assert not report.positive


def test_topological_order_ab(ab):
    assert bnras.topological_order(ab) == ("A", "B")


def test_topological_order_declaration_ties():
    net = build(
        "TRIO",
        [
            ("X", "tf", [], [(0.5, 0.5)]),
            ("Y", "tf", [], [(0.5, 0.5)]),
            ("Z", "tf", [], [(0.5, 0.5)]),
        ],
    )
    assert bnras.topological_order(net) == ("X", "Y", "Z")


def test_topological_order_chain(chain5):
    assert bnras.topological_order(chain5) == ("C1", "C2", "C3", "C4", "C5")


def test_topological_order_raises_on_cycle():
    net = build(
        "LOOP",
        [
            ("A", "tf", ["B"], [(0.5, 0.5), (0.5, 0.5)]),
            ("B", "tf", ["A"], [(0.5, 0.5), (0.5, 0.5)]),
        ],
    )
    with pytest.raises(bnras.CycleError):
        bnras.topological_order(net)


def test_conditional_probability_ab(ab):
    # B given A=t; state indices: outcome 0 is t
    assert bnras.conditional_probability(ab, "B", 0, [0, 0]) == 0.9
    assert bnras.conditional_probability(ab, "B", 0, [1, 0]) == 0.2
    # root node: any state
    assert bnras.conditional_probability(ab, "A", 0, [1, 1]) == 0.5


def test_conditional_probability_uniform():
    net = build("U3", [("X", ("a", "b", "c"), [], [(1 / 3, 1 / 3, 1 / 3)])])
    for v in range(3):
        assert bnras.conditional_probability(net, "X", v, [0]) == pytest.approx(1 / 3)


def test_joint_probability_ab(ab):
    assert bnras.joint_probability(ab, [0, 0]) == pytest.approx(0.45, abs=1e-15)
    assert bnras.joint_probability(ab, [1, 0]) == pytest.approx(0.10, abs=1e-15)


def test_joint_probability_uniform_is_two_to_minus_n():
    specs = [(f"N{i}", "tf", [], [(0.5, 0.5)]) for i in range(5)]
    net = build("U5", specs)
    for state in itertools.product((0, 1), repeat=5):
        assert bnras.joint_probability(net, state) == pytest.approx(2**-5, abs=1e-18)


def test_markov_blanket_ab(ab):
    assert bnras.markov_blanket(ab, "A") == {"B"}
    assert bnras.markov_blanket(ab, "B") == {"A"}


def test_markov_blanket_v_structure():
    net = build(
        "V",
        [
            ("A", "tf", [], [(0.5, 0.5)]),
            ("B", "tf", [], [(0.5, 0.5)]),
            ("C", "tf", ["A", "B"], [(0.5, 0.5)] * 4),
        ],
    )
    assert bnras.markov_blanket(net, "A") == {"C", "B"}
    assert bnras.markov_blanket(net, "C") == {"A", "B"}


def test_free_nodes_cases(ab):
    assert bnras.free_nodes(ab, bnras.parse_evidence("B=t", ab)) == ("A",)
    assert bnras.free_nodes(ab, Evidence.empty()) == ("A", "B")
    assert bnras.free_nodes(ab, bnras.parse_evidence("A=t,B=t", ab)) == ()


def test_conditional_rows_sum_to_one(nets):
    for net in nets.values():
        for nd in net.nodes:
            parent_domains = [range(len(net.node(p).outcomes)) for p in nd.parents]
            for combo in itertools.product(*parent_domains):
                state = [0] * len(net.nodes)
                for p, v in zip(nd.parents, combo):
                    state[net.node_index[p]] = v
                total = math.fsum(
                    bnras.conditional_probability(net, nd.name, v, state)
                    for v in range(len(nd.outcomes))
                )
                assert abs(total - 1.0) <= 1e-9


def test_joint_sums_to_one(nets):
    for net in nets.values():
        domains = [range(len(nd.outcomes)) for nd in net.nodes]
        total = math.fsum(
            bnras.joint_probability(net, state) for state in itertools.product(*domains)
        )
        assert abs(total - 1.0) <= 1e-9


def test_topological_order_is_edge_respecting_permutation(nets):
    for net in nets.values():
        order = bnras.topological_order(net)
        assert sorted(order) == sorted(nd.name for nd in net.nodes)
        position = {name: i for i, name in enumerate(order)}
        for nd in net.nodes:
            for p in nd.parents:
                assert position[p] < position[nd.name]


def test_markov_blanket_symmetry(nets):
    for net in nets.values():
        for a in net.nodes:
            for b in net.nodes:
                if a.name == b.name:
                    continue
                in_a = b.name in bnras.markov_blanket(net, a.name)
                in_b = a.name in bnras.markov_blanket(net, b.name)
                assert in_a == in_b


def test_check_evidence_rejects_bad_entries(ab):
    with pytest.raises(ValueError):
        bnras.check_evidence(ab, Evidence({"Q": 0}))
    with pytest.raises(ValueError):
        bnras.check_evidence(ab, Evidence({"A": 2}))
    bnras.check_evidence(ab, Evidence({"A": 1}))


def test_check_state(ab):
    with pytest.raises(ValueError):
        bnras.check_state(ab, [0])
    with pytest.raises(ValueError):
        bnras.check_state(ab, [0, 5])
    bnras.check_state(ab, [1, 0])


def test_normalize_rows_renormalizes_within_tolerance():
    rows = bnras.normalize_rows([(0.5, 0.5000000001)])
    assert math.fsum(rows[0]) == pytest.approx(1.0, abs=1e-15)
    # idempotent: a renormalized row is left alone
    assert bnras.normalize_rows(rows) == rows


def test_normalize_rows_rejects_beyond_tolerance():
    with pytest.raises(ValueError, match="row 0 sums"):
        bnras.normalize_rows([(0.6, 0.5)])


def test_normalize_rows_keeps_exact_rows_untouched():
    rows = ((0.25, 0.75),)
    assert bnras.normalize_rows(rows) == rows


def test_cpt_positivity_and_extremes():
    cpt = Cpt.from_rows([(0.2, 0.8), (0.05, 0.95)])
    assert cpt.positive
    assert cpt.min_entry == 0.05
    assert cpt.max_entry == 0.95
    assert not Cpt.from_rows([(1.0, 0.0)]).positive
