"""Tests for self-similar actions: path actions, slackness, cofinality and the verdict"""

import pytest

import graph_tools as gt
import self_similar as ss
from error_handling import BoundExceededError, FixtureError, PreconditionError
from groupalg_utils import TriState


@pytest.fixture
def odometer(data_file):
    return ss.load_selfsim(data_file("selfsim_odometer.json"))


@pytest.fixture
def subtree(data_file):
    return ss.load_selfsim(data_file("selfsim_subtree.json"))


def test_fixtures_satisfy_the_identities(data_file):
    for name in ("selfsim_odometer.json", "selfsim_subtree.json", "selfsim_lazy.json", "selfsim_trivial_o2.json"):
        a = ss.load_selfsim(data_file(name))
        assert ss.validate_cocycle_identities(a).ok, name


def test_broken_restriction_is_reported(data_file):
    a = ss.load_selfsim(data_file("selfsim_broken.json"))
    assert "restriction_identity" in ss.validate_cocycle_identities(a).codes()


def test_builtin_odometer_matches_fixture(odometer):
    built = ss.odometer()
    assert built.sigma == odometer.sigma
    assert built.restrict == odometer.restrict
    back = ss.selfsim_from_json(ss.selfsim_to_json(odometer))
    assert back.sigma == odometer.sigma
    assert back.identity == "1"


def test_sources_are_rejected(data_file):
    line = gt.load_graph(data_file("graph_line.dot"))
    with pytest.raises(PreconditionError):
        ss.trivial_action(line)


def test_edges_must_map_to_edges():
    graph = gt.make_graph(["v"], [("0", "v", "v"), ("1", "v", "v")])
    with pytest.raises(FixtureError):
        ss.make_selfsim(graph, ["1", "g"], {"g": {"0": "v", "1": "0"}}, {"g": {"0": "1", "1": "g"}})
    with pytest.raises(FixtureError):
        ss.make_selfsim(graph, ["1", "g"], {"g": {"0": "1", "1": "0"}}, {"g": {"0": "1"}})


def test_odometer_adds_one(odometer):
    assert ss.act_on_path(odometer, "g", ["0", "0", "0"]) == (("1", "0", "0"), "1")
    assert ss.act_on_path(odometer, "g", ["1", "1", "1"]) == (("0", "0", "0"), "g")
    with pytest.raises(PreconditionError):
        ss.act_on_path(odometer, "h", ["0"])


def test_words_need_the_product_table(odometer, data_file):
    with pytest.raises(BoundExceededError):
        ss.multiply(odometer, ["g", "g"])
    lazy = ss.load_selfsim(data_file("selfsim_lazy.json"))
    assert ss.act_on_path(lazy, ["h", "h"], ["a", "b"]) == (("a", "b"), "h")


def test_paths_are_checked(subtree):
    with pytest.raises(PreconditionError):
        ss.act_on_path(subtree, "g", ["x", "f"])
    assert ss.act_on_path(subtree, "g", ["f", "x"]) == (("f", "x"), "1")


def test_odometer_has_no_strongly_fixed_paths(odometer):
    search = ss.strongly_fixed_paths(odometer, "g", 10)
    assert search.paths == []
    assert search.exhausted
    slack = ss.is_slack(odometer, "g", "v", 10)
    assert slack.status is TriState.REFUTED
    assert slack.witness["states"][0] == "g"


def test_subtree_strongly_fixed_paths(subtree):
    search = ss.strongly_fixed_paths(subtree, "g", 10)
    assert search.exhausted
    assert sorted(search.to_dict()["paths"]) == ["e", "f/x", "f/y"]
    with pytest.raises(PreconditionError):
        ss.strongly_fixed_paths(subtree, "g", 0)


def test_subtree_slackness(subtree):
    slack = ss.is_slack(subtree, "g", "v", 10)
    assert slack.status is TriState.PROVEN
    assert slack.value == 2
    assert ss.is_slack(subtree, "g", "v", 1).status is TriState.UNKNOWN
    assert ss.is_slack(subtree, "g", "w", 10).status is TriState.REFUTED
    assert ss.is_slack(subtree, "1", "w", 10).value == 1


def test_fixes_all_paths(subtree):
    assert ss.fixes_all_paths(subtree, "g", "v")
    moved = ss.fixes_all_paths(subtree, "g", "w")
    assert not moved
    assert moved.witness == {"path": ["x"], "image": ["y"]}


def test_subtree_is_not_cofinal(subtree):
    assert ss.orbit_relation(subtree) == [["v"], ["w"]]
    assert ss.ll_relation(subtree)["w"] == frozenset({"v", "w"})
    cofinal = ss.is_cofinal_ss(subtree)
    assert cofinal.status is TriState.REFUTED
    assert cofinal.witness == {"v": "w", "component": ["v"]}


def test_subtree_verdict(subtree):
    result = ss.verdict(subtree, 10)
    assert result.kind == ss.HYPOTHESES_REFUTED
    assert result.hypotheses["fixing_implies_slack"].status is TriState.PROVEN
    assert result.hypotheses["hausdorff"].status is TriState.PROVEN
    assert result.to_dict()["essential"] == TriState.REFUTED.value


def test_odometer_verdict(odometer):
    result = ss.verdict(odometer, 10)
    assert result.kind == gt.SIMPLE_PURELY_INFINITE
    assert result.essential is TriState.PROVEN
    assert result.reduced is TriState.PROVEN


def test_lazy_state_is_not_slack(data_file):
    lazy = ss.load_selfsim(data_file("selfsim_lazy.json"))
    assert ss.fixing_implies_slack(lazy, 10).status is TriState.REFUTED
    found = ss.hausdorff_condition(lazy, 10)
    # the frontier doubles at every level and never empties
    assert found.status is TriState.UNKNOWN
    assert found.witness == {"states": ["h"]}
    assert ss.verdict(lazy, 10).kind == ss.HYPOTHESES_REFUTED


def test_trivial_group_matches_graph_verdict(data_file):
    a = ss.load_selfsim(data_file("selfsim_trivial_o2.json"))
    assert ss.verdict(a).kind == gt.simplicity_verdict(a.graph).kind == gt.SIMPLE_PURELY_INFINITE
    loop = ss.trivial_action(gt.load_graph(data_file("graph_loop.json")))
    assert ss.verdict(loop).kind == gt.NOT_SIMPLE == gt.simplicity_verdict(loop.graph).kind


def test_path_cap(data_file, monkeypatch):
    from config import Config

    lazy = ss.load_selfsim(data_file("selfsim_lazy.json"))
    monkeypatch.setattr(Config, "MAX_PATHS_PER_LEVEL", 8)
    with pytest.raises(BoundExceededError):
        ss.strongly_fixed_paths(lazy, "h", 10)


@pytest.mark.parametrize("name", ["selfsim_odometer.json", "selfsim_subtree.json",
                                  "selfsim_lazy.json", "selfsim_trivial_o2.json"])
def test_strongly_fixed_paths_are_minimal_and_fixed(data_file, name):
    a = ss.load_selfsim(data_file(name))
    for g in a.states:
        search = ss.strongly_fixed_paths(a, g, 6)
        for mu in search.paths:
            assert ss.act_on_path(a, g, mu) == (mu, a.identity)
            for k in range(1, len(mu)):
                assert ss.act_on_path(a, g, mu[:k]) != (mu[:k], a.identity), (g, mu)
        for mu in search.paths:
            assert not any(nu != mu and nu == mu[:len(nu)] for nu in search.paths)


def _random_graph_without_sources(rng):
    n = int(rng.integers(1, 5))
    vertices = [f"v{i}" for i in range(n)]
    edges = []
    for v in vertices:
        for _ in range(int(rng.integers(1, 3))):
            edges.append((f"e{len(edges)}", vertices[int(rng.integers(0, n))], v))
    return gt.make_graph(vertices, edges, name="receiving")


def test_trivial_group_matches_graph_verdict_on_random_graphs(rng):
    for _ in range(30):
        q = _random_graph_without_sources(rng)
        assert ss.verdict(ss.trivial_action(q)).kind == gt.simplicity_verdict(q).kind, q.edges
