import collections
import json

import pytest

import ctlab

RELATOR = "abABcdCD"


def test_word_problem():
    assert ctlab.reduce(RELATOR) == "1"  # identity prints as 1
    assert ctlab.is_trivial("b" + RELATOR[::-1].swapcase() + "B")
    assert not ctlab.is_trivial("ab")
    assert ctlab.reduce("aAbab") == "bab"


@pytest.fixture(scope="module")
def ball3():
    return ctlab.Ball(3, margin=1)


def test_ball_matches_free_group_below_relator_length(ball3):
    # The relator has length 8, so spheres up to radius 3 are free-group spheres.
    assert len(ball3) == 1 + 8 + 8 * 7 + 8 * 7 * 7
    assert ball3.depth(ball3.at("abc")) == 3
    assert ball3.label(ball3.at("ab")) == "ab"


def test_distance_matches_bfs(ball3):
    neighbours = collections.defaultdict(set)
    for v in range(len(ball3)):
        for g in "aAbBcCdD":
            if ball3.depth(v) < 3:
                w = ball3.at(ball3.label(v) + g) if v else ball3.at(g)
                neighbours[v].add(w)
                neighbours[w].add(v)
    src = ball3.at("ab")
    dist = {src: 0}
    queue = collections.deque([src])
    while queue:
        u = queue.popleft()
        for w in neighbours[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    for word in ["", "b", "cd", "Ab", "dDd"]:
        v = ball3.at(word)
        assert ball3.distance(src, v) == dist[v]
        assert len(ball3.geodesic(src, v)) == dist[v] + 1


def test_twists_and_electrocution(ball3):
    assert ctlab.TwistMap("a", 3).apply("b") == "baaa"
    assert ctlab.TwistMap("c", -1).apply("d") == "dC"
    es = ctlab.ElectricSpace(ball3, "a")
    assert es.distance(0, ball3.at("aaa")) == 0
    assert es.distance(0, ball3.at("bab")) == 2
    defect, used, _ = ctlab.electric_distortion(es, ctlab.TwistMap("a", 1), samples=50, seed=3)
    assert defect == 0 and used > 0
    with pytest.raises(ctlab.ConfigError):
        ctlab.ElectricSpace(ball3, "b")


def test_render_counts_edges(ball3):
    svg = ctlab.render_ball(ball3, layers="ball_edges")
    assert svg.count('class="edge"') == ball3.edge_count()
    assert ctlab.render_ball(ball3, layers="").count("<circle") == 1


def test_run_experiment(tmp_path):
    out = ctlab.run_experiment("{}", output=tmp_path / "empty")
    assert out["exit_code"] == 0 and out["results"] == []
    assert (tmp_path / "empty" / "summary.csv").read_text() == "suite,status,constants,witness,artifacts\n"
    with pytest.raises(ctlab.ConfigError, match="warp"):
        ctlab.run_experiment(json.dumps({"suites": ["warp"]}))
    cfg = {"ball": {"R": 4, "margin": 2}, "suites": [{"name": "ball", "samples": 20}]}
    out = ctlab.run_experiment(json.dumps(cfg), output=tmp_path / "b", cache=tmp_path / "cache")
    assert out["exit_code"] == 0
    assert [r["id"] for r in out["results"]] == ["ball"]
    assert (tmp_path / "b" / "ball.csv").exists()
