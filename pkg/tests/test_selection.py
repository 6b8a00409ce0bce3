from __future__ import annotations

import json

import numpy as np
import pytest

from spal.pagerank import PageRankParams, pagerank
from spal.scan import ScanParams
from spal.selection import (
    featprop_select,
    pagerank_select,
    random_select,
    spa_select,
    uncertainty_select,
)

from conftest import make_graph, random_graph


class TestSpaSelect:
    def test_two_triangles_budget_two(self, two_triangles):
        res = spa_select(two_triangles, ScanParams(0.5, 1), b=2)
        assert res.selected == [0, 3]
        assert [r.community for r in res.provenance] == [0, 1]
        for r in res.provenance:
            assert r.score == pytest.approx(1 / 3)

    def test_two_triangles_budget_four(self, two_triangles):
        res = spa_select(two_triangles, ScanParams(0.5, 1), b=4)
        # reps {0, 3} first, then global top-up (all tied at 1/6 -> lowest ids)
        assert res.selected == [0, 3, 1, 2]
        assert [r.community for r in res.provenance] == [0, 1, -1, -1]

    def test_budget_saturation(self, two_triangles):
        res = spa_select(two_triangles, ScanParams(0.5, 1), b=100)
        assert sorted(res.selected) == list(range(6))
        assert res.budget == 100

    def test_more_communities_than_budget(self, two_triangles):
        # k = 2 communities, b = 1: keep the rep with highest global PageRank
        res = spa_select(two_triangles, ScanParams(0.5, 1), b=1)
        assert res.selected == [0]  # global scores all tie -> lowest id

    def test_no_communities_reduces_to_global_pagerank(self, star5):
        # leaves of a star share only the center: similarity 0.5 < 0.9
        res = spa_select(star5, ScanParams(0.9, 3), b=2)
        pr = pagerank_select(star5, b=2)
        assert res.selected == pr.selected
        assert all(r.community == -1 for r in res.provenance)

    def test_representative_maximality(self):
        rng = np.random.default_rng(30)
        from spal.scan import scan_partition

        for _ in range(5):
            g = random_graph(rng, 30, 0.2)
            params = ScanParams(0.4, 2)
            res = spa_select(g, params, b=30)
            part = scan_partition(g, params)
            rep_of = {r.community: r.node for r in res.provenance if r.community >= 0}
            for cid, community in enumerate(part.communities):
                sv = pagerank(g, subset=community)
                rep_idx = np.searchsorted(sv.node_ids, rep_of[cid])
                assert not (sv.scores > sv.scores[rep_idx]).any()

    def test_invalid_budget(self, triangle):
        with pytest.raises(ValueError):
            spa_select(triangle, b=0)

    def test_ordered_by_score(self, two_triangles):
        res = spa_select(two_triangles, ScanParams(0.5, 1), b=6)
        scores = [r.score for r in res.provenance]
        assert scores == sorted(scores, reverse=True)


class TestRandomSelect:
    def test_budget_saturation(self, triangle):
        assert sorted(random_select(triangle, 3, seed=0).selected) == [0, 1, 2]
        assert sorted(random_select(triangle, 10, seed=0).selected) == [0, 1, 2]

    def test_deterministic(self, two_triangles):
        a = random_select(two_triangles, 3, seed=7)
        b = random_select(two_triangles, 3, seed=7)
        assert a.selected == b.selected

    def test_uniformity(self):
        g = make_graph([(i, (i + 1) % 10) for i in range(10)])
        counts = np.zeros(10)
        for trial in range(10_000):
            counts[random_select(g, 1, seed=trial).selected[0]] += 1
        freq = counts / 10_000
        sigma = np.sqrt(0.1 * 0.9 / 10_000)
        assert np.abs(freq - 0.1).max() <= 3 * sigma


class TestPagerankSelect:
    def test_star_center_first(self, star5):
        res = pagerank_select(star5, PageRankParams(damping=0.85), b=1)
        assert res.selected == [0]

    def test_cycle_tie_break(self):
        g = make_graph([(i, (i + 1) % 6) for i in range(6)])
        assert pagerank_select(g, b=3).selected == [0, 1, 2]

    def test_full_budget_sorted_by_score(self, star5):
        res = pagerank_select(star5, b=5)
        scores = [r.score for r in res.provenance]
        assert scores == sorted(scores, reverse=True)
        assert sorted(res.selected) == list(range(5))

    def test_monotone_nesting(self):
        rng = np.random.default_rng(31)
        g = random_graph(rng, 20, 0.2)
        previous = []
        for b in range(1, 21):
            current = pagerank_select(g, b=b).selected
            assert current[: len(previous)] == previous
            previous = current


class TestUncertaintySelect:
    def test_uniform_row_ranks_first(self):
        probs = np.array([[0.25, 0.25, 0.25, 0.25], [0.7, 0.1, 0.1, 0.1], [1.0, 0, 0, 0]])
        res = uncertainty_select(probs, labeled=set(), b=3)
        assert res.selected == [0, 1, 2]  # uniform first, one-hot last

    def test_binary_entropy_ordering(self):
        p = np.array([0.5, 0.6, 0.7, 0.8, 0.9])
        probs = np.stack([p, 1 - p], axis=1)
        res = uncertainty_select(probs, labeled=set(), b=2)
        assert sorted(res.selected) == [0, 1]

    def test_excludes_labeled(self):
        probs = np.full((4, 2), 0.5)
        res = uncertainty_select(probs, labeled={0, 2}, b=4)
        assert sorted(res.selected) == [1, 3]

    def test_all_labeled_error(self):
        probs = np.full((2, 2), 0.5)
        with pytest.raises(ValueError, match="labeled"):
            uncertainty_select(probs, labeled={0, 1}, b=1)

    def test_malformed_rows_error(self):
        with pytest.raises(ValueError, match="distribution"):
            uncertainty_select(np.array([[0.5, 0.9]]), labeled=set(), b=1)

    def test_tie_break_low_id(self):
        probs = np.full((5, 3), 1 / 3)
        res = uncertainty_select(probs, labeled=set(), b=2)
        assert res.selected == [0, 1]


class TestFeatpropSelect:
    def test_budget_saturation(self, two_triangles):
        res = featprop_select(two_triangles, b=6, seed=0)
        assert sorted(res.selected) == list(range(6))

    def test_two_cliques_one_medoid_each(self):
        # disconnected cliques with cluster-constant features
        edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
        edges += [(i + 5, j + 5) for i in range(5) for j in range(i + 1, 5)]
        features = np.zeros((10, 2))
        features[5:] = [50.0, -50.0]
        g = make_graph(edges, num_nodes=10, features=features)
        res = featprop_select(g, steps=2, b=2, seed=0)
        assert sorted(v // 5 for v in res.selected) == [0, 1]

    def test_steps_zero_uses_raw_features(self):
        rng = np.random.default_rng(32)
        features = rng.standard_normal((8, 3))
        g = make_graph([(i, (i + 1) % 8) for i in range(8)], features=features)
        from spal.kmedoids import kmedoids

        res = featprop_select(g, steps=0, b=3, seed=5)
        assert res.selected == kmedoids(features, 3, seed=5).tolist()

    def test_budget_exceeding_nodes_errors(self, triangle):
        with pytest.raises(ValueError, match="medoid"):
            featprop_select(triangle, b=4)


class TestContracts:
    """Shared invariants: size, uniqueness, determinism."""

    @pytest.mark.parametrize("budget", [1, 2, 5, 11])
    def test_all_strategies(self, budget):
        rng = np.random.default_rng(33)
        g = random_graph(rng, 11, 0.3)
        probs = rng.dirichlet(np.ones(3), size=11)

        runs = {
            "spa": lambda: spa_select(g, ScanParams(0.4, 1), b=budget),
            "random": lambda: random_select(g, budget, seed=4),
            "pagerank": lambda: pagerank_select(g, b=budget),
            "uncertainty": lambda: uncertainty_select(probs, set(), budget),
            "featprop": lambda: featprop_select(g, b=budget, seed=4),
        }
        for name, call in runs.items():
            first = call()
            assert len(first.selected) == min(budget, 11), name
            assert len(set(first.selected)) == len(first.selected), name
            assert all(0 <= v < 11 for v in first.selected), name
            assert call().selected == first.selected, name
            assert first.query_time_ms >= 0.0


def test_selection_json_roundtrip(tmp_path, two_triangles):
    res = spa_select(two_triangles, ScanParams(0.5, 1), b=3)
    path = tmp_path / "sel.json"
    res.write_json(path)
    data = json.loads(path.read_text())
    assert data["strategy"] == "spa"
    assert data["budget"] == 3
    assert data["selected"] == res.selected
    assert len(data["provenance"]) == 3
    assert {"node", "community", "score"} <= set(data["provenance"][0])
