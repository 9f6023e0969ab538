import io
import math

import numpy as np
import pytest

from hierlp import (
    ThresholdHistogram,
    area_under_pr,
    area_under_roc,
    build_curves,
    load_split,
    save_split,
    split_edges,
)
from hierlp.oracle import naive_area_under_pr, naive_curves

from conftest import erdos_renyi_digraph, graph_from_edges


def hist(buckets, zero, positives, negatives):
    return ThresholdHistogram(buckets, zero, positives, negatives)


class TestSplitEdges:
    def test_ten_edge_graph_fraction_tenth(self):
        g = graph_from_edges([(i, i + 1) for i in range(10)])
        split = split_edges(g, 0.1, seed=1)
        assert split.train_graph.edge_count == 9
        assert len(split.test_edges) + len(split.dropped_test_edges) == 1

    def test_same_seed_identical(self):
        rng = np.random.default_rng(41)
        g = erdos_renyi_digraph(rng, 100)
        a = split_edges(g, 0.2, seed=9)
        b = split_edges(g, 0.2, seed=9)
        assert a.train_graph == b.train_graph
        assert np.array_equal(a.test_edges, b.test_edges)
        assert np.array_equal(a.dropped_test_edges, b.dropped_test_edges)

    def test_disconnected_leaf_moves_to_dropped(self):
        # star c -> l1..l5; removing one spoke disconnects its leaf
        g = graph_from_edges([(0, i) for i in range(1, 6)])
        for seed in range(10):
            split = split_edges(g, 0.2, seed=seed)
            assert len(split.dropped_test_edges) == 1
            assert len(split.test_edges) == 0
            leaf = split.dropped_test_edges[0][1]
            assert split.train_graph.in_degrees[leaf] == 0

    def test_test_edges_disjoint_from_train(self):
        rng = np.random.default_rng(43)
        g = erdos_renyi_digraph(rng, 200)
        split = split_edges(g, 0.1, seed=3)
        train_keys = set(split.train_graph.edge_keys().tolist())
        n = g.vertex_count
        for u, v in split.test_edges.tolist():
            assert u * n + v not in train_keys
            assert split.train_graph.out_degrees[u] + split.train_graph.in_degrees[u] > 0
            assert split.train_graph.out_degrees[v] + split.train_graph.in_degrees[v] > 0

    def test_fraction_validation(self):
        g = graph_from_edges([(0, 1), (1, 2)])
        with pytest.raises(ValueError):
            split_edges(g, 0.0, seed=1)
        with pytest.raises(ValueError):
            split_edges(g, 1.0, seed=1)

    def test_round_trip_through_file(self, tmp_path):
        rng = np.random.default_rng(44)
        g = erdos_renyi_digraph(rng, 150)
        split = split_edges(g, 0.15, seed=77)
        path = tmp_path / "split.txt"
        save_split(split, path)
        reloaded = load_split(g, path)
        assert reloaded.seed == 77
        assert reloaded.train_graph == split.train_graph
        assert np.array_equal(reloaded.test_edges, split.test_edges)


class TestBuildCurves:
    def test_hand_enumerated_three_thresholds(self):
        h = hist({0.9: (1, 0), 0.7: (0, 1), 0.5: (1, 0)}, (0, 0), 2, 1)
        report = build_curves(h)
        expected = [[0.5, 1.0], [0.5, 0.5], [1.0, 2 / 3]]
        assert report.pr_points.tolist() == expected
        assert list(report.thresholds) == [0.9, 0.7, 0.5]

    def test_degenerate_predictor_flatlines(self):
        h = hist({}, (5, 10**6 - 5), 5, 10**6 - 5)
        report = build_curves(h)
        assert len(report.pr_points) == 1
        recall, precision = report.pr_points[0]
        assert recall == 1.0
        assert precision == 5 / 10**6
        assert report.aupr < 1e-5

    def test_perfect_separation(self):
        h = hist({2.0: (10, 0)}, (0, 90), 10, 90)
        report = build_curves(h)
        assert report.aupr == 1.0
        assert report.auroc == 1.0

    def test_monotonicity_and_endpoints(self):
        rng = np.random.default_rng(50)
        for _ in range(30):
            h = _random_histogram(rng)
            report = build_curves(h)
            assert np.all(np.diff(report.pr_points[:, 0]) >= 0)
            assert np.all(np.diff(report.roc_points[:, 0]) >= 0)
            assert np.all(np.diff(report.roc_points[:, 1]) >= 0)
            assert report.pr_points[-1, 0] == 1.0
            assert tuple(report.roc_points[-1]) == (1.0, 1.0)
            assert 0.0 <= report.aupr <= 1.0
            assert 0.0 <= report.auroc <= 1.0

    def test_degenerate_predictor_attains_prevalence_floor(self):
        # a predictor that ranks nothing still gets AUPR = P / (P + Neg);
        # the prevalence floor holds for such all-zero histograms (a
        # worse-than-random ranking can dip below it under step
        # integration, so it is not asserted for arbitrary histograms)
        for p, neg in ((5, 95), (1, 10**6)):
            h = hist({}, (p, neg), p, neg)
            assert build_curves(h).aupr == p / (p + neg)

    def test_conservation_violation_rejected(self):
        from hierlp import ValidationError

        h = hist({1.0: (2, 0)}, (0, 0), 1, 5)
        with pytest.raises(ValidationError):
            build_curves(h)

    def test_matches_quadratic_reference(self):
        rng = np.random.default_rng(51)
        for _ in range(25):
            h = _random_histogram(rng)
            report = build_curves(h)
            thresholds, pr, roc = naive_curves(h)
            assert np.array_equal(report.thresholds, thresholds)
            assert np.array_equal(report.pr_points, pr)
            assert np.array_equal(report.roc_points, roc)
            assert report.aupr == naive_area_under_pr(pr)


def _random_histogram(rng):
    count = int(rng.integers(1, 40))
    values = np.unique(rng.uniform(0.001, 10.0, count))
    buckets = {
        float(v): (int(rng.integers(0, 5)), int(rng.integers(0, 50))) for v in values
    }
    zero = (int(rng.integers(0, 5)), int(rng.integers(1, 100)))
    p = sum(b[0] for b in buckets.values()) + zero[0]
    neg = sum(b[1] for b in buckets.values()) + zero[1]
    if p == 0:
        buckets[float(values[0])] = (1, buckets[float(values[0])][1])
        p = 1
    return hist(buckets, zero, p, neg)


class TestAreas:
    def test_step_sum_by_hand(self):
        points = [(0.5, 1.0), (0.5, 0.5), (1.0, 2 / 3)]
        assert area_under_pr(points) == pytest.approx(0.5 * 1.0 + 0.5 * (2 / 3))
        assert area_under_pr(points) == pytest.approx(0.8333, abs=1e-4)

    def test_perfect_classifier(self):
        assert area_under_pr([(1.0, 1.0)]) == 1.0
        assert area_under_roc([(0.0, 1.0), (1.0, 1.0)]) == 1.0

    def test_unsorted_input_rejected(self):
        with pytest.raises(ValueError):
            area_under_pr([(0.7, 0.5), (0.3, 1.0)])
        with pytest.raises(ValueError):
            area_under_roc([(0.7, 0.5), (0.3, 1.0)])

    def test_dominance_transfers_to_aupr(self):
        rng = np.random.default_rng(52)
        for _ in range(30):
            h_b = _random_histogram(rng)
            # classifier A: same thresholds, each cumulative (tp, fp) dominates
            # B's by moving one fp from every bucket into the zero bucket
            buckets_a = {}
            moved = 0
            for value, (tp, fp) in h_b.buckets.items():
                take = 1 if fp > 0 else 0
                buckets_a[value] = (tp, fp - take)
                moved += take
            h_a = hist(
                buckets_a,
                (h_b.zero_bucket[0], h_b.zero_bucket[1] + moved),
                h_b.positives_total,
                h_b.negatives_total,
            )
            aupr_a = build_curves(h_a).aupr
            aupr_b = build_curves(h_b).aupr
            assert aupr_a >= aupr_b - 1e-12
