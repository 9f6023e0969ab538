"""Train/test edge splits and exact PR/ROC curve construction.

A split removes a uniform sample of edges from the graph; sampled edges
whose endpoints become disconnected in the training graph are excluded
from evaluation entirely (they are recorded, but never counted as
missed positives). Curves are built from a ThresholdHistogram by a
single descending prefix sum; every distinct score value is one
threshold and a prediction at exactly the threshold counts as positive.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .engine import ThresholdHistogram, ValidationError
from .graph import Graph
from .scores import ScoreSpec


@dataclass
class EdgeSplit:
    """Seeded partition of a graph's edges into train graph + test set."""

    train_graph: Graph
    test_edges: np.ndarray  # (T, 2), canonical (u, v) order
    dropped_test_edges: np.ndarray  # sampled edges with a disconnected endpoint
    seed: int
    fraction: float


@dataclass
class EvaluationReport:
    """PR/ROC curves with their areas and class counts."""

    thresholds: np.ndarray
    pr_points: np.ndarray  # (recall, precision), ascending recall
    roc_points: np.ndarray  # (fpr, tpr), ascending fpr
    aupr: float
    auroc: float
    positives_total: int
    negatives_total: int
    spec: ScoreSpec | None = None
    metadata: dict = field(default_factory=dict)


def split_edges(graph, fraction=0.10, seed=0):
    """Uniformly sample floor(fraction * |E|) edges as held-out positives.

    Deterministic for a given seed. Sampled edges with an endpoint of
    degree zero in the training graph land in dropped_test_edges.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    m = graph.edge_count
    sample_size = int(fraction * m)
    if sample_size < 1:
        raise ValueError("fraction * edge_count is below one edge")
    rng = np.random.default_rng(seed)
    picked = np.zeros(m, dtype=bool)
    picked[rng.permutation(m)[:sample_size]] = True
    u, v = graph.edges()
    train_graph = Graph(
        graph.vertex_count, u[~picked], v[~picked], vertex_labels=graph.vertex_labels
    )
    connected = (train_graph.out_degrees + train_graph.in_degrees) > 0
    test_u, test_v = u[picked], v[picked]
    ok = connected[test_u] & connected[test_v]
    test = np.column_stack([test_u[ok], test_v[ok]])
    dropped = np.column_stack([test_u[~ok], test_v[~ok]])
    return EdgeSplit(
        train_graph=train_graph,
        test_edges=test,
        dropped_test_edges=dropped,
        seed=int(seed),
        fraction=float(fraction),
    )


def save_split(split, sink):
    """Persist a split (test edges + seed); enough to rerun bit-exactly."""
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "w") as fh:
            save_split(split, fh)
        return
    sink.write("# hierlp edge split\n")
    sink.write(f"# seed {split.seed}\n")
    sink.write(f"# fraction {split.fraction!r}\n")
    sink.write(f"# vertices {split.train_graph.vertex_count}\n")
    sink.write(f"# test {len(split.test_edges)}\n")
    for u, v in split.test_edges.tolist():
        sink.write(f"{u} {v}\n")
    sink.write(f"# dropped {len(split.dropped_test_edges)}\n")
    for u, v in split.dropped_test_edges.tolist():
        sink.write(f"{u} {v}\n")


def load_split(graph, source):
    """Rebuild an EdgeSplit against the original graph from a split file."""
    if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
        with open(source) as fh:
            return load_split(graph, fh)
    seed = 0
    fraction = 0.0
    pairs = {"test": [], "dropped": []}
    section = None
    for line in source:
        fields = line.split()
        if not fields:
            continue
        if fields[0] == "#":
            if fields[1] == "seed":
                seed = int(fields[2])
            elif fields[1] == "fraction":
                fraction = float(fields[2])
            elif fields[1] in pairs:
                section = fields[1]
            continue
        if section is None:
            raise ValueError("malformed split file: edges before a section header")
        pairs[section].append((int(fields[0]), int(fields[1])))
    test = np.array(pairs["test"], dtype=np.int64).reshape(-1, 2)
    dropped = np.array(pairs["dropped"], dtype=np.int64).reshape(-1, 2)
    removed = np.concatenate([test, dropped]) if len(dropped) else test
    n = graph.vertex_count
    removed_keys = removed[:, 0] * n + removed[:, 1] if len(removed) else np.empty(0, np.int64)
    u, v = graph.edges()
    keep = ~np.isin(u * n + v, removed_keys)
    if (~keep).sum() != len(removed):
        raise ValueError("split file contains edges absent from the graph")
    train_graph = Graph(n, u[keep], v[keep], vertex_labels=graph.vertex_labels)
    return EdgeSplit(train_graph, test, dropped, seed=seed, fraction=fraction)


def build_curves(histogram, spec=None, metadata=None):
    """One PR point and one ROC point per distinct threshold.

    Thresholds are the distinct score values sorted descending; the zero
    bucket, when non-empty, is the final threshold and captures every
    remaining candidate, so the last recall is always 1. Cumulative
    counts use a single descending prefix sum; equal scores are
    inherently one threshold.
    """
    histogram.check_conservation()
    values = sorted(histogram.buckets, reverse=True)
    tp = [histogram.buckets[v][0] for v in values]
    fp = [histogram.buckets[v][1] for v in values]
    if histogram.zero_bucket != (0, 0) or not values:
        values.append(0.0)
        tp.append(histogram.zero_bucket[0])
        fp.append(histogram.zero_bucket[1])
    thresholds = np.array(values, dtype=np.float64)
    cum_tp = np.cumsum(np.array(tp, dtype=np.int64))
    cum_fp = np.cumsum(np.array(fp, dtype=np.int64))
    positives = histogram.positives_total
    negatives = histogram.negatives_total
    recall = _safe_rate(cum_tp, positives)
    precision = _safe_rate(cum_tp, cum_tp + cum_fp)
    fpr = _safe_rate(cum_fp, negatives)
    pr_points = np.column_stack([recall, precision])
    roc_points = np.column_stack([fpr, recall])
    return EvaluationReport(
        thresholds=thresholds,
        pr_points=pr_points,
        roc_points=roc_points,
        aupr=area_under_pr(pr_points),
        auroc=area_under_roc(roc_points),
        positives_total=positives,
        negatives_total=negatives,
        spec=spec,
        metadata=dict(metadata or {}),
    )


def _safe_rate(numerator, denominator):
    # a zero denominator means "nothing to miss": vacuously complete
    numerator = np.asarray(numerator, dtype=np.int64)
    denominator = np.broadcast_to(np.asarray(denominator, dtype=np.int64), numerator.shape)
    with np.errstate(invalid="ignore", divide="ignore"):
        rate = numerator / denominator
    return np.where(denominator > 0, rate, 1.0)


def area_under_pr(points):
    """Right-continuous step integration of the PR curve.

    sum of precision_i * (recall_i - recall_{i-1}) with recall_0 = 0;
    step rather than linear interpolation, which is known-optimistic.
    """
    points = np.asarray(points, dtype=np.float64)
    if len(points) == 0:
        return 0.0
    if np.any(np.diff(points[:, 0]) < 0):
        raise ValueError("PR points must be sorted by ascending recall")
    total = 0.0
    previous_recall = 0.0
    for recall, precision in points.tolist():
        total += precision * (recall - previous_recall)
        previous_recall = recall
    return total


def area_under_roc(points):
    """Trapezoidal area under the ROC curve, anchored at (0, 0)."""
    points = np.asarray(points, dtype=np.float64)
    if len(points) == 0:
        return 0.0
    if np.any(np.diff(points[:, 0]) < 0):
        raise ValueError("ROC points must be sorted by ascending fpr")
    total = 0.0
    prev_fpr = 0.0
    prev_tpr = 0.0
    for fpr, tpr in points.tolist():
        total += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0
        prev_fpr, prev_tpr = fpr, tpr
    return total


def write_curve_csv(points, header, sink):
    """One CSV per curve, values with full round-trip precision."""
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "w") as fh:
            write_curve_csv(points, header, fh)
        return
    sink.write(header + "\n")
    for x, y in np.asarray(points).tolist():
        sink.write(f"{x!r},{y!r}\n")


def summary_record(report, seed, fraction, wall_time, threads, chunk_size, graph_name=""):
    """Flat summary of one experiment run, JSON-serializable."""
    spec = report.spec
    return {
        "score": spec.token() if spec else None,
        "k": spec.k if spec else None,
        "log_base": spec.log_base if spec else None,
        "seed": seed,
        "fraction": fraction,
        "positives": report.positives_total,
        "negatives": report.negatives_total,
        "aupr": report.aupr,
        "auroc": report.auroc,
        "wall_time_seconds": wall_time,
        "threads": threads,
        "chunk_size": chunk_size,
        "graph": graph_name,
    }


def write_summary(record, sink):
    if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
        with open(sink, "w") as fh:
            write_summary(record, fh)
        return
    json.dump(record, sink, indent=2, sort_keys=True)
    sink.write("\n")
