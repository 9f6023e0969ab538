"""Exhaustive scoring of all candidate missing edges.

Candidates are never materialized as a full score table. Each chunk of
source vertices expands its 2-hop neighborhood as a sparse matrix
product, classifies every explicitly-reached candidate as true/false
positive, and folds the result into a per-worker threshold histogram.
The (overwhelming) zero-score remainder of the candidate universe is
accounted for analytically from the universe size.

Workers claim fixed-size chunks of source vertices dynamically, which
absorbs the degree skew of webgraphs. The final histogram is bit
identical for any worker count and chunk size: every chunk's values
depend only on its own rows, and the merge adds integer counters keyed
by exact score values.
"""

import math
import os
import threading
from dataclasses import dataclass

import numpy as np

from .graph import Graph
from .scores import (
    INF_FAMILY,
    UNDIRECTED_KINDS,
    ScoreKind,
    ScoreSpec,
    log_in_base,
)

DEFAULT_CHUNK_SIZE = 1000


class ValidationError(ValueError):
    """Inputs violate the engine's preconditions."""


class MemoryGuardError(RuntimeError):
    """The distinct-score bucket count exceeded the configured cap."""


@dataclass(frozen=True)
class CandidateUniverse:
    """Ordered-pair candidate universe of a training graph."""

    eligible_mask: np.ndarray
    eligible_count: int
    universe_size: int


@dataclass
class ThresholdHistogram:
    """Per-distinct-score (tp, fp) tallies plus the analytic zero bucket."""

    buckets: dict  # exact nonzero score value -> (tp, fp)
    zero_bucket: tuple  # (tp, fp) of all zero-scored candidates
    positives_total: int
    negatives_total: int

    def explicit_totals(self):
        tp = sum(b[0] for b in self.buckets.values())
        fp = sum(b[1] for b in self.buckets.values())
        return tp, fp

    def check_conservation(self):
        tp, fp = self.explicit_totals()
        if tp + self.zero_bucket[0] != self.positives_total:
            raise ValidationError("true-positive counts do not sum to positives_total")
        if fp + self.zero_bucket[1] != self.negatives_total:
            raise ValidationError("false-positive counts do not sum to negatives_total")
        if self.zero_bucket[0] < 0 or self.zero_bucket[1] < 0:
            raise ValidationError("negative zero-bucket count")

    def dump(self, sink):
        """Write "score tp fp" lines sorted by descending score, plus a
        trailer with the zero bucket and totals. Scores are serialized
        with round-trip precision."""
        if isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__"):
            with open(sink, "w") as fh:
                self.dump(fh)
            return
        for value in sorted(self.buckets, reverse=True):
            tp, fp = self.buckets[value]
            sink.write(f"{value!r} {tp} {fp}\n")
        sink.write(f"# zero_bucket {self.zero_bucket[0]} {self.zero_bucket[1]}\n")
        sink.write(f"# positives_total {self.positives_total}\n")
        sink.write(f"# negatives_total {self.negatives_total}\n")

    @classmethod
    def load(cls, source):
        if isinstance(source, (str, bytes)) or hasattr(source, "__fspath__"):
            with open(source) as fh:
                return cls.load(fh)
        buckets = {}
        zero = (0, 0)
        positives = negatives = 0
        for line in source:
            fields = line.split()
            if not fields:
                continue
            if fields[0] == "#":
                if fields[1] == "zero_bucket":
                    zero = (int(fields[2]), int(fields[3]))
                elif fields[1] == "positives_total":
                    positives = int(fields[2])
                elif fields[1] == "negatives_total":
                    negatives = int(fields[2])
                continue
            buckets[float(fields[0])] = (int(fields[1]), int(fields[2]))
        return cls(buckets, zero, positives, negatives)


def _encode_edges(edges, n):
    """Directed edges as sorted unique u*n+v keys."""
    edges = np.asarray(edges, dtype=np.int64)
    if edges.size == 0:
        return np.empty(0, dtype=np.int64)
    if edges.ndim != 2 or edges.shape[1] != 2:
        raise ValidationError("edge set must be an array of (u, v) pairs")
    if edges.min() < 0 or edges.max() >= n:
        raise ValidationError("edge endpoint out of range")
    return np.unique(edges[:, 0] * n + edges[:, 1])


def _in_sorted(sorted_keys, keys):
    if len(sorted_keys) == 0:
        return np.zeros(len(keys), dtype=bool)
    idx = np.searchsorted(sorted_keys, keys)
    idx = np.minimum(idx, len(sorted_keys) - 1)
    return sorted_keys[idx] == keys


def universe_stats(graph, test_edges):
    """Eligible vertices and exact candidate-universe size.

    Eligible vertices have in-degree + out-degree > 0 in the training
    graph; the universe is every ordered non-edge pair between them.
    """
    n = graph.vertex_count
    test_keys = _encode_edges(test_edges, n) if len(np.asarray(test_edges)) else np.empty(0, np.int64)
    if np.any(_in_sorted(graph.edge_keys(), test_keys)):
        raise ValidationError("test edge present in the training graph")
    eligible = (graph.out_degrees + graph.in_degrees) > 0
    m = int(eligible.sum())
    universe = m * (m - 1) - graph.edge_count
    return CandidateUniverse(eligible_mask=eligible, eligible_count=m, universe_size=universe)


class _RunContext:
    """Per-run immutable scoring state shared read-only by all workers."""

    def __init__(self, graph, spec):
        self.graph = graph
        self.spec = spec
        self.n = graph.vertex_count
        kind = spec.kind
        base = spec.log_base
        if kind in UNDIRECTED_KINDS:
            und = graph.undirected_csr()
            deg = graph.undirected_degrees
            if kind is ScoreKind.AA:
                right = und.copy()
                right.data = np.repeat(_inv_log_weights(deg, base), deg)
            elif kind is ScoreKind.RA:
                right = und.copy()
                with np.errstate(divide="ignore"):
                    right.data = np.repeat(
                        np.where(deg > 0, 1.0 / np.maximum(deg, 1), 0.0), deg
                    )
            else:
                right = und
            self.passes = [(und, right)]
            self.deg_float = deg.astype(np.float64)
        else:
            out = graph.out_csr()
            if kind is ScoreKind.IND or kind in INF_FAMILY:
                inn = graph.in_csr()
            self.out_deg = graph.out_degrees.astype(np.float64)
            self.in_deg = graph.in_degrees.astype(np.float64)
            self.log_out = _log_of_degrees(graph.out_degrees, base)
            self.log_in = _log_of_degrees(graph.in_degrees, base)
            if kind is ScoreKind.DED:
                self.passes = [(out, out)]
            elif kind is ScoreKind.IND:
                self.passes = [(inn, out)]
            else:
                self.passes = [(out, out), (inn, out)]

    def chunk_candidates(self, lo, hi):
        """Score rows [lo, hi); returns (rows, cols, values) of every
        explicitly-reached ordered pair, before exclusions."""
        kind = self.spec.kind
        mats = []
        for pass_index, (left, right) in enumerate(self.passes):
            prod = left[lo:hi] @ right
            prod.data = self._weight(pass_index, lo, prod)
            mats.append(prod)
        combined = mats[0] if len(mats) == 1 else mats[0] + mats[1]
        coo = combined.tocoo()
        return coo.row.astype(np.int64) + lo, coo.col.astype(np.int64), coo.data

    def _weight(self, pass_index, lo, prod):
        """Per-entry value transform; arithmetic mirrors scores.py exactly."""
        kind = self.spec.kind
        data = prod.data
        nnz_per_row = np.diff(prod.indptr)
        if kind in (ScoreKind.CN, ScoreKind.AA, ScoreKind.RA):
            return data
        if kind is ScoreKind.JACCARD:
            du = np.repeat(self.deg_float[lo:lo + len(nnz_per_row)], nnz_per_row)
            dv = self.deg_float[prod.indices]
            return data / (du + dv - data)
        if pass_index == 0 and kind is not ScoreKind.IND:
            denom = self.out_deg
            logs = self.log_out
        else:
            denom = self.in_deg
            logs = self.log_in
        d_rep = np.repeat(denom[lo:lo + len(nnz_per_row)], nnz_per_row)
        values = data / d_rep
        if kind in (ScoreKind.INF_LOG, ScoreKind.INF_LOG_KD):
            values = values * np.repeat(logs[lo:lo + len(nnz_per_row)], nnz_per_row)
        if kind is ScoreKind.INF_LOG_KD and pass_index == 0:
            values = values * self.spec.k
        return values


def _log_of_degrees(degrees, base):
    # scalar math.log per vertex so engine values match scores.log_in_base
    # bit for bit; vectorized np.log may differ in the last ulp
    return np.array(
        [log_in_base(int(d), base) if d > 0 else 0.0 for d in degrees],
        dtype=np.float64,
    )


def _inv_log_weights(degrees, base):
    out = np.empty(len(degrees), dtype=np.float64)
    for i, d in enumerate(degrees):
        if d == 0:
            out[i] = 0.0
        else:
            lv = log_in_base(int(d), base)
            # degree-1 vertices only ever reach the excluded diagonal
            out[i] = math.inf if lv == 0.0 else 1.0 / lv
    return out


def _fold_chunk(ctx, lo, hi, train_keys, test_keys, local_hist):
    """Process one chunk into the worker-local histogram.

    Returns the number of explicitly-scored candidates (diagonal and
    training edges excluded, zero-valued candidates included).
    """
    rows, cols, data = ctx.chunk_candidates(lo, hi)
    keys = rows * ctx.n + cols
    keep = rows != cols
    keep &= ~_in_sorted(train_keys, keys)
    data = data[keep]
    keys = keys[keep]
    explicit_count = len(data)
    nonzero = data != 0.0
    data = data[nonzero]
    keys = keys[nonzero]
    if not np.all(np.isfinite(data)):
        raise ValidationError("non-finite score outside the excluded diagonal")
    if len(data) == 0:
        return explicit_count
    is_tp = _in_sorted(test_keys, keys)
    values, inverse = np.unique(data, return_inverse=True)
    totals = np.bincount(inverse, minlength=len(values))
    tps = np.bincount(inverse[is_tp], minlength=len(values))
    for value, tp, total in zip(values.tolist(), tps.tolist(), totals.tolist()):
        bucket = local_hist.get(value)
        if bucket is None:
            local_hist[value] = [tp, total - tp]
        else:
            bucket[0] += tp
            bucket[1] += total - tp
    return explicit_count


def score_from_vertex(graph, n1, spec, test_membership):
    """Score every candidate (n1, y) reachable by a 2-hop expansion.

    ``test_membership(n1, y)`` answers whether (n1, y) is a held-out
    positive. Returns (buckets, explicit_count): nonzero-score buckets
    as {value: (tp, fp)} and the count of explicitly-scored candidates,
    from which the caller can complete the zero bucket analytically.
    Ineligible vertices are skipped, producing an empty contribution.
    """
    graph._check_vertex(n1)
    ctx = _RunContext(graph, spec)
    rows, cols, data = ctx.chunk_candidates(n1, n1 + 1)
    keys = rows * ctx.n + cols
    keep = (rows != cols) & ~_in_sorted(graph.edge_keys(), keys)
    cols, data = cols[keep], data[keep]
    explicit_count = len(data)
    buckets = {}
    for y, value in zip(cols.tolist(), data.tolist()):
        if value == 0.0:
            continue
        if not math.isfinite(value):
            raise ValidationError("non-finite score outside the excluded diagonal")
        tp, fp = buckets.get(value, (0, 0))
        if test_membership(n1, y):
            buckets[value] = (tp + 1, fp)
        else:
            buckets[value] = (tp, fp + 1)
    return buckets, explicit_count


def score_all(
    graph,
    spec,
    test_edges,
    workers=None,
    chunk_size=None,
    max_buckets=None,
):
    """Complete ThresholdHistogram over the full candidate universe.

    ``test_edges`` is the positive class, absent from the training
    graph; every test edge must have both endpoints eligible. The
    result is bit identical regardless of ``workers`` and
    ``chunk_size``. ``max_buckets`` is a hard memory guardrail on the
    distinct-score count: exceeding it raises, never bins silently.
    """
    n = graph.vertex_count
    if chunk_size is None:
        chunk_size = min(DEFAULT_CHUNK_SIZE, max(n, 1))
    if not 1 <= chunk_size <= max(n, 1):
        raise ValidationError(f"chunk_size must be in [1, {max(n, 1)}], got {chunk_size}")
    test_edges = np.asarray(test_edges, dtype=np.int64).reshape(-1, 2)
    universe = universe_stats(graph, test_edges)
    test_keys = _encode_edges(test_edges, n)
    if len(test_keys) != len(test_edges):
        raise ValidationError("duplicate test edges")
    if len(test_keys):
        endpoints_ok = (
            universe.eligible_mask[test_edges[:, 0]]
            & universe.eligible_mask[test_edges[:, 1]]
        )
        if not endpoints_ok.all():
            raise ValidationError("test edge with an ineligible (disconnected) endpoint")
    positives = len(test_keys)
    negatives = universe.universe_size - positives

    ctx = _RunContext(graph, spec)
    train_keys = graph.edge_keys()
    chunk_bounds = [(lo, min(lo + chunk_size, n)) for lo in range(0, n, chunk_size)]
    if workers is None:
        workers = os.cpu_count() or 1
    workers = max(1, min(int(workers), max(len(chunk_bounds), 1)))

    def run_worker(local_hist):
        while True:
            with claim_lock:
                index = next_chunk[0]
                if index >= len(chunk_bounds):
                    return
                next_chunk[0] += 1
            lo, hi = chunk_bounds[index]
            _fold_chunk(ctx, lo, hi, train_keys, test_keys, local_hist)
            if max_buckets is not None and len(local_hist) > max_buckets:
                raise MemoryGuardError(
                    f"distinct score values exceeded max_buckets={max_buckets}"
                )

    claim_lock = threading.Lock()
    next_chunk = [0]
    local_hists = [dict() for _ in range(workers)]
    if workers == 1:
        run_worker(local_hists[0])
    else:
        errors = []

        def guarded(hist):
            try:
                run_worker(hist)
            except BaseException as exc:  # propagate to the caller
                errors.append(exc)

        threads = [
            threading.Thread(target=guarded, args=(h,), daemon=True)
            for h in local_hists
        ]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        if errors:
            raise errors[0]

    merged = {}
    for local in local_hists:
        for value, (tp, fp) in local.items():
            if value in merged:
                merged[value][0] += tp
                merged[value][1] += fp
            else:
                merged[value] = [tp, fp]
    if max_buckets is not None and len(merged) > max_buckets:
        raise MemoryGuardError(f"distinct score values exceeded max_buckets={max_buckets}")
    buckets = {value: (tp, fp) for value, (tp, fp) in merged.items()}
    explicit_tp = sum(b[0] for b in buckets.values())
    explicit_fp = sum(b[1] for b in buckets.values())
    hist = ThresholdHistogram(
        buckets=buckets,
        zero_bucket=(positives - explicit_tp, negatives - explicit_fp),
        positives_total=positives,
        negatives_total=negatives,
    )
    hist.check_conservation()
    return hist
