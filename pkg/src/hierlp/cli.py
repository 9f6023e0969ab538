"""Batch front end: load -> split -> score -> evaluate -> report.

Every run is a pure function of (graph file, configuration): rerunning
with the same seed produces byte-identical curve CSVs. Flags can also
be set through environment variables prefixed HIERLP_RUN_ /
HIERLP_COMPARE_ (click's auto envvar mapping).
"""

import json
import os
import sys
import time
from pathlib import Path

import click

from .engine import DEFAULT_CHUNK_SIZE, score_all
from .evaluate import (
    build_curves,
    load_split,
    save_split,
    split_edges,
    summary_record,
    write_curve_csv,
    write_summary,
)
from .graph import load_edge_list
from .scores import ScoreSpec

CONTEXT_SETTINGS = {"auto_envvar_prefix": "HIERLP"}


@click.group(context_settings=CONTEXT_SETTINGS)
def main():
    """Link prediction on directed graphs with exact PR/ROC evaluation."""


@main.command()
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--format", "fmt", default="auto", type=click.Choice(["auto", "integer", "token"]))
@click.option("--score", "score_tokens", multiple=True, required=True,
              help="Score token, repeatable: cn aa ra jaccard ded ind inf inf_log inf_log_kd")
@click.option("--k", default=2.0, show_default=True, help="DED multiplier for inf_log_kd.")
@click.option("--log-base", default=0.0, help="Logarithm base; 0 means natural log.")
@click.option("--split-fraction", default=0.10, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--split-file", type=click.Path(dir_okay=False), default=None,
              help="Reuse a persisted split so every score sees the same test set.")
@click.option("--threads", default=None, type=int, help="Worker count; default: all cores.")
@click.option("--chunk-size", default=None, type=int,
              help=f"Chunk of source vertices per work unit; default "
                   f"min({DEFAULT_CHUNK_SIZE}, vertex count).")
@click.option("--max-buckets", default=None, type=int,
              help="Hard cap on distinct score values; exceeding it aborts the run.")
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False))
def run(graph_path, fmt, score_tokens, k, log_base, split_fraction, seed,
        split_file, threads, chunk_size, max_buckets, out_dir):
    """Run the full experiment and write split, histograms, curves, summaries."""
    import math

    base = math.e if not log_base else float(log_base)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    try:
        graph, report = load_edge_list(graph_path, format=fmt)
        click.echo(
            f"loaded {graph.vertex_count} vertices, {graph.edge_count} edges "
            f"(raw {report.raw_edges}, dropped {report.duplicate_edges_dropped} duplicates, "
            f"{report.self_loops_dropped} self-loops)",
            err=True,
        )
        if split_file and Path(split_file).exists():
            split = load_split(graph, split_file)
            click.echo(f"reusing split from {split_file}", err=True)
        else:
            split = split_edges(graph, fraction=split_fraction, seed=seed)
            target = Path(split_file) if split_file else out / "split.txt"
            save_split(split, target)
            click.echo(f"wrote split to {target}", err=True)
        click.echo(
            f"split: {len(split.test_edges)} test edges, "
            f"{len(split.dropped_test_edges)} dropped (disconnected endpoint)",
            err=True,
        )
        workers = threads if threads is not None else (os.cpu_count() or 1)
        for token in score_tokens:
            spec = ScoreSpec.parse(token, log_base=base)
            if spec.kind.value == "inf_log_kd" and "k=" not in token:
                spec = ScoreSpec(spec.kind, k=k, log_base=base)
            started = time.perf_counter()
            hist = score_all(
                split.train_graph,
                spec,
                split.test_edges,
                workers=workers,
                chunk_size=chunk_size,
                max_buckets=max_buckets,
            )
            wall = time.perf_counter() - started
            rep = build_curves(hist, spec=spec, metadata={"seed": split.seed})
            stem = spec.kind.value
            hist.dump(out / f"{stem}_histogram.txt")
            write_curve_csv(rep.pr_points, "recall,precision", out / f"{stem}_pr.csv")
            write_curve_csv(rep.roc_points, "fpr,tpr", out / f"{stem}_roc.csv")
            effective_chunk = chunk_size if chunk_size is not None else min(
                DEFAULT_CHUNK_SIZE, max(split.train_graph.vertex_count, 1)
            )
            record = summary_record(
                rep, seed=split.seed, fraction=split.fraction, wall_time=wall,
                threads=workers, chunk_size=effective_chunk, graph_name=str(graph_path),
            )
            write_summary(record, out / f"{stem}_summary.json")
            click.echo(
                f"{spec.token()}: AUPR={rep.aupr:.5f} AUROC={rep.auroc:.5f} "
                f"P={rep.positives_total} Neg={rep.negatives_total} wall={wall:.2f}s"
            )
    except (ValueError, OSError) as exc:
        raise click.ClickException(str(exc)) from exc


def compare_reports(records):
    """Ranking table with pairwise AUPR improvement percentages.

    All records must come from the same split; comparisons across
    splits are invalid and refused.
    """
    if len(records) < 2:
        raise ValueError("need at least 2 reports to compare")
    split_meta = {(r["seed"], r["fraction"], r["positives"], r["negatives"]) for r in records}
    if len(split_meta) != 1:
        raise ValueError("reports come from different splits; comparison refused")
    ranked = sorted(records, key=lambda r: r["aupr"], reverse=True)
    improvements = {}
    for a in ranked:
        for b in ranked:
            if a["score"] == b["score"]:
                continue
            improvements[(a["score"], b["score"])] = improvement_percent(a["aupr"], b["aupr"])
    return {"ranking": ranked, "improvements": improvements}


def improvement_percent(aupr_a, aupr_b):
    """Relative AUPR improvement of a over b, in percent."""
    return (aupr_a / aupr_b - 1.0) * 100.0


@main.command()
@click.argument("summaries", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
def compare(summaries):
    """Compare summary JSONs produced by `run` on one shared split."""
    records = []
    for path in summaries:
        with open(path) as fh:
            records.append(json.load(fh))
    try:
        result = compare_reports(records)
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"{'score':<20} {'AUPR':>10} {'AUROC':>10}")
    for record in result["ranking"]:
        click.echo(f"{record['score']:<20} {record['aupr']:>10.5f} {record['auroc']:>10.5f}")
    click.echo("")
    best = result["ranking"][0]
    for other in result["ranking"][1:]:
        pct = result["improvements"][(best["score"], other["score"])]
        click.echo(f"{best['score']} over {other['score']}: {pct:+.2f}%")


if __name__ == "__main__":
    main()
