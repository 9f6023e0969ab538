"""Link prediction toolkit for directed graphs.

Scores every missing edge of a directed graph with local similarity
scores (CN, AA, RA, Jaccard, and the hierarchical DED/IND/INF family,
including the hybrid inf_log_kd), and evaluates them with exact
precision-recall and ROC analysis over the full candidate universe.
"""

from .engine import (
    CandidateUniverse,
    MemoryGuardError,
    ThresholdHistogram,
    ValidationError,
    score_all,
    score_from_vertex,
    universe_stats,
)
from .evaluate import (
    EdgeSplit,
    EvaluationReport,
    area_under_pr,
    area_under_roc,
    build_curves,
    load_split,
    save_split,
    split_edges,
)
from .graph import Graph, GraphParseError, LoadReport, load_edge_list, write_edge_list
from .oracle import OracleResult, oracle_score_all
from .scores import ScoreConsistencyError, ScoreKind, ScoreSpec

__all__ = [
    "CandidateUniverse",
    "EdgeSplit",
    "EvaluationReport",
    "Graph",
    "GraphParseError",
    "LoadReport",
    "MemoryGuardError",
    "OracleResult",
    "ScoreConsistencyError",
    "ScoreKind",
    "ScoreSpec",
    "ThresholdHistogram",
    "ValidationError",
    "area_under_pr",
    "area_under_roc",
    "build_curves",
    "load_edge_list",
    "load_split",
    "oracle_score_all",
    "save_split",
    "score_all",
    "score_from_vertex",
    "split_edges",
    "universe_stats",
    "write_edge_list",
]
