"""Safe and complete paths of flow decompositions in edge-weighted DAGs.

The flow of a DAG decomposes into weighted source-to-sink paths in many
ways; a path is *safe* when part of it is guaranteed in every such
decomposition.  This package computes all maximal safe paths via an
exact excess-flow characterization, alongside the classic baselines
(unitigs, extended unitigs, greedy-width decomposition), plus file
formats, instance generators, evaluation metrics, and a batch CLI.
"""

from .graph import (
    CycleError,
    Edge,
    FlowAggregates,
    FlowGraph,
    Path,
    Transcript,
    Violation,
    aggregates,
    is_funnel,
    sources_and_sinks,
    superimpose,
    validate,
)
from .safety import SafetyWindow, excess_flow, is_w_safe, verify_path
from .decompose import (
    Decomposition,
    DecompositionError,
    WeightedPath,
    greedy_width,
    peel_decomposition,
    validate_decomposition,
)
from .safepaths import (
    MaximalSafeWindow,
    OracleSizeError,
    extended_unitigs,
    oracle_safe_paths,
    safe_and_complete,
    unit_decompositions,
    unitigs,
    window_path,
)
from .represent import (
    ConciseEntry,
    SafePathRecord,
    SafeReport,
    WindowInterval,
    dedup,
    merge_windows,
    safe_report,
)
from .metrics import (
    GroundTruth,
    MetricRow,
    SummaryRow,
    compute_row,
    f_score,
    max_relative_coverage,
    path_length,
    summarize,
    weighted_precision,
)
from .io_formats import (
    GraphRecord,
    ParseError,
    attach_node_lengths,
    attach_truth,
    emit_graph_file,
    emit_truth_file,
    gen_appendix_family,
    gen_funnel_instance,
    gen_random_instance,
    parse_graph_file,
    parse_node_lengths,
    parse_truth_file,
    simulate_abundances,
    truth_consistent,
)

__version__ = "0.1.0"
