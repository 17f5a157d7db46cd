"""Star-motif mining over retweet communication graphs.

Build a weighted directed retweet graph from events, prune and project
it to an undirected analysis graph, classify agents as bots or humans by
probability threshold, compute node centralities, enumerate constrained
star motifs around every ego, and compare bot vs human metrics with
Bonferroni-corrected t-tests.
"""

from .agents import (
    DEFAULT_BOT_THRESHOLD,
    AgentProfile,
    AgentRegistry,
    AgentType,
    classify_agent,
)
from .centrality import (
    METRIC_NAMES,
    MetricRecord,
    betweenness_centrality,
    eigenvector_centrality,
    metric_records,
    total_degree_centrality,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateVarianceError,
    InputError,
    InsufficientSampleError,
    StarmotifError,
    UndefinedStatisticError,
    UnknownAgentError,
)
from .graph import AnalysisGraph, RetweetGraph
from .io import (
    RetweetEventRecord,
    events_to_graph,
    load_edge_list,
    load_events,
    load_scores,
)
from .motifs import (
    AlterComposition,
    ConstraintMode,
    EgoCandidate,
    MotifConfig,
    StarMotif,
    StarPattern,
    classify_pattern,
    enforce_constraints,
    enumerate_stars,
    extract_ego_candidate,
    pattern_counts,
)
from .pipeline import AnalysisReport, PipelineConfig, run_pipeline
from .stats import (
    SampleSummary,
    TestResult,
    TestVariant,
    bonferroni,
    compare_bots_humans,
    regularized_incomplete_beta,
    t_p_value,
    two_sample_t,
)
from .synth import PlantSpec, SynthConfig, SynthResult, generate

__version__ = "0.1.0"

__all__ = [
    "AgentProfile",
    "AgentRegistry",
    "AgentType",
    "AlterComposition",
    "AnalysisGraph",
    "AnalysisReport",
    "ConfigError",
    "ConstraintMode",
    "ConvergenceError",
    "DEFAULT_BOT_THRESHOLD",
    "DegenerateVarianceError",
    "EgoCandidate",
    "InputError",
    "InsufficientSampleError",
    "METRIC_NAMES",
    "MetricRecord",
    "MotifConfig",
    "PipelineConfig",
    "PlantSpec",
    "RetweetEventRecord",
    "RetweetGraph",
    "SampleSummary",
    "StarMotif",
    "StarPattern",
    "StarmotifError",
    "SynthConfig",
    "SynthResult",
    "TestResult",
    "TestVariant",
    "UndefinedStatisticError",
    "UnknownAgentError",
    "betweenness_centrality",
    "bonferroni",
    "classify_agent",
    "classify_pattern",
    "compare_bots_humans",
    "eigenvector_centrality",
    "enforce_constraints",
    "enumerate_stars",
    "events_to_graph",
    "extract_ego_candidate",
    "generate",
    "load_edge_list",
    "load_events",
    "load_scores",
    "metric_records",
    "pattern_counts",
    "regularized_incomplete_beta",
    "run_pipeline",
    "t_p_value",
    "total_degree_centrality",
    "two_sample_t",
]
