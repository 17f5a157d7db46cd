"""End-to-end run: ingest -> prune -> project -> classify -> metrics -> motifs -> stats.

`run_pipeline` is a pure function of its inputs and configuration; all
randomness in the package lives in the synthetic generator.  Reports are
therefore byte-reproducible, with the wall-clock timestamp segregated
into a ``metadata`` field that comparisons exclude.
"""

from __future__ import annotations

import datetime as _dt
import json
import warnings as _warnings
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Iterable, Union

from . import io as pio
from .agents import AgentRegistry, AgentType
from .centrality import METRIC_NAMES, MetricRecord, metric_records
from .errors import ConfigError, DegenerateVarianceError, InsufficientSampleError
from .graph import AnalysisGraph, RetweetGraph
from .motifs import ConstraintMode, MotifConfig, StarMotif, enumerate_stars, pattern_counts
from .stats import DEFAULT_ALPHA, TestResult, TestVariant, compare_bots_humans

EventSource = Union[Iterable[pio.RetweetEventRecord], RetweetGraph]


@dataclass(frozen=True)
class PipelineConfig:
    """Resolved parameters of one analysis run; embedded in every report."""

    min_weight: int = 3
    bot_threshold: float = 0.7
    k_min: int = 3
    constraint_mode: ConstraintMode = ConstraintMode.PRUNE_VIOLATORS
    normalized_metrics: bool = True
    weighted_metrics: bool = False
    bound_global_degree: bool = False
    keep_isolated: bool = False
    prune_after_projection: bool = False
    bonferroni_m: int | None = None
    alpha: float = DEFAULT_ALPHA
    test_variant: TestVariant = TestVariant.STUDENT
    eig_tol: float = 1e-8
    eig_max_iter: int = 1000
    error_budget: int = 0
    motif_dot_limit: int = 25
    figures: bool = True

    def __post_init__(self) -> None:
        if not isinstance(self.min_weight, int) or self.min_weight < 1:
            raise ConfigError(f"min_weight must be an integer >= 1, got {self.min_weight!r}")
        if not 0.0 <= self.bot_threshold <= 1.0:
            raise ConfigError(f"bot_threshold must be in [0, 1], got {self.bot_threshold!r}")
        if not isinstance(self.k_min, int) or self.k_min < 2:
            raise ConfigError(f"k_min must be an integer >= 2, got {self.k_min!r}")
        if self.bonferroni_m is not None and (
            not isinstance(self.bonferroni_m, int) or self.bonferroni_m < 1
        ):
            raise ConfigError(f"bonferroni_m must be an integer >= 1, got {self.bonferroni_m!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha must be in (0, 1), got {self.alpha!r}")
        if not self.eig_tol > 0:
            raise ConfigError(f"eig_tol must be positive, got {self.eig_tol!r}")
        if self.eig_max_iter < 1:
            raise ConfigError(f"eig_max_iter must be >= 1, got {self.eig_max_iter!r}")
        if self.error_budget < 0:
            raise ConfigError(f"error_budget must be >= 0, got {self.error_budget!r}")
        if self.motif_dot_limit < 0:
            raise ConfigError(f"motif_dot_limit must be >= 0, got {self.motif_dot_limit!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config key(s) {unknown}; known keys: {sorted(known)}")
        coerced = dict(data)
        if "constraint_mode" in coerced and isinstance(coerced["constraint_mode"], str):
            try:
                coerced["constraint_mode"] = ConstraintMode(coerced["constraint_mode"])
            except ValueError:
                raise ConfigError(
                    f"constraint_mode must be one of "
                    f"{[m.value for m in ConstraintMode]}, got {coerced['constraint_mode']!r}"
                ) from None
        if "test_variant" in coerced and isinstance(coerced["test_variant"], str):
            try:
                coerced["test_variant"] = TestVariant(coerced["test_variant"])
            except ValueError:
                raise ConfigError(
                    f"test_variant must be one of {[v.value for v in TestVariant]}, "
                    f"got {coerced['test_variant']!r}"
                ) from None
        return cls(**coerced)

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    def replace(self, **overrides) -> "PipelineConfig":
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return PipelineConfig.from_dict(
            {
                k: (v.value if isinstance(v, (ConstraintMode, TestVariant)) else v)
                for k, v in values.items()
            }
        )

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = value.value if isinstance(value, (ConstraintMode, TestVariant)) else value
        return out


@dataclass
class AnalysisReport:
    """Everything one run produced, plus handles for the file exporters."""

    config: PipelineConfig
    agents: dict
    graph_stats: dict
    metrics: list[MetricRecord]
    motifs: list[StarMotif]
    pattern_histogram: dict[str, int]
    test_results: list[TestResult]
    bonferroni_m: int
    stats_notices: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    analysis_graph: AnalysisGraph | None = None
    registry: AgentRegistry | None = None
    outputs: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        """JSON-ready summary; deterministic except for ``metadata``."""
        return {
            "config": self.config.to_dict(),
            "agents": self.agents,
            "graph": self.graph_stats,
            "metrics": {"count": len(self.metrics)},
            "motifs": {
                "total": len(self.motifs),
                "pattern_counts": dict(sorted(self.pattern_histogram.items())),
            },
            "stats": {
                "bonferroni_m": self.bonferroni_m,
                "alpha": self.config.alpha,
                "variant": self.config.test_variant.value,
                "results": [
                    {
                        "metric": r.metric,
                        "t_statistic": r.t_statistic,
                        "df": r.df,
                        "p_value": r.p_value,
                        "corrected_p": r.corrected_p,
                        "significant": r.significant,
                    }
                    for r in self.test_results
                ],
                "notices": list(self.stats_notices),
            },
            "warnings": list(self.warnings),
            "outputs": dict(sorted(self.outputs.items())),
            "metadata": {"created_utc": _dt.datetime.now(_dt.timezone.utc).isoformat()},
        }

    def write_outputs(self, out_dir: str | Path) -> dict[str, str]:
        """Write every artifact under ``out_dir`` and return name -> relative path."""
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        outputs: dict[str, str] = {}

        pio.write_metrics_csv(self.metrics, out_dir / "metrics.csv")
        outputs["metrics_csv"] = "metrics.csv"

        pio.write_motif_catalog(self.motifs, out_dir / "motifs.jsonl")
        outputs["motif_catalog"] = "motifs.jsonl"

        if self.analysis_graph is not None:
            pio.export_graph_dot(self.analysis_graph, out_dir / "graph.dot", self.registry)
            pio.export_graph_graphml(self.analysis_graph, out_dir / "graph.graphml", self.registry)
            outputs["graph_dot"] = "graph.dot"
            outputs["graph_graphml"] = "graph.graphml"

        if self.motifs and self.config.motif_dot_limit > 0:
            motif_dir = out_dir / "motif_dot"
            motif_dir.mkdir(exist_ok=True)
            for motif in self.motifs[: self.config.motif_dot_limit]:
                pio.export_motif_dot(
                    motif,
                    motif_dir / f"{motif.pattern.code}_{motif.ego}.dot",
                    graph=self.analysis_graph,
                    registry=self.registry,
                )
            outputs["motif_dot_dir"] = "motif_dot"

        if self.config.figures:
            from .figures import render_report_figures

            for name, rel in render_report_figures(self, out_dir).items():
                outputs[name] = rel

        outputs["report_json"] = "report.json"
        self.outputs = outputs
        report_path = out_dir / "report.json"
        report_path.write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        return outputs


def _agent_section(nodes: Iterable[str], registry: AgentRegistry) -> dict:
    nodes = list(nodes)
    bots = sum(1 for v in nodes if registry.agent_type(v) is AgentType.BOT)
    defaulted = sum(1 for v in nodes if v not in registry)
    total = len(nodes)
    return {
        "total": total,
        "bots": bots,
        "humans": total - bots,
        "bot_fraction": (bots / total) if total else None,
        "defaulted_to_human": defaulted,
        "registry_size": len(registry),
        "duplicate_scores": registry.duplicate_count,
        "threshold": registry.threshold,
    }


def run_pipeline(
    source: EventSource,
    registry: AgentRegistry,
    config: PipelineConfig = PipelineConfig(),
) -> AnalysisReport:
    """Run every analysis stage over the events (or a prebuilt graph).

    Stage failures that reflect thin data (too few agents per group, a
    zero-variance metric, an empty post-prune graph) downgrade to notices
    and warnings so a valid report always comes back; genuine input and
    configuration errors still raise.
    """
    report_warnings: list[str] = []

    if isinstance(source, RetweetGraph):
        retweet_graph = source
        event_count = None
        self_retweets = None
    else:
        records = list(source)
        event_count = len(records)
        self_retweets = sum(1 for r in records if r.retweeter == r.original_author)
        retweet_graph = pio.events_to_graph(records)

    graph_stats: dict = {
        "events": event_count,
        "self_retweets_discarded": self_retweets,
        "raw_nodes": retweet_graph.node_count,
        "raw_edges": retweet_graph.edge_count,
    }

    agents = _agent_section(retweet_graph.nodes, registry)

    if config.prune_after_projection:
        projected = retweet_graph.undirected_projection()
        analysis = projected.prune_by_weight(config.min_weight, config.keep_isolated)
        graph_stats["pruned_nodes"] = analysis.node_count
        graph_stats["pruned_edges"] = analysis.edge_count
    else:
        pruned = retweet_graph.prune_by_weight(config.min_weight, config.keep_isolated)
        graph_stats["pruned_nodes"] = pruned.node_count
        graph_stats["pruned_edges"] = pruned.edge_count
        analysis = pruned.undirected_projection()
    graph_stats["analysis_nodes"] = analysis.node_count
    graph_stats["analysis_edges"] = analysis.edge_count

    metrics: list[MetricRecord] = []
    if analysis.node_count == 0:
        report_warnings.append(
            f"analysis graph is empty after pruning at min_weight={config.min_weight}; "
            "metrics, motifs, and stats skipped"
        )
    else:
        with _warnings.catch_warnings(record=True) as caught:
            _warnings.simplefilter("always")
            metrics = metric_records(
                analysis,
                registry,
                normalized=config.normalized_metrics,
                weighted=config.weighted_metrics,
                tol=config.eig_tol,
                max_iter=config.eig_max_iter,
            )
        report_warnings.extend(str(w.message) for w in caught)

    motif_config = MotifConfig(
        k_min=config.k_min,
        mode=config.constraint_mode,
        bound_global_degree=config.bound_global_degree,
    )
    motifs = enumerate_stars(analysis, registry, motif_config) if analysis.node_count else []
    histogram = pattern_counts(motifs)

    m_effective = config.bonferroni_m if config.bonferroni_m is not None else len(METRIC_NAMES)
    test_results: list[TestResult] = []
    notices: list[str] = []
    if metrics:
        bots = sum(1 for r in metrics if r.agent_type is AgentType.BOT)
        humans = len(metrics) - bots
        if bots < 2 or humans < 2:
            notices.append(
                f"insufficient sample: {bots} bot and {humans} human record(s); "
                "at least 2 of each required"
            )
        else:
            for name in METRIC_NAMES:
                try:
                    test_results.extend(
                        compare_bots_humans(
                            metrics,
                            metrics=[name],
                            m=m_effective,
                            alpha=config.alpha,
                            variant=config.test_variant,
                        )
                    )
                except (InsufficientSampleError, DegenerateVarianceError) as exc:
                    notices.append(f"{name}: {exc}")
    else:
        notices.append("stats skipped: no metric records (insufficient sample)")

    return AnalysisReport(
        config=config,
        agents=agents,
        graph_stats=graph_stats,
        metrics=metrics,
        motifs=motifs,
        pattern_histogram=histogram,
        test_results=test_results,
        bonferroni_m=m_effective,
        stats_notices=notices,
        warnings=report_warnings,
        analysis_graph=analysis,
        registry=registry,
    )
