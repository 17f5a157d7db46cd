"""Command line interface.

Subcommands mirror the pipeline stages: ``ingest``, ``metrics``,
``motifs``, ``stats``, ``synth``, and ``run`` (everything end to end).
Each accepts ``--config`` (a JSON file of pipeline parameters) plus
flags that override individual values.

Exit codes: 0 success, 1 input error, 2 configuration/usage error,
3 internal or convergence error.
"""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from . import io as pio
from . import synth as synthmod
from .centrality import METRIC_NAMES, metric_records
from .errors import ConfigError, InputError, StarmotifError
from .graph import RetweetGraph
from .motifs import ConstraintMode, MotifConfig, enumerate_stars, pattern_counts
from .pipeline import AnalysisReport, PipelineConfig, run_pipeline
from .stats import TestVariant, compare_bots_humans


def _add_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn

    return wrap


_INPUT_OPTIONS = [
    click.option("--events", "events_path", type=click.Path(), default=None,
                 help="Retweet event CSV (retweeter,original_author[,timestamp])."),
    click.option("--edges", "edges_path", type=click.Path(), default=None,
                 help="Pre-aggregated edge list CSV (source,target,weight)."),
    click.option("--scores", "scores_path", type=click.Path(), default=None,
                 help="Bot score CSV (user_id,p_bot). Omitted: everyone is Human."),
]

_CONFIG_OPTIONS = [
    click.option("--config", "config_path", type=click.Path(), default=None,
                 help="JSON file of pipeline parameters; flags below override it."),
    click.option("--min-weight", type=int, default=None,
                 help="Drop directed edges with fewer retweets than this (default 3)."),
    click.option("--bot-threshold", type=float, default=None,
                 help="Bot probability threshold (default 0.7)."),
    click.option("--k-min", type=int, default=None,
                 help="Minimum number of alters per star (default 3)."),
    click.option("--strict", is_flag=True, default=None,
                 help="Reject candidates with over-connected alters instead of pruning them."),
    click.option("--bound-global-degree", is_flag=True, default=None,
                 help="Also require alters to have whole-graph degree <= 3."),
    click.option("--bonferroni-m", type=int, default=None,
                 help="Comparison count for the correction (default: metrics tested)."),
    click.option("--alpha", type=float, default=None,
                 help="Significance level (default 0.05)."),
    click.option("--welch", is_flag=True, default=None,
                 help="Use the Welch test instead of the pooled-variance Student test."),
    click.option("--raw-metrics", is_flag=True, default=None,
                 help="Report unnormalized centralities."),
    click.option("--weighted-metrics", is_flag=True, default=None,
                 help="Use combined retweet weights in the centrality computations."),
    click.option("--keep-isolated", is_flag=True, default=None,
                 help="Keep nodes with no surviving edge after pruning."),
    click.option("--prune-after-projection", is_flag=True, default=None,
                 help="Prune on combined undirected weights instead of directed ones."),
    click.option("--error-budget", type=int, default=None,
                 help="Tolerated malformed input rows before failing (default 0)."),
]


def _resolve_config(config_path, **overrides) -> PipelineConfig:
    config = PipelineConfig.from_file(config_path) if config_path else PipelineConfig()
    mapped: dict = {}
    direct = (
        "min_weight", "bot_threshold", "k_min", "bonferroni_m", "alpha",
        "keep_isolated", "prune_after_projection", "error_budget",
        "weighted_metrics", "bound_global_degree",
    )
    for key in direct:
        if overrides.get(key) is not None:
            mapped[key] = overrides[key]
    if overrides.get("strict"):
        mapped["constraint_mode"] = ConstraintMode.STRICT
    if overrides.get("welch"):
        mapped["test_variant"] = TestVariant.WELCH
    if overrides.get("raw_metrics"):
        mapped["normalized_metrics"] = False
    if overrides.get("figures") is not None:
        mapped["figures"] = overrides["figures"]
    return config.replace(**mapped)


def _load_inputs(events_path, edges_path, scores_path, config: PipelineConfig):
    """Load the event source and registry named on the command line."""
    if (events_path is None) == (edges_path is None):
        raise ConfigError("exactly one of --events or --edges is required")
    if events_path is not None:
        source = pio.load_events(events_path, error_budget=config.error_budget).records
    else:
        source = pio.load_edge_list(edges_path, error_budget=config.error_budget).graph
    if scores_path is not None:
        registry = pio.load_scores(
            scores_path, threshold=config.bot_threshold, error_budget=config.error_budget
        ).registry
    else:
        from .agents import AgentRegistry

        registry = AgentRegistry(threshold=config.bot_threshold)
    return source, registry


def _analysis_graph(source, config: PipelineConfig):
    graph = source if isinstance(source, RetweetGraph) else pio.events_to_graph(source)
    if config.prune_after_projection:
        return graph.undirected_projection().prune_by_weight(
            config.min_weight, config.keep_isolated
        )
    return graph.prune_by_weight(config.min_weight, config.keep_isolated).undirected_projection()


@click.group()
@click.version_option(package_name="starmotif")
def cli() -> None:
    """Retweet-graph star motif mining and bot/human network comparison."""


@cli.command()
@_add_options(_INPUT_OPTIONS)
@_add_options(_CONFIG_OPTIONS)
@click.option("--out", "out_dir", type=click.Path(), required=True, help="Output directory.")
def ingest(events_path, edges_path, scores_path, config_path, out_dir, **overrides):
    """Build, prune, and project the retweet graph; export DOT/GraphML."""
    config = _resolve_config(config_path, **overrides)
    source, registry = _load_inputs(events_path, edges_path, scores_path, config)
    raw = source if isinstance(source, RetweetGraph) else pio.events_to_graph(source)
    analysis = _analysis_graph(raw, config)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pio.export_graph_dot(analysis, out / "graph.dot", registry)
    pio.export_graph_graphml(analysis, out / "graph.graphml", registry)
    pio.write_edge_list(analysis, out / "analysis_edges.csv")
    summary = {
        "raw_nodes": raw.node_count,
        "raw_edges": raw.edge_count,
        "analysis_nodes": analysis.node_count,
        "analysis_edges": analysis.edge_count,
        "min_weight": config.min_weight,
    }
    (out / "ingest.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    click.echo(
        f"ingested {raw.node_count} nodes / {raw.edge_count} directed edges -> "
        f"{analysis.node_count} nodes / {analysis.edge_count} undirected edges "
        f"(min_weight={config.min_weight})"
    )


@cli.command()
@_add_options(_INPUT_OPTIONS)
@_add_options(_CONFIG_OPTIONS)
@click.option("--out", "out_dir", type=click.Path(), required=True, help="Output directory.")
def metrics(events_path, edges_path, scores_path, config_path, out_dir, **overrides):
    """Compute betweenness, eigenvector, and total degree per node."""
    config = _resolve_config(config_path, **overrides)
    source, registry = _load_inputs(events_path, edges_path, scores_path, config)
    analysis = _analysis_graph(source, config)
    if analysis.node_count == 0:
        raise InputError("analysis graph is empty after pruning; nothing to measure")
    records = metric_records(
        analysis,
        registry,
        normalized=config.normalized_metrics,
        weighted=config.weighted_metrics,
        tol=config.eig_tol,
        max_iter=config.eig_max_iter,
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pio.write_metrics_csv(records, out / "metrics.csv")
    click.echo(f"wrote {len(records)} metric rows to {out / 'metrics.csv'}")


@cli.command()
@_add_options(_INPUT_OPTIONS)
@_add_options(_CONFIG_OPTIONS)
@click.option("--out", "out_dir", type=click.Path(), required=True, help="Output directory.")
@click.option("--motif-dot-limit", type=int, default=None,
              help="How many motifs get individual DOT renderings (default 25).")
def motifs(events_path, edges_path, scores_path, config_path, out_dir,
           motif_dot_limit, **overrides):
    """Enumerate star motifs and classify their ego/alter patterns."""
    config = _resolve_config(config_path, **overrides)
    if motif_dot_limit is not None:
        config = config.replace(motif_dot_limit=motif_dot_limit)
    source, registry = _load_inputs(events_path, edges_path, scores_path, config)
    analysis = _analysis_graph(source, config)
    found = enumerate_stars(
        analysis,
        registry,
        MotifConfig(
            k_min=config.k_min,
            mode=config.constraint_mode,
            bound_global_degree=config.bound_global_degree,
        ),
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pio.write_motif_catalog(found, out / "motifs.jsonl")
    if found and config.motif_dot_limit > 0:
        dot_dir = out / "motif_dot"
        dot_dir.mkdir(exist_ok=True)
        for motif in found[: config.motif_dot_limit]:
            pio.export_motif_dot(
                motif, dot_dir / f"{motif.pattern.code}_{motif.ego}.dot",
                graph=analysis, registry=registry,
            )
    histogram = pattern_counts(found)
    click.echo(f"found {len(found)} star motifs (k_min={config.k_min}, "
               f"mode={config.constraint_mode.value})")
    click.echo("  " + "  ".join(f"{code}={histogram[code]}" for code in sorted(histogram)))


@cli.command()
@_add_options(_INPUT_OPTIONS)
@_add_options(_CONFIG_OPTIONS)
@click.option("--metrics-csv", "metrics_csv", type=click.Path(), default=None,
              help="Reuse a previously computed metrics CSV instead of raw inputs.")
@click.option("--out", "out_dir", type=click.Path(), required=True, help="Output directory.")
def stats(events_path, edges_path, scores_path, config_path, metrics_csv,
          out_dir, **overrides):
    """Compare bot vs human metric distributions (t-test, Bonferroni)."""
    config = _resolve_config(config_path, **overrides)
    if metrics_csv is not None:
        records = pio.read_metrics_csv(metrics_csv)
    else:
        source, registry = _load_inputs(events_path, edges_path, scores_path, config)
        analysis = _analysis_graph(source, config)
        if analysis.node_count == 0:
            raise InputError("analysis graph is empty after pruning; nothing to compare")
        records = metric_records(
            analysis, registry,
            normalized=config.normalized_metrics, weighted=config.weighted_metrics,
            tol=config.eig_tol, max_iter=config.eig_max_iter,
        )
    m_effective = config.bonferroni_m if config.bonferroni_m is not None else len(METRIC_NAMES)
    results = compare_bots_humans(
        records, metrics=METRIC_NAMES, m=m_effective,
        alpha=config.alpha, variant=config.test_variant,
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "stats.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["metric", "t_statistic", "p_value", "corrected_p", "significant"])
        for r in results:
            writer.writerow([r.metric, repr(r.t_statistic), repr(r.p_value),
                             repr(r.corrected_p), "yes" if r.significant else "no"])
    payload = {
        "bonferroni_m": m_effective,
        "alpha": config.alpha,
        "variant": config.test_variant.value,
        "results": [
            {"metric": r.metric, "t_statistic": r.t_statistic, "df": r.df,
             "p_value": r.p_value, "corrected_p": r.corrected_p,
             "significant": r.significant}
            for r in results
        ],
    }
    (out / "stats.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    for r in results:
        click.echo(
            f"{r.metric}: t={r.t_statistic:.4g} p={r.p_value:.3e} "
            f"corrected={r.corrected_p:.3e} significant={'yes' if r.significant else 'no'}"
        )


def _parse_plant(text: str) -> synthmod.PlantSpec:
    """Parse PATTERN:K[:ALTER_EDGES[:COUNT]], e.g. S02:4:1:3."""
    parts = text.split(":")
    if not 2 <= len(parts) <= 4:
        raise ConfigError(f"bad --plant value {text!r}; expected PATTERN:K[:EDGES[:COUNT]]")
    from .motifs import StarPattern

    try:
        numbers = [int(p) for p in parts[1:]]
    except ValueError:
        raise ConfigError(f"bad --plant value {text!r}; numeric fields required") from None
    return synthmod.PlantSpec(
        pattern=StarPattern.parse(parts[0]),
        k=numbers[0],
        alter_edge_count=numbers[1] if len(numbers) > 1 else 0,
        count=numbers[2] if len(numbers) > 2 else 1,
    )


@cli.command()
@click.option("--spec", "spec_path", type=click.Path(), default=None,
              help="JSON synth spec (plants, background, score ranges, seed).")
@click.option("--plant", "plants", multiple=True,
              help="Inline plant PATTERN:K[:EDGES[:COUNT]]; repeatable.")
@click.option("--background-nodes", type=int, default=None)
@click.option("--background-edge-prob", type=float, default=None)
@click.option("--seed", type=int, default=None, help="PRNG seed (Mersenne Twister).")
@click.option("--out", "out_dir", type=click.Path(), required=True, help="Output directory.")
def synth(spec_path, plants, background_nodes, background_edge_prob, seed, out_dir):
    """Generate a labeled graph with planted star motifs."""
    if spec_path is not None:
        try:
            data = json.loads(Path(spec_path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"synth spec file not found: {spec_path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{spec_path}: invalid JSON: {exc}") from None
        config = synthmod.SynthConfig.from_dict(data)
    elif plants:
        config = synthmod.SynthConfig(plants=tuple(_parse_plant(p) for p in plants))
    else:
        raise ConfigError("provide --spec or at least one --plant")
    if plants and spec_path is not None:
        raise ConfigError("--plant cannot be combined with --spec")

    overrides = {}
    if background_nodes is not None:
        overrides["background_nodes"] = background_nodes
    if background_edge_prob is not None:
        overrides["background_edge_prob"] = background_edge_prob
    if seed is not None:
        overrides["seed"] = seed
    if overrides:
        base = {
            "plants": config.plants,
            "background_nodes": config.background_nodes,
            "background_edge_prob": config.background_edge_prob,
            "bot_score_range": config.bot_score_range,
            "human_score_range": config.human_score_range,
            "bot_threshold": config.bot_threshold,
            "edge_weight": config.edge_weight,
            "seed": config.seed,
        }
        base.update(overrides)
        config = synthmod.SynthConfig(**base)

    result = synthmod.generate(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    pio.write_edge_list(result.graph, out / "edges.csv")
    pio.write_scores(result.registry, out / "scores.csv")
    pio.write_motif_catalog(result.motifs, out / "truth.jsonl")
    click.echo(
        f"generated {result.graph.node_count} connected nodes, "
        f"{result.graph.edge_count} edges, {len(result.motifs)} planted motifs "
        f"(seed={config.seed})"
    )


@cli.command()
@_add_options(_INPUT_OPTIONS)
@_add_options(_CONFIG_OPTIONS)
@click.option("--figures/--no-figures", "figures", default=None,
              help="Render report figures (default on).")
@click.option("--out", "out_dir", type=click.Path(), required=True, help="Output directory.")
def run(events_path, edges_path, scores_path, config_path, figures, out_dir, **overrides):
    """Run the full pipeline and write the report bundle."""
    config = _resolve_config(config_path, figures=figures, **overrides)
    source, registry = _load_inputs(events_path, edges_path, scores_path, config)
    report: AnalysisReport = run_pipeline(source, registry, config)
    outputs = report.write_outputs(out_dir)

    agents = report.agents
    frac = agents["bot_fraction"]
    click.echo(
        f"agents: {agents['total']} total, {agents['bots']} bots "
        f"({frac:.2%})" if frac is not None else "agents: none"
    )
    click.echo(f"motifs: {len(report.motifs)} " + "  ".join(
        f"{code}={count}" for code, count in sorted(report.pattern_histogram.items())
    ))
    for r in report.test_results:
        click.echo(
            f"stats {r.metric}: t={r.t_statistic:.4g} corrected_p={r.corrected_p:.3e} "
            f"significant={'yes' if r.significant else 'no'}"
        )
    for notice in report.stats_notices:
        click.echo(f"notice: {notice}")
    for warning in report.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(f"report bundle in {out_dir} ({len(outputs)} artifacts)")


def main(argv=None) -> int:
    """Entry point translating package errors into documented exit codes."""
    try:
        cli.main(args=argv, standalone_mode=False)
    except StarmotifError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(2)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        sys.exit(130)
    return 0


if __name__ == "__main__":
    sys.exit(main())
