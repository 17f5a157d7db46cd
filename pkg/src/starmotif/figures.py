"""Report figures: pattern histogram and metric distributions by agent type.

Rendering is headless (Agg) and file-based; matplotlib is imported
lazily so the non-reporting commands never pay its import cost.
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .pipeline import AnalysisReport

from .agents import AgentType
from .centrality import METRIC_NAMES

_BOT_COLOR = "#c44e52"
_HUMAN_COLOR = "#4c72b0"


def _plt():
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    return plt


def render_pattern_histogram(report: "AnalysisReport", path: str | Path) -> None:
    """Bar chart of motif counts over the six pattern codes."""
    plt = _plt()
    codes = sorted(report.pattern_histogram)
    counts = [report.pattern_histogram[c] for c in codes]
    colors = [_BOT_COLOR if c[1] == "0" else _HUMAN_COLOR for c in codes]

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(codes, counts, color=colors, edgecolor="black", linewidth=0.5)
    ax.set_xlabel("pattern code (ego digit: 0 bot / 1 human)")
    ax.set_ylabel("motif count")
    ax.set_title(f"Star motif patterns (n={len(report.motifs)})")
    for idx, count in enumerate(counts):
        ax.text(idx, count, str(count), ha="center", va="bottom", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_metric_distributions(report: "AnalysisReport", path: str | Path) -> None:
    """Histogram panel per metric, bots vs humans overlaid."""
    plt = _plt()
    fig, axes = plt.subplots(1, len(METRIC_NAMES), figsize=(4 * len(METRIC_NAMES), 3.5))

    for ax, name in zip(axes, METRIC_NAMES):
        bot_values = [getattr(r, name) for r in report.metrics if r.agent_type is AgentType.BOT]
        human_values = [
            getattr(r, name) for r in report.metrics if r.agent_type is AgentType.HUMAN
        ]
        for values, label, color in (
            (bot_values, "bot", _BOT_COLOR),
            (human_values, "human", _HUMAN_COLOR),
        ):
            if values:
                ax.hist(values, bins=20, alpha=0.6, label=label, color=color)
        ax.set_title(name.replace("_", " "))
        ax.set_xlabel("centrality")
        ax.set_ylabel("agents")
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_report_figures(report: "AnalysisReport", out_dir: str | Path) -> dict[str, str]:
    """Render all applicable figures under ``out_dir/figures``; name -> relpath."""
    out_dir = Path(out_dir)
    fig_dir = out_dir / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)

    written: dict[str, str] = {}
    render_pattern_histogram(report, fig_dir / "pattern_counts.png")
    written["figure_pattern_counts"] = "figures/pattern_counts.png"
    if report.metrics:
        render_metric_distributions(report, fig_dir / "metric_distributions.png")
        written["figure_metric_distributions"] = "figures/metric_distributions.png"
    return written
