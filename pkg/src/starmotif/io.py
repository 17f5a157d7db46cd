"""File formats: event/score ingestion, delimited exports, DOT and GraphML.

All tabular inputs are headered CSV.  Malformed rows are collected with
their line numbers; loading fails once the count exceeds the error
budget (default 0, i.e. any bad row is fatal).  Outputs are line
oriented and deterministically ordered so that runs diff cleanly.

Formats:

- events CSV: ``retweeter,original_author[,timestamp]``
- edge-list CSV: ``source,target,weight`` (target retweeted source)
- scores CSV: ``user_id,p_bot``
- metrics CSV: ``user_id,agent_type,betweenness,eigenvector,total_degree``
- motif catalog: JSONL, one motif object per line
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence
from xml.etree import ElementTree

from .agents import AgentRegistry, AgentType
from .centrality import MetricRecord
from .errors import InputError
from .graph import AnalysisGraph, RetweetGraph
from .motifs import StarMotif, StarPattern


@dataclass(frozen=True)
class RetweetEventRecord:
    """One retweet event; the timestamp is carried through but unused."""

    retweeter: str
    original_author: str
    timestamp: str | None = None


@dataclass(frozen=True)
class RowError:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


@dataclass
class LoadedEvents:
    records: list[RetweetEventRecord] = field(default_factory=list)
    errors: list[RowError] = field(default_factory=list)


@dataclass
class LoadedEdges:
    graph: RetweetGraph
    errors: list[RowError] = field(default_factory=list)


@dataclass
class LoadedScores:
    registry: AgentRegistry
    errors: list[RowError] = field(default_factory=list)


def _open_csv(path: str | Path, required: Sequence[str]) -> tuple[list[list[str]], dict[str, int]]:
    """Read all rows and map required header names to column indexes."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"input file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InputError(f"{path}: empty file; a header row is required")
    header = [name.strip() for name in rows[0]]
    missing = [name for name in required if name not in header]
    if missing:
        raise InputError(f"{path}: missing required column(s) {missing}; header was {header}")
    return rows, {name: header.index(name) for name in header}


def _enforce_budget(path: str | Path, errors: list[RowError], error_budget: int) -> None:
    if len(errors) > error_budget:
        shown = "; ".join(str(e) for e in errors[:5])
        more = f" (+{len(errors) - 5} more)" if len(errors) > 5 else ""
        raise InputError(
            f"{path}: {len(errors)} malformed row(s) exceed error budget "
            f"{error_budget}: {shown}{more}"
        )


def load_events(path: str | Path, error_budget: int = 0) -> LoadedEvents:
    """Parse a retweet-event CSV into records plus row-level errors."""
    rows, cols = _open_csv(path, required=("retweeter", "original_author"))
    ts_col = cols.get("timestamp")
    loaded = LoadedEvents()
    for line, row in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in row):
            continue
        try:
            retweeter = row[cols["retweeter"]].strip()
            original = row[cols["original_author"]].strip()
        except IndexError:
            loaded.errors.append(RowError(line, f"expected {len(cols)} fields, got {len(row)}"))
            continue
        if not retweeter:
            loaded.errors.append(RowError(line, "empty retweeter id"))
            continue
        if not original:
            loaded.errors.append(RowError(line, "empty original_author id"))
            continue
        timestamp = None
        if ts_col is not None and ts_col < len(row) and row[ts_col].strip():
            timestamp = row[ts_col].strip()
        loaded.records.append(RetweetEventRecord(retweeter, original, timestamp))
    _enforce_budget(path, loaded.errors, error_budget)
    return loaded


def events_to_graph(records: Iterable[RetweetEventRecord]) -> RetweetGraph:
    """Aggregate events into the directed weighted retweet graph."""
    graph = RetweetGraph()
    for record in records:
        if record.retweeter == record.original_author:
            continue
        graph.add_retweet_event(record.original_author, record.retweeter)
    return graph


def load_edge_list(path: str | Path, error_budget: int = 0) -> LoadedEdges:
    """Parse a pre-aggregated edge list into a retweet graph.

    A row ``source,target,w`` is equivalent to ``w`` individual events of
    ``target`` retweeting ``source``.
    """
    rows, cols = _open_csv(path, required=("source", "target", "weight"))
    graph = RetweetGraph()
    errors: list[RowError] = []
    for line, row in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in row):
            continue
        try:
            source = row[cols["source"]].strip()
            target = row[cols["target"]].strip()
            raw_weight = row[cols["weight"]].strip()
        except IndexError:
            errors.append(RowError(line, f"expected {len(cols)} fields, got {len(row)}"))
            continue
        try:
            weight = int(raw_weight)
        except ValueError:
            errors.append(RowError(line, f"weight {raw_weight!r} is not an integer"))
            continue
        if weight < 1:
            errors.append(RowError(line, f"weight must be >= 1, got {weight}"))
            continue
        if not source or not target:
            errors.append(RowError(line, "empty source or target id"))
            continue
        if source != target:
            graph.add_retweets(source, target, weight)
    _enforce_budget(path, errors, error_budget)
    return LoadedEdges(graph=graph, errors=errors)


def load_scores(
    path: str | Path,
    threshold: float = 0.7,
    error_budget: int = 0,
) -> LoadedScores:
    """Parse a bot-score CSV into a classified registry.

    A blank score cell is a missing score (classifies Human); a
    non-numeric or out-of-range score is a row error.  Duplicate ids keep
    the last value seen, counted on the registry.
    """
    rows, cols = _open_csv(path, required=("user_id", "p_bot"))
    scores: list[tuple[str, float | None]] = []
    errors: list[RowError] = []
    for line, row in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in row):
            continue
        try:
            user_id = row[cols["user_id"]].strip()
            raw = row[cols["p_bot"]].strip()
        except IndexError:
            errors.append(RowError(line, f"expected {len(cols)} fields, got {len(row)}"))
            continue
        if not user_id:
            errors.append(RowError(line, "empty user_id"))
            continue
        if raw == "":
            scores.append((user_id, None))
            continue
        try:
            p_bot = float(raw)
        except ValueError:
            errors.append(RowError(line, f"p_bot {raw!r} is not a number"))
            continue
        if not 0.0 <= p_bot <= 1.0:
            errors.append(RowError(line, f"p_bot {p_bot!r} outside [0, 1]"))
            continue
        scores.append((user_id, p_bot))
    _enforce_budget(path, errors, error_budget)
    return LoadedScores(registry=AgentRegistry.from_scores(scores, threshold), errors=errors)


# ---------------------------------------------------------------------------
# Delimited writers
# ---------------------------------------------------------------------------


def write_edge_list(graph: AnalysisGraph | RetweetGraph, path: str | Path) -> None:
    """Emit the loader-compatible edge list.

    An undirected graph writes one row per edge with its combined weight
    (direction smaller -> larger id); re-ingesting and projecting
    reproduces the same analysis graph.
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source", "target", "weight"])
        for u, v, w in graph.edges():
            writer.writerow([u, v, w])


def write_scores(registry: AgentRegistry, path: str | Path) -> None:
    """Emit the loader-compatible score file, sorted by id."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user_id", "p_bot"])
        for profile in registry.profiles():
            writer.writerow([profile.id, "" if profile.p_bot is None else repr(profile.p_bot)])


def write_metrics_csv(records: Iterable[MetricRecord], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user_id", "agent_type", "betweenness", "eigenvector", "total_degree"])
        for rec in records:
            writer.writerow(
                [rec.id, rec.agent_type.value, repr(rec.betweenness),
                 repr(rec.eigenvector), repr(rec.total_degree)]
            )


def read_metrics_csv(path: str | Path) -> list[MetricRecord]:
    rows, cols = _open_csv(
        path,
        required=("user_id", "agent_type", "betweenness", "eigenvector", "total_degree"),
    )
    records = []
    for line, row in enumerate(rows[1:], start=2):
        if not any(cell.strip() for cell in row):
            continue
        try:
            records.append(
                MetricRecord(
                    id=row[cols["user_id"]],
                    agent_type=AgentType(row[cols["agent_type"]]),
                    betweenness=float(row[cols["betweenness"]]),
                    eigenvector=float(row[cols["eigenvector"]]),
                    total_degree=float(row[cols["total_degree"]]),
                )
            )
        except (IndexError, ValueError) as exc:
            raise InputError(f"{path}: line {line}: {exc}") from None
    return records


def write_motif_catalog(motifs: Iterable[StarMotif], path: str | Path) -> None:
    """One JSON object per motif: ego, k, alters, alter_edges, pattern."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for motif in motifs:
            fh.write(
                json.dumps(
                    {
                        "ego": motif.ego,
                        "k": motif.k,
                        "alters": list(motif.alters),
                        "alter_edges": [list(edge) for edge in motif.alter_edges],
                        "pattern": motif.pattern.code if motif.pattern else None,
                    },
                    sort_keys=True,
                    separators=(",", ":"),
                )
            )
            fh.write("\n")


def read_motif_catalog(path: str | Path) -> list[StarMotif]:
    path = Path(path)
    if not path.exists():
        raise InputError(f"input file not found: {path}")
    motifs = []
    with path.open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                motifs.append(
                    StarMotif(
                        ego=obj["ego"],
                        alters=tuple(obj["alters"]),
                        alter_edges=tuple(tuple(edge) for edge in obj["alter_edges"]),
                        pattern=StarPattern.parse(obj["pattern"]) if obj.get("pattern") else None,
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise InputError(f"{path}: line {line_no}: {exc}") from None
    return motifs


# ---------------------------------------------------------------------------
# Graph exports
# ---------------------------------------------------------------------------


def _dot_quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def _node_label(node: str, registry: AgentRegistry | None) -> str:
    if registry is None:
        return node
    return f"{node}\n{registry.agent_type(node).value}"


def export_motif_dot(
    motif: StarMotif,
    path: str | Path,
    graph: AnalysisGraph | None = None,
    registry: AgentRegistry | None = None,
) -> None:
    """Render one motif to DOT: ego doublecircled, labels typed, widths by weight.

    ``graph`` supplies combined edge weights for proportional line width;
    without it every edge draws at unit width.  ``registry`` adds the
    bot/human type to node labels.
    """
    path = Path(path)

    def weight_of(u: str, v: str) -> int:
        return graph.weight(u, v) if graph is not None else 1

    lines = ["graph motif {"]
    title = f"pattern={motif.pattern.code} k={motif.k}" if motif.pattern else f"k={motif.k}"
    lines.append(f"  label={_dot_quote(title)};")
    lines.append(
        f"  {_dot_quote(motif.ego)} [shape=doublecircle, "
        f"label={_dot_quote(_node_label(motif.ego, registry) + ' (ego)')}];"
    )
    for alter in motif.alters:
        lines.append(
            f"  {_dot_quote(alter)} [shape=circle, "
            f"label={_dot_quote(_node_label(alter, registry))}];"
        )
    for alter in motif.alters:
        w = weight_of(motif.ego, alter)
        lines.append(
            f"  {_dot_quote(motif.ego)} -- {_dot_quote(alter)} [penwidth={float(w)}];"
        )
    for u, v in motif.alter_edges:
        w = weight_of(u, v)
        lines.append(
            f"  {_dot_quote(u)} -- {_dot_quote(v)} [penwidth={float(w)}, style=dashed];"
        )
    lines.append("}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def export_graph_dot(
    graph: AnalysisGraph,
    path: str | Path,
    registry: AgentRegistry | None = None,
) -> None:
    """Render the full analysis graph to DOT, widths proportional to weight."""
    path = Path(path)
    lines = ["graph analysis {"]
    for node in graph.sorted_nodes():
        lines.append(f"  {_dot_quote(node)} [label={_dot_quote(_node_label(node, registry))}];")
    for u, v, w in graph.edges():
        lines.append(f"  {_dot_quote(u)} -- {_dot_quote(v)} [penwidth={float(w)}];")
    lines.append("}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def export_graph_graphml(
    graph: AnalysisGraph,
    path: str | Path,
    registry: AgentRegistry | None = None,
) -> None:
    """Write GraphML with an ``agent_type`` node key and a ``weight`` edge key."""
    path = Path(path)
    root = ElementTree.Element("graphml", xmlns="http://graphml.graphdrawing.org/xmlns")
    ElementTree.SubElement(
        root, "key", id="d0", attrib={"for": "node", "attr.name": "agent_type",
                                      "attr.type": "string"}
    )
    ElementTree.SubElement(
        root, "key", id="d1", attrib={"for": "edge", "attr.name": "weight",
                                      "attr.type": "int"}
    )
    graph_el = ElementTree.SubElement(root, "graph", edgedefault="undirected")
    for node in graph.sorted_nodes():
        node_el = ElementTree.SubElement(graph_el, "node", id=node)
        if registry is not None:
            data = ElementTree.SubElement(node_el, "data", key="d0")
            data.text = registry.agent_type(node).value
    for u, v, w in graph.edges():
        edge_el = ElementTree.SubElement(graph_el, "edge", source=u, target=v)
        data = ElementTree.SubElement(edge_el, "data", key="d1")
        data.text = str(w)
    tree = ElementTree.ElementTree(root)
    ElementTree.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)
