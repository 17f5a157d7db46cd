"""Node-level network metrics: betweenness, eigenvector, and total degree.

All three run on the undirected analysis graph.  The default treats edges
as unweighted, since the motif constraints downstream are purely
structural; pass ``weighted=True`` for the variants that use combined
retweet weights (inverse-weight shortest paths for betweenness, the
weighted adjacency matrix for eigenvector centrality).

Node iteration everywhere follows sorted agent-id order, so floating
point accumulation and therefore outputs are reproducible run to run.
"""

from __future__ import annotations

import heapq
import math
import warnings
from collections import deque
from dataclasses import dataclass

from .agents import AgentRegistry, AgentType
from .errors import ConvergenceError, InputError
from .graph import AnalysisGraph

DEFAULT_EIG_TOL = 1e-8
DEFAULT_EIG_MAX_ITER = 1000

METRIC_NAMES = ("betweenness", "eigenvector", "total_degree")


class CentralityWarning(UserWarning):
    """Base category for non-fatal conditions met during metric computation."""


class DisconnectedGraphWarning(CentralityWarning):
    """Eigenvector centrality restricted to the largest connected component."""


class DegenerateSpectrumWarning(CentralityWarning):
    """Largest-component choice was ambiguous (equal-size components)."""


@dataclass(frozen=True)
class MetricRecord:
    """One node's metric row, as exported to the metrics CSV."""

    id: str
    agent_type: AgentType
    betweenness: float
    eigenvector: float
    total_degree: float


def _sorted_adjacency(graph: AnalysisGraph) -> dict[str, list[str]]:
    return {v: sorted(graph.neighbors(v)) for v in graph.sorted_nodes()}


# ---------------------------------------------------------------------------
# Betweenness
# ---------------------------------------------------------------------------


def betweenness_centrality(
    graph: AnalysisGraph,
    normalized: bool = True,
    weighted: bool = False,
) -> dict[str, float]:
    """Shortest-path betweenness via Brandes' dependency accumulation.

    For each node v this is the pair-path fraction sum over unordered
    pairs {s, t} (ordered-pair accumulation halved, the undirected
    convention).  With ``normalized`` the value is divided by
    ``(n - 1)(n - 2) / 2``; graphs with fewer than 3 nodes come back all
    zeros.  ``weighted`` switches shortest paths to inverse-weight edge
    lengths (a heavier retweet edge is a shorter hop).
    """
    nodes = graph.sorted_nodes()
    n = len(nodes)
    score = {v: 0.0 for v in nodes}
    if n < 3:
        return score

    adjacency = _sorted_adjacency(graph)
    for source in nodes:
        if weighted:
            order, predecessors, sigma = _dijkstra_counts(graph, adjacency, source)
        else:
            order, predecessors, sigma = _bfs_counts(adjacency, source)
        delta = {v: 0.0 for v in order}
        while order:
            w = order.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in predecessors[w]:
                delta[v] += sigma[v] * coeff
            if w != source:
                score[w] += delta[w]

    scale = 0.5
    if normalized:
        scale /= (n - 1) * (n - 2) / 2.0
    return {v: score[v] * scale for v in nodes}


def _bfs_counts(adjacency: dict[str, list[str]], source: str):
    """Single-source shortest paths on unit edges: visit order, preds, counts."""
    dist = {source: 0}
    sigma = {source: 1}
    predecessors: dict[str, list[str]] = {source: []}
    order: list[str] = []
    queue = deque([source])
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in adjacency[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                sigma[w] = 0
                predecessors[w] = []
                queue.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
                predecessors[w].append(v)
    return order, predecessors, sigma


def _dijkstra_counts(graph: AnalysisGraph, adjacency: dict[str, list[str]], source: str):
    """Single-source shortest paths with edge length 1/weight.

    Path-length ties are compared exactly in floating point, the usual
    convention for weighted betweenness.
    """
    dist: dict[str, float] = {}
    seen: dict[str, float] = {source: 0.0}
    sigma = {source: 1}
    predecessors: dict[str, list[str]] = {source: []}
    order: list[str] = []
    heap: list[tuple[float, str]] = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        order.append(v)
        for w in adjacency[v]:
            length = d + 1.0 / graph.weight(v, w)
            if w in dist:
                continue
            if w not in seen or length < seen[w]:
                seen[w] = length
                sigma[w] = sigma[v]
                predecessors[w] = [v]
                heapq.heappush(heap, (length, w))
            elif length == seen[w]:
                sigma[w] += sigma[v]
                predecessors[w].append(v)
    return order, predecessors, sigma


# ---------------------------------------------------------------------------
# Eigenvector
# ---------------------------------------------------------------------------


def eigenvector_centrality(
    graph: AnalysisGraph,
    tol: float = DEFAULT_EIG_TOL,
    max_iter: int = DEFAULT_EIG_MAX_ITER,
    weighted: bool = False,
) -> dict[str, float]:
    """Principal-eigenvector scores of the adjacency matrix.

    Power iteration starts from the uniform positive vector and is
    L2-normalized each step; it stops once successive iterates differ by
    less than ``tol`` in the max norm and the eigen-residual
    ``max|Ax - (x.Ax) x|`` is below ``10 * tol``.  Iterating with A + I
    rather than A keeps the dominant eigenvalue simple on bipartite
    structures (stars included), where plain power iteration oscillates.

    On a disconnected graph the vector is computed on the largest
    connected component, zero elsewhere, with a
    :class:`DisconnectedGraphWarning`; an equal-size tie for largest
    component additionally raises :class:`DegenerateSpectrumWarning`
    because the choice (smallest member id wins) is then a convention,
    not a property of the spectrum.
    """
    if graph.node_count == 0:
        raise InputError("eigenvector centrality is undefined on an empty graph")
    if not tol > 0:
        raise InputError(f"tol must be positive, got {tol!r}")
    if max_iter < 1:
        raise InputError(f"max_iter must be >= 1, got {max_iter!r}")

    components = graph.connected_components()
    if len(components) > 1:
        warnings.warn(
            f"graph has {len(components)} connected components; eigenvector "
            "centrality computed on the largest, zeros elsewhere",
            DisconnectedGraphWarning,
            stacklevel=2,
        )
        if len(components[0]) == len(components[1]):
            warnings.warn(
                "largest connected component is not unique (equal sizes); "
                "picked the one containing the smallest agent id",
                DegenerateSpectrumWarning,
                stacklevel=2,
            )
    members = sorted(components[0])

    result = {v: 0.0 for v in graph.sorted_nodes()}
    x = _power_iteration(graph, members, tol, max_iter, weighted)
    result.update(x)
    return result


def _apply_adjacency(
    graph: AnalysisGraph, members: list[str], x: dict[str, float], weighted: bool
) -> dict[str, float]:
    y = {}
    for v in members:
        acc = 0.0
        nbrs = graph.neighbors(v)
        for u in sorted(nbrs):
            acc += x[u] * (nbrs[u] if weighted else 1.0)
        y[v] = acc
    return y


def _power_iteration(
    graph: AnalysisGraph,
    members: list[str],
    tol: float,
    max_iter: int,
    weighted: bool,
) -> dict[str, float]:
    m = len(members)
    x = {v: 1.0 / math.sqrt(m) for v in members}
    residual = math.inf
    for _ in range(max_iter):
        ax = _apply_adjacency(graph, members, x, weighted)
        # Shifted step: y = (A + I) x, renormalized.
        y = {v: ax[v] + x[v] for v in members}
        norm = math.sqrt(sum(val * val for val in y.values())) or 1.0
        y = {v: y[v] / norm for v in members}
        diff = max(abs(y[v] - x[v]) for v in members)
        x = y
        if diff < tol:
            ax = _apply_adjacency(graph, members, x, weighted)
            lam = sum(x[v] * ax[v] for v in members)
            residual = max(abs(ax[v] - lam * x[v]) for v in members)
            if residual < 10.0 * tol:
                return x
    last = {v: 0.0 for v in graph.sorted_nodes()}
    last.update(x)
    raise ConvergenceError(
        f"power iteration did not converge within {max_iter} iterations "
        f"(last residual {residual:.3e})",
        last_iterate=last,
        residual=residual,
    )


# ---------------------------------------------------------------------------
# Total degree
# ---------------------------------------------------------------------------


def total_degree_centrality(graph: AnalysisGraph, normalized: bool = True) -> dict[str, float]:
    """Count of direct connections, divided by ``n - 1`` when normalized."""
    n = graph.node_count
    denom = float(n - 1) if normalized and n > 1 else 1.0
    if normalized and n <= 1:
        return {v: 0.0 for v in graph.sorted_nodes()}
    return {v: graph.degree(v) / denom for v in graph.sorted_nodes()}


# ---------------------------------------------------------------------------
# Combined records
# ---------------------------------------------------------------------------


def metric_records(
    graph: AnalysisGraph,
    registry: AgentRegistry,
    normalized: bool = True,
    weighted: bool = False,
    tol: float = DEFAULT_EIG_TOL,
    max_iter: int = DEFAULT_EIG_MAX_ITER,
) -> list[MetricRecord]:
    """All three metrics plus agent type for every node, sorted by id.

    Nodes absent from the registry classify as Human.
    """
    betweenness = betweenness_centrality(graph, normalized=normalized, weighted=weighted)
    eigenvector = eigenvector_centrality(graph, tol=tol, max_iter=max_iter, weighted=weighted)
    degree = total_degree_centrality(graph, normalized=normalized)
    return [
        MetricRecord(
            id=v,
            agent_type=registry.agent_type(v),
            betweenness=betweenness[v],
            eigenvector=eigenvector[v],
            total_degree=degree[v],
        )
        for v in graph.sorted_nodes()
    ]
