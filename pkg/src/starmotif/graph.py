"""Retweet graph construction and its undirected analysis projection.

Two structures live here:

``RetweetGraph``
    Directed, weighted aggregate of retweet events.  The edge ``(i, j)``
    with weight ``w`` means that ``j`` retweeted ``i`` a total of ``w``
    times, so information flows from ``i`` outward.

``AnalysisGraph``
    Simple undirected graph obtained by symmetrizing a ``RetweetGraph``.
    Each undirected edge carries the combined weight of both directions.
    All metric and motif computations run on this structure.

Construction is single-writer: build a ``RetweetGraph`` by feeding events,
then derive pruned/projected views.  Derived graphs are fresh objects and
are treated as immutable values by every downstream module.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .errors import ConfigError, InputError


def _check_agent_id(agent_id: str, role: str) -> None:
    if not isinstance(agent_id, str) or agent_id == "":
        raise InputError(f"{role} must be a non-empty string, got {agent_id!r}")


class RetweetGraph:
    """Directed weighted graph aggregated from retweet events.

    Self-retweets are discarded at ingestion; ego/alter analysis assumes
    distinct endpoints, and a self-loop never contributes to a star.
    """

    __slots__ = ("_weights", "_nodes")

    def __init__(self) -> None:
        self._weights: dict[tuple[str, str], int] = {}
        self._nodes: set[str] = set()

    # -- construction -------------------------------------------------

    def add_retweet_event(self, original_author: str, retweeter: str) -> "RetweetGraph":
        """Record one retweet: ``retweeter`` retweeted ``original_author``.

        Increments the weight of edge ``(original_author, retweeter)`` by 1,
        inserting nodes as needed.  An event whose two ids are equal is
        discarded without changing the graph.
        """
        return self.add_retweets(original_author, retweeter, 1)

    def add_retweets(self, original_author: str, retweeter: str, count: int) -> "RetweetGraph":
        """Record ``count`` retweets at once (pre-aggregated ingestion path)."""
        _check_agent_id(original_author, "original_author")
        _check_agent_id(retweeter, "retweeter")
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise InputError(f"retweet count must be a positive integer, got {count!r}")
        if original_author == retweeter:
            return self
        key = (original_author, retweeter)
        self._weights[key] = self._weights.get(key, 0) + count
        self._nodes.add(original_author)
        self._nodes.add(retweeter)
        return self

    # -- inspection ---------------------------------------------------

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self._nodes)

    def weight(self, original_author: str, retweeter: str) -> int:
        """Retweet count on the directed edge, 0 if absent."""
        return self._weights.get((original_author, retweeter), 0)

    def edges(self) -> Iterator[tuple[str, str, int]]:
        """Directed edges as ``(original_author, retweeter, weight)``, sorted."""
        for (i, j) in sorted(self._weights):
            yield i, j, self._weights[(i, j)]

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._weights)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RetweetGraph):
            return NotImplemented
        return self._weights == other._weights and self._nodes == other._nodes

    def __repr__(self) -> str:
        return f"RetweetGraph(nodes={self.node_count}, edges={self.edge_count})"

    # -- transforms ---------------------------------------------------

    def prune_by_weight(self, min_weight: int, keep_isolated: bool = False) -> "RetweetGraph":
        """New graph keeping exactly the edges with weight >= ``min_weight``.

        Nodes left with no surviving edge are dropped unless
        ``keep_isolated`` is set.
        """
        if not isinstance(min_weight, int) or isinstance(min_weight, bool) or min_weight < 1:
            raise ConfigError(f"min_weight must be an integer >= 1, got {min_weight!r}")
        pruned = RetweetGraph()
        pruned._weights = {k: w for k, w in self._weights.items() if w >= min_weight}
        if keep_isolated:
            pruned._nodes = set(self._nodes)
        else:
            for i, j in pruned._weights:
                pruned._nodes.add(i)
                pruned._nodes.add(j)
        return pruned

    def undirected_projection(self) -> "AnalysisGraph":
        """Symmetrize into an :class:`AnalysisGraph`.

        The unordered pair ``{i, j}`` is present iff either directed edge
        exists; its combined weight is the sum of both directions.  The
        node set is preserved, including isolated nodes.
        """
        combined: dict[tuple[str, str], int] = {}
        for (i, j), w in self._weights.items():
            pair = (i, j) if i < j else (j, i)
            combined[pair] = combined.get(pair, 0) + w
        return AnalysisGraph.from_edges(
            ((u, v, w) for (u, v), w in combined.items()), nodes=self._nodes
        )


class AnalysisGraph:
    """Simple undirected graph with positive integer edge weights.

    Adjacency is stored symmetrically; there are no self-loops or parallel
    edges.  Weights are carried for reporting (edge thickness in exports)
    and for the optional weighted metric variants; structural operations
    ignore them.
    """

    __slots__ = ("_adj",)

    def __init__(self) -> None:
        self._adj: dict[str, dict[str, int]] = {}

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str, int]],
        nodes: Iterable[str] = (),
    ) -> "AnalysisGraph":
        """Build from ``(u, v, weight)`` triples plus optional extra nodes.

        A repeated pair accumulates weight; ``u == v`` is rejected.
        """
        g = cls()
        for n in nodes:
            _check_agent_id(n, "node")
            g._adj.setdefault(n, {})
        for u, v, w in edges:
            g._add_edge(u, v, w)
        return g

    def _add_edge(self, u: str, v: str, w: int = 1) -> None:
        _check_agent_id(u, "node")
        _check_agent_id(v, "node")
        if u == v:
            raise InputError(f"self-loop {u!r} not allowed in analysis graph")
        if not isinstance(w, int) or isinstance(w, bool) or w < 1:
            raise InputError(f"edge weight must be a positive integer, got {w!r}")
        self._adj.setdefault(u, {})
        self._adj.setdefault(v, {})
        self._adj[u][v] = self._adj[u].get(v, 0) + w
        self._adj[v][u] = self._adj[v].get(u, 0) + w

    # -- inspection ---------------------------------------------------

    @property
    def nodes(self) -> frozenset[str]:
        return frozenset(self._adj)

    def sorted_nodes(self) -> list[str]:
        return sorted(self._adj)

    @property
    def node_count(self) -> int:
        return len(self._adj)

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self._adj.values()) // 2

    def __contains__(self, node: str) -> bool:
        return node in self._adj

    def neighbors(self, node: str) -> Mapping[str, int]:
        """Neighbor -> combined weight map for ``node``."""
        try:
            return self._adj[node]
        except KeyError:
            raise InputError(f"unknown node {node!r}") from None

    def degree(self, node: str) -> int:
        return len(self.neighbors(node))

    def has_edge(self, u: str, v: str) -> bool:
        return v in self._adj.get(u, ())

    def weight(self, u: str, v: str) -> int:
        """Combined weight of the undirected edge, 0 if absent."""
        return self._adj.get(u, {}).get(v, 0)

    def edges(self) -> Iterator[tuple[str, str, int]]:
        """Undirected edges as ``(u, v, weight)`` with u < v, sorted."""
        for u in sorted(self._adj):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield u, v, self._adj[u][v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AnalysisGraph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"AnalysisGraph(nodes={self.node_count}, edges={self.edge_count})"

    # -- transforms ---------------------------------------------------

    def prune_by_weight(self, min_weight: int, keep_isolated: bool = False) -> "AnalysisGraph":
        """Keep edges whose combined weight >= ``min_weight``.

        This is the prune-after-projection alternative; the default
        pipeline prunes the directed graph before projecting.
        """
        if not isinstance(min_weight, int) or isinstance(min_weight, bool) or min_weight < 1:
            raise ConfigError(f"min_weight must be an integer >= 1, got {min_weight!r}")
        kept = [(u, v, w) for u, v, w in self.edges() if w >= min_weight]
        nodes: Iterable[str] = self._adj if keep_isolated else ()
        return AnalysisGraph.from_edges(kept, nodes=nodes)

    def connected_components(self) -> list[set[str]]:
        """Connected components, largest first; ties by smallest member id."""
        seen: set[str] = set()
        components: list[set[str]] = []
        for start in sorted(self._adj):
            if start in seen:
                continue
            comp = {start}
            stack = [start]
            while stack:
                v = stack.pop()
                for u in self._adj[v]:
                    if u not in comp:
                        comp.add(u)
                        stack.append(u)
            seen |= comp
            components.append(comp)
        components.sort(key=lambda c: (-len(c), min(c)))
        return components
