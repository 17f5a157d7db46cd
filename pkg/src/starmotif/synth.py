"""Synthetic graphs with planted star motifs for detector validation.

Planted stars are node-disjoint from each other and from the background,
so ground truth stays exact: strict enumeration on a noise-free graph
must return the plants and nothing else, and background noise can never
corrupt a planted star.

Randomness comes from one ``random.Random(seed)`` instance (the stdlib
Mersenne Twister), consumed in a fixed order, so equal seeds give
byte-identical graphs, registries, and ground truth on any platform.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .agents import DEFAULT_BOT_THRESHOLD, AgentRegistry, AgentType
from .errors import ConfigError
from .graph import AnalysisGraph
from .motifs import AlterComposition, StarMotif, StarPattern

DEFAULT_EDGE_WEIGHT = 3


@dataclass(frozen=True)
class PlantSpec:
    """Recipe for one or more identical planted stars.

    ``alter_edge_count`` alter-alter links are laid out as a matching
    (disjoint pairs) while the count allows it, then as a chain, closed
    into a cycle when the count equals k.  Every layout keeps each alter
    at alter-degree <= 2, so counts above k are infeasible.

    In the matching regime (count <= k // 2) no alter has more than 2
    neighbors in the whole graph, so at the default k_min of 3 nothing
    but the planted ego can head a star and strict enumeration recovers
    the ground truth exactly.  Chain and cycle layouts give interior
    alters 3 neighbors; those mini-neighborhoods genuinely satisfy the
    star constraints and will (correctly) show up as extra motifs.
    """

    pattern: StarPattern
    k: int
    alter_edge_count: int = 0
    count: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or isinstance(self.k, bool) or self.k < 2:
            raise ConfigError(f"plant k must be an integer >= 2, got {self.k!r}")
        if self.alter_edge_count < 0:
            raise ConfigError(f"alter_edge_count must be >= 0, got {self.alter_edge_count!r}")
        max_edges = self.k if self.k >= 3 else 1
        if self.alter_edge_count > max_edges:
            raise ConfigError(
                f"alter_edge_count {self.alter_edge_count} is infeasible for k={self.k}; "
                f"at most {max_edges} simple alter links keep every alter at "
                "alter-degree <= 2"
            )
        if self.count < 1:
            raise ConfigError(f"plant count must be >= 1, got {self.count!r}")
        if self.pattern.alter_composition is AlterComposition.MIXED and self.k < 2:
            raise ConfigError("a mixed alter composition needs k >= 2")


@dataclass(frozen=True)
class SynthConfig:
    """Full description of a synthetic dataset.

    Score intervals must respect the threshold (bot interval inside
    [threshold, 1], human interval inside [0, threshold]) so that every
    planted label is guaranteed to classify back to itself.  Background
    edges are wired only among background nodes.
    """

    plants: tuple[PlantSpec, ...] = ()
    background_nodes: int = 0
    background_edge_prob: float = 0.0
    bot_score_range: tuple[float, float] = (DEFAULT_BOT_THRESHOLD, 1.0)
    human_score_range: tuple[float, float] = (0.0, DEFAULT_BOT_THRESHOLD)
    bot_threshold: float = DEFAULT_BOT_THRESHOLD
    edge_weight: int = DEFAULT_EDGE_WEIGHT
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "plants", tuple(self.plants))
        if self.background_nodes < 0:
            raise ConfigError(f"background_nodes must be >= 0, got {self.background_nodes!r}")
        if not 0.0 <= self.background_edge_prob <= 1.0:
            raise ConfigError(
                f"background_edge_prob must be in [0, 1], got {self.background_edge_prob!r}"
            )
        if not isinstance(self.edge_weight, int) or self.edge_weight < 1:
            raise ConfigError(f"edge_weight must be an integer >= 1, got {self.edge_weight!r}")
        lo, hi = self.bot_score_range
        if not (self.bot_threshold <= lo <= hi <= 1.0):
            raise ConfigError(
                f"bot score range {self.bot_score_range!r} must lie within "
                f"[{self.bot_threshold}, 1]"
            )
        lo, hi = self.human_score_range
        if not (0.0 <= lo <= hi <= self.bot_threshold):
            raise ConfigError(
                f"human score range {self.human_score_range!r} must lie within "
                f"[0, {self.bot_threshold})"
            )

    @classmethod
    def from_dict(cls, data: dict) -> "SynthConfig":
        """Build from a plain JSON-style mapping (used by the CLI spec file)."""
        if not isinstance(data, dict):
            raise ConfigError(f"synth spec must be a mapping, got {type(data).__name__}")
        known = {
            "plants", "background_nodes", "background_edge_prob", "bot_score_range",
            "human_score_range", "bot_threshold", "edge_weight", "seed",
        }
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown synth spec key(s) {unknown}; known keys: {sorted(known)}")
        kwargs = dict(data)
        plants = []
        for entry in kwargs.pop("plants", []):
            if not isinstance(entry, dict):
                raise ConfigError(f"each plant must be a mapping, got {entry!r}")
            entry = dict(entry)
            try:
                pattern = StarPattern.parse(str(entry.pop("pattern")))
            except KeyError:
                raise ConfigError(f"plant entry missing 'pattern': {entry!r}") from None
            try:
                plants.append(PlantSpec(pattern=pattern, **entry))
            except TypeError as exc:
                raise ConfigError(f"bad plant entry {entry!r}: {exc}") from None
        for key in ("bot_score_range", "human_score_range"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return cls(plants=tuple(plants), **kwargs)


@dataclass
class SynthResult:
    graph: AnalysisGraph
    registry: AgentRegistry
    motifs: list[StarMotif] = field(default_factory=list)

    def __iter__(self):
        return iter((self.graph, self.registry, self.motifs))


def _sample_score(rng: random.Random, interval: tuple[float, float]) -> float:
    lo, hi = interval
    if lo == hi:
        return lo
    # random() < 1, so the draw stays inside [lo, hi) and never crosses
    # the threshold from the human side.
    return lo + rng.random() * (hi - lo)


def _alter_link_layout(alters: list[str], count: int) -> list[tuple[str, str]]:
    """Place ``count`` alter links: matching while possible, else chain/cycle."""
    k = len(alters)
    if count <= k // 2:
        return [(alters[2 * i], alters[2 * i + 1]) for i in range(count)]
    links = [(alters[j], alters[j + 1]) for j in range(min(count, k - 1))]
    if count == k:
        links.append((alters[k - 1], alters[0]))
    return links


def _alter_types(
    rng: random.Random, composition: AlterComposition, k: int
) -> list[AgentType]:
    if composition is AlterComposition.ALL_BOTS:
        return [AgentType.BOT] * k
    if composition is AlterComposition.ALL_HUMANS:
        return [AgentType.HUMAN] * k
    # Mixed: pin one of each, draw the rest.
    types = [AgentType.BOT, AgentType.HUMAN]
    types += [rng.choice((AgentType.BOT, AgentType.HUMAN)) for _ in range(k - 2)]
    return types


def generate(config: SynthConfig) -> SynthResult:
    """Materialize the configured graph, registry, and ground-truth motifs.

    Planted node ids are ``p<idx>e`` (ego) and ``p<idx>a<j>`` (alters);
    background ids are ``bg<idx>``.  Nodes that end up with no incident
    edge (background nodes under a low edge probability) appear in the
    registry but not in the graph, mirroring what weight pruning does to
    marginal agents in the real pipeline.
    """
    rng = random.Random(config.seed)
    edges: list[tuple[str, str, int]] = []
    scores: list[tuple[str, float]] = []
    truth: list[StarMotif] = []

    plant_idx = 0
    for spec in config.plants:
        for _ in range(spec.count):
            prefix = f"p{plant_idx:03d}"
            plant_idx += 1
            ego = f"{prefix}e"
            alters = [f"{prefix}a{j:02d}" for j in range(spec.k)]

            ego_is_bot = spec.pattern.ego_type is AgentType.BOT
            scores.append(
                (ego, _sample_score(rng, config.bot_score_range if ego_is_bot
                                    else config.human_score_range))
            )
            for alter, alter_type in zip(
                alters, _alter_types(rng, spec.pattern.alter_composition, spec.k)
            ):
                interval = (
                    config.bot_score_range
                    if alter_type is AgentType.BOT
                    else config.human_score_range
                )
                scores.append((alter, _sample_score(rng, interval)))

            for alter in alters:
                edges.append((ego, alter, config.edge_weight))
            alter_edges = []
            for u, v in _alter_link_layout(alters, spec.alter_edge_count):
                edges.append((u, v, config.edge_weight))
                alter_edges.append((u, v) if u < v else (v, u))

            truth.append(
                StarMotif(
                    ego=ego,
                    alters=tuple(sorted(alters)),
                    alter_edges=tuple(sorted(alter_edges)),
                    pattern=spec.pattern,
                )
            )

    background = [f"bg{i:05d}" for i in range(config.background_nodes)]
    for node in background:
        scores.append((node, rng.random()))
    if config.background_edge_prob > 0:
        for i in range(len(background)):
            for j in range(i + 1, len(background)):
                if rng.random() < config.background_edge_prob:
                    edges.append((background[i], background[j], config.edge_weight))

    graph = AnalysisGraph.from_edges(edges)
    registry = AgentRegistry.from_scores(scores, threshold=config.bot_threshold)
    truth.sort(key=lambda motif: (-motif.k, motif.ego))
    return SynthResult(graph=graph, registry=registry, motifs=truth)
