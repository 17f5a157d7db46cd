"""Star motif extraction, constraint enforcement, and pattern coding.

A star motif is one ego plus its k adjacent alters, where alters are at
most lightly connected to each other: every alter may touch at most 2
other alters, so its degree inside the motif subgraph never exceeds 3
(one ego edge plus those alter links).  Degree constraints are evaluated
within the induced motif subgraph; an opt-in flag additionally bounds
each alter's degree in the whole graph.

Each motif carries a three-character pattern code ``Sab``: ``a`` is the
ego type (0 bot, 1 human) and ``b`` the alter composition (0 all bots,
1 all humans, 2 mixed), giving six codes S00 through S12.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .agents import AgentRegistry, AgentType
from .errors import ConfigError, InputError, UnknownAgentError
from .graph import AnalysisGraph

DEFAULT_K_MIN = 3


class AlterComposition(enum.Enum):
    ALL_BOTS = 0
    ALL_HUMANS = 1
    MIXED = 2


class StarPattern(enum.Enum):
    """The six ego/alter pattern codes."""

    S00 = "S00"
    S01 = "S01"
    S02 = "S02"
    S10 = "S10"
    S11 = "S11"
    S12 = "S12"

    @property
    def ego_type(self) -> AgentType:
        return AgentType.BOT if self.value[1] == "0" else AgentType.HUMAN

    @property
    def alter_composition(self) -> AlterComposition:
        return AlterComposition(int(self.value[2]))

    @property
    def code(self) -> str:
        return self.value

    @classmethod
    def from_parts(cls, ego_type: AgentType, composition: AlterComposition) -> "StarPattern":
        a = 0 if ego_type is AgentType.BOT else 1
        return cls(f"S{a}{composition.value}")

    @classmethod
    def parse(cls, code: str) -> "StarPattern":
        try:
            return cls(code)
        except ValueError:
            raise InputError(f"unknown pattern code {code!r}") from None

    def __str__(self) -> str:
        return self.value


class ConstraintMode(enum.Enum):
    STRICT = "strict"
    PRUNE_VIOLATORS = "prune_violators"


@dataclass(frozen=True)
class MotifConfig:
    """Knobs for motif enumeration."""

    k_min: int = DEFAULT_K_MIN
    mode: ConstraintMode = ConstraintMode.PRUNE_VIOLATORS
    bound_global_degree: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.k_min, int) or isinstance(self.k_min, bool) or self.k_min < 2:
            raise ConfigError(f"k_min must be an integer >= 2, got {self.k_min!r}")


@dataclass(frozen=True)
class EgoCandidate:
    """A node's raw one-hop neighborhood before constraint enforcement."""

    ego: str
    alters: frozenset[str]
    alter_edges: frozenset[tuple[str, str]]


@dataclass(frozen=True)
class StarMotif:
    """A validated star: ego, sorted alters, surviving alter links, pattern.

    ``pattern`` is ``None`` until :func:`classify_pattern` has run.
    """

    ego: str
    alters: tuple[str, ...]
    alter_edges: tuple[tuple[str, str], ...]
    pattern: StarPattern | None = None

    @property
    def k(self) -> int:
        return len(self.alters)

    @property
    def members(self) -> tuple[str, ...]:
        return (self.ego,) + self.alters


def _ordered_pair(u: str, v: str) -> tuple[str, str]:
    return (u, v) if u < v else (v, u)


def extract_ego_candidate(graph: AnalysisGraph, ego: str) -> EgoCandidate:
    """One-hop neighborhood of ``ego`` with its induced alter-alter edges."""
    if ego not in graph:
        raise UnknownAgentError(f"ego {ego!r} is not a node of the graph")
    alters = set(graph.neighbors(ego))
    alter_edges = set()
    for u in alters:
        nbrs = graph.neighbors(u)
        others = alters.intersection(nbrs) if len(nbrs) < len(alters) else [
            v for v in alters if v in nbrs
        ]
        for v in others:
            if u < v:
                alter_edges.add((u, v))
    return EgoCandidate(ego=ego, alters=frozenset(alters), alter_edges=frozenset(alter_edges))


def enforce_constraints(
    candidate: EgoCandidate,
    mode: ConstraintMode = ConstraintMode.PRUNE_VIOLATORS,
    k_min: int = DEFAULT_K_MIN,
    global_degree: Mapping[str, int] | None = None,
) -> StarMotif | None:
    """Apply the star constraints to a candidate; pattern stays unassigned.

    Strict mode keeps the candidate only if every alter already has at
    most 2 alter links (and, when ``global_degree`` is supplied, whole
    graph degree at most 3).  Prune mode instead removes offending alters
    one at a time: highest alter-degree first, ties broken by smallest
    agent id, so the removal order is reproducible.  Either way the
    result must retain at least ``k_min`` alters or the candidate yields
    no motif, which is a valid outcome rather than an error.
    """
    alters = set(candidate.alters)
    adjacency: dict[str, set[str]] = {a: set() for a in alters}
    for u, v in candidate.alter_edges:
        adjacency[u].add(v)
        adjacency[v].add(u)

    globally_bounded = (
        set()
        if global_degree is None
        else {a for a in alters if global_degree.get(a, 0) > 3}
    )

    if mode is ConstraintMode.STRICT:
        if globally_bounded:
            return None
        if any(len(adjacency[a]) > 2 for a in alters):
            return None
    else:
        for a in sorted(globally_bounded):
            alters.discard(a)
            for b in adjacency.pop(a):
                adjacency[b].discard(a)
        while alters:
            worst = max(len(adjacency[a]) for a in alters)
            if worst <= 2:
                break
            victim = min(a for a in alters if len(adjacency[a]) == worst)
            alters.discard(victim)
            for b in adjacency.pop(victim):
                adjacency[b].discard(victim)

    if len(alters) < k_min:
        return None

    kept_edges = sorted(
        _ordered_pair(u, v)
        for u, v in candidate.alter_edges
        if u in alters and v in alters
    )
    return StarMotif(
        ego=candidate.ego,
        alters=tuple(sorted(alters)),
        alter_edges=tuple(kept_edges),
        pattern=None,
    )


def classify_pattern(motif: StarMotif, registry: AgentRegistry) -> StarPattern:
    """Pattern code from the members' agent types (missing scores -> Human)."""
    ego_type = registry.agent_type(motif.ego)
    alter_types = {registry.agent_type(a) for a in motif.alters}
    if alter_types == {AgentType.BOT}:
        composition = AlterComposition.ALL_BOTS
    elif alter_types == {AgentType.HUMAN}:
        composition = AlterComposition.ALL_HUMANS
    else:
        composition = AlterComposition.MIXED
    return StarPattern.from_parts(ego_type, composition)


def enumerate_stars(
    graph: AnalysisGraph,
    registry: AgentRegistry,
    config: MotifConfig = MotifConfig(),
) -> list[StarMotif]:
    """Evaluate every node as an ego and keep the surviving, classified stars.

    Each candidate is the node's maximal one-hop neighborhood; overlap is
    allowed (one agent may be the ego of its own motif and an alter in
    others).  Output is sorted by descending k, then agent id.
    """
    global_degree: dict[str, int] | None = None
    if config.bound_global_degree:
        global_degree = {v: graph.degree(v) for v in graph.nodes}

    motifs: list[StarMotif] = []
    for ego in graph.sorted_nodes():
        candidate = extract_ego_candidate(graph, ego)
        motif = enforce_constraints(
            candidate, mode=config.mode, k_min=config.k_min, global_degree=global_degree
        )
        if motif is not None:
            motifs.append(replace(motif, pattern=classify_pattern(motif, registry)))
    motifs.sort(key=lambda m: (-m.k, m.ego))
    return motifs


def pattern_counts(motifs: Iterable[StarMotif]) -> dict[str, int]:
    """Histogram over all six pattern codes, zero-filled."""
    counts = {pattern.code: 0 for pattern in StarPattern}
    for motif in motifs:
        if motif.pattern is None:
            raise InputError(f"motif with ego {motif.ego!r} has no pattern assigned")
        counts[motif.pattern.code] += 1
    return counts
