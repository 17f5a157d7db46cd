"""Bot/human agent classification from bot-probability scores.

An agent is a Bot when its score meets the threshold (default 0.7) and a
Human otherwise; agents with no score at all also fall into the Human
branch.  The threshold is configurable because it comes from an external
thresholding convention, not from the data itself.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import ConfigError, InputError, UndefinedStatisticError

DEFAULT_BOT_THRESHOLD = 0.7


class AgentType(enum.Enum):
    BOT = "bot"
    HUMAN = "human"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def _check_probability(value: float, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or math.isnan(value):
        raise InputError(f"{name} must be a real number in [0, 1], got {value!r}")
    if not 0.0 <= value <= 1.0:
        raise InputError(f"{name} must be in [0, 1], got {value!r}")
    return float(value)


def classify_agent(p_bot: float | None, threshold: float = DEFAULT_BOT_THRESHOLD) -> AgentType:
    """Threshold rule: Bot iff a score is present and ``p_bot >= threshold``.

    A missing score classifies as Human.  Out-of-range scores are rejected,
    never clamped.
    """
    try:
        threshold = _check_probability(threshold, "threshold")
    except InputError as exc:
        raise ConfigError(str(exc)) from None
    if p_bot is None:
        return AgentType.HUMAN
    p_bot = _check_probability(p_bot, "p_bot")
    return AgentType.BOT if p_bot >= threshold else AgentType.HUMAN


@dataclass(frozen=True)
class AgentProfile:
    """One agent's score and derived type."""

    id: str
    p_bot: float | None
    agent_type: AgentType


class AgentRegistry:
    """Immutable id -> profile map with a fixed classification threshold.

    Build with :meth:`from_scores`; lookups of unknown ids classify as
    Human (the missing-score branch) without mutating the registry.
    """

    __slots__ = ("_profiles", "_threshold", "_duplicate_count")

    def __init__(
        self,
        profiles: Mapping[str, AgentProfile] | None = None,
        threshold: float = DEFAULT_BOT_THRESHOLD,
        duplicate_count: int = 0,
    ) -> None:
        try:
            self._threshold = _check_probability(threshold, "threshold")
        except InputError as exc:
            raise ConfigError(str(exc)) from None
        self._profiles: dict[str, AgentProfile] = dict(profiles or {})
        self._duplicate_count = duplicate_count

    @classmethod
    def from_scores(
        cls,
        scores: Iterable[tuple[str, float | None]] | Mapping[str, float | None],
        threshold: float = DEFAULT_BOT_THRESHOLD,
    ) -> "AgentRegistry":
        """Classify every ``(id, p_bot)`` pair at ``threshold``.

        A repeated id keeps the last score seen; the number of overwritten
        entries is retained in :attr:`duplicate_count` so data loss is
        visible in reports.
        """
        if isinstance(scores, Mapping):
            scores = scores.items()
        profiles: dict[str, AgentProfile] = {}
        duplicates = 0
        for agent_id, p_bot in scores:
            if not isinstance(agent_id, str) or agent_id == "":
                raise InputError(f"agent id must be a non-empty string, got {agent_id!r}")
            agent_type = classify_agent(p_bot, threshold)
            if agent_id in profiles:
                duplicates += 1
            profiles[agent_id] = AgentProfile(agent_id, p_bot, agent_type)
        return cls(profiles, threshold, duplicates)

    @property
    def threshold(self) -> float:
        return self._threshold

    @property
    def duplicate_count(self) -> int:
        return self._duplicate_count

    def __len__(self) -> int:
        return len(self._profiles)

    def __contains__(self, agent_id: str) -> bool:
        return agent_id in self._profiles

    def __iter__(self) -> Iterator[str]:
        return iter(sorted(self._profiles))

    def get(self, agent_id: str) -> AgentProfile | None:
        return self._profiles.get(agent_id)

    def profiles(self) -> Iterator[AgentProfile]:
        for agent_id in sorted(self._profiles):
            yield self._profiles[agent_id]

    def agent_type(self, agent_id: str) -> AgentType:
        """Type for ``agent_id``; unknown ids default to Human."""
        profile = self._profiles.get(agent_id)
        return profile.agent_type if profile is not None else AgentType.HUMAN

    def count(self, agent_type: AgentType) -> int:
        return sum(1 for p in self._profiles.values() if p.agent_type is agent_type)

    def bot_fraction(self) -> float:
        """Fraction of registered agents classified as Bot."""
        if not self._profiles:
            raise UndefinedStatisticError("bot fraction is undefined for an empty registry")
        return self.count(AgentType.BOT) / len(self._profiles)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AgentRegistry):
            return NotImplemented
        return self._profiles == other._profiles and self._threshold == other._threshold

    def __repr__(self) -> str:
        return (
            f"AgentRegistry(agents={len(self._profiles)}, "
            f"threshold={self._threshold}, bots={self.count(AgentType.BOT)})"
        )
