"""Episodic memory: live status, completed-subgoal history, reusable rules.

History is append-only within an episode. Experience rules are deduplicated
by their condition pattern and survive across episodes when the agent runs
with cross-episode experience enabled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..grid import Pose


@dataclass(frozen=True)
class ExperienceRule:
    condition: str       # pattern like "subgoal:PickUp error:HandFull"
    guidance: str
    origin_episode: str = ""


SEED_RULES = (
    ExperienceRule("holding-capacity", "only one object can be held at a time"),
    ExperienceRule("slice-support", "objects must be placed on a flat surface before manipulation"),
)


@dataclass
class HistoryEntry:
    step: int
    subgoal: str
    outcome: str
    detail: str = ""


@dataclass
class EpisodicMemory:
    held_object: str | None = None
    agent_pose: Pose | None = None
    history: list[HistoryEntry] = field(default_factory=list)
    experience: list[ExperienceRule] = field(default_factory=lambda: list(SEED_RULES))

    def record_status(self, held_object: str | None, pose: Pose) -> "EpisodicMemory":
        self.held_object = held_object
        self.agent_pose = pose
        return self

    def record_subgoal(self, step: int, subgoal: str, outcome: str, detail: str = "") -> "EpisodicMemory":
        self.history.append(HistoryEntry(step, subgoal, outcome, detail))
        return self

    def record_experience(self, rule: ExperienceRule) -> "EpisodicMemory":
        if all(existing.condition != rule.condition for existing in self.experience):
            self.experience.append(rule)
        return self

    def find_rule(self, condition: str) -> ExperienceRule | None:
        for rule in self.experience:
            if rule.condition == condition:
                return rule
        return None

    def fresh_for_episode(self, carry_experience: bool = True) -> "EpisodicMemory":
        """Next-episode memory: status and history reset; experience carries
        over when enabled, else only the seed rules remain."""
        rules = list(self.experience) if carry_experience else list(SEED_RULES)
        return EpisodicMemory(experience=rules)
