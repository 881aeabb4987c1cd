"""Supervisory review of every primitive outcome.

Successes pass. A failure first consults the experience pool: a validated
resolution for the same failure signature is applied immediately. Otherwise
the critic walks a per-error sequence of local correction hints, escalating
to replanning after the configured number of refinements for the same
subgoal's consecutive-failure streak. Resolutions that lead to success are
validated and can be distilled into episodic memory for reuse across
episodes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..config import AgentConfig
from ..memory.episodic import EpisodicMemory, ExperienceRule
from .goals import CriticDirective, PASS

logger = logging.getLogger(__name__)

_DEFAULT = AgentConfig()

# Ordered local corrections per error code; attempt i uses hint i (mod len).
REFINE_HINTS = {
    "NotVisible": ("rotate-toward-target", "step-closer"),
    "NotReachable": ("step-closer", "reposition"),
    "Collision": ("replan-path", "replan-path"),
    "HandFull": ("stow-held-object",),
    "HandEmpty": ("acquire-target",),
    "NoKnife": ("fetch-knife",),
    "ClosedReceptacle": ("open-container-first",),
    "InvalidTarget": ("place-target-on-surface", "reposition"),
    "SearchExhausted": ("widen-search",),
}
_FALLBACK_HINTS = ("reposition", "step-closer")


@dataclass
class ExperiencePoolEntry:
    signature: tuple[str, str, str]   # (subgoal kind, error code, context digest)
    resolution: str                   # refine hint that worked
    validated: bool = False
    uses: int = 0


class NotValidatedError(ValueError):
    pass


@dataclass
class ExperiencePool:
    entries: dict[tuple[str, str, str], ExperiencePoolEntry] = field(default_factory=dict)

    def lookup(self, signature: tuple[str, str, str]) -> ExperiencePoolEntry | None:
        entry = self.entries.get(signature)
        return entry if entry and entry.validated else None

    def propose(self, signature: tuple[str, str, str], resolution: str) -> ExperiencePoolEntry:
        entry = self.entries.get(signature)
        if entry is None or entry.resolution != resolution:
            entry = ExperiencePoolEntry(signature, resolution)
            self.entries[signature] = entry
        return entry

    def validate(self, signature: tuple[str, str, str]) -> ExperiencePoolEntry | None:
        entry = self.entries.get(signature)
        if entry:
            entry.validated = True
        return entry


def distill_experience(entry: ExperiencePoolEntry, episodic: EpisodicMemory, origin: str = "") -> EpisodicMemory:
    """Fold a validated resolution into reusable episodic experience."""
    if not entry.validated:
        raise NotValidatedError(f"resolution for {entry.signature} has not been validated")
    kind, error, _ = entry.signature
    rule = ExperienceRule(
        condition=f"subgoal:{kind} error:{error}",
        guidance=entry.resolution,
        origin_episode=origin,
    )
    return episodic.record_experience(rule)


class Critic:
    """Per-episode review state over a shared (optionally cross-episode) pool."""

    def __init__(self, pool: ExperiencePool | None = None, config: AgentConfig = _DEFAULT):
        self.pool = pool if pool is not None else ExperiencePool()
        self.config = config
        self._streak: dict[str, int] = {}      # subgoal key -> consecutive refine count
        self._last_hint: dict[str, tuple] = {} # subgoal key -> (signature, hint)

    def review(self, ctx: dict) -> CriticDirective:
        """ctx: subgoal_key, subgoal_kind, error (None on success), detail,
        primary (whether this was the subgoal's own action rather than a
        corrective one), reasoner (optional override hook).

        The consecutive-failure streak resets only when the subgoal's primary
        action succeeds; corrective actions in between neither reset nor
        forgive it.
        """
        key = ctx["subgoal_key"]
        reasoner = ctx.get("reasoner")
        if reasoner is not None:
            override = reasoner.critique(ctx)
            if override is not None:
                return override

        if ctx.get("error") is None:
            if ctx.get("primary", True):
                if key in self._last_hint:
                    signature, hint = self._last_hint.pop(key)
                    self.pool.propose(signature, hint)
                    self.pool.validate(signature)
                    logger.debug("validated resolution %s for %s", hint, signature)
                self._streak.pop(key, None)
            return PASS

        error = ctx["error"]
        signature = (ctx["subgoal_kind"], error, ctx.get("context_digest", ""))
        attempts = self._streak.get(key, 0)

        known = self.pool.lookup(signature)
        if known is not None:
            known.uses += 1
            self._streak[key] = attempts + 1
            self._last_hint[key] = (signature, known.resolution)
            return CriticDirective("refine", known.resolution)

        if attempts >= self.config.refine_budget:
            self._streak.pop(key, None)
            self._last_hint.pop(key, None)
            return CriticDirective("replan", f"{error} persisted after {attempts} corrections")

        hints = REFINE_HINTS.get(error, _FALLBACK_HINTS)
        hint = hints[attempts % len(hints)]
        self._streak[key] = attempts + 1
        self._last_hint[key] = (signature, hint)
        return CriticDirective("refine", hint)
