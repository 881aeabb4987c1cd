"""Episode lifecycle: reset, step, snapshot, report.

A session owns one world built from one episode, enforces the action cap
and Stop termination, tracks the ever-satisfied checklist count, and
appends one log record per primitive action. All state needed to reproduce
the run lives in the trajectory log plus the episode document.
"""

from __future__ import annotations

from ..config import Config
from ..jsonutil import digest
from ..metrics.scoring import MetricsReport, ScoreSeries, report, score_series
from ..pathfind import Router
from ..tasks.io import episode_to_dict
from ..tasks.resolve import evaluate_item, satisfied_flags
from ..tasks.types import Episode
from ..world.actions import apply_action
from ..world.observe import render_observation
from ..world.snapshot import build_world, layout_from_dict, world_to_dict
from ..world.types import Action, ActionResult, Observation
from .trajectory import LogRecord, TrajectoryLog

_DEFAULT = Config()


class SessionClosedError(RuntimeError):
    pass


class Session:
    def __init__(self, episode: Episode, config: Config = _DEFAULT, identity: str = "agent", split: str = "detailed"):
        self.episode = episode
        self.config = config
        self.identity = identity
        self.split = split
        self.layout = layout_from_dict(episode.layout_doc)
        self.world = None
        self.log: TrajectoryLog | None = None
        self.done = False
        self.end_reason: str | None = None
        self._ever: set[int] = set()
        self._initial_satisfied = 0
        self._router: Router | None = None

    # -- lifecycle ----------------------------------------------------------

    def reset(self) -> Observation:
        self.world = build_world(self.layout)
        self.done = False
        self.end_reason = None
        flags = satisfied_flags(self.world, self.episode.checklist)
        self._ever = {i for i, ok in enumerate(flags) if ok}
        self._initial_satisfied = len(self._ever)
        self._router = None
        self.log = TrajectoryLog(
            {
                "episodeId": self.episode.id,
                "episodeDigest": digest(episode_to_dict(self.episode)),
                "seed": self.episode.seed,
                "configDigest": self.config.digest(),
                "identity": self.identity,
                "split": self.split,
            }
        )
        return self.observe()

    def observe(self) -> Observation:
        self._require_active()
        return render_observation(self.world, self.config.sim)

    def step(self, action: Action, render: bool = True) -> tuple[Observation | None, ActionResult, bool]:
        self._require_active()
        if self.done:
            raise SessionClosedError(f"episode ended ({self.end_reason})")
        _, result = apply_action(self.world, action, self.config.sim)
        if result.ok:
            self._update_satisfied()
        agent = self.world.agent
        self.log.append(
            LogRecord(
                index=len(self.log.records),
                metric_step=agent.nav_steps + agent.manip_steps,
                nav=agent.nav_steps,
                manip=agent.manip_steps,
                action=action,
                ok=result.ok,
                error=result.error.value if result.error else None,
                message=result.message,
                satisfied=len(self._ever),
            )
        )
        if action.name == "Stop" and result.ok:
            self.done = True
            self.end_reason = "stop"
        elif agent.total_actions >= self.config.sim.action_cap:
            self.done = True
            self.end_reason = "EpisodeCapExceeded"
        return (self.observe() if render else None), result, self.done

    def annotate(self, directive: str, diagnostic: str = "") -> None:
        """Attach the latest supervisory directive to the last record."""
        if self.log and self.log.records:
            self.log.records[-1].directive = directive
            self.log.records[-1].diagnostic = diagnostic

    def _update_satisfied(self) -> None:
        checklist = self.episode.checklist
        for i, item in enumerate(checklist):
            if i not in self._ever and evaluate_item(self.world, item):
                self._ever.add(i)

    def _require_active(self) -> None:
        if self.world is None:
            raise SessionClosedError("session not reset")

    # -- inspection -----------------------------------------------------------

    def checklist_flags(self) -> list[bool]:
        self._require_active()
        return satisfied_flags(self.world, self.episode.checklist)

    def ever_satisfied_count(self) -> int:
        return len(self._ever)

    def snapshot(self) -> dict:
        self._require_active()
        return world_to_dict(self.world)

    def floor_plan(self) -> tuple[frozenset, object]:
        """Static walkable cells and layout geometry, available from reset."""
        self._require_active()
        return self.world.walkable_cells(), self.layout

    def router(self) -> Router:
        self._require_active()
        if self._router is None:
            self._router = Router(self.world.walkable_cells(), self.layout)
        return self._router

    def instruction(self) -> str:
        return (
            self.episode.instruction_detailed
            if self.split == "detailed"
            else self.episode.instruction_concise
        )

    # -- metrics ----------------------------------------------------------------

    def series(self) -> ScoreSeries:
        self._require_active()
        agent = self.world.agent
        return score_series(
            self.log.score_marks(),
            agent.nav_steps + agent.manip_steps,
            self._initial_satisfied,
            monotone=self.config.metrics.ever_satisfied,
        )

    def report(self) -> MetricsReport:
        self._require_active()
        return report(self.world, self.episode.checklist, self.series(), self.config.metrics)

    def finish_log(self) -> TrajectoryLog:
        self._require_active()
        self.log.finish(self.end_reason or "open", self.report().to_dict())
        return self.log
