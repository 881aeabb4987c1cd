"""The closed control loop: decompose, schedule, refine, ground, execute,
review. Failed goals are skipped so partial completion still scores; the
episode always ends with an explicit Stop (or the action cap) and a
well-formed trajectory log.
"""

from __future__ import annotations

import logging

from ..config import Config
from ..memory.embedding import HashingEmbedding
from ..memory.episodic import EpisodicMemory
from ..memory.spatial import SpatialMemory
from ..metrics.scoring import MetricsReport
from ..session.core import Session
from ..session.trajectory import TrajectoryLog
from ..world.types import Action
from .critic import Critic, ExperiencePool, distill_experience
from .executor import Executor
from .goals import GoalDag
from .planner import (
    DeadlockedDagError,
    MalformedPlanError,
    checked_decompose,
    ground_subgoals,
    next_goal,
    refine_goal,
)

logger = logging.getLogger(__name__)

_DEFAULT = Config()


def scene_summary(session: Session, obs) -> dict:
    layout = session.layout
    return {
        "rooms": [
            {"name": r.name, "rect": [r.x0, r.z0, r.x1, r.z1], "center": list(r.center)}
            for r in layout.rooms
        ],
        "visibleObjects": [v.to_dict() for v in obs.visible],
        "agentPose": obs.agent_pose.to_dict(),
    }


def run_episode(
    episode,
    session: Session,
    reasoner,
    config: Config = _DEFAULT,
    experience_pool: ExperiencePool | None = None,
    episodic: EpisodicMemory | None = None,
) -> tuple[TrajectoryLog, MetricsReport]:
    obs = session.reset()
    if hasattr(reasoner, "attach_session"):
        reasoner.attach_session(session)

    spatial = SpatialMemory(HashingEmbedding(config.memory.feature_dim), config.memory)
    if episodic is None:
        episodic = EpisodicMemory()
    critic = Critic(experience_pool if experience_pool is not None else ExperiencePool(), config.agent)
    executor = Executor(session, spatial, episodic, critic, reasoner, config)

    try:
        dag = checked_decompose(reasoner, session.instruction(), scene_summary(session, obs))
    except MalformedPlanError as exc:
        logger.warning("decomposition failed: %s", exc)
        dag = GoalDag()

    while not session.done and dag.remaining():
        try:
            goal = next_goal(dag, session.world.agent.pose.cell, spatial)
        except DeadlockedDagError as exc:
            logger.error("goal graph deadlocked: %s", exc)
            break
        if goal is None:
            break
        ok = _run_goal(goal, executor, reasoner, episodic, spatial, config, session)
        (dag.completed if ok else dag.failed).add(goal.goal_id)
        episodic.record_subgoal(
            step=session.world.agent.total_actions,
            subgoal=goal.goal_id,
            outcome="completed" if ok else "failed",
            detail=goal.description,
        )
        _distill_validated(critic, episodic, episode.id, config)

    if not session.done:
        session.step(Action("Stop"), render=False)
    log = session.finish_log()
    return log, session.report()


def _run_goal(goal, executor: Executor, reasoner, episodic, spatial, config: Config, session: Session) -> bool:
    rounds = config.agent.replan_budget + 3  # searches get their own headroom
    for round_no in range(rounds):
        if session.done:
            return False
        try:
            rg = refine_goal(goal, episodic, spatial, reasoner)
            subgoals = ground_subgoals(rg, spatial, goal)
        except MalformedPlanError as exc:
            logger.warning("goal %s unplannable: %s", goal.goal_id, exc)
            return False
        if not subgoals:
            return True

        searching = any(sg.kind == "Search" for sg in subgoals)
        aborted = False
        for idx, sg in enumerate(subgoals):
            key = f"{goal.goal_id}:{round_no}:{idx}:{sg.kind}"
            outcome = executor.execute(sg, key)
            if outcome.ok:
                continue
            if outcome.replan:
                logger.info("goal %s: replanning after %s", goal.goal_id, sg.describe())
                aborted = True
                break
            logger.info("goal %s failed at %s: %s", goal.goal_id, sg.describe(), outcome.error)
            return False
        if aborted:
            continue
        if searching:
            continue  # memory enriched; refine again with bindings
        return True
    return False


def _distill_validated(critic: Critic, episodic, episode_id: str, config: Config) -> None:
    if not config.agent.cross_episode_experience:
        return
    for entry in critic.pool.entries.values():
        if entry.validated:
            distill_experience(entry, episodic, origin=episode_id)
