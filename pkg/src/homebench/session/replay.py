"""Deterministic re-simulation of trajectory logs.

Replay rebuilds the world from the episode document, re-applies every
logged action, and demands bit-exact agreement with each record (result,
error, step counters, satisfied count). Any divergence names the first
offending record index. The recomputed report must equal the live one.
"""

from __future__ import annotations

from ..config import Config
from ..jsonutil import digest
from ..metrics.scoring import MetricsReport
from ..tasks.io import episode_to_dict
from ..tasks.types import Episode
from .core import Session
from .trajectory import TrajectoryLog

_DEFAULT = Config()


class ReplayMismatchError(RuntimeError):
    def __init__(self, index: int, detail: str):
        super().__init__(f"record {index}: {detail}")
        self.index = index


def replay(log: TrajectoryLog, episode: Episode, config: Config = _DEFAULT) -> MetricsReport:
    if log.header.get("episodeId") != episode.id:
        raise ReplayMismatchError(-1, f"log is for episode {log.header.get('episodeId')!r}, not {episode.id!r}")
    expected_digest = digest(episode_to_dict(episode))
    if log.header.get("episodeDigest") != expected_digest:
        raise ReplayMismatchError(-1, "episode document digest mismatch")

    session = Session(episode, config, identity=log.header.get("identity", "agent"), split=log.header.get("split", "detailed"))
    session.reset()
    for record in log.records:
        if session.done:
            raise ReplayMismatchError(record.index, "log continues past termination")
        _, result, _ = session.step(record.action, render=False)
        live = session.log.records[-1]
        if live.ok != record.ok or live.error != record.error:
            raise ReplayMismatchError(record.index, f"result diverged: {live.ok}/{live.error} vs {record.ok}/{record.error}")
        if live.metric_step != record.metric_step or live.nav != record.nav or live.manip != record.manip:
            raise ReplayMismatchError(record.index, "step counters diverged")
        if live.satisfied != record.satisfied:
            raise ReplayMismatchError(record.index, f"satisfied count diverged: {live.satisfied} vs {record.satisfied}")
    return session.report()
