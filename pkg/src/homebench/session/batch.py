"""Batch evaluation across episodes with per-episode isolation.

Sessions are fully independent, so the batch fans out over worker
processes; results are identical at any parallelism. Episode experience is
NOT carried across batch entries: cross-episode distillation belongs to a
sequentially reused agent, not to a parallel corpus sweep, and sharing it
would make reports depend on scheduling order.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from ..config import Config
from ..jsonutil import canonical_json
from ..metrics.scoring import MetricsReport
from .core import Session

_DEFAULT = Config()


@dataclass
class RunManifest:
    reasoner: str
    split: str
    config_digest: str
    episodes: list[str] = field(default_factory=list)
    reports: dict[str, dict] = field(default_factory=dict)
    errors: dict[str, str] = field(default_factory=dict)

    def aggregates(self) -> dict:
        reports = [MetricsReport.from_dict(d) for d in self.reports.values()]
        if not reports:
            return {"episodes": 0}
        irs = [r.ir for r in reports if r.ir is not None]
        return {
            "episodes": len(reports),
            "meanGc": sum(r.gc_avg for r in reports) / len(reports),
            "srRate": sum(1 for r in reports if r.sr) / len(reports),
            "meanNavSteps": sum(r.nav_steps for r in reports) / len(reports),
            "meanManipSteps": sum(r.manip_steps for r in reports) / len(reports),
            "meanIr": (sum(irs) / len(irs)) if irs else None,
        }

    def to_dict(self) -> dict:
        return {
            "schema": "runmanifest/1",
            "reasoner": self.reasoner,
            "split": self.split,
            "configDigest": self.config_digest,
            "episodes": self.episodes,
            "reports": {k: self.reports[k] for k in sorted(self.reports)},
            "errors": {k: self.errors[k] for k in sorted(self.errors)},
            "aggregates": self.aggregates(),
        }


def run_one(episode, reasoner_spec: str, split: str, config: Config, seed: int = 0, log_dir: str | None = None) -> dict:
    """Run a single episode; returns the report dict (worker-safe)."""
    from ..agent.loop import run_episode
    from ..agent.scripted import make_reasoner

    reasoner = make_reasoner(reasoner_spec, episode=episode, seed=seed)
    session = Session(episode, config, identity=reasoner_spec, split=split)
    log, report = run_episode(episode, session, reasoner, config)
    if log_dir:
        log.save(os.path.join(log_dir, f"{episode.id}.jsonl"))
    return report.to_dict()


def _worker(args) -> tuple[str, dict | None, str | None]:
    path, reasoner_spec, split, config_overrides_path, seed, log_dir = args
    from ..config import load_config
    from ..tasks.io import load_episode

    config = load_config(config_overrides_path)
    episode = load_episode(path)
    try:
        return episode.id, run_one(episode, reasoner_spec, split, config, seed, log_dir), None
    except Exception as exc:  # per-episode failures must not sink the batch
        return episode.id, None, f"{type(exc).__name__}: {exc}"


def run_batch(
    episode_paths: list[str],
    reasoner_spec: str,
    split: str = "detailed",
    parallelism: int = 1,
    config: Config = _DEFAULT,
    config_path: str | None = None,
    log_dir: str | None = None,
    seed: int = 0,
) -> RunManifest:
    manifest = RunManifest(reasoner=reasoner_spec, split=split, config_digest=config.digest())
    if log_dir:
        os.makedirs(log_dir, exist_ok=True)
    jobs = [(path, reasoner_spec, split, config_path, seed, log_dir) for path in episode_paths]

    if parallelism <= 1:
        results = [_worker(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(pool.map(_worker, jobs))

    for episode_id, report, error in results:
        manifest.episodes.append(episode_id)
        if report is not None:
            manifest.reports[episode_id] = report
        else:
            manifest.errors[episode_id] = error
    return manifest


def save_manifest(manifest: RunManifest, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(canonical_json(manifest.to_dict()))
        fh.write("\n")
