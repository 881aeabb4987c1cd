"""Episode serialization (episode/1) and corpus manifests.

One episode per file; a corpus directory carries manifest.json with
per-scenario counts. Round-trips are lossless and byte-stable.
"""

from __future__ import annotations

import os

from ..jsonutil import SchemaError, canonical_json, expect
from .types import ChecklistItem, Episode, SCENARIOS

EPISODE_SCHEMA = "episode/1"


def episode_to_dict(ep: Episode) -> dict:
    return {
        "schema": EPISODE_SCHEMA,
        "id": ep.id,
        "layout": ep.layout_doc,
        "scenario": ep.scenario,
        "instructionDetailed": ep.instruction_detailed,
        "instructionConcise": ep.instruction_concise,
        "checklist": [item.to_dict() for item in ep.checklist],
        "goalCount": ep.goal_count,
        "witness": ep.witness,
        "seed": ep.seed,
    }


def episode_from_dict(doc: dict) -> Episode:
    if expect(doc, "schema", str, "episode") != EPISODE_SCHEMA:
        raise SchemaError("episode.schema", f"unsupported schema {doc['schema']!r}")
    scenario = expect(doc, "scenario", str, "episode")
    if scenario not in SCENARIOS:
        raise SchemaError("episode.scenario", f"unknown scenario {scenario!r}")
    checklist = [
        ChecklistItem.from_dict(d, f"episode.checklist[{i}]")
        for i, d in enumerate(expect(doc, "checklist", list, "episode"))
    ]
    ep = Episode(
        id=expect(doc, "id", str, "episode"),
        layout_doc=expect(doc, "layout", dict, "episode"),
        scenario=scenario,
        instruction_detailed=expect(doc, "instructionDetailed", str, "episode"),
        instruction_concise=expect(doc, "instructionConcise", str, "episode"),
        checklist=checklist,
        witness=expect(doc, "witness", list, "episode"),
        seed=expect(doc, "seed", int, "episode"),
    )
    if expect(doc, "goalCount", int, "episode") != ep.goal_count:
        raise SchemaError("episode.goalCount", "does not match checklist length")
    return ep


def save_episode(ep: Episode, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(canonical_json(episode_to_dict(ep)))
        fh.write("\n")


def load_episode(path: str) -> Episode:
    import json

    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("episode", f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("episode", "top level must be an object")
    return episode_from_dict(doc)


def write_manifest(episodes: list[Episode], directory: str) -> str:
    counts: dict[str, int] = {}
    files = []
    for ep in episodes:
        counts[ep.scenario] = counts.get(ep.scenario, 0) + 1
        files.append(f"{ep.id}.json")
    path = os.path.join(directory, "manifest.json")
    with open(path, "w") as fh:
        fh.write(canonical_json({"schema": "corpus/1", "perScenario": counts, "files": sorted(files)}))
        fh.write("\n")
    return path


def load_corpus(directory: str) -> list[Episode]:
    import json

    manifest = os.path.join(directory, "manifest.json")
    if os.path.exists(manifest):
        with open(manifest) as fh:
            files = json.load(fh)["files"]
    else:
        files = sorted(f for f in os.listdir(directory) if f.endswith(".json"))
    return [load_episode(os.path.join(directory, f)) for f in files]
