"""Object-centric spatial memory with dual spatial/semantic indexing.

Each remembered object keeps the grid cells it has been seen at, its view
history, and a fused feature vector. A new sighting merges into an existing
entry only when it overlaps spatially (voxel IoU) AND matches semantically
(feature cosine); the merged feature is an area-weighted average, weighted
by cumulative observed mask area so merge order does not matter for
equal-area views.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..config import MemoryConfig
from ..world.types import Cell, Observation, VisibleRecord
from .embedding import EmbeddingProvider, HashingEmbedding, cosine, embed_record, normalize

_DEFAULT = MemoryConfig()


class EmptyMemoryError(LookupError):
    pass


@dataclass(frozen=True)
class ViewRecord:
    step: int
    mask_area: float
    distance: float
    category: str
    attributes: tuple[str, ...]
    world_id: str
    containing_receptacle: str | None


@dataclass
class MemoryObject:
    mem_id: str
    label: str
    voxels: set[Cell]
    views: list[ViewRecord]
    feature: np.ndarray
    last_seen_step: int
    source_world_ids: set[str] = field(default_factory=set)
    total_mask_area: float = 0.0

    @property
    def centroid(self) -> Cell:
        xs = [c[0] for c in self.voxels]
        zs = [c[1] for c in self.voxels]
        return (round(sum(xs) / len(xs)), round(sum(zs) / len(zs)))


def _label(record: VisibleRecord) -> str:
    colors = [a for a in record.attributes if a in ("red", "blue", "green", "white", "black", "yellow")]
    noun = record.category.replace("_", " ")
    return f"{' '.join(colors)} {noun}".strip()


class SpatialMemory:
    def __init__(self, provider: EmbeddingProvider | None = None, config: MemoryConfig = _DEFAULT):
        self.provider = provider or HashingEmbedding(config.feature_dim)
        self.config = config
        self.objects: dict[str, MemoryObject] = {}
        self.spatial_index: dict[Cell, set[str]] = {}
        self._next = 0

    # -- update -------------------------------------------------------------

    def observe_update(self, obs: Observation, step: int) -> "SpatialMemory":
        for record in obs.visible:
            self._integrate(record, step)
        return self

    def _integrate(self, record: VisibleRecord, step: int) -> None:
        cells = {record.cell}
        feature = embed_record(record.category, record.attributes, _label(record), self.provider)

        best = None
        for mem_id in sorted(self.spatial_index.get(record.cell, ())):
            entry = self.objects[mem_id]
            overlap = len(entry.voxels & cells) / len(entry.voxels | cells)
            if overlap < self.config.voxel_iou_threshold:
                continue
            sim = cosine(entry.feature, feature)
            if sim < self.config.cosine_threshold:
                continue
            if best is None or sim > best[0]:
                best = (sim, entry)

        view = ViewRecord(
            step=step,
            mask_area=record.mask_area,
            distance=record.distance,
            category=record.category,
            attributes=record.attributes,
            world_id=record.id,
            containing_receptacle=record.containing_receptacle,
        )

        if best is None:
            mem_id = f"m{self._next:04d}"
            self._next += 1
            entry = MemoryObject(
                mem_id=mem_id,
                label=_label(record),
                voxels=cells,
                views=[view],
                feature=feature,
                last_seen_step=step,
                source_world_ids={record.id},
                total_mask_area=record.mask_area,
            )
            self.objects[mem_id] = entry
            for cell in cells:
                self.spatial_index.setdefault(cell, set()).add(mem_id)
            return

        entry = best[1]
        old_area = entry.total_mask_area
        alpha = old_area / (old_area + record.mask_area)
        entry.feature = normalize(alpha * entry.feature + (1.0 - alpha) * feature)
        entry.total_mask_area = old_area + record.mask_area
        entry.views.append(view)
        entry.last_seen_step = step
        entry.source_world_ids.add(record.id)
        new_cells = cells - entry.voxels
        entry.voxels |= cells
        for cell in new_cells:
            self.spatial_index.setdefault(cell, set()).add(entry.mem_id)

    # -- queries --------------------------------------------------------------

    def retrieve(self, query: str, k: int | None = None) -> list[tuple[float, MemoryObject]]:
        """Top-k entries by cosine similarity to the query text, most similar
        first; ties broken by recency, then id."""
        if not self.objects:
            raise EmptyMemoryError("spatial memory is empty")
        k = k if k is not None else self.config.retrieve_k
        q = self.provider.embed_text(query)
        ranked = sorted(
            ((cosine(q, e.feature), e) for e in self.objects.values()),
            key=lambda pair: (-pair[0], -pair[1].last_seen_step, pair[1].mem_id),
        )
        return ranked[:k]

    def entries_for_world_id(self, world_id: str) -> list[MemoryObject]:
        return sorted(
            (e for e in self.objects.values() if world_id in e.source_world_ids),
            key=lambda e: -e.last_seen_step,
        )

    def rebuild_indices(self) -> dict[Cell, set[str]]:
        """Reference reconstruction of the spatial index (consistency checks)."""
        index: dict[Cell, set[str]] = {}
        for mem_id, entry in self.objects.items():
            for cell in entry.voxels:
                index.setdefault(cell, set()).add(mem_id)
        return index

    def to_dict(self) -> dict:
        return {
            "schema": "memory/1",
            "objects": [
                {
                    "memId": e.mem_id,
                    "label": e.label,
                    "voxels": sorted(list(c) for c in e.voxels),
                    "views": len(e.views),
                    "lastSeenStep": e.last_seen_step,
                    "sourceWorldIds": sorted(e.source_world_ids),
                }
                for _, e in sorted(self.objects.items())
            ],
        }
