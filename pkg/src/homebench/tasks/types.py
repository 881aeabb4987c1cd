"""Episode and checklist data model.

A checklist item pairs an object selector (category, optional attributes,
optional spatial relation) with a target condition drawn from the six
monitored state families. Category tags group items for per-family scoring:
PP position, TO toggle, OC open/close, Sl slice, CK cook, FW fill.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..jsonutil import SchemaError

SCENARIOS = (
    "Daily Cleaning & Tidying",
    "Work & Study Preparation",
    "Rest & Entertainment",
    "Dining & Kitchen Related",
)

CONDITION_KINDS = ("in_receptacle", "in_room", "open", "toggled_on", "sliced", "cooked", "filled_with")

TAG_FOR_KIND = {
    "in_receptacle": "PP",
    "in_room": "PP",
    "open": "OC",
    "toggled_on": "TO",
    "sliced": "Sl",
    "cooked": "CK",
    "filled_with": "FW",
}

CATEGORY_TAGS = ("PP", "TO", "OC", "Sl", "CK", "FW")


@dataclass(frozen=True)
class ObjectSelector:
    category: str
    attributes: frozenset[str] = frozenset()
    relation: tuple[str, ...] | None = None  # ("in-room", room) | ("nearest-to", category)

    def to_dict(self) -> dict:
        return {
            "category": self.category,
            "attributes": sorted(self.attributes),
            "relation": list(self.relation) if self.relation else None,
        }

    @classmethod
    def from_dict(cls, d: dict, path: str = "selector") -> "ObjectSelector":
        if "category" not in d:
            raise SchemaError(f"{path}.category", "missing field")
        rel = d.get("relation")
        return cls(
            category=d["category"],
            attributes=frozenset(d.get("attributes", [])),
            relation=tuple(rel) if rel else None,
        )


@dataclass(frozen=True)
class Condition:
    kind: str
    # in_receptacle: target selector or literal object id; in_room: room name;
    # open / toggled_on: bool; filled_with: liquid name.
    target: object = None

    def __post_init__(self):
        if self.kind not in CONDITION_KINDS:
            raise SchemaError("condition.kind", f"unknown kind {self.kind!r}")

    def to_dict(self) -> dict:
        target = self.target
        if isinstance(target, ObjectSelector):
            target = {"selector": target.to_dict()}
        return {"kind": self.kind, "target": target}

    @classmethod
    def from_dict(cls, d: dict, path: str = "condition") -> "Condition":
        kind = d.get("kind")
        if kind not in CONDITION_KINDS:
            raise SchemaError(f"{path}.kind", f"unknown kind {kind!r}")
        target = d.get("target")
        if isinstance(target, dict) and "selector" in target:
            target = ObjectSelector.from_dict(target["selector"], f"{path}.target")
        return cls(kind, target)


@dataclass(frozen=True)
class ChecklistItem:
    selector: ObjectSelector
    condition: Condition
    tag: str = ""

    def __post_init__(self):
        expected = TAG_FOR_KIND[self.condition.kind]
        if self.tag and self.tag != expected:
            raise SchemaError("item.tag", f"tag {self.tag} inconsistent with {self.condition.kind}")
        if not self.tag:
            object.__setattr__(self, "tag", expected)

    def to_dict(self) -> dict:
        return {"selector": self.selector.to_dict(), "condition": self.condition.to_dict(), "tag": self.tag}

    @classmethod
    def from_dict(cls, d: dict, path: str = "item") -> "ChecklistItem":
        if "selector" not in d:
            raise SchemaError(f"{path}.selector", "missing field")
        if "condition" not in d:
            raise SchemaError(f"{path}.condition", "missing field")
        return cls(
            selector=ObjectSelector.from_dict(d["selector"], f"{path}.selector"),
            condition=Condition.from_dict(d["condition"], f"{path}.condition"),
            tag=d.get("tag", ""),
        )


@dataclass
class Episode:
    id: str
    layout_doc: dict                     # embedded layout/1 document
    scenario: str
    instruction_detailed: str
    instruction_concise: str
    checklist: list[ChecklistItem]
    witness: list[list] = field(default_factory=list)  # primitive action wire forms
    seed: int = 0

    @property
    def goal_count(self) -> int:
        return len(self.checklist)
