"""Append-only JSONL trajectory logs (trajlog/1).

Line 1 is the header; each following line is one primitive action record;
the final line is the end marker with the live metrics report. Records
carry the cumulative metric step and the ever-satisfied checklist count so
score series can be rebuilt without re-simulation, while full replay
re-simulates and must reproduce every record bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..jsonutil import SchemaError, canonical_json
from ..world.types import Action

LOG_SCHEMA = "trajlog/1"


@dataclass
class LogRecord:
    index: int
    metric_step: int
    nav: int
    manip: int
    action: Action
    ok: bool
    error: str | None
    message: str
    satisfied: int
    directive: str | None = None
    diagnostic: str | None = None

    def to_dict(self) -> dict:
        d = {
            "kind": "rec",
            "i": self.index,
            "t": self.metric_step,
            "nav": self.nav,
            "manip": self.manip,
            "a": self.action.to_wire(),
            "ok": self.ok,
            "err": self.error,
            "msg": self.message,
            "sat": self.satisfied,
        }
        if self.directive is not None:
            d["dir"] = self.directive
        if self.diagnostic is not None:
            d["diag"] = self.diagnostic
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "LogRecord":
        return cls(
            index=d["i"],
            metric_step=d["t"],
            nav=d["nav"],
            manip=d["manip"],
            action=Action.from_wire(d["a"]),
            ok=d["ok"],
            error=d["err"],
            message=d["msg"],
            satisfied=d["sat"],
            directive=d.get("dir"),
            diagnostic=d.get("diag"),
        )


class TrajectoryLog:
    def __init__(self, header: dict):
        self.header = dict(header)
        self.header.setdefault("schema", LOG_SCHEMA)
        self.records: list[LogRecord] = []
        self.end: dict | None = None

    def append(self, record: LogRecord) -> None:
        assert record.index == len(self.records), "action indices must be contiguous"
        self.records.append(record)

    def finish(self, reason: str, metrics_doc: dict) -> None:
        self.end = {"kind": "end", "reason": reason, "metrics": metrics_doc}

    def to_jsonl(self) -> str:
        lines = [canonical_json({"kind": "header", **self.header})]
        lines.extend(canonical_json(r.to_dict()) for r in self.records)
        if self.end is not None:
            lines.append(canonical_json(self.end))
        return "\n".join(lines) + "\n"

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(self.to_jsonl())

    @classmethod
    def from_jsonl(cls, text: str) -> "TrajectoryLog":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise SchemaError("trajlog", "empty log")
        header = json.loads(lines[0])
        if header.get("kind") != "header" or header.get("schema") != LOG_SCHEMA:
            raise SchemaError("trajlog.header", "missing or unsupported header")
        header.pop("kind")
        log = cls(header)
        for i, line in enumerate(lines[1:]):
            doc = json.loads(line)
            if doc.get("kind") == "end":
                log.end = doc
                break
            if doc.get("kind") != "rec":
                raise SchemaError(f"trajlog[{i + 1}]", f"unexpected kind {doc.get('kind')!r}")
            record = LogRecord.from_dict(doc)
            if record.index != len(log.records):
                raise SchemaError(f"trajlog[{i + 1}].i", "action indices must be contiguous from 0")
            log.records.append(record)
        return log

    @classmethod
    def load(cls, path: str) -> "TrajectoryLog":
        with open(path) as fh:
            return cls.from_jsonl(fh.read())

    def score_marks(self) -> list[tuple[int, int]]:
        return [(r.metric_step, r.satisfied) for r in self.records]
