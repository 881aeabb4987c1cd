"""Out-of-process reasoner client.

Requests and responses are newline-delimited JSON, one object per line,
over either a child process's stdin/stdout or a TCP connection. Each
request carries the role (decompose | refine | translate | critique), a
schema version, and a JSON payload; the response must validate against the
role's expected shape or the checked wrappers reject it. This is the seam
where a model-backed service attaches.

Request:  {"v": 1, "role": "decompose", "payload": {...}}
Response: {"v": 1, "ok": true, "result": {...}}
"""

from __future__ import annotations

import json
import socket
import subprocess

from ..tasks.types import ChecklistItem, ObjectSelector
from .goals import Binding, CriticDirective, Goal, GoalDag, RefinedGoal, SubGoal

PROTOCOL_VERSION = 1


class ExternalReasonerError(RuntimeError):
    pass


class _PipeTransport:
    def __init__(self, argv: list[str]):
        self.proc = subprocess.Popen(
            argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
        )

    def roundtrip(self, line: str) -> str:
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()
        reply = self.proc.stdout.readline()
        if not reply:
            raise ExternalReasonerError("reasoner process closed its pipe")
        return reply

    def close(self):
        self.proc.terminate()


class _TcpTransport:
    def __init__(self, host: str, port: int):
        self.sock = socket.create_connection((host, port))
        self.reader = self.sock.makefile("r")
        self.writer = self.sock.makefile("w")

    def roundtrip(self, line: str) -> str:
        self.writer.write(line + "\n")
        self.writer.flush()
        reply = self.reader.readline()
        if not reply:
            raise ExternalReasonerError("reasoner connection closed")
        return reply

    def close(self):
        self.sock.close()


class ExternalReasoner:
    name = "external"

    def __init__(self, transport):
        self.transport = transport
        self.layout = None

    @classmethod
    def from_spec(cls, spec: str) -> "ExternalReasoner":
        """external:tcp:HOST:PORT or external:run:CMD ARG ARG..."""
        _, _, rest = spec.partition(":")
        mode, _, detail = rest.partition(":")
        if mode == "tcp":
            host, _, port = detail.rpartition(":")
            return cls(_TcpTransport(host, int(port)))
        if mode == "run":
            return cls(_PipeTransport(detail.split()))
        raise ValueError(f"unknown external reasoner spec {spec!r}")

    def attach_session(self, session) -> None:
        self.layout = session.layout

    def close(self):
        self.transport.close()

    def _call(self, role: str, payload: dict) -> dict:
        request = json.dumps({"v": PROTOCOL_VERSION, "role": role, "payload": payload})
        try:
            reply = json.loads(self.transport.roundtrip(request))
        except json.JSONDecodeError as exc:
            raise ExternalReasonerError(f"malformed reasoner reply: {exc}")
        if not isinstance(reply, dict) or not reply.get("ok"):
            raise ExternalReasonerError(f"reasoner error: {reply.get('error') if isinstance(reply, dict) else reply!r}")
        return reply.get("result", {})

    # -- roles --------------------------------------------------------------

    def decompose(self, instruction: str, scene_summary: dict) -> GoalDag:
        result = self._call("decompose", {"instruction": instruction, "scene": scene_summary})
        dag = GoalDag()
        for g in result.get("goals", []):
            dag.add(
                Goal(
                    goal_id=g["goalId"],
                    description=g.get("description", g["goalId"]),
                    target_selectors=[ObjectSelector.from_dict(s) for s in g.get("selectors", [])],
                    desired_conditions=[ChecklistItem.from_dict(c) for c in g.get("conditions", [])],
                    room_hint=tuple0(g.get("roomHint")),
                    hints=g.get("hints", {}),
                )
            )
        for a, b in result.get("edges", []):
            dag.add_edge(a, b)
        return dag

    def refine(self, goal: Goal, episodic, spatial) -> RefinedGoal:
        payload = {
            "goal": {
                "goalId": goal.goal_id,
                "description": goal.description,
                "selectors": [s.to_dict() for s in goal.target_selectors],
                "conditions": [c.to_dict() for c in goal.desired_conditions],
                "hints": goal.hints,
            },
            "episodic": {
                "heldObject": episodic.held_object,
                "history": [
                    {"step": h.step, "subgoal": h.subgoal, "outcome": h.outcome} for h in episodic.history[-20:]
                ],
                "experience": [r.guidance for r in episodic.experience],
            },
            "memory": {
                "objects": [
                    {
                        "memId": e.mem_id,
                        "label": e.label,
                        "centroid": list(e.centroid),
                        "lastSeen": e.last_seen_step,
                        "worldIds": sorted(e.source_world_ids),
                    }
                    for _, e in sorted(spatial.objects.items())
                ]
            },
        }
        result = self._call("refine", payload)
        bound = {}
        for slot, b in result.get("bound", {}).items():
            bound[slot] = Binding(
                kind=b["kind"],
                mem_id=b.get("memId"),
                world_id=b.get("worldId"),
                cell=tuple(b["cell"]) if b.get("cell") else None,
            )
        return RefinedGoal(
            goal_id=result.get("goalId", goal.goal_id),
            refined_text=result.get("text", goal.description),
            bound_objects=bound,
            residual_searches=[ObjectSelector.from_dict(s) for s in result.get("residual", [])],
            pre_steps=[SubGoal(p["kind"], _decode_params(p.get("params", {}))) for p in result.get("preSteps", [])],
        )

    def translate(self, subgoal, observation) -> str | None:
        result = self._call("translate", {"subgoal": {"kind": subgoal.kind}})
        return result.get("skill")

    def critique(self, context: dict) -> CriticDirective | None:
        payload = {
            "subgoalKind": context.get("subgoal_kind"),
            "error": context.get("error"),
            "detail": context.get("detail"),
            "primary": context.get("primary"),
        }
        result = self._call("critique", payload)
        kind = result.get("directive")
        if kind is None:
            return None
        return CriticDirective(kind, result.get("text", ""))


def _decode_params(params: dict) -> dict:
    out = dict(params)
    if "selector" in out and isinstance(out["selector"], dict):
        out["selector"] = ObjectSelector.from_dict(out["selector"])
    if "cell" in out and out["cell"] is not None:
        out["cell"] = tuple(out["cell"])
    return out


def tuple0(value):
    if not value:
        return None
    name, cell = value
    return (name, tuple(cell))
