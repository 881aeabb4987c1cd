"""Session service: newline-delimited JSON over TCP (session/1).

One connection drives one session; concurrent connections are fully
isolated. Every command yields exactly one correlated event carrying the
same sequence number; malformed commands produce an error event and the
connection survives. Teleoperated runs produce standard trajectory logs
(identity "human") that replay exactly like agent logs.

Commands: reset, step, observe, snapshot, end.
Events: hello (on connect), observation, result, metrics, error.
"""

from __future__ import annotations

import json
import logging
import os
import socketserver
import threading

from ..config import Config
from ..jsonutil import canonical_json
from ..tasks.io import load_corpus
from ..world.types import Action
from .core import Session, SessionClosedError

logger = logging.getLogger(__name__)

PROTOCOL_SCHEMA = "session/1"
_DEFAULT = Config()


def _layout_summary(session: Session) -> dict:
    layout = session.layout
    world = session.world
    furniture = [
        {
            "id": obj.id,
            "category": obj.category,
            "rect": _footprint_rect(obj),
            "cell": list(obj.cell),
        }
        for oid, obj in sorted(world.objects.items())
        if obj.footprint
    ]
    return {
        "bounds": list(layout.bounds),
        "rooms": [{"name": r.name, "rect": [r.x0, r.z0, r.x1, r.z1]} for r in layout.rooms],
        "doorways": [[list(c) for c in d.cells] for d in layout.doorways],
        "furniture": furniture,
    }


def _footprint_rect(obj) -> list[int]:
    xs = [c[0] for c in obj.footprint]
    zs = [c[1] for c in obj.footprint]
    return [min(xs), min(zs), max(xs), max(zs)]


class SessionHandler(socketserver.StreamRequestHandler):
    def handle(self):
        server: SessionServer = self.server
        session: Session | None = None
        self._send({"event": "hello", "seq": 0, "data": {"schema": PROTOCOL_SCHEMA}})
        for raw in self.rfile:
            line = raw.decode().strip()
            if not line:
                continue
            try:
                command = json.loads(line)
            except json.JSONDecodeError as exc:
                self._send({"event": "error", "seq": -1, "data": {"code": "BadJson", "message": str(exc)}})
                continue
            seq = command.get("seq", -1)
            try:
                session = self._dispatch(server, session, command, seq)
            except SessionClosedError as exc:
                self._send({"event": "error", "seq": seq, "data": {"code": "SessionClosed", "message": str(exc)}})
            except Exception as exc:
                logger.exception("command failed")
                self._send({"event": "error", "seq": seq, "data": {"code": type(exc).__name__, "message": str(exc)}})

    def _dispatch(self, server: "SessionServer", session: Session | None, command: dict, seq: int) -> Session | None:
        cmd = command.get("cmd")
        if cmd == "reset":
            episode_id = command.get("episodeId")
            episode = server.episodes.get(episode_id)
            if episode is None:
                self._send({"event": "error", "seq": seq, "data": {"code": "UnknownEpisode", "message": str(episode_id)}})
                return session
            session = Session(episode, server.config, identity="human", split=command.get("split", "detailed"))
            obs = session.reset()
            self._send(
                {
                    "event": "observation",
                    "seq": seq,
                    "data": {
                        "observation": obs.to_dict(),
                        "layout": _layout_summary(session),
                        "instruction": {
                            "detailed": episode.instruction_detailed,
                            "concise": episode.instruction_concise,
                        },
                        "checklist": session.checklist_flags(),
                        "checklistItems": [item.to_dict() for item in episode.checklist],
                        "counters": self._counters(session),
                    },
                }
            )
            return session
        if session is None:
            self._send({"event": "error", "seq": seq, "data": {"code": "NoSession", "message": "reset first"}})
            return session
        if cmd == "step":
            before = set(i for i, ok in enumerate(session.checklist_flags()) if ok)
            try:
                action = Action.from_wire(command.get("action"))
            except (ValueError, TypeError) as exc:
                self._send({"event": "error", "seq": seq, "data": {"code": "BadAction", "message": str(exc)}})
                return session
            obs, result, done = session.step(action)
            flags = session.checklist_flags()
            delta = [i for i, ok in enumerate(flags) if ok and i not in before]
            self._send(
                {
                    "event": "result",
                    "seq": seq,
                    "data": {
                        "result": result.to_dict(),
                        "observation": obs.to_dict(),
                        "checklist": flags,
                        "checklistDelta": delta,
                        "counters": self._counters(session),
                        "done": done,
                        "reason": session.end_reason,
                    },
                }
            )
        elif cmd == "observe":
            self._send(
                {
                    "event": "observation",
                    "seq": seq,
                    "data": {
                        "observation": session.observe().to_dict(),
                        "checklist": session.checklist_flags(),
                        "counters": self._counters(session),
                    },
                }
            )
        elif cmd == "snapshot":
            self._send({"event": "observation", "seq": seq, "data": {"world": session.snapshot()}})
        elif cmd == "end":
            log = session.finish_log()
            log_path = None
            if server.log_dir:
                os.makedirs(server.log_dir, exist_ok=True)
                log_path = os.path.join(server.log_dir, f"{session.episode.id}-human.jsonl")
                log.save(log_path)
            self._send(
                {
                    "event": "metrics",
                    "seq": seq,
                    "data": {"report": session.report().to_dict(), "logPath": log_path},
                }
            )
        else:
            self._send({"event": "error", "seq": seq, "data": {"code": "UnknownCommand", "message": str(cmd)}})
        return session

    def _counters(self, session: Session) -> dict:
        agent = session.world.agent
        return {
            "nav": agent.nav_steps,
            "manip": agent.manip_steps,
            "total": agent.total_actions,
            "capRemaining": session.config.sim.action_cap - agent.total_actions,
            "satisfiedEver": session.ever_satisfied_count(),
        }

    def _send(self, doc: dict) -> None:
        self.wfile.write((canonical_json(doc) + "\n").encode())


class SessionServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address: tuple[str, int], episodes: dict, config: Config, log_dir: str | None):
        super().__init__(address, SessionHandler)
        self.episodes = episodes
        self.config = config
        self.log_dir = log_dir


def serve(host: str, port: int, episode_dir: str, config: Config = _DEFAULT, log_dir: str | None = None) -> SessionServer:
    """Start the service; returns the server (serve_forever runs on a thread)."""
    episodes = {ep.id: ep for ep in load_corpus(episode_dir)}
    server = SessionServer((host, port), episodes, config, log_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    logger.info("session service on %s:%d with %d episodes", host, server.server_address[1], len(episodes))
    return server
