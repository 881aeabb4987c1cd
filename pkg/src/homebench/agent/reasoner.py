"""The pluggable decision backend contract.

Every judgment call in the control loop routes through a Reasoner:
decomposing an instruction into a goal graph, refining a goal against
episodic memory, translating a subgoal intent into a skill call, and
critiquing a step. Scripted implementations live in scripted.py; external
services attach through external.py. Structural validity of reasoner output
is enforced by the checked_* wrappers in planner.py, never assumed.
"""

from __future__ import annotations

from typing import Protocol

from .goals import CriticDirective, GoalDag, RefinedGoal


class Reasoner(Protocol):
    name: str

    def decompose(self, instruction: str, scene_summary: dict) -> GoalDag:
        """Instruction -> goal DAG."""
        ...

    def refine(self, goal, episodic, spatial) -> RefinedGoal:
        """Bind a ready goal's references using memory."""
        ...

    def translate(self, subgoal, observation) -> str | None:
        """Optionally override the skill call for a subgoal (None = default)."""
        ...

    def critique(self, context: dict) -> CriticDirective | None:
        """Optionally override the supervisory directive (None = rule engine)."""
        ...
