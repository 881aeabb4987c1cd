from .goals import Binding, CriticDirective, Goal, GoalDag, RefinedGoal, SubGoal
from .critic import Critic, ExperiencePool, ExperiencePoolEntry, NotValidatedError, distill_experience
from .planner import DeadlockedDagError, MalformedPlanError, checked_decompose, ground_subgoals, next_goal, refine_goal
from .reasoner import Reasoner
from .scripted import GreedyTemplateReasoner, NoopReasoner, OracleReasoner, RandomReasoner, make_reasoner
from .loop import run_episode

__all__ = [
    "Binding",
    "CriticDirective",
    "Goal",
    "GoalDag",
    "RefinedGoal",
    "SubGoal",
    "Critic",
    "ExperiencePool",
    "ExperiencePoolEntry",
    "NotValidatedError",
    "distill_experience",
    "DeadlockedDagError",
    "MalformedPlanError",
    "checked_decompose",
    "ground_subgoals",
    "next_goal",
    "refine_goal",
    "Reasoner",
    "GreedyTemplateReasoner",
    "NoopReasoner",
    "OracleReasoner",
    "RandomReasoner",
    "make_reasoner",
    "run_episode",
]
