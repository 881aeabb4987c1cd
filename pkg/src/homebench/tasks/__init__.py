from .types import ChecklistItem, Condition, Episode, ObjectSelector, SCENARIOS
from .resolve import UnknownCategoryError, evaluate_item, resolve_selector, satisfied_flags
from .layoutgen import generate_layout
from .generator import GenerationError, generate_episode
from .io import episode_from_dict, episode_to_dict, load_episode, save_episode

__all__ = [
    "ChecklistItem",
    "Condition",
    "Episode",
    "ObjectSelector",
    "SCENARIOS",
    "UnknownCategoryError",
    "evaluate_item",
    "resolve_selector",
    "satisfied_flags",
    "generate_layout",
    "GenerationError",
    "generate_episode",
    "episode_from_dict",
    "episode_to_dict",
    "load_episode",
    "save_episode",
]
