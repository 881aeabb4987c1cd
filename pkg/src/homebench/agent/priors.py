"""Category-to-likely-receptacle prior table (static data file)."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=1)
def receptacle_priors() -> dict[str, list[str]]:
    text = resources.files("homebench.agent").joinpath("data/receptacle_priors.json").read_text()
    return json.loads(text)


def likely_receptacles(category: str) -> list[str]:
    table = receptacle_priors()
    return table.get(category, table["*"])
