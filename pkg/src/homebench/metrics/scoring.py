"""Score series construction and the episode-level report.

The score series counts checklist items that have EVER been satisfied,
indexed by metric steps (one per 0.25 m moved, per rotation, per
interaction), so the series is monotone and flat between scoring events. An
instantaneous variant is kept behind a flag for study. Final goal-completion
fractions are instantaneous: they reflect the end state, not history.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..config import MetricsConfig
from ..tasks.resolve import satisfied_flags
from ..tasks.types import ChecklistItem
from ..world.types import WorldState
from .improvement import improvement_rate
from .ols import TooShortError

_DEFAULT = MetricsConfig()


@dataclass(frozen=True)
class ScoreSeries:
    """s_0..s_T, satisfied-item counts per metric step."""

    values: tuple[float, ...]

    def __post_init__(self):
        assert all(b >= a for a, b in zip(self.values, self.values[1:])), "series must be monotone"

    def __len__(self):
        return len(self.values)


def score_series(
    step_marks: list[tuple[int, int]],
    total_metric_steps: int,
    initial_count: int = 0,
    monotone: bool = True,
) -> ScoreSeries:
    """Build the series from (metricStepAfterAction, satisfiedCount) marks.

    With `monotone` the counts are expected to be ever-satisfied counts (the
    default recorded by sessions); the non-monotone instantaneous variant is
    accepted when the flag is off.
    """
    values = [float(initial_count)] * (total_metric_steps + 1)
    level = float(initial_count)
    marks = iter(step_marks + [(total_metric_steps + 1, None)])
    step, count = next(marks)
    for t in range(total_metric_steps + 1):
        while step <= t:
            level = float(count)
            step, count = next(marks)
        values[t] = level
    if monotone:
        running = values[0]
        for i, v in enumerate(values):
            running = max(running, v)
            values[i] = running
    return ScoreSeries(tuple(values))


@dataclass
class MetricsReport:
    gc_avg: float
    gc_by_category: dict[str, float]
    sr: bool
    nav_steps: int
    manip_steps: int
    ir: float | None
    n: int
    series_length: int
    counts_by_category: dict[str, list[int]] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "gcAvg": self.gc_avg,
            "gcByCategory": dict(sorted(self.gc_by_category.items())),
            "sr": self.sr,
            "navSteps": self.nav_steps,
            "manipSteps": self.manip_steps,
            "ir": self.ir,
            "n": self.n,
            "seriesLength": self.series_length,
            "countsByCategory": {k: list(v) for k, v in sorted(self.counts_by_category.items())},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        return cls(
            gc_avg=d["gcAvg"],
            gc_by_category=dict(d["gcByCategory"]),
            sr=d["sr"],
            nav_steps=d["navSteps"],
            manip_steps=d["manipSteps"],
            ir=d["ir"],
            n=d["n"],
            series_length=d["seriesLength"],
            counts_by_category={k: list(v) for k, v in d.get("countsByCategory", {}).items()},
        )


def report(
    final_state: WorldState,
    checklist: list[ChecklistItem],
    series: ScoreSeries,
    metrics: MetricsConfig = _DEFAULT,
) -> MetricsReport:
    flags = satisfied_flags(final_state, checklist)
    total = len(checklist)
    gc_avg = (sum(flags) / total) if total else 1.0

    by_tag: dict[str, list[int]] = {}
    for item, ok in zip(checklist, flags):
        prev = by_tag.setdefault(item.tag, [0, 0])
        prev[0] += int(ok)
        prev[1] += 1
    gc_by_category = {tag: sat / cnt for tag, (sat, cnt) in by_tag.items()}

    try:
        ir = improvement_rate(series.values, metrics.max_segments)
    except TooShortError:
        ir = None

    return MetricsReport(
        gc_avg=gc_avg,
        gc_by_category=gc_by_category,
        sr=bool(total) and gc_avg == 1.0,
        nav_steps=final_state.agent.nav_steps,
        manip_steps=final_state.agent.manip_steps,
        ir=ir,
        n=metrics.max_segments,
        series_length=len(series),
        counts_by_category={tag: list(v) for tag, v in by_tag.items()},
    )
