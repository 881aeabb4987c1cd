"""Trend-of-trends score acceleration metric.

The score series is cut into k contiguous segments for every k in {2..n}
(uniform partition, earlier segments absorb the remainder). Each segment
gets a least-squares slope; a second regression of those slopes against
segment order measures whether progress is speeding up at that resolution;
the final value averages across resolutions.

Both regressions are measured against normalized time, i.e. fractions of
the whole trajectory, not raw indices: a slope per step scales as 1/T and a
slope per segment as 1/k, which would make the metric vanish on long
trajectories and leave values incomparable across lengths and resolutions.
Normalized, the metric is scale-stable: a linear ramp scores exactly 0 at
every resolution, s_t=(t/T)^2 scores 2.0, and concave progress goes
negative symmetrically.
"""

from __future__ import annotations

from collections.abc import Sequence

from .ols import TooShortError, ols_slope


def partition_bounds(length: int, k: int) -> list[tuple[int, int]]:
    """Half-open (start, end) bounds of k near-equal contiguous segments;
    the first `length % k` segments take the extra element."""
    base, extra = divmod(length, k)
    bounds = []
    start = 0
    for j in range(k):
        size = base + (1 if j < extra else 0)
        bounds.append((start, start + size))
        start += size
    return bounds


def improvement_rate(values: Sequence[float], n: int = 10) -> float:
    """Mean over k in {2..n} of the slope-of-segment-slopes for `values`.

    Requires len(values) >= 2n so every segment at the finest level holds at
    least two points.
    """
    length = len(values)
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if length < 2 * n:
        raise TooShortError(f"need at least {2 * n} points for n={n}, got {length}")
    horizon = length - 1  # first layer: slope per unit of t/T
    total = 0.0
    for k in range(2, n + 1):
        alphas = [
            ols_slope(values[a:b]) * horizon for a, b in partition_bounds(length, k)
        ]
        total += ols_slope(alphas) * k  # second layer: slope per unit of j/k
    return total / (n - 1)
