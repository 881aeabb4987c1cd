"""Power-law reference curves for the acceleration metric.

s_t = (t/T)^a gives a family of shapes sweeping from concave (a < 1,
negative acceleration) through linear (a = 1, zero) to convex (a > 1,
positive), which makes exponents a readable geometric proxy for metric
values. match_power_law_exponent inverts the relationship numerically.
"""

from __future__ import annotations

from .improvement import improvement_rate


class OutOfRangeError(ValueError):
    pass


def power_curve(exponent: float, horizon: int) -> list[float]:
    return [(t / horizon) ** exponent for t in range(horizon + 1)]


def curve_rate(exponent: float, horizon: int, n: int) -> float:
    return improvement_rate(power_curve(exponent, horizon), n)


def match_power_law_exponent(
    target: float,
    horizon: int = 1500,
    n: int = 10,
    tolerance: float = 1e-4,
    max_exponent: float = 64.0,
) -> float:
    """Exponent a such that the metric of s_t=(t/T)^a hits `target` within
    `tolerance`. Bisection over a; the metric is increasing in a."""
    lo, hi = 1e-3, 2.0
    rate_lo = curve_rate(lo, horizon, n)
    if target < rate_lo - tolerance:
        raise OutOfRangeError(f"target {target} below achievable minimum {rate_lo:.4f}")
    while curve_rate(hi, horizon, n) < target:
        hi *= 2.0
        if hi > max_exponent:
            raise OutOfRangeError(f"target {target} above achievable range for T={horizon}, n={n}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        rate = curve_rate(mid, horizon, n)
        if abs(rate - target) < tolerance:
            return mid
        if rate < target:
            lo = mid
        else:
            hi = mid
    raise OutOfRangeError(f"bisection failed to reach tolerance {tolerance} for target {target}")
