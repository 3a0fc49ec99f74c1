"""Analyses derived from enumerations: minimum multiplier and LOFO importance.

The minimum multiplier is the smallest epsilon whose Rashomon bound admits a
target number of trees. LOFO (leave-one-feature-out) importance scores a
feature by how much the sorted objective curve's area grows when the
feature is banned from splits.
"""
from __future__ import annotations

from dataclasses import dataclass

from .engine import DEFAULT_EPSILON, RashomonEnumeration


@dataclass
class RashomonCurve:
    """Sorted per-rank total costs of an enumerated set, padded to a fixed length."""

    costs: list          # cost at each tree rank, non-decreasing
    theta: float
    padded_length: int

    def area(self) -> float:
        return float(sum(self.costs))


@dataclass
class MultiplierResult:
    epsilon: float       # None when the optimal cost is 0 (any epsilon ties)
    achieved_count: int  # may overshoot the target via final-group ties
    optimal_total: float
    last_total: float


def _collect_costs(enum: RashomonEnumeration, limit: int):
    """Per-tree total costs of the first `limit` trees, plus the true cumulative count."""
    costs = []
    achieved = 0
    for emitted in enum.groups():
        achieved = emitted.cumulative
        take = min(emitted.count, limit - len(costs))
        costs.extend([emitted.total_cost] * take)
        if len(costs) >= limit:
            break
    return costs, achieved


def find_min_multiplier(dataset, depth, lam, target_count, **enum_kwargs):
    """Smallest epsilon whose Rashomon set holds at least target_count trees.

    Grouped emission may overshoot the target; the achieved count is
    reported alongside. Undefined (epsilon None) when the optimum costs 0.
    """
    if target_count < 1:
        raise ValueError("target_count must be >= 1")
    enum = RashomonEnumeration(dataset, depth, lam=lam, epsilon=DEFAULT_EPSILON,
                               max_trees=target_count, **enum_kwargs)
    last_total = enum.optimal_total
    achieved = 0
    for emitted in enum.groups():
        last_total = emitted.total_cost
        achieved = emitted.cumulative
    if enum.optimal_total == 0:
        return MultiplierResult(None, achieved, enum.optimal_total, last_total)
    epsilon = max(last_total / enum.optimal_total - 1.0, 0.0)
    return MultiplierResult(epsilon, achieved, enum.optimal_total, last_total)


@dataclass
class LofoResult:
    baseline: RashomonCurve
    curves: dict          # feature -> RashomonCurve (feature excluded)
    scores: dict          # feature -> area increase (>= 0 up to float noise)

    def ranking(self):
        """Features from most to least important (score desc, index asc)."""
        return sorted(self.scores, key=lambda f: (-self.scores[f], f))


def lofo_importance(dataset, depth, lam, set_size, features=None,
                    **enum_kwargs) -> LofoResult:
    """Leave-one-feature-out importance over the top set_size trees.

    Baseline: enumerate the set_size best trees; theta_base is the last
    tree's cost. Per feature: re-enumerate with the feature excluded under
    the absolute bound theta_base, padding missing ranks at theta_base.
    Score = area(curve without feature) - area(baseline), unit rank spacing.
    """
    if set_size < 1:
        raise ValueError("set_size must be >= 1")
    base_enum = RashomonEnumeration(dataset, depth, lam=lam,
                                    epsilon=DEFAULT_EPSILON,
                                    max_trees=set_size, **enum_kwargs)
    base_costs, _ = _collect_costs(base_enum, set_size)
    theta_base = base_costs[-1]
    length = len(base_costs)
    baseline = RashomonCurve(base_costs, theta_base, length)

    if features is None:
        features = range(dataset.num_features)
    curves, scores = {}, {}
    for f in features:
        if not 0 <= f < dataset.num_features:
            raise IndexError(f"feature index {f} out of range")
        enum_f = RashomonEnumeration(dataset, depth, lam=lam, theta=theta_base,
                                     excluded_features=(f,), **enum_kwargs)
        costs_f, _ = _collect_costs(enum_f, length)
        # tolerance admission can exceed theta_base by float noise; clamp so
        # the padded curve stays non-decreasing
        costs_f = [min(c, theta_base) for c in costs_f]
        costs_f.extend([theta_base] * (length - len(costs_f)))
        curve = RashomonCurve(costs_f, theta_base, length)
        curves[f] = curve
        scores[f] = curve.area() - baseline.area()
    return LofoResult(baseline, curves, scores)
