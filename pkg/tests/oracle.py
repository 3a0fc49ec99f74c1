"""Independent brute-force reference implementations for the test suite.

Everything here is written from first principles against the objective
definition (loss plus a per-leaf penalty) and deliberately shares no logic
with the package's solver or enumeration engine: trees are enumerated by
plain exhaustive recursion over sample subsets.
"""
from __future__ import annotations

import numpy as np


def _subset_indices(dataset, members):
    return [i for i in range(dataset.num_samples) if (members >> i) & 1]


def _leaf_solution(dataset, members):
    """(loss, prediction, tied alternative predictions) for one subset."""
    idx = _subset_indices(dataset, members)
    if dataset.task == "classification":
        if not idx:
            return 0.0, 0, ()
        counts = [0] * dataset.num_classes
        for i in idx:
            counts[int(dataset.labels[i])] += 1
        best = max(counts)
        winners = [k for k, c in enumerate(counts) if c == best]
        loss = (len(idx) - best) / dataset.num_samples
        return loss, winners[0], tuple(winners[1:])
    if not idx:
        return 0.0, 0.0, ()
    y = dataset.labels[idx]
    mean = float(y.mean())
    return float(np.sum((y - mean) ** 2)), mean, ()


def _split_members(dataset, members, feature):
    col = dataset.columns[feature]
    right = members & col
    return members & ~right, right


def oracle_structures(dataset, depth, suppress, features=None):
    """All trees on the full dataset within a depth budget.

    Returns a list of (loss, num_leaves, tree). Splits must separate the
    subset (no empty side); each structure carries its canonical labeling
    (lowest tied class); with suppress, same-prediction leaf pairs are
    relabeled (left leaf first, lowest tied alternative) or dropped.
    """
    if features is None:
        features = range(dataset.num_features)
    features = list(features)
    memo = {}

    def rec(members, d):
        key = (members, d)
        hit = memo.get(key)
        if hit is not None:
            return hit
        loss, pred, alts = _leaf_solution(dataset, members)
        out = [(loss, 1, ("leaf", pred), alts)]
        if d > 0:
            for f in features:
                left, right = _split_members(dataset, members, f)
                if left == 0 or right == 0:
                    continue
                for lloss, lleaves, ltree, lalts in rec(left, d - 1):
                    for rloss, rleaves, rtree, ralts in rec(right, d - 1):
                        lt, rt = ltree, rtree
                        if (suppress and lt[0] == "leaf" and rt[0] == "leaf"
                                and lt[1] == rt[1]):
                            if lalts:
                                lt = ("leaf", lalts[0])
                            elif ralts:
                                rt = ("leaf", ralts[0])
                            else:
                                continue
                        out.append((lloss + rloss, lleaves + rleaves,
                                    ("split", f, lt, rt), ()))
        memo[key] = out
        return out

    full = (1 << dataset.num_samples) - 1
    return [(loss, leaves, tree) for loss, leaves, tree, _ in rec(full, depth)]


def oracle_rashomon(structures, lam, epsilon, normalize_by=1):
    """Sorted [(total cost, tree)] of the Rashomon set from a structure list."""
    costed = [(loss + lam * leaves, tree) for loss, leaves, tree in structures]
    optimum = min(c for c, _ in costed)
    theta = (1.0 + epsilon) * optimum
    kept = [(c, t) for c, t in costed if c <= theta + 1e-12]
    kept.sort(key=lambda ct: ct[0])
    return kept, optimum, theta


def oracle_structure_count(dataset, depth, features=None) -> int:
    """Number of tree structures (non-separating splits excluded), exact.

    Independent of the solution-group DAG: a direct big-integer recursion
    count(S, d) = 1 + sum over separating features of count(L) * count(R).
    """
    if features is None:
        features = range(dataset.num_features)
    features = list(features)
    memo = {}

    def rec(members, d):
        key = (members, d)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = 1
        if d > 0:
            for f in features:
                left, right = _split_members(dataset, members, f)
                if left == 0 or right == 0:
                    continue
                total += rec(left, d - 1) * rec(right, d - 1)
        memo[key] = total
        return total

    return rec((1 << dataset.num_samples) - 1, depth)


def oracle_tree_cost(dataset, tree, lam) -> float:
    """Direct objective of one tree: loss over the dataset plus lam per leaf."""

    def rec(members, t):
        if t[0] == "leaf":
            idx = _subset_indices(dataset, members)
            if dataset.task == "classification":
                mis = sum(1 for i in idx if int(dataset.labels[i]) != t[1])
                return mis / dataset.num_samples, 1
            if not idx:
                return 0.0, 1
            y = dataset.labels[idx]
            return float(np.sum((y - t[1]) ** 2)), 1
        left, right = _split_members(dataset, members, t[1])
        ll, nl = rec(left, t[2])
        rl, nr = rec(right, t[3])
        return ll + rl, nl + nr

    loss, leaves = rec((1 << dataset.num_samples) - 1, tree)
    return loss + lam * leaves


def oracle_pareto(points):
    """Quadratic-time non-dominated filter over (coordinates, payload)."""

    def dominates(a, b):
        return (all(x <= y for x, y in zip(a, b))
                and any(x < y for x, y in zip(a, b)))

    front = []
    seen = set()
    for coords, payload in points:
        coords = tuple(coords)
        if coords in seen:
            continue
        if any(dominates(other, coords)
               for other, _ in points if tuple(other) != coords):
            continue
        seen.add(coords)
        front.append((coords, payload))
    return sorted(front, key=lambda cp: cp[0])
