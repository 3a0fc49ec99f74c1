"""Grouped solution structure: all subtree solutions sharing one value.

A SolutionGroup holds entries that are either a bare leaf, a fully built
subtree (from the depth-two generators), or a branch entry referencing
pairs of child groups. References form a DAG, so tree counts are products
and sums over the structure, kept in arbitrary precision.
"""
from __future__ import annotations

from itertools import islice


class LeafEntry:
    """A single-leaf solution; alternatives are value-tied other labels."""

    __slots__ = ("prediction", "alternatives")

    def __init__(self, prediction, alternatives=()):
        self.prediction = prediction
        self.alternatives = tuple(alternatives)

    def tree(self):
        return ("leaf", self.prediction)


class TreeEntry:
    """A concrete subtree solution (produced by the depth-two generators)."""

    __slots__ = ("tree",)

    def __init__(self, tree):
        self.tree = tree


class Pair:
    """One (left group, right group) combination under a branch entry.

    When filtered is set, leaf+leaf combinations with an unavoidable shared
    label are excluded and avoidable ones are relabeled to a tied
    alternative (left leaf first, lowest alternative).
    """

    __slots__ = ("left", "right", "filtered")

    def __init__(self, left, right, filtered=False):
        self.left = left
        self.right = right
        self.filtered = filtered

    def count(self) -> int:
        total = count_trees(self.left) * count_trees(self.right)
        if self.filtered:
            total -= self._excluded()
        return total

    def _excluded(self) -> int:
        out = 0
        for le in self.left.leaf_entries():
            for re in self.right.leaf_entries():
                if (le.prediction == re.prediction
                        and not le.alternatives and not re.alternatives):
                    out += 1
        return out

    def iter_subtrees(self, feature):
        for ltree, lalts in self.left.iter_trees():
            for rtree, ralts in self.right.iter_trees():
                lt, rt = ltree, rtree
                if (self.filtered and lt[0] == "leaf" and rt[0] == "leaf"
                        and lt[1] == rt[1]):
                    if lalts:
                        lt = ("leaf", lalts[0])
                    elif ralts:
                        rt = ("leaf", ralts[0])
                    else:
                        continue
                yield ("split", feature, lt, rt)


class BranchEntry:
    __slots__ = ("feature", "pairs")

    def __init__(self, feature, pairs=None):
        self.feature = feature
        self.pairs = list(pairs) if pairs else []


class SolutionGroup:
    """All solutions of one subproblem sharing a single objective value."""

    __slots__ = ("value", "entries", "view", "_count")

    def __init__(self, value, entries=None, view=None):
        self.value = value
        self.entries = list(entries) if entries else []
        self.view = view
        self._count = None

    def add(self, entry):
        self.entries.append(entry)
        self._count = None

    def extend(self, entries):
        self.entries.extend(entries)
        self._count = None

    def leaf_entries(self):
        return [e for e in self.entries if isinstance(e, LeafEntry)]

    def iter_trees(self):
        """Yield (tree, leaf alternatives or None), deterministic order."""
        for entry in self.entries:
            if isinstance(entry, LeafEntry):
                yield entry.tree(), entry.alternatives
            elif isinstance(entry, TreeEntry):
                yield entry.tree, None
            else:
                for pair in entry.pairs:
                    for tree in pair.iter_subtrees(entry.feature):
                        yield tree, None

    def __repr__(self):
        return f"SolutionGroup(value={self.value}, entries={len(self.entries)})"


def count_trees(group: SolutionGroup) -> int:
    """Exact number of distinct trees in a group (memoized, big ints)."""
    if group._count is not None:
        return group._count
    total = 0
    for entry in group.entries:
        if isinstance(entry, (LeafEntry, TreeEntry)):
            total += 1
        else:
            for pair in entry.pairs:
                total += pair.count()
    group._count = total
    return total


def materialize(group: SolutionGroup, limit=None):
    """Yield up to limit distinct trees from a group, deterministically."""
    it = (tree for tree, _ in group.iter_trees())
    if limit is None:
        return it
    if limit < 0:
        raise ValueError("limit must be >= 0")
    return islice(it, limit)
