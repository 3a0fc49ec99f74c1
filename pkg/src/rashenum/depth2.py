"""Depth-two fast path: frequency counts and 0/1/2/3-branching-node solutions.

Single and pairwise cell statistics are precomputed once per subproblem;
every depth-two tree's value then follows from cell lookups, without
recursive dataset splitting. Each tree is produced by exactly one generator
(keyed by its branching-node count), so no tree is emitted twice.
"""
from __future__ import annotations

import numpy as np

from .objective import value_le


class ClassCounts:
    """Per-class single and pairwise feature counts within a view."""

    def __init__(self, q0, q1, q2, full_size):
        self.q0 = q0      # (K,)
        self.q1 = q1      # (K, F)
        self.q2 = q2      # (K, F, F)
        self.full_size = full_size
        self.task = "classification"

    def total(self):
        return self.q0

    def side(self, i, satisfied):
        return self.q1[:, i] if satisfied else self.q0 - self.q1[:, i]

    def quad(self, i, j):
        """Cells ((~i, j), (~i, ~j), (i, j), (i, ~j)) as class-count vectors."""
        fi_fj = self.q2[:, i, j]
        fi = self.q1[:, i]
        fj = self.q1[:, j]
        return (fj - fi_fj, self.q0 - fi - fj + fi_fj, fi_fj, fi - fi_fj)


class RegStats:
    """(count, sum, sum of squares) cell statistics for regression."""

    def __init__(self, n0, s0, ss0, n1, s1, ss1, n2, s2, ss2):
        self.n0, self.s0, self.ss0 = n0, s0, ss0
        self.n1, self.s1, self.ss1 = n1, s1, ss1
        self.n2, self.s2, self.ss2 = n2, s2, ss2
        self.task = "regression"

    def total(self):
        return (self.n0, self.s0, self.ss0)

    def side(self, i, satisfied):
        if satisfied:
            return (self.n1[i], self.s1[i], self.ss1[i])
        return (self.n0 - self.n1[i], self.s0 - self.s1[i], self.ss0 - self.ss1[i])

    def quad(self, i, j):
        nij, sij, ssij = self.n2[i, j], self.s2[i, j], self.ss2[i, j]
        a = (self.n1[j] - nij, self.s1[j] - sij, self.ss1[j] - ssij)
        b = (self.n0 - self.n1[i] - self.n1[j] + nij,
             self.s0 - self.s1[i] - self.s1[j] + sij,
             self.ss0 - self.ss1[i] - self.ss1[j] + ssij)
        c = (nij, sij, ssij)
        d = (self.n1[i] - nij, self.s1[i] - sij, self.ss1[i] - ssij)
        return a, b, c, d


def compute_counts(view, config):
    """Exact cell statistics for a view (classification counts or regression sums)."""
    ds = view.dataset
    idx = view.member_indices()
    X = ds.X[idx]
    if config.task == "classification":
        y = ds.labels[idx]
        K, F = ds.num_classes, ds.num_features
        q0 = np.zeros(K, dtype=np.int64)
        q1 = np.zeros((K, F), dtype=np.int64)
        q2 = np.zeros((K, F, F), dtype=np.int64)
        for k in range(K):
            Mk = X[y == k].astype(np.int64)
            q0[k] = Mk.shape[0]
            if Mk.shape[0]:
                q1[k] = Mk.sum(axis=0)
                q2[k] = Mk.T @ Mk
        return ClassCounts(q0, q1, q2, ds.num_samples)
    y = ds.labels[idx].astype(np.float64)
    Xf = X.astype(np.float64)
    Xi = X.astype(np.int64)
    n0 = int(X.shape[0])
    s0, ss0 = float(y.sum()), float((y * y).sum())
    n1 = Xi.sum(axis=0)
    s1 = Xf.T @ y
    ss1 = Xf.T @ (y * y)
    n2 = Xi.T @ Xi
    s2 = Xf.T @ (Xf * y[:, None])
    ss2 = Xf.T @ (Xf * (y * y)[:, None])
    return RegStats(n0, s0, ss0, n1, s1, ss1, n2, s2, ss2)


def cell_size(counts, cell) -> int:
    if counts.task == "classification":
        return int(cell.sum())
    return int(cell[0])


def cell_leaf(counts, cell):
    """Best leaf for a cell: (value, prediction, tied alternative predictions)."""
    if counts.task == "classification":
        tot = int(cell.sum())
        best = int(cell.max())
        winners = [k for k in range(len(cell)) if cell[k] == best]
        return (tot - best) / counts.full_size, winners[0], tuple(winners[1:])
    n, s, ss = cell
    if n == 0:
        return 0.0, 0.0, ()
    mean = float(s) / n
    return max(float(ss) - float(s) * float(s) / n, 0.0), mean, ()


def _fix_trivial(pl, al, pr, ar):
    """Resolve a leaf pair sharing a label: relabel (left first) or reject."""
    if pl != pr:
        return pl, pr
    if al:
        return al[0], pr
    if ar:
        return pl, ar[0]
    return None


def generate_depth2(counts, config, depth, features, lo, hi, suppress):
    """All depth<=2 trees with value in (lo, hi]; lo None means unbounded below.

    Returns a list of (value, order_key, entry) where entry is a LeafEntry
    or TreeEntry; order_key makes emission deterministic.
    """
    from .groups import LeafEntry, TreeEntry

    lam = config.lam
    tol = config.equality_tolerance

    def in_range(v):
        return (lo is None or v > lo + tol) and value_le(v, hi, tol)

    items = []
    v0, p0, a0 = cell_leaf(counts, counts.total())
    if in_range(v0):
        items.append((v0, (v0, 0, -1, -1, -1), LeafEntry(p0, a0)))
    if depth < 1:
        return items

    total_n = cell_size(counts, counts.total())
    live = [i for i in features
            if 0 < cell_size(counts, counts.side(i, True)) < total_n]

    # one branching node
    side_sols = {}
    for i in live:
        lsol = cell_leaf(counts, counts.side(i, False))
        rsol = cell_leaf(counts, counts.side(i, True))
        side_sols[i] = (lsol, rsol)
        v = lsol[0] + rsol[0] + lam
        if not in_range(v):
            continue
        pl, pr = lsol[1], rsol[1]
        if suppress:
            fixed = _fix_trivial(pl, lsol[2], pr, rsol[2])
            if fixed is None:
                continue
            pl, pr = fixed
        items.append((v, (v, 1, i, -1, -1),
                      TreeEntry(("split", i, ("leaf", pl), ("leaf", pr)))))
    if depth < 2:
        return items

    def sub_split(i, j, left_side):
        """Split on j inside one side of root i; None if degenerate or rejected."""
        a, b, c, d = counts.quad(i, j)
        cells = (a, b) if left_side else (c, d)
        if cell_size(counts, cells[0]) == 0 or cell_size(counts, cells[1]) == 0:
            return None
        sj = cell_leaf(counts, cells[1])  # j unsatisfied goes left
        sjp = cell_leaf(counts, cells[0])
        pl, pr = sj[1], sjp[1]
        if suppress:
            fixed = _fix_trivial(pl, sj[2], pr, sjp[2])
            if fixed is None:
                return None
            pl, pr = fixed
        v = sj[0] + sjp[0] + lam
        return v, ("split", j, ("leaf", pl), ("leaf", pr))

    # two branching nodes, both mirror topologies
    for i in live:
        lsol, rsol = side_sols[i]
        for j in features:
            if j == i:
                continue
            sub = sub_split(i, j, left_side=True)
            if sub is not None:
                v = sub[0] + rsol[0] + lam
                if in_range(v):
                    items.append((v, (v, 2, i, j, -1),
                                  TreeEntry(("split", i, sub[1], ("leaf", rsol[1])))))
            sub = sub_split(i, j, left_side=False)
            if sub is not None:
                v = lsol[0] + sub[0] + lam
                if in_range(v):
                    items.append((v, (v, 2, i, -1, j),
                                  TreeEntry(("split", i, ("leaf", lsol[1]), sub[1]))))

    # three branching nodes: per root, bounded sweep over sorted sub-solutions
    for i in live:
        lefts, rights = [], []
        for j in features:
            if j == i:
                continue
            sub = sub_split(i, j, left_side=True)
            if sub is not None and value_le(sub[0], hi, tol):
                lefts.append((sub[0], j, sub[1]))
            sub = sub_split(i, j, left_side=False)
            if sub is not None and value_le(sub[0], hi, tol):
                rights.append((sub[0], j, sub[1]))
        lefts.sort(key=lambda t: (t[0], t[1]))
        rights.sort(key=lambda t: (t[0], t[1]))
        for lv, jl, ltree in lefts:
            for rv, jr, rtree in rights:
                v = lv + rv + lam
                if not value_le(v, hi, tol):
                    break  # rights ascending: no later combination can fit
                if in_range(v):
                    items.append((v, (v, 3, i, jl, jr),
                                  TreeEntry(("split", i, ltree, rtree))))
    return items


def depth2_optimal(counts, config, depth, features):
    """Optimal (value, tree) for a depth<=2 subproblem, straight from counts.

    Ties resolve toward fewer branching nodes, then lower feature indices.
    """
    lam = config.lam
    v0, p0, _ = cell_leaf(counts, counts.total())
    best_v, best_tree = v0, ("leaf", p0)
    if depth < 1:
        return best_v, best_tree

    total_n = cell_size(counts, counts.total())
    live = [i for i in features
            if 0 < cell_size(counts, counts.side(i, True)) < total_n]
    side_sols = {i: (cell_leaf(counts, counts.side(i, False)),
                     cell_leaf(counts, counts.side(i, True))) for i in live}
    for i in live:
        lsol, rsol = side_sols[i]
        v = lsol[0] + rsol[0] + lam
        if v < best_v:
            best_v = v
            best_tree = ("split", i, ("leaf", lsol[1]), ("leaf", rsol[1]))
    if depth < 2:
        return best_v, best_tree

    def best_side(i, left_side):
        """Best depth-1 subtree for one side of root i: (value, tree)."""
        base = side_sols[i][0] if left_side else side_sols[i][1]
        bv, bt = base[0], ("leaf", base[1])
        for j in features:
            if j == i:
                continue
            a, b, c, d = counts.quad(i, j)
            cells = (a, b) if left_side else (c, d)
            if cell_size(counts, cells[0]) == 0 or cell_size(counts, cells[1]) == 0:
                continue
            sj = cell_leaf(counts, cells[1])
            sjp = cell_leaf(counts, cells[0])
            v = sj[0] + sjp[0] + lam
            if v < bv:
                bv = v
                bt = ("split", j, ("leaf", sj[1]), ("leaf", sjp[1]))
        return bv, bt

    for i in live:
        lv, lt = best_side(i, True)
        rv, rt = best_side(i, False)
        v = lv + rv + lam
        if v < best_v:
            best_v = v
            best_tree = ("split", i, lt, rt)
    return best_v, best_tree
