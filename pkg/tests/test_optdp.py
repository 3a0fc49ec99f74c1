import math

import pytest

from rashenum import ObjectiveConfig, OptimalSolver, evaluate_cost, total_cost
from conftest import random_dataset
from oracle import oracle_structures


def brute_optimum(ds, depth, lam):
    return min(loss + lam * leaves
               for loss, leaves, _ in oracle_structures(ds, depth, False))


class TestOptimalSolver:
    def test_pure_dataset_single_leaf(self, pure_dataset):
        solver = OptimalSolver(pure_dataset, ObjectiveConfig(lam=0.01))
        res = solver.solve(pure_dataset.full_view(), 3)
        assert res.tree == ("leaf", 1)
        assert total_cost(res.value, 0.01) == pytest.approx(0.01)

    def test_xor_needs_depth_two(self, xor_dataset):
        solver = OptimalSolver(xor_dataset, ObjectiveConfig(lam=0.01))
        res = solver.solve(xor_dataset.full_view(), 2)
        assert total_cost(res.value, 0.01) == pytest.approx(0.04)

    def test_depth_zero_majority_leaf(self, tiny_dataset):
        solver = OptimalSolver(tiny_dataset, ObjectiveConfig(lam=0.01))
        res = solver.solve(tiny_dataset.full_view(), 0)
        assert res.tree == ("leaf", 1)

    @pytest.mark.parametrize("seed", range(10))
    @pytest.mark.parametrize("depth", [1, 2, 3])
    def test_matches_brute_force(self, seed, depth):
        ds = random_dataset(seed + 400, 8 + seed * 3, 4)
        lam = 0.02
        solver = OptimalSolver(ds, ObjectiveConfig(lam=lam))
        res = solver.solve(ds.full_view(), depth)
        assert res.complete
        expect = brute_optimum(ds, depth, lam)
        assert total_cost(res.value, lam) == pytest.approx(expect, abs=1e-12)
        assert evaluate_cost(res.tree, ds, ObjectiveConfig(lam=lam)) == \
            pytest.approx(expect, abs=1e-12)

    @pytest.mark.parametrize("use_depth2", [True, False])
    def test_depth2_fast_path_agrees(self, use_depth2):
        ds = random_dataset(77, 30, 5)
        solver = OptimalSolver(ds, ObjectiveConfig(lam=0.01),
                               use_depth2=use_depth2)
        res = solver.solve(ds.full_view(), 3)
        assert total_cost(res.value, 0.01) == pytest.approx(
            brute_optimum(ds, 3, 0.01), abs=1e-12)

    def test_regression(self):
        ds = random_dataset(13, 16, 3, task="regression")
        lam = 0.2
        solver = OptimalSolver(ds, ObjectiveConfig("regression", lam=lam))
        res = solver.solve(ds.full_view(), 2)
        assert total_cost(res.value, lam) == pytest.approx(
            brute_optimum(ds, 2, lam), abs=1e-8)


class TestBoundsAndCache:
    def test_pruned_result_resolved_under_looser_bound(self):
        ds = random_dataset(21, 20, 4)
        solver = OptimalSolver(ds, ObjectiveConfig(lam=0.01), use_depth2=False)
        view = ds.full_view()
        tight = solver.solve(view, 3, upper_bound=-1.0)
        assert not tight.complete
        loose = solver.solve(view, 3)
        assert loose.complete
        assert loose.value <= tight.value + 1e-12

    def test_cache_hit_on_repeat(self):
        ds = random_dataset(22, 20, 4)
        solver = OptimalSolver(ds, ObjectiveConfig(lam=0.01))
        view = ds.full_view()
        first = solver.solve(view, 3)
        hits_before = solver.stats["cache_hits"]
        second = solver.solve(view, 3)
        assert second is first
        assert solver.stats["cache_hits"] == hits_before + 1

    def test_bound_does_not_change_optimum(self):
        ds = random_dataset(23, 24, 4)
        solver_a = OptimalSolver(ds, ObjectiveConfig(lam=0.01))
        solver_b = OptimalSolver(ds, ObjectiveConfig(lam=0.01))
        free = solver_a.solve(ds.full_view(), 3, upper_bound=math.inf)
        bounded = solver_b.solve(ds.full_view(), 3,
                                 upper_bound=free.value + 1e-6)
        assert bounded.complete
        assert bounded.value == pytest.approx(free.value, abs=1e-12)

    def test_excluded_features_respected(self):
        from rashenum import features_used
        ds = random_dataset(24, 20, 4)
        solver = OptimalSolver(ds, ObjectiveConfig(lam=0.01), features=[1, 3])
        res = solver.solve(ds.full_view(), 2)
        assert features_used(res.tree) <= {1, 3}
