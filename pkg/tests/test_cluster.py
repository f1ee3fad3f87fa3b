import itertools
from collections import Counter
from random import Random

import pytest

from incat.cluster import (
    HUANG,
    RANDOM,
    ClusterError,
    ClusterModel,
    ElbowEntry,
    ElbowReport,
    fit,
    fit_best,
    hamming_dissimilarity,
    init_modes,
    sweep_k,
)

ROW1 = ("NETWORK", "LOW", "NONE", "NONE", "HIGH", "HIGH", "HIGH")
ROW2 = ("NETWORK", "LOW", "NONE", "NONE", "NONE", "HIGH", "NONE")


def brute_force_cost(rows, k):
    """Exhaustive optimum: every assignment, per-cluster plurality modes."""
    n, m = len(rows), len(rows[0])
    best = None
    for assign in itertools.product(range(k), repeat=n):
        cost = 0
        for c in range(k):
            members = [rows[i] for i in range(n) if assign[i] == c]
            if not members:
                continue
            for j in range(m):
                col = Counter(r[j] for r in members)
                cost += len(members) - max(col.values())
        if best is None or cost < best:
            best = cost
    return best


def random_instance(rng):
    n_rows = rng.randint(2, 8)
    n_attrs = rng.randint(1, 3)
    n_vals = rng.randint(2, 3)
    rows = [tuple(str(rng.randrange(n_vals)) for _ in range(n_attrs)) for _ in range(n_rows)]
    k = rng.randint(1, min(3, len(set(rows))))
    return rows, k


class TestHamming:
    def test_identical_is_zero(self):
        assert hamming_dissimilarity(ROW1, ROW1) == 0

    def test_known_pair_differs_in_two_fields(self):
        assert hamming_dissimilarity(ROW1, ROW2) == 2
        assert hamming_dissimilarity(ROW2, ROW1) == 2

    def test_full_mismatch(self):
        a = ("NETWORK", "LOW", "NONE", "NONE", "HIGH", "HIGH", "HIGH")
        b = ("LOCAL", "HIGH", "LOW", "REQUIRED", "NONE", "LOW", "LOW")
        assert hamming_dissimilarity(a, b) == 7

    def test_width_mismatch_raises(self):
        with pytest.raises(ClusterError):
            hamming_dissimilarity(("a", "b"), ("a", "b", "c"))


class TestInitModes:
    def test_random_with_k_equal_distinct_returns_all(self):
        rows = [("a", "x"), ("b", "y"), ("a", "x"), ("c", "z")]
        modes = init_modes(rows, 3, RANDOM, seed=5)
        assert sorted(modes) == sorted(set(rows))

    def test_huang_is_deterministic_per_seed(self):
        rows = [ROW1, ROW2, ROW1, ("LOCAL", "LOW", "LOW", "NONE", "HIGH", "HIGH", "HIGH")]
        assert init_modes(rows, 2, HUANG, seed=9) == init_modes(rows, 2, HUANG, seed=9)

    def test_huang_k1_is_nearest_row_to_plurality_vector(self):
        rows = [
            ("a", "x", "p"), ("a", "y", "p"), ("b", "x", "q"),
            ("a", "x", "q"), ("c", "y", "p"),
        ]
        # oracle: explicit plurality vector, then nearest actual row
        plurality = tuple(Counter(col).most_common(1)[0][0] for col in zip(*rows))
        nearest = min(rows, key=lambda r: sum(1 for u, v in zip(r, plurality) if u != v))
        for seed in (0, 1, 7, 99):
            assert init_modes(rows, 1, HUANG, seed=seed) == [nearest]

    def test_modes_are_distinct_data_rows(self):
        rng = Random(3)
        rows = [tuple(str(rng.randrange(3)) for _ in range(3)) for _ in range(30)]
        for method in (HUANG, RANDOM):
            modes = init_modes(rows, 4, method, seed=11)
            assert len(set(modes)) == 4
            assert all(m in rows for m in modes)

    def test_k_larger_than_distinct_rows_raises(self):
        with pytest.raises(ClusterError):
            init_modes([("a",), ("a",)], 2, RANDOM, seed=0)

    def test_k_below_one_raises(self):
        with pytest.raises(ClusterError):
            init_modes([("a",)], 0, HUANG, seed=0)


class TestFit:
    def test_identical_rows_k1(self):
        model = fit([ROW1] * 6, 1, HUANG, seed=0)
        assert model.modes == (ROW1,)
        assert model.cost == 0
        assert model.assignments == (0,) * 6

    def test_distinct_rows_k_equals_n(self):
        rows = [("a", "x"), ("b", "y"), ("c", "z")]
        model = fit(rows, 3, RANDOM, seed=1)
        assert model.cost == 0
        assert sorted(model.modes) == sorted(rows)

    def test_small_instance_reaches_brute_force_optimum(self):
        rng = Random(8)
        rows = [tuple(str(rng.randrange(3)) for _ in range(3)) for _ in range(8)]
        model = fit_best(rows, 2, HUANG, seed=0, restarts=20)
        assert model.cost == brute_force_cost(rows, 2)

    def test_empty_rows_raise(self):
        with pytest.raises(ClusterError):
            fit([], 1, HUANG, seed=0)

    def test_unknown_method_raises(self):
        with pytest.raises(ClusterError):
            fit([ROW1], 1, "CAO", seed=0)

    def test_model_invariants_hold(self):
        rng = Random(21)
        rows = [tuple(str(rng.randrange(3)) for _ in range(4)) for _ in range(40)]
        model = fit(rows, 5, HUANG, seed=13)
        assert all(0 <= a < model.k for a in model.assignments)
        assert sum(model.cluster_sizes()) == len(rows)
        # cost identity and minimal-dissimilarity assignment with lowest-index ties
        total = 0
        for row, assigned in zip(rows, model.assignments):
            dists = [hamming_dissimilarity(row, m) for m in model.modes]
            assert dists[assigned] == min(dists)
            assert assigned == dists.index(min(dists))
            total += dists[assigned]
        assert total == model.cost

    def test_cost_history_non_increasing_and_bounded_iterations(self):
        rng = Random(4)
        rows = [tuple(str(rng.randrange(2)) for _ in range(5)) for _ in range(60)]
        model = fit(rows, 4, HUANG, seed=2, max_iter=100)
        history = model.cost_history
        assert all(b <= a for a, b in zip(history, history[1:]))
        assert model.iterations <= 100
        assert model.cost / len(rows) <= 5

    def test_local_optimality_single_row_moves(self):
        rng = Random(17)
        rows = [tuple(str(rng.randrange(3)) for _ in range(3)) for _ in range(12)]
        model = fit_best(rows, 3, HUANG, seed=5, restarts=10)

        def cost_of(assign):
            total = 0
            for c in range(model.k):
                members = [rows[i] for i in range(len(rows)) if assign[i] == c]
                if not members:
                    continue
                for j in range(len(rows[0])):
                    col = Counter(r[j] for r in members)
                    total += len(members) - max(col.values())
            return total

        base = list(model.assignments)
        base_cost = cost_of(base)
        for i in range(len(rows)):
            for c in range(model.k):
                if c == base[i]:
                    continue
                moved = base.copy()
                moved[i] = c
                assert cost_of(moved) >= base_cost

    def test_cost_zero_iff_rows_equal_modes(self):
        rows = [("a", "x")] * 3 + [("b", "y")] * 2
        model = fit(rows, 2, HUANG, seed=0)
        assert model.cost == 0
        for row, assigned in zip(rows, model.assignments):
            assert row == model.modes[assigned]

    def test_random_init_permutation_cost_invariance(self):
        rng = Random(33)
        rows = [tuple(str(rng.randrange(3)) for _ in range(3)) for _ in range(10)]
        distinct = list(dict.fromkeys(rows))
        k = 3
        # same sampled mode set on both orderings: fix it explicitly by
        # seeding RANDOM init over a row order whose distinct-set is stable
        base = fit(rows, k, RANDOM, seed=7)
        perm = list(range(len(rows)))
        Random(1).shuffle(perm)
        permuted = [rows[i] for i in perm]
        sampled_base = set(init_modes(rows, k, RANDOM, seed=7))
        for seed in range(200):
            if set(init_modes(permuted, k, RANDOM, seed=seed)) == sampled_base:
                other = fit(permuted, k, RANDOM, seed=seed)
                assert other.cost == base.cost
                break
        else:
            pytest.skip("no seed reproduced the same sampled mode set")

    def test_serialization_round_trip(self):
        model = fit([ROW1, ROW2, ROW1], 2, HUANG, seed=3)
        data = model.to_dict()
        clone = ClusterModel.from_dict(data)
        assert clone.to_dict() == data
        assert clone.modes == model.modes


class TestFitBest:
    def test_single_restart_equals_fit(self):
        rows = [ROW1, ROW2, ROW1, ROW2, ROW1]
        assert fit_best(rows, 2, HUANG, seed=4, restarts=1).to_dict() == \
            fit(rows, 2, HUANG, seed=4).to_dict()

    def test_more_restarts_never_increase_cost(self):
        rng = Random(12)
        rows = [tuple(str(rng.randrange(3)) for _ in range(3)) for _ in range(15)]
        costs = [fit_best(rows, 3, HUANG, seed=0, restarts=r).cost for r in (1, 5, 20)]
        assert costs[0] >= costs[1] >= costs[2]

    def test_restarts_below_one_raise(self):
        with pytest.raises(ClusterError):
            fit_best([ROW1], 1, HUANG, seed=0, restarts=0)

    def test_oracle_equivalence_sample(self):
        rng = Random(99)
        for _ in range(25):
            rows, k = random_instance(rng)
            model = fit_best(rows, k, HUANG, seed=0, restarts=50)
            assert model.cost == brute_force_cost(rows, k)


class TestSweep:
    def test_single_k_on_distinct_rows(self):
        rows = [("a", "x"), ("b", "y"), ("c", "z")]
        report = sweep_k(rows, 3, 3, RANDOM, seed=0, restarts=1)
        assert len(report.entries) == 1
        assert report.entries[0].cost == 0

    def test_entries_cover_range_and_running_min_non_increasing(self):
        rng = Random(5)
        rows = [tuple(str(rng.randrange(3)) for _ in range(4)) for _ in range(40)]
        report = sweep_k(rows, 1, 8, HUANG, seed=0, restarts=3)
        assert [e.k for e in report.entries] == list(range(1, 9))
        running = []
        best = None
        for e in report.entries:
            best = e.cost if best is None else min(best, e.cost)
            running.append(best)
        assert all(b <= a for a, b in zip(running, running[1:]))

    def test_sweep_deterministic(self):
        rng = Random(6)
        rows = [tuple(str(rng.randrange(3)) for _ in range(3)) for _ in range(25)]
        a = sweep_k(rows, 2, 5, HUANG, seed=42, restarts=2)
        b = sweep_k(rows, 2, 5, HUANG, seed=42, restarts=2)
        assert a.to_dict() == b.to_dict()

    def test_bad_range_raises(self):
        with pytest.raises(ClusterError):
            sweep_k([ROW1, ROW2], 3, 2, HUANG, seed=0, restarts=1)

    def test_report_invariants(self):
        with pytest.raises(ClusterError):
            ElbowReport((ElbowEntry(2, 5, 1, 0), ElbowEntry(2, 4, 1, 0)))
        with pytest.raises(ClusterError):
            ElbowReport((ElbowEntry(2, -1, 1, 0),))
