import math

import numpy as np
import pytest

from leakmit.deterministic import synthesize_det
from leakmit.entropy import EntropyMeasure, entropy, post_policy_entropy
from leakmit.policy import expected_overhead, expected_sizes, validate
from leakmit.simplex import solve_lp
from leakmit.stochastic import synthesize_local, synthesize_minguess

from conftest import make_classset, random_classset
from oracles import minguess_pattern_oracle


def tiny_instance(baseline=1.0):
    return make_classset(
        [1.0, 4.0, 2.0],
        reps=[[1.0] * 4, [2.0] * 4, [3.0] * 4],
        baseline=baseline,
    )


class TestMinguessExact:
    def test_unbounded_budget_merges_everything(self):
        cs = tiny_instance()
        pol, diag = synthesize_minguess(cs, math.inf)
        assert post_policy_entropy(pol, cs, EntropyMeasure.MINGUESS) == pytest.approx(
            4.0
        )
        assert diag.status == "optimal"

    def test_zero_budget_keeps_identity(self):
        cs = tiny_instance()
        pol, _ = synthesize_minguess(cs, 0.0)
        assert post_policy_entropy(pol, cs, EntropyMeasure.MINGUESS) == pytest.approx(
            1.0  # smallest class has size 1
        )
        assert np.allclose(pol.matrix, np.eye(3))

    def test_affordable_merge_with_scaled_penalties(self):
        # penalties (j - i)/7 make the full merge cost 6/49 < 0.2
        cs = tiny_instance(baseline=7.0)
        pol, _ = synthesize_minguess(cs, 0.2)
        value = post_policy_entropy(pol, cs, EntropyMeasure.MINGUESS)
        m = minguess_pattern_oracle(cs, 0.2, solve_lp)
        assert value == pytest.approx((m + 1.0) / 2.0, rel=1e-9)
        assert value == pytest.approx(4.0)

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_pattern_enumeration(self, seed):
        rng = np.random.default_rng(seed)
        k = int(rng.integers(2, 7))
        cs = random_classset(rng, k)
        delta = float(rng.choice([0.0, 0.05, 0.1, 0.2, 0.4, 0.8]))
        pol, diag = synthesize_minguess(cs, delta)
        got_m = 2.0 * post_policy_entropy(pol, cs, EntropyMeasure.MINGUESS) - 1.0
        want_m = minguess_pattern_oracle(cs, delta, solve_lp)
        assert got_m == pytest.approx(want_m, rel=1e-6, abs=1e-6)

    @pytest.mark.parametrize("seed", range(10))
    def test_dominates_deterministic(self, seed):
        rng = np.random.default_rng(300 + seed)
        cs = random_classset(rng, int(rng.integers(2, 8)))
        delta = float(rng.uniform(0.0, 0.6))
        det_pol, _ = synthesize_det(cs, EntropyMeasure.MINGUESS, delta,
                                    scan_all_r=True)
        sto_pol, _ = synthesize_minguess(cs, delta)
        det_v = post_policy_entropy(det_pol, cs, EntropyMeasure.MINGUESS)
        sto_v = post_policy_entropy(sto_pol, cs, EntropyMeasure.MINGUESS)
        assert sto_v >= det_v - 1e-9

    @pytest.mark.parametrize("seed", range(10))
    def test_policy_is_valid_and_on_budget(self, seed):
        rng = np.random.default_rng(600 + seed)
        cs = random_classset(rng, int(rng.integers(2, 7)))
        delta = float(rng.uniform(0.0, 0.5))
        pol, _ = synthesize_minguess(cs, delta)
        assert validate(pol, cs) == []
        assert expected_overhead(pol, cs) <= delta + 1e-9
        assert expected_sizes(pol, cs.sizes).sum() == pytest.approx(
            cs.sizes.sum()
        )

    def test_root_relaxation_bounds_the_integer_optimum(self):
        rng = np.random.default_rng(9)
        cs = random_classset(rng, 5)
        pol, diag = synthesize_minguess(cs, 0.15)
        assert diag.best_bound >= diag.objective - 1e-9
        assert diag.nodes_explored >= 1

    def test_negative_budget_rejected(self):
        with pytest.raises(ValueError):
            synthesize_minguess(tiny_instance(), -0.5)


class TestLocalSearch:
    def test_minguess_redirected(self):
        with pytest.raises(ValueError):
            synthesize_local(tiny_instance(), EntropyMeasure.MINGUESS, 0.5)

    def test_unbounded_budget_reaches_single_class(self):
        cs = tiny_instance()
        for measure in (EntropyMeasure.SHANNON, EntropyMeasure.GUESSING):
            pol, _ = synthesize_local(cs, measure, math.inf, n_starts=2)
            assert post_policy_entropy(pol, cs, measure) == pytest.approx(
                entropy([7.0], measure)
            )

    def test_zero_budget_keeps_identity_values(self):
        cs = tiny_instance()
        for measure in (EntropyMeasure.SHANNON, EntropyMeasure.GUESSING):
            pol, _ = synthesize_local(cs, measure, 0.0, n_starts=2)
            assert post_policy_entropy(pol, cs, measure) == pytest.approx(
                entropy(cs.sizes, measure)
            )

    @pytest.mark.parametrize("seed", range(8))
    def test_reaches_best_polytope_vertex_on_small_instances(self, seed):
        """Convex objectives peak at vertices; enumerate them by optimizing
        many random directions and compare against the search result."""
        rng = np.random.default_rng(seed)
        cs = random_classset(rng, 3)
        delta = float(rng.uniform(0.02, 0.5))
        k, sizes, total = cs.k, cs.sizes, float(cs.sizes.sum())
        pairs = [(i, j) for i in range(k) for j in range(i, k)]
        a_eq = np.zeros((k, len(pairs)))
        for t, (i, j) in enumerate(pairs):
            a_eq[i, t] = 1.0
        a_ub = np.array(
            [[sizes[i] * cs.penalty[i, j] / total for (i, j) in pairs]]
        )
        dir_rng = np.random.default_rng(10_000 + seed)
        for measure in (EntropyMeasure.SHANNON, EntropyMeasure.GUESSING):
            vertex_best = -math.inf
            for _ in range(200):
                d = dir_rng.normal(size=len(pairs))
                res = solve_lp(
                    d, a_ub, np.array([delta]), a_eq, np.ones(k),
                    [(0.0, None)] * len(pairs),
                )
                if res.status != "optimal":
                    continue
                after = np.zeros(k)
                for t, (i, j) in enumerate(pairs):
                    after[j] += sizes[i] * res.x[t]
                vertex_best = max(
                    vertex_best, entropy(np.maximum(after, 0.0), measure)
                )
            pol, _ = synthesize_local(cs, measure, delta, n_starts=8, seed=0)
            got = post_policy_entropy(pol, cs, measure)
            assert got >= vertex_best - 1e-6

    @pytest.mark.parametrize("seed", range(8))
    def test_dominates_identity_and_partition_seed(self, seed):
        rng = np.random.default_rng(40 + seed)
        cs = random_classset(rng, int(rng.integers(2, 8)))
        delta = float(rng.uniform(0.0, 0.8))
        for measure in (EntropyMeasure.SHANNON, EntropyMeasure.GUESSING):
            pol, _ = synthesize_local(cs, measure, delta, n_starts=4, seed=1)
            got = post_policy_entropy(pol, cs, measure)
            identity_value = entropy(cs.sizes, measure)
            det_pol, _ = synthesize_det(cs, measure, delta, scan_all_r=True)
            det_value = post_policy_entropy(det_pol, cs, measure)
            assert got >= identity_value - 1e-9
            assert got >= det_value - 1e-9

    @pytest.mark.parametrize("seed", range(6))
    def test_policy_is_valid_and_on_budget(self, seed):
        rng = np.random.default_rng(70 + seed)
        cs = random_classset(rng, int(rng.integers(2, 7)))
        delta = float(rng.uniform(0.0, 0.5))
        pol, _ = synthesize_local(cs, EntropyMeasure.GUESSING, delta, n_starts=4)
        assert validate(pol, cs) == []
        assert expected_overhead(pol, cs) <= delta + 1e-9
        assert expected_sizes(pol, cs.sizes).sum() == pytest.approx(
            cs.sizes.sum()
        )

    def test_deterministic_for_fixed_seed(self):
        rng = np.random.default_rng(3)
        cs = random_classset(rng, 5)
        a, _ = synthesize_local(cs, EntropyMeasure.SHANNON, 0.3, n_starts=6, seed=9)
        b, _ = synthesize_local(cs, EntropyMeasure.SHANNON, 0.3, n_starts=6, seed=9)
        assert np.array_equal(a.matrix, b.matrix)

    def test_warm_start_is_honored(self):
        cs = tiny_instance()
        good, _ = synthesize_local(cs, EntropyMeasure.SHANNON, 0.9, n_starts=8)
        warm, _ = synthesize_local(
            cs, EntropyMeasure.SHANNON, 0.9, n_starts=0,
            warm_starts=(good.matrix,),
        )
        assert post_policy_entropy(
            warm, cs, EntropyMeasure.SHANNON
        ) >= post_policy_entropy(good, cs, EntropyMeasure.SHANNON) - 1e-9

    def test_diagnostics_fields(self):
        cs = tiny_instance()
        _, diag = synthesize_local(cs, EntropyMeasure.GUESSING, 0.4, n_starts=3)
        assert diag.status == "feasible"
        assert diag.restarts >= 3
        assert diag.best_bound >= diag.objective
