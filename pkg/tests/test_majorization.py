import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from murlab.bounds import profile_from_omega
from murlab.majorization import (
    direct_product,
    direct_sum,
    dominated_by_profile,
    flatten,
    least_concave_majorant,
    majorizes,
    random_majorized_pair,
    sorted_profile,
    t_transform,
    uniform,
)
from murlab.quantum import ProbabilityVector


def brute_concave_majorant(y):
    """O(n^3) oracle: max over chords (i, j) spanning k of the linear interpolant."""
    pts = np.concatenate([[0.0], y])
    n = pts.size - 1
    out = np.empty(n)
    for k in range(1, n + 1):
        best = pts[k]
        for i in range(0, k + 1):
            for j in range(k, n + 1):
                if i == j:
                    continue
                best = max(best, pts[i] + (pts[j] - pts[i]) * (k - i) / (j - i))
        out[k - 1] = best
    return out


def profile(omega):
    return profile_from_omega(omega, "direct_sum", 2, 4)


distributions = st.lists(st.floats(0.0, 1.0), min_size=2, max_size=10).filter(lambda v: sum(v) > 1e-3).map(
    lambda v: np.array(v) / sum(v)
)


class TestConstructions:
    def test_direct_product_examples(self):
        assert np.allclose(direct_product([1, 0], [0.5, 0.5]).entries, [0.5, 0.5, 0, 0])
        assert np.allclose(direct_product(uniform(4), uniform(4)).entries, 1 / 16)
        assert direct_product([0.25, 0.25, 0.5, 0], uniform(4)).entries.max() == pytest.approx(0.125)

    def test_direct_product_weight(self):
        p = ProbabilityVector([1.0, 1.0], 2.0)
        assert direct_product(p, uniform(3)).weight == pytest.approx(2.0)

    def test_direct_sum_examples(self):
        s = direct_sum([[1, 0], [0.5, 0.5]])
        assert np.allclose(s.entries, [1, 0, 0.5, 0.5])
        assert s.weight == pytest.approx(2.0)
        t = direct_sum([uniform(4)] * 3)
        assert np.allclose(t.entries, 0.25) and t.entries.size == 12 and t.weight == pytest.approx(3.0)

    def test_direct_sum_empty(self):
        with pytest.raises(ValueError):
            direct_sum([])

    def test_sorted_profile(self):
        sp = sorted_profile([0.2, 0.5, 0.3])
        assert np.allclose(sp.sorted, [0.5, 0.3, 0.2])
        assert np.allclose(sp.cumulative, [0.5, 0.8, 1.0])


class TestMajorizes:
    def test_examples(self):
        assert majorizes([0.5, 0.5], [1, 0])
        assert not majorizes([0.5, 0.5, 0], [0.6, 0.2, 0.2])
        assert not majorizes([1, 0], [0.5, 0.5])

    def test_totals_must_match(self):
        assert not majorizes([0.5, 0.5], [2.0, 0.0])

    def test_padding(self):
        assert majorizes([0.5, 0.5, 0, 0], [1.0])

    @given(distributions)
    def test_reflexive(self, x):
        assert majorizes(x, x)

    @given(distributions, st.randoms(use_true_random=False))
    def test_permutation_invariant(self, x, r):
        y = np.zeros_like(x)
        y[0] = 1.0
        px = np.array(r.sample(list(x), len(x)))
        assert majorizes(x, y) == majorizes(px, y)
        assert majorizes(y, x) == majorizes(y, px)

    def test_extremes(self, rng):
        for _ in range(10_000):
            d = int(rng.integers(2, 9))
            x = rng.dirichlet(np.ones(d))
            peak = np.zeros(d)
            peak[0] = 1.0
            assert majorizes(uniform(d), x)
            assert majorizes(x, peak)

    def test_transitivity(self):
        for seed in range(10_000):
            x, y = random_majorized_pair(5, seed)
            rng = np.random.default_rng([seed, 1])
            w = x.entries
            for _ in range(3):
                i, j = rng.choice(5, size=2, replace=False)
                w = t_transform(w, i, j, rng.uniform(0, 0.5))
            assert majorizes(w, x, 1e-12)
            assert majorizes(w, y, 1e-12)


class TestRandomPairs:
    def test_always_majorized(self):
        for seed in range(2000):
            x, y = random_majorized_pair(int(2 + seed % 7), seed)
            assert majorizes(x, y, 1e-12)

    def test_zero_transforms(self):
        x, y = random_majorized_pair(4, 1, n_transforms=0)
        assert np.array_equal(x.entries, y.entries)

    def test_deterministic(self):
        a = random_majorized_pair(4, 5)
        b = random_majorized_pair(4, 5)
        assert np.array_equal(a[0].entries, b[0].entries)

    def test_rejects_small_dim(self):
        with pytest.raises(ValueError):
            random_majorized_pair(1, 0)


class TestDominatedByProfile:
    def test_examples(self, bases):
        from murlab.quantum import born_probabilities, state_family

        psi = state_family(0, 0)
        x = direct_sum([born_probabilities(psi, bases["A"]), born_probabilities(psi, bases["B"])])
        assert dominated_by_profile(x, profile([1, 1.5, 1.7071, 2]))
        assert dominated_by_profile([1, 0, 0], profile([1.0, 1.0, 1.0]))
        assert not dominated_by_profile([0.6, 0.4], profile([0.5, 1.0]))

    def test_weight_mismatch(self):
        with pytest.raises(ValueError):
            dominated_by_profile([0.5, 0.5], profile([1.0, 2.0]))


class TestFlatten:
    def test_ds_example(self):
        f = flatten(profile([1, 1.5, 1.7071, 2]))
        assert np.allclose(f.omega, [1, 1.5, 1.75, 2], atol=1e-12)
        assert np.allclose(f.increments, [1, 0.5, 0.25, 0.25], atol=1e-12)

    def test_dp_example(self):
        f = flatten(profile([0.5625, 0.7286, 1.0]))
        assert np.allclose(f.omega, [0.5625, 0.78125, 1.0], atol=1e-12)

    def test_concave_fixed_point(self):
        om = np.cumsum([0.4, 0.3, 0.2, 0.1])
        assert np.allclose(flatten(profile(om)).omega, om, atol=1e-15)

    @given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=12))
    @settings(max_examples=300)
    def test_matches_brute_force(self, incs):
        om = np.cumsum(incs) + 1e-3
        assert np.allclose(least_concave_majorant(om), brute_concave_majorant(om), atol=1e-12)

    @given(st.lists(st.floats(0.0, 1.0), min_size=2, max_size=12))
    def test_dominates_preserves_total_and_weakens(self, incs):
        om = np.cumsum(incs) + 1e-3
        f = flatten(profile(om))
        assert np.all(f.omega >= om - 1e-12)
        assert f.omega[-1] == om[-1]
        assert np.all(np.diff(f.increments) <= 1e-12)
        rng = np.random.default_rng(len(incs))
        for _ in range(50):
            x = rng.dirichlet(np.ones(len(incs))) * om[-1]
            if dominated_by_profile(x, profile(om)):
                assert dominated_by_profile(x, f)
