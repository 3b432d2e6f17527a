import math

import numpy as np
import pytest

from murlab.bounds import dp_bound, ds_bound, profile_from_omega
from murlab.experiments import (
    PRESETS,
    AxisRange,
    NoiseSpec,
    SweepSpec,
    bound_for,
    joint_rows,
    monte_carlo_verify,
    noisy_measure_sum,
    preset,
    resolve_basis,
    run_sweep,
    shannon_chain_check,
    simulate_counts,
    xi_quantities,
)
from murlab.measures import get_measure, shannon
from murlab.quantum import born_probabilities, haar_random_states, save_basis, state_family

U = get_measure("s-minus-m")


def xi_oracle(p, q):
    """Closed forms under U = S - M for the (A, B) pair."""
    mp, mq = p.max(), q.max()
    return 0.5625 - mp * mq, 1 - max(mp, mq), mp * mq


class TestXi:
    def test_basis_state(self, pair):
        xi = xi_quantities(state_family(0, 0), pair, U)
        assert xi.xi_ds == pytest.approx(0.0, abs=1e-12)
        assert xi.xi_dp == pytest.approx(0.3125, abs=1e-12)
        assert xi.xi == pytest.approx(0.25, abs=1e-12)

    def test_closed_forms(self, pair, rng):
        profiles = (dp_bound(pair), ds_bound(pair))
        for psi in haar_random_states(4, 300, rng):
            p, q = (born_probabilities(psi, b).entries for b in pair)
            xi = xi_quantities(psi, pair, U, profiles)
            assert np.allclose([xi.xi_dp, xi.xi_ds, xi.xi], xi_oracle(p, q), atol=1e-12)
            assert xi.xi >= 1 / 16 - 1e-9
            assert xi.xi_dp >= -1e-9 and xi.xi_ds >= -1e-9

    def test_undefined_propagates(self, pair):
        xi = xi_quantities(state_family(0, 0), pair, get_measure("log-product"))
        assert math.isnan(xi.xi_dp)


class TestCounts:
    def test_deterministic_outcome(self, bases):
        for n in (1, 17, 4000):
            s = simulate_counts(state_family(0, 0), bases["A"], n, seed=3)
            assert s.counts.tolist() == [0, n, 0, 0]

    def test_concentration(self, bases):
        psi = state_family(0.3, 1.1)
        exact = born_probabilities(psi, bases["B"]).entries
        s = simulate_counts(psi, bases["B"], 10**6, seed=4)
        assert np.max(np.abs(s.estimate.entries - exact)) <= 5e-3

    def test_seeded(self, bases):
        a = simulate_counts(state_family(1, 2), bases["B"], 100, seed=8)
        b = simulate_counts(state_family(1, 2), bases["B"], 100, seed=8)
        assert np.array_equal(a.counts, b.counts)

    def test_rejects_zero(self, bases):
        with pytest.raises(ValueError):
            simulate_counts(state_family(0, 0), bases["A"], 0)

    def test_mean_shannon(self, bases):
        psi = state_family(math.pi / 4, math.pi / 4)
        p = born_probabilities(psi, bases["B"]).entries
        vals = noisy_measure_sum([p], get_measure("shannon"), 4000, 100, np.random.default_rng(5))
        assert vals.mean() == pytest.approx(shannon(p), abs=0.02)

    def test_probability_std_scaling(self, bases):
        # pooled over the entries of the 3a grid distributions
        rng = np.random.default_rng(11)
        dists = [born_probabilities(state_family(math.pi / 4, f), b).entries for f in np.linspace(0, 2 * math.pi, 25) for b in (bases["A"], bases["B"])]
        sd = {}
        for n in (4000, 16000):
            sd[n] = np.sqrt(np.mean([(rng.multinomial(n, p / p.sum(), size=100) / n).std(axis=0, ddof=1) ** 2 for p in dists]))
        assert 1.8 <= sd[4000] / sd[16000] <= 2.2


class TestSweep:
    def test_axis_validation(self):
        with pytest.raises(ValueError):
            AxisRange(0, 1, 0)
        with pytest.raises(ValueError):
            NoiseSpec(0, 10)

    def test_row_major_order(self):
        res = run_sweep(SweepSpec(AxisRange(0, 1, 3), AxisRange(0, 2, 4)))
        assert len(res.points) == 12
        assert [p.theta for p in res.points[:4]] == [0.0] * 4
        assert [p.phi for p in res.points[:4]] == pytest.approx([0, 2 / 3, 4 / 3, 2])

    def test_header(self):
        res = run_sweep(SweepSpec(AxisRange.fixed(0), AxisRange.fixed(0), ("C1", "C2", "C3"), "shannon"))
        h = res.header()
        assert h[:2] == ["theta", "phi"]
        assert h[2:14] == [f"{c}{j}" for c in "pqr" for j in range(4)]
        assert h[14:] == ["H_C1", "H_C2", "H_C3", "H_sum", "xi_dp", "xi_ds", "xi", "noisy_mean", "noisy_std"]

    def test_basis_state_entropies(self):
        res = run_sweep(SweepSpec(AxisRange.fixed(0), AxisRange.fixed(math.pi / 2)))
        pt = res.points[0]
        assert pt.values == pytest.approx([0.0, 2.0], abs=1e-12)
        assert pt.measure_sum == pytest.approx(2.0)

    def test_csv(self, tmp_path):
        res = run_sweep(preset("3a"))
        text = res.to_csv(tmp_path / "out.csv")
        lines = text.splitlines()
        assert len(lines) == 102
        assert (tmp_path / "out.csv").read_text() == text
        assert "nan" in lines[1]
        cells = lines[5].split(",")
        assert all(len(c.replace("-", "").replace(".", "").lstrip("0").split("e")[0]) <= 10 for c in cells if c != "nan")

    def test_noise_deterministic(self):
        spec = SweepSpec(AxisRange.fixed(0.3), AxisRange(0, 1, 4), noise=NoiseSpec(500, 20, 9))
        a, b = run_sweep(spec).to_csv(), run_sweep(spec).to_csv()
        assert a == b
        assert np.all(run_sweep(spec).column("noisy_std") > 0)

    def test_presets(self):
        assert set(PRESETS) == {"2a", "2b", "2c", "2d", "3a", "3b", "3c", "3d", "appendixA"}
        assert PRESETS["2c"].theta.start == math.pi
        with pytest.raises(KeyError):
            preset("9z")

    def test_normalized_preset(self):
        res = run_sweep(preset("appendixA"))
        assert "margin_nds" in res.header()
        assert np.min(res.column("margin_nds")) >= -1e-9
        assert res.column("bound_nds")[0] == pytest.approx(0.5 * 1.4893 + 1, abs=2e-3)

    def test_xi_nonnegative(self):
        for name in ("2a", "2b", "2c", "2d"):
            res = run_sweep(preset(name))
            assert np.min(res.column("xi_dp")) >= -1e-9
            assert np.min(res.column("xi_ds")) >= -1e-9
            assert np.min(res.column("xi")) > 0

    def test_summary(self):
        s = run_sweep(preset("2b")).summary()
        assert s["points"] == 101
        assert s["points_xi_dp_below_xi_ds"] > 0 and s["points_xi_dp_above_xi_ds"] > 0

    def test_unknown_names(self):
        with pytest.raises(ValueError):
            run_sweep(SweepSpec(AxisRange.fixed(0), AxisRange.fixed(0), measure="renyi"))


class TestVerification:
    def test_ds_pair(self, pair):
        rep = monte_carlo_verify(pair, "ds", 100_000, seed=1)
        assert rep.violations == 0
        assert rep.worst_margin <= 1e-4
        assert rep.mixed_trials == 10_000

    def test_dp_triple(self, triple):
        rep = monte_carlo_verify(triple, "dp", 100_000, seed=2)
        assert rep.violations == 0

    def test_negative_control(self, pair):
        true = ds_bound(pair)
        bad = profile_from_omega([0.9, *true.omega[1:]], true.kind, 2, 4)
        rep = monte_carlo_verify(pair, "ds", 2000, profile=bad)
        assert rep.violations > 0
        assert rep.to_json()["worst_state"]

    def test_seeded(self, pair):
        a = monte_carlo_verify(pair, "dp", 1000, seed=5)
        b = monte_carlo_verify(pair, "dp", 1000, seed=5)
        assert a.worst_margin == b.worst_margin

    def test_joint_rows(self, rng):
        p, q = rng.dirichlet(np.ones(3), size=4), rng.dirichlet(np.ones(2), size=4)
        dp = joint_rows([p, q], "dp")
        assert np.allclose(dp[2], np.outer(p[2], q[2]).ravel())
        assert np.allclose(joint_rows([p, q], "nds").sum(axis=1), 1.0)

    def test_kinds(self, pair):
        with pytest.raises(ValueError):
            bound_for(pair, "xx")
        with pytest.raises(ValueError):
            monte_carlo_verify(pair, "ds", 0)

    def test_chain(self, pair):
        rep = shannon_chain_check(pair, 10_000)
        assert rep.holds
        assert rep.max_additivity_gap <= 1e-9
        assert rep.ds_entropy >= rep.dp_entropy


def test_resolve_basis_file(bases, tmp_path):
    path = tmp_path / "b.json"
    save_basis(bases["B"], path)
    assert np.array_equal(resolve_basis(str(path)).vectors, bases["B"].vectors)
    assert resolve_basis("C2") is bases["C2"]
